"""``gkmeans`` command line: generate / run / bench / verify.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 I/O or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .bench import BenchConfig, make_init, run_benchmark, verify_symmetry
from .core import ConfigError, DataError, GKMeansError
from .datagen import PRESETS, generate_gaussian_mixture, preset_spec
from .io import (
    CSVParseError,
    read_matrix_csv,
    read_vector_csv,
    write_json,
    write_matrix_csv,
    write_records_csv,
    write_vector_csv,
)
from .metrics import ari
from .solvers import SOLVERS, TELEMETRY_COLUMNS, SolverParams

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def cmd_generate(args) -> int:
    spec = preset_spec(args.preset, args.k, args.per_cluster, args.d, args.seed, args.overlap_level)
    data, labels = generate_gaussian_mixture(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_matrix_csv(out, data, labels if args.with_labels else None)
    labels_path = Path(args.labels_out) if args.labels_out else out.with_suffix(".labels.csv")
    write_vector_csv(labels_path, labels)
    print(f"m={spec.m} d={spec.d} k={spec.k} -> {out} (labels: {labels_path})")
    return EXIT_OK


def cmd_run(args) -> int:
    data, _ = read_matrix_csv(args.input, args.label_column)
    seed = args.seed
    if seed is None:
        seed = time.time_ns() % (2**63)
        print(f"note: no --seed given, using time-derived seed {seed}")
    params = SolverParams(max_iters=args.max_iters, epsilon=args.epsilon, seed=seed)
    init = make_init(data, args.k, seed, args.init)
    t0 = time.perf_counter()
    sol = SOLVERS[args.algorithm](data, init, params)
    elapsed_ms = (time.perf_counter() - t0) * 1e3

    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_vector_csv(f"{prefix}.assign.csv", sol.assign)
    write_matrix_csv(f"{prefix}.centroids.csv", sol.centroids.centers)
    write_records_csv(f"{prefix}.telemetry.csv", [t.as_dict() for t in sol.telemetry],
                      TELEMETRY_COLUMNS)
    c = sol.counters
    summary = {
        "algorithm": args.algorithm,
        "k": sol.centroids.k,
        "m": int(data.shape[0]),
        "d": int(data.shape[1]),
        "seed": int(seed),
        "init": args.init,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "sse": sol.sse,
        "dc_total": c.dc_full,
        "dc_breakdown": {
            "own_centroid": c.dc_le,
            "inter_centroid": c.dc_neighbor,
            "other": c.dc_full - c.dc_le - c.dc_neighbor,
            "projections": c.proj_count,
        },
        "elapsed_ms": elapsed_ms,
    }
    write_json(f"{prefix}.summary.json", summary)
    print(json.dumps(summary))
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg_path = Path(args.config)
    raw = json.loads(cfg_path.read_text(encoding="utf-8"))
    if args.seed is not None:
        raw["seed"] = args.seed
    config = BenchConfig.from_dict(raw)
    out = Path(args.out) if args.out else cfg_path.parent / (cfg_path.stem + "_out")
    report = run_benchmark(config, out_dir=out, base_dir=cfg_path.parent)
    for cell in report.cells:
        print(f"{cell['dataset']:>16} {cell['algorithm']:>8} k={cell['k']:<4} "
              f"dc={cell['dc_mean']} savings%={cell['dc_savings_pct']} failures={cell['failures']}")
    print(f"report written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    data, _ = read_matrix_csv(args.input, args.label_column)
    seeds = range(args.seed, args.seed + args.n_seeds)
    algorithms = ["gkmeans"] + (["hamerly"] if args.hamerly else [])
    verdict = verify_symmetry(data, args.k, seeds, args.init, algorithms=algorithms,
                              max_iters=args.max_iters, epsilon=args.epsilon,
                              reference_tie_break=args.tie_break_hook)
    out = verdict.to_dict()
    ok = verdict.passed
    if args.assignments:
        a, b = (read_vector_csv(p) for p in args.assignments)
        if a.shape != b.shape:
            out["assignments"] = {"files": args.assignments, "ari": None,
                                  "identical": False, "error": "length mismatch"}
            ok = False
        else:
            score = ari(a, b)
            same = bool(np.array_equal(a, b))
            out["assignments"] = {"files": args.assignments, "ari": score, "identical": same}
            ok = ok and same
    out["passed"] = ok
    for r in verdict.results:
        status = "PASS" if r.passed else "FAIL"
        extra = "" if r.passed else f" first divergent iteration: {r.first_divergent_iteration}"
        print(f"{status} seed={r.seed} {r.algorithm}: ARI={r.ari:.6f} "
              f"SSE diff={r.sse_diff:.3g} iterations={r.iterations}{extra}")
    if "assignments" in out:
        print(f"assignments {args.assignments[0]} vs {args.assignments[1]}: "
              f"ARI={out['assignments']['ari']} identical={out['assignments']['identical']}")
    print(f"verdict: {'PASS' if ok else 'FAIL'} "
          f"({out['n_passed']}/{len(verdict.results)} seed runs)")
    if args.json:
        write_json(args.json, out)
    return EXIT_OK if ok else EXIT_VERIFY


def _add_solver_flags(p, seed_required: bool):
    p.add_argument("--input", required=True, help="headerless numeric CSV, one point per row")
    p.add_argument("--label-column", choices=["last"], default=None,
                   help="strip a trailing label column")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--init", choices=["random", "kmeanspp"], default="random")
    p.add_argument("--seed", type=int, required=seed_required, default=None)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--epsilon", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkmeans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic Gaussian-mixture CSV")
    g.add_argument("--preset", choices=sorted(PRESETS), required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--per-cluster", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--overlap-level", type=int, default=1, help="1-3, overlapped preset only")
    g.add_argument("--out", required=True, help="data CSV path")
    g.add_argument("--labels-out", default=None, help="labels CSV (default: <out>.labels.csv)")
    g.add_argument("--with-labels", action="store_true",
                   help="also append the label as the last data column")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="cluster a CSV with one solver")
    _add_solver_flags(r, seed_required=False)
    r.add_argument("--algorithm", choices=sorted(SOLVERS), default="gkmeans")
    r.add_argument("--out", required=True, help="output prefix")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="run a benchmark config (JSON)")
    b.add_argument("config")
    b.add_argument("--out", default=None, help="report directory")
    b.add_argument("--seed", type=int, default=None, help="override the config seed")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="check that accelerated solvers reproduce Lloyd")
    _add_solver_flags(v, seed_required=True)
    v.add_argument("--n-seeds", type=int, default=20)
    v.add_argument("--hamerly", action="store_true", help="also verify Hamerly")
    v.add_argument("--assignments", nargs=2, metavar=("A", "B"), default=None,
                   help="also compare two assignment files written by `run`")
    v.add_argument("--json", default=None, help="write the verdict JSON here")
    v.add_argument("--tie-break-hook", choices=["keep", "highest"], default="keep",
                   help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CSVParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GKMeansError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
