"""Trial matrices, aggregate statistics and the symmetry verifier."""
from __future__ import annotations

import logging
import re
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import ConfigError, GKMeansError, OpCounters
from .datagen import generate_gaussian_mixture, preset_spec
from .energy import POWERCAP_ROOT, EnergyMeter
from .io import read_matrix_csv, write_json, write_records_csv
from .metrics import ari
from .solvers import (
    SOLVERS,
    TELEMETRY_COLUMNS,
    SolverParams,
    init_kmeanspp,
    init_random,
)

log = logging.getLogger(__name__)

__all__ = [
    "BenchConfig",
    "BenchReport",
    "CELL_COLUMNS",
    "run_benchmark",
    "make_init",
    "load_dataset",
    "SeedVerdict",
    "Verdict",
    "verify_symmetry",
]

INIT_METHODS = ("random", "kmeanspp")

CELL_COLUMNS = [
    "dataset", "algorithm", "k", "n_trials", "dc_mean", "dc_sd", "rt_ms_mean", "rt_ms_sd",
    "iters_mean", "sse_mean", "dc_savings_pct", "rt_speedup_pct",
    "energy_cpu_j", "energy_mem_j", "energy_total_j", "failures", "error",
]


def make_init(data, k: int, seed: int, method: str = "random"):
    if method == "random":
        return init_random(data, k, seed)
    if method == "kmeanspp":
        return init_kmeanspp(data, k, seed, OpCounters())
    raise ConfigError(f"unknown init method {method!r}; choose from {INIT_METHODS}")


def load_dataset(entry: dict, base_dir: Path | None = None) -> np.ndarray:
    """Resolve one ``datasets`` entry: either ``{"path": ...}`` or a generator preset."""
    if "path" in entry:
        path = Path(entry["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        data, _ = read_matrix_csv(path, entry.get("label_column"))
        return data
    if "preset" in entry:
        spec = preset_spec(entry["preset"], int(entry["k"]), int(entry["per_cluster"]),
                           int(entry["d"]), int(entry.get("seed", 0)),
                           int(entry.get("overlap_level", 1)))
        return generate_gaussian_mixture(spec)[0]
    raise ConfigError(f"dataset entry needs 'path' or 'preset': {entry}")


def _dataset_name(entry: dict, i: int) -> str:
    if "name" in entry:
        return str(entry["name"])
    if "path" in entry:
        return Path(entry["path"]).stem
    return f"{entry['preset']}-{i}"


@dataclass
class BenchConfig:
    datasets: list[dict]
    algorithms: list[str]
    k: list[int]
    trials: int = 10
    init: str = "random"
    max_iters: int = 500
    epsilon: float = 0.0
    seed: int = 0
    energy: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.algorithms:
            raise ConfigError("algorithms must be non-empty")
        bad = [a for a in self.algorithms if a not in SOLVERS]
        if bad:
            raise ConfigError(f"unknown algorithms {bad}; choose from {sorted(SOLVERS)}")
        if self.init not in INIT_METHODS:
            raise ConfigError(f"unknown init method {self.init!r}")
        if not self.datasets:
            raise ConfigError("datasets must be non-empty")
        if not self.k:
            raise ConfigError("k list must be non-empty")

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchConfig":
        if "seed" not in raw:
            raise ConfigError("benchmark config must set 'seed'")
        known = set(cls.__dataclass_fields__)
        extra = set(raw) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        raw = dict(raw)
        if isinstance(raw.get("k"), int):
            raw["k"] = [raw["k"]]
        return cls(**raw)


@dataclass
class BenchReport:
    config: dict
    cells: list[dict]
    telemetry_files: list[str] = field(default_factory=list)
    energy_note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def write(self, out_dir, stem: str = "report") -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        js, cs = out / f"{stem}.json", out / f"{stem}.csv"
        write_json(js, self.to_dict())
        write_records_csv(cs, self.cells, CELL_COLUMNS)
        return js, cs


def _mean_sd(values):
    if not values:
        return None, None
    arr = np.asarray(values, dtype=np.float64)
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), sd


def _savings(base, value):
    if base is None or value is None or base == 0:
        return None
    return (base - value) / base * 100.0


def _slug(*parts) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", "_".join(str(p) for p in parts))


def run_benchmark(config: BenchConfig, out_dir=None, base_dir=None,
                  energy_root=POWERCAP_ROOT) -> BenchReport:
    """Run every (dataset, k, trial) x algorithm combination.

    Within a trial all algorithms start from the same centroids, drawn with
    seed ``config.seed + trial``.  Wall time covers the solver call only.
    Trials run sequentially, which also keeps energy readings unconfounded.
    """
    out = Path(out_dir) if out_dir is not None else None
    tel_dir = None
    if out is not None:
        tel_dir = out / "telemetry"
        tel_dir.mkdir(parents=True, exist_ok=True)
    params = SolverParams(max_iters=config.max_iters, epsilon=config.epsilon, seed=config.seed)
    cells: list[dict] = []
    tel_files: list[str] = []
    energy_notes = set()

    for di, entry in enumerate(config.datasets):
        name = _dataset_name(entry, di)
        try:
            data = load_dataset(entry, base_dir)
            load_error = None
        except (OSError, GKMeansError, ValueError) as exc:
            data, load_error = None, f"{type(exc).__name__}: {exc}"
            log.warning("dataset %s unavailable: %s", name, load_error)
        for k in config.k:
            samples = {a: {"dc": [], "rt": [], "it": [], "sse": [], "ecpu": [], "emem": [], "fail": 0}
                       for a in config.algorithms}
            cell_error = load_error
            if data is not None:
                for trial in range(config.trials):
                    try:
                        init = make_init(data, k, config.seed + trial, config.init)
                    except GKMeansError as exc:
                        cell_error = f"{type(exc).__name__}: {exc}"
                        break
                    for alg in config.algorithms:
                        bucket = samples[alg]
                        solver = SOLVERS[alg]
                        try:
                            if config.energy:
                                meter = EnergyMeter(energy_root)
                                with meter:
                                    t0 = time.perf_counter()
                                    sol = solver(data, init.copy(), params)
                                    rt = time.perf_counter() - t0
                                rec = meter.record
                                if rec.supported:
                                    bucket["ecpu"].append(rec.package_j)
                                    bucket["emem"].append(rec.dram_j)
                                else:
                                    energy_notes.add(rec.reason)
                            else:
                                t0 = time.perf_counter()
                                sol = solver(data, init.copy(), params)
                                rt = time.perf_counter() - t0
                        except Exception as exc:  # noqa: BLE001 - failed trials are counted, not fatal
                            log.warning("%s/%s k=%s trial %d failed: %s", name, alg, k, trial, exc)
                            bucket["fail"] += 1
                            continue
                        bucket["dc"].append(sol.counters.dc_full)
                        bucket["rt"].append(rt * 1e3)
                        bucket["it"].append(sol.iterations)
                        bucket["sse"].append(sol.sse)
                        if tel_dir is not None:
                            path = tel_dir / f"{_slug(name, alg, 'k' + str(k), 't' + str(trial))}.csv"
                            write_records_csv(path, [t.as_dict() for t in sol.telemetry],
                                              TELEMETRY_COLUMNS)
                            tel_files.append(str(path.relative_to(out)))
            group = []
            for alg in config.algorithms:
                b = samples[alg]
                dc_mean, dc_sd = _mean_sd(b["dc"])
                rt_mean, rt_sd = _mean_sd(b["rt"])
                cell = {
                    "dataset": name, "algorithm": alg, "k": int(k), "n_trials": len(b["dc"]),
                    "dc_mean": dc_mean, "dc_sd": dc_sd, "rt_ms_mean": rt_mean, "rt_ms_sd": rt_sd,
                    "iters_mean": _mean_sd(b["it"])[0], "sse_mean": _mean_sd(b["sse"])[0],
                    "dc_savings_pct": None, "rt_speedup_pct": None,
                    "energy_cpu_j": _mean_sd(b["ecpu"])[0], "energy_mem_j": _mean_sd(b["emem"])[0],
                    "energy_total_j": None,
                    "failures": b["fail"], "error": cell_error,
                }
                if cell["energy_cpu_j"] is not None:
                    cell["energy_total_j"] = cell["energy_cpu_j"] + cell["energy_mem_j"]
                group.append(cell)
            base = next((c for c in group if c["algorithm"] == "lloyd"), None)
            if base is not None:
                for c in group:
                    c["dc_savings_pct"] = _savings(base["dc_mean"], c["dc_mean"])
                    c["rt_speedup_pct"] = _savings(base["rt_ms_mean"], c["rt_ms_mean"])
            cells.extend(group)

    report = BenchReport(asdict(config), cells, tel_files, "; ".join(sorted(energy_notes)))
    if out is not None:
        report.write(out)
    return report


# -- symmetry verification -------------------------------------------------------

@dataclass
class SeedVerdict:
    seed: int
    algorithm: str
    iterations_ref: int
    iterations: int
    assignments_equal: bool
    first_divergent_iteration: int | None
    ari: float
    sse_ref: float
    sse: float
    sse_diff: float

    @property
    def passed(self) -> bool:
        return self.assignments_equal and self.ari == 1.0 and self.sse_diff == 0.0


@dataclass
class Verdict:
    k: int
    init_method: str
    results: list[SeedVerdict]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> SeedVerdict | None:
        return next((r for r in self.results if not r.passed), None)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "k": self.k,
            "init_method": self.init_method,
            "n_seeds": len({r.seed for r in self.results}),
            "n_passed": sum(r.passed for r in self.results),
            "results": [dict(asdict(r), passed=r.passed) for r in self.results],
        }


def _first_divergence(ref: list[np.ndarray], other: list[np.ndarray]) -> int | None:
    for t, (a, b) in enumerate(zip(ref, other), start=1):
        if not np.array_equal(a, b):
            return t
    if len(ref) != len(other):
        return min(len(ref), len(other)) + 1
    return None


def verify_symmetry(data, k: int, seeds, init_method: str = "random", *,
                    algorithms=("gkmeans",), max_iters: int = 500, epsilon: float = 0.0,
                    reference_tie_break: str = "keep") -> Verdict:
    """Compare each accelerated solver against Lloyd from identical inits.

    ``reference_tie_break`` changes only Lloyd's tie rule; set it to
    ``"highest"`` to check that the detector notices a real divergence.
    """
    if int(k) < 2:
        raise ConfigError("verification needs k >= 2")
    ref_params = SolverParams(max_iters=max_iters, epsilon=epsilon, keep_history=True,
                              tie_break=reference_tie_break)
    params = SolverParams(max_iters=max_iters, epsilon=epsilon, keep_history=True)
    results = []
    for seed in seeds:
        init = make_init(data, k, int(seed), init_method)
        ref = SOLVERS["lloyd"](data, init.copy(), ref_params)
        for alg in algorithms:
            sol = SOLVERS[alg](data, init.copy(), params)
            div = _first_divergence(ref.history, sol.history)
            results.append(SeedVerdict(
                seed=int(seed),
                algorithm=alg,
                iterations_ref=ref.iterations,
                iterations=sol.iterations,
                assignments_equal=div is None,
                first_divergent_iteration=div,
                ari=ari(ref.assign, sol.assign) if len(sol.assign) >= 2 else 1.0,
                sse_ref=ref.sse,
                sse=sol.sse,
                sse_diff=abs(ref.sse - sol.sse),
            ))
    return Verdict(int(k), init_method, results)
