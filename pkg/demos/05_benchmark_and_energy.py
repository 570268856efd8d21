"""A small benchmark grid, optionally with RAPL energy readings."""
import tempfile
from pathlib import Path

from gkmeans.bench import BenchConfig, run_benchmark, verify_symmetry
from gkmeans.datagen import generate_gaussian_mixture, preset_spec
from gkmeans.energy import sample_energy

config = BenchConfig.from_dict({
    "datasets": [{"name": "sep", "preset": "separated", "k": 10, "per_cluster": 300, "d": 8, "seed": 0},
                 {"name": "ovl", "preset": "overlapped", "k": 10, "per_cluster": 300, "d": 8, "seed": 0,
                  "overlap_level": 2}],
    "algorithms": ["lloyd", "hamerly", "gkmeans"],
    "k": [10],
    "trials": 3,
    "seed": 11,
    "energy": True,
})

# %% Every algorithm in a trial starts from the same centroids
out = Path(tempfile.mkdtemp())
report = run_benchmark(config, out_dir=out)
for c in report.cells:
    print(f"{c['dataset']:4s} {c['algorithm']:8s} dc={c['dc_mean']:>12,.0f} "
          f"savings={c['dc_savings_pct']:6.2f}% energy={c['energy_cpu_j']}")
print("energy:", report.energy_note or "measured")
print("report written to", out)

# %% Symmetry check across several seeds
X, _ = generate_gaussian_mixture(preset_spec("overlapped", 10, 300, 8, seed=0))
print("verdict passed:", verify_symmetry(X, 10, range(5), algorithms=("gkmeans", "hamerly")).passed)

# %% Measure any callable directly; unsupported hosts say why
print(sample_energy(lambda: sum(range(10**6))))
