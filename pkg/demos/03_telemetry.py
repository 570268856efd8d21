"""Where Geometric k-means saves work, iteration by iteration."""
from gkmeans import generate_gaussian_mixture, init_random, preset_spec, run_gkmeans, savings_report

X, _ = generate_gaussian_mixture(preset_spec("overlapped", k=30, per_cluster=300, d=8, seed=3))
m, k = X.shape[0], 30
sol = run_gkmeans(X, init_random(X, k, seed=0))

# %% Per-iteration counts of points filtered at each stage
print(f"{'iter':>4} {'pairs':>6} {'LE':>6} {'LHE':>6} {'HE':>6} {'DC':>8}")
for t in sol.telemetry[:8]:
    print(f"{t.iter:>4} {t.neighbor_pairs:>6} {t.le_count:>6} {t.lhe_count:>6} {t.he_count:>6} {t.dc_this_iter:>8}")

# %% Savings relative to the work that could have been done
for row in savings_report(sol.telemetry, m, k)[1:6]:
    print(f"iter {row['iter']}: {row['le_frac']:.1%} of points stay put for free, "
          f"LHE savings {row['lhe_savings_pct']}, HE savings {row['he_savings_pct']}")

# %% Total distance computations, split by purpose
print(sol.counters.as_dict())
