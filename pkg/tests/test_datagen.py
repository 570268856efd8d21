import numpy as np
import pytest

from gkmeans.core import ConfigError
from gkmeans.datagen import MixtureSpec, generate_gaussian_mixture, preset_spec


def test_balanced_labels():
    X, y = generate_gaussian_mixture(MixtureSpec(k=4, per_cluster=250, d=3, seed=1))
    assert X.shape == (1000, 3)
    np.testing.assert_array_equal(np.bincount(y), [250, 250, 250, 250])


def test_presets():
    sep = preset_spec("separated", 5, 10, 2, seed=0)
    assert (sep.mean_separation, sep.cov_low, sep.cov_high) == (3.0, 1.0, 5.0)
    ov = preset_spec("overlapped", 5, 10, 2, seed=0)
    assert (ov.mean_separation, ov.cov_low, ov.cov_high) == (1.5, 8.0, 15.0)
    assert preset_spec("overlapped", 5, 10, 2, overlap_level=2).mean_separation == 1.0
    assert preset_spec("overlapped", 5, 10, 2, overlap_level=3).mean_separation == 0.5
    with pytest.raises(ConfigError):
        preset_spec("nope", 5, 10, 2)
    with pytest.raises(ConfigError):
        preset_spec("overlapped", 5, 10, 2, overlap_level=4)


def test_zero_variance_rows_are_means():
    spec = MixtureSpec(k=3, per_cluster=4, d=2, mean_separation=2.5, cov_low=0, cov_high=0, seed=3)
    X, y = generate_gaussian_mixture(spec)
    np.testing.assert_array_equal(X, np.repeat((y * 2.5)[:, None], 2, axis=1))


def test_deterministic_bytes():
    spec = preset_spec("separated", 3, 50, 4, seed=11)
    a, la = generate_gaussian_mixture(spec)
    b, lb = generate_gaussian_mixture(spec)
    assert a.tobytes() == b.tobytes() and la.tobytes() == lb.tobytes()
    c, _ = generate_gaussian_mixture(preset_spec("separated", 3, 50, 4, seed=12))
    assert a.tobytes() != c.tobytes()


def test_empirical_means_converge():
    spec = MixtureSpec(k=3, per_cluster=20000, d=2, mean_separation=3.0, cov_low=1, cov_high=5, seed=5)
    X, y = generate_gaussian_mixture(spec)
    sigma = np.sqrt(spec.cov_high)
    for j in range(3):
        dev = np.abs(X[y == j].mean(axis=0) - 3.0 * j)
        assert (dev <= 5 * sigma / np.sqrt(spec.per_cluster)).all()


def test_variances_within_range():
    spec = MixtureSpec(k=4, per_cluster=20000, d=3, cov_low=8, cov_high=15, seed=2)
    X, y = generate_gaussian_mixture(spec)
    for j in range(4):
        var = X[y == j].var(axis=0)
        assert (var > 8 * 0.95).all() and (var < 15 * 1.05).all()


@pytest.mark.parametrize("kwargs", [
    dict(k=0, per_cluster=1, d=1),
    dict(k=1, per_cluster=0, d=1),
    dict(k=1, per_cluster=1, d=1, cov_low=3, cov_high=2),
    dict(k=1, per_cluster=1, d=1, mean_separation=-1),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ConfigError):
        MixtureSpec(**kwargs)
