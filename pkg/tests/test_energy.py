import pytest

from gkmeans.energy import EnergyMeter, counter_delta, sample_energy


def make_zone(root, name, label, energy, max_range=1_000_000_000):
    z = root / name
    z.mkdir()
    (z / "name").write_text(label + "\n")
    (z / "energy_uj").write_text(f"{energy}\n")
    (z / "max_energy_range_uj").write_text(f"{max_range}\n")
    return z


@pytest.fixture
def powercap(tmp_path):
    pkg = make_zone(tmp_path, "intel-rapl:0", "package-0", 1_000_000)
    dram = make_zone(tmp_path, "intel-rapl:0:0", "dram", 500_000)
    make_zone(tmp_path, "intel-rapl:0:1", "core", 42)
    return tmp_path, pkg, dram


def test_counter_delta():
    assert counter_delta(10, 25, 100) == 15
    assert counter_delta(90, 5, 100) == 15
    assert counter_delta(7, 7, 100) == 0


def test_zero_length_window(powercap):
    root, _, _ = powercap
    rec = sample_energy(lambda: None, root)
    assert rec.supported
    assert rec.package_j == 0.0 and rec.dram_j == 0.0


def test_deltas_with_wraparound(powercap):
    root, pkg, dram = powercap

    def work():
        (pkg / "energy_uj").write_text("3500000\n")
        # dram counter wraps: 500000 -> max -> 200000
        (dram / "energy_uj").write_text("200000\n")

    rec = sample_energy(work, root)
    assert rec.package_j == pytest.approx(2.5)
    assert rec.dram_j == pytest.approx((1_000_000_000 - 500_000 + 200_000) / 1e6)
    assert rec.dram_j >= 0
    assert rec.total_j == pytest.approx(rec.package_j + rec.dram_j)


def test_unsupported_platform(tmp_path):
    ran = []
    rec = sample_energy(lambda: ran.append(1), tmp_path / "missing")
    assert ran == [1]
    assert not rec.supported and rec.reason


def test_permission_denied(powercap, monkeypatch):
    root, _, _ = powercap
    import gkmeans.energy as energy

    def deny(zones):
        raise PermissionError("energy_uj: permission denied")

    monkeypatch.setattr(energy, "_read", deny)
    with EnergyMeter(root) as meter:
        pass
    assert not meter.record.supported
    assert "PermissionError" in meter.record.reason
