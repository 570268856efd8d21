"""Optional RAPL energy sampling through the Linux powercap sysfs tree.

Each zone directory (``intel-rapl:0``, ``intel-rapl:0:1``, ...) exposes a
``name``, a cumulative ``energy_uj`` counter and the ``max_energy_range_uj``
at which the counter wraps.  Package zones are named ``package-N``, memory
subzones ``dram``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

__all__ = ["POWERCAP_ROOT", "EnergyRecord", "EnergyMeter", "sample_energy", "counter_delta"]

POWERCAP_ROOT = Path("/sys/class/powercap")


@dataclass
class EnergyRecord:
    supported: bool
    reason: str = ""
    package_j: float = 0.0
    dram_j: float = 0.0
    elapsed_s: float = 0.0

    @property
    def total_j(self) -> float:
        return self.package_j + self.dram_j


def counter_delta(start: int, end: int, max_range: int) -> int:
    """Difference of a wrapping cumulative counter (at most one wrap)."""
    if end >= start:
        return end - start
    return end + max_range - start


@dataclass
class _Zone:
    kind: str
    energy: Path
    max_range: int


def _discover(root: Path) -> list[_Zone]:
    zones = []
    for zone in sorted(root.glob("intel-rapl:*")):
        name_file = zone / "name"
        if not name_file.is_file():
            continue
        name = name_file.read_text().strip()
        if name.startswith("package"):
            kind = "package"
        elif name == "dram":
            kind = "dram"
        else:
            continue
        max_range = int((zone / "max_energy_range_uj").read_text().strip())
        zones.append(_Zone(kind, zone / "energy_uj", max_range))
    return zones


def _read(zones):
    return [int(z.energy.read_text().strip()) for z in zones]


class EnergyMeter:
    """Context manager; ``record`` is populated on exit."""

    def __init__(self, root: Path | str = POWERCAP_ROOT):
        self.root = Path(root)
        self.record: EnergyRecord | None = None
        self._zones: list[_Zone] = []
        self._start: list[int] = []
        self._t0 = 0.0

    def __enter__(self):
        try:
            self._zones = _discover(self.root)
            if not self._zones:
                self.record = EnergyRecord(False, f"no RAPL zones under {self.root}")
            else:
                self._start = _read(self._zones)
        except (OSError, ValueError) as exc:
            self._zones = []
            self.record = EnergyRecord(False, f"{type(exc).__name__}: {exc}")
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc_info):
        elapsed = time.perf_counter() - self._t0
        if not self._zones:
            return False
        try:
            end = _read(self._zones)
        except (OSError, ValueError) as exc:
            self.record = EnergyRecord(False, f"{type(exc).__name__}: {exc}")
            return False
        rec = EnergyRecord(True, elapsed_s=elapsed)
        for zone, a, b in zip(self._zones, self._start, end):
            joules = counter_delta(a, b, zone.max_range) / 1e6
            if zone.kind == "package":
                rec.package_j += joules
            else:
                rec.dram_j += joules
        self.record = rec
        return False


def sample_energy(window: Callable[[], object], root: Path | str = POWERCAP_ROOT) -> EnergyRecord:
    """Run ``window()`` and return the energy consumed meanwhile.

    On machines without readable powercap counters the record has
    ``supported=False`` and a reason; ``window`` still runs.
    """
    meter = EnergyMeter(root)
    with meter:
        window()
    return meter.record
