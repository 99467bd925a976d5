"""Inner-city fare and speed model.

The sandbox keeps all tariffs in one config object so fixtures can pin them;
a `fares.cfg` file at the data root (simple `key = value` lines) overrides the
defaults below.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from ..errors import LoadError

_DECIMAL_KEYS = {
    "walk_speed_kmh",
    "metro_speed_kmh",
    "metro_fare_per_band",
    "metro_band_km",
    "taxi_speed_kmh",
    "taxi_base_fare",
    "taxi_per_km",
}
_INT_KEYS = {"metro_access_minutes"}


@dataclass(frozen=True)
class FareConfig:
    walk_speed_kmh: Decimal = Decimal("5")
    metro_speed_kmh: Decimal = Decimal("30")
    metro_fare_per_band: Decimal = Decimal("3")
    metro_band_km: Decimal = Decimal("6")
    metro_access_minutes: int = 2
    taxi_speed_kmh: Decimal = Decimal("40")
    taxi_base_fare: Decimal = Decimal("10")
    taxi_per_km: Decimal = Decimal("2.5")


def load_fare_config(path: Path | str) -> FareConfig:
    """Read a key=value fare file; unknown keys are rejected."""
    path = Path(path)
    if not path.exists():
        raise LoadError(f"fare config not found: {path}")
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise LoadError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _DECIMAL_KEYS:
            values[key] = Decimal(val)
        elif key in _INT_KEYS:
            values[key] = int(val)
        else:
            raise LoadError(f"{path}:{lineno}: unknown fare key {key!r}")
    return FareConfig(**values)
