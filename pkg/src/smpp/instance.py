"""Orbit geometry, random instance generation and pairwise conflicts.

A single satellite flies a circular equatorial orbit.  Each location is
captured at the moment the satellite passes its longitude, so the capture
position is expressed as a time along one orbital period.  Re-aiming the
optics between two locations takes ``|a_i - a_j| / v_r`` seconds, where
``a`` is the signed off-nadir angle; a pair conflicts when that rotation
takes longer than the flight time between the two capture positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EARTH_RADIUS_KM = 6371.0
DEFAULT_ALTITUDE_KM = 550.0
EARTH_MU = 398600.4418  # km^3 / s^2
DEFAULT_ROTATION_SPEED = 0.25  # deg / s

LOCATION_NAMES = "ABCDE"


@dataclass(frozen=True)
class OrbitConfig:
    earth_radius: float = EARTH_RADIUS_KM
    altitude: float = DEFAULT_ALTITUDE_KM
    rotation_speed: float = DEFAULT_ROTATION_SPEED
    mu: float = EARTH_MU

    def __post_init__(self):
        for name in ("earth_radius", "altitude", "rotation_speed", "mu"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"orbit.{name} must be a positive finite number, got {value!r}")

    @property
    def orbital_period(self) -> float:
        """Seconds per revolution of a circular orbit (Kepler's third law)."""
        a = self.earth_radius + self.altitude
        return 2.0 * math.pi * math.sqrt(a**3 / self.mu)


@dataclass(frozen=True)
class Location:
    longitude: float
    latitude: float
    value: int

    def __post_init__(self):
        if not (0.0 <= self.longitude < 360.0):
            raise ValueError(f"longitude must lie in [0, 360), got {self.longitude!r}")
        if not (-90.0 <= self.latitude <= 90.0):
            raise ValueError(f"latitude must lie in [-90, 90], got {self.latitude!r}")
        if isinstance(self.value, bool) or int(self.value) != self.value or self.value < 1:
            raise ValueError(f"value must be a positive integer, got {self.value!r}")


@dataclass(frozen=True)
class Instance:
    orbit: OrbitConfig
    locations: tuple[Location, ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))
        if not self.locations:
            raise ValueError("an instance needs at least one location")

    @property
    def n(self) -> int:
        return len(self.locations)

    @property
    def values(self) -> np.ndarray:
        return np.array([loc.value for loc in self.locations], dtype=np.int64)


@dataclass(frozen=True)
class ConflictModel:
    """Rotation times, transition times and the derived conflict matrix."""

    rotation_time: np.ndarray
    transition_time: np.ndarray
    conflict: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.conflict.shape[0]

    def pairs(self) -> list[tuple[int, int]]:
        """Conflicting pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
        i, j = np.nonzero(np.triu(self.conflict, k=1))
        return list(zip(i.tolist(), j.tolist()))


def capture_time(loc: Location, orbit: OrbitConfig) -> float:
    return loc.longitude / 360.0 * orbit.orbital_period


def off_nadir_angle(loc: Location, orbit: OrbitConfig) -> float:
    """Signed cross-track pointing angle in degrees for a satellite over the equator."""
    lat = math.radians(loc.latitude)
    r = orbit.earth_radius
    return math.degrees(math.atan2(r * math.sin(lat), (r + orbit.altitude) - r * math.cos(lat)))


def build_conflicts(inst: Instance) -> ConflictModel:
    orbit = inst.orbit
    period = orbit.orbital_period
    s = np.array([capture_time(loc, orbit) for loc in inst.locations])
    a = np.array([off_nadir_angle(loc, orbit) for loc in inst.locations])

    rotation = np.abs(a[:, None] - a[None, :]) / orbit.rotation_speed
    gap = np.abs(s[:, None] - s[None, :])
    transition = np.minimum(gap, period - gap)
    np.fill_diagonal(rotation, 0.0)
    np.fill_diagonal(transition, 0.0)
    conflict = rotation > transition
    np.fill_diagonal(conflict, False)

    for arr in (rotation, transition, conflict):
        arr.setflags(write=False)
    return ConflictModel(rotation, transition, conflict)


def generate_instance(n: int, seed: int, orbit: OrbitConfig | None = None) -> Instance:
    """Random instance: uniform longitude, latitude in [-15, 15], value 1 or 2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    orbit = orbit or OrbitConfig()
    rng = np.random.default_rng(seed)
    lon = rng.uniform(0.0, 360.0, size=n)
    lat = rng.uniform(-15.0, 15.0, size=n)
    val = rng.integers(1, 3, size=n)
    locations = tuple(
        Location(float(lo), float(la), int(v)) for lo, la, v in zip(lon, lat, val)
    )
    return Instance(orbit, locations, seed)


# Hand-placed so that only A/B and B/C conflict under the default orbit:
# A and C sit at nadir, B is strongly off-nadir between them.
_EXAMPLE_ONE = (
    (100.0, 0.0, 2),
    (101.0, 5.0, 7),
    (102.0, 0.0, 3),
    (150.0, -3.0, 2),
    (200.0, 4.0, 6),
)
_EXAMPLE_ONE_CONFLICTS = [(0, 1), (1, 2)]


def example_one() -> tuple[Instance, ConflictModel]:
    """The five-location scenario A..E with values 2, 7, 3, 2, 6."""
    inst = Instance(OrbitConfig(), tuple(Location(*row) for row in _EXAMPLE_ONE), 0)
    conf = build_conflicts(inst)
    if conf.pairs() != _EXAMPLE_ONE_CONFLICTS:
        raise AssertionError(f"example coordinates produce conflicts {conf.pairs()}")
    return inst, conf


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_ORBIT_KEYS = {
    "earth_radius_km": "earth_radius",
    "altitude_km": "altitude",
    "rotation_speed_deg_s": "rotation_speed",
    "mu": "mu",
}


def instance_to_dict(inst: Instance) -> dict:
    o = inst.orbit
    return {
        "seed": inst.seed,
        "orbit": {
            "earth_radius_km": o.earth_radius,
            "altitude_km": o.altitude,
            "rotation_speed_deg_s": o.rotation_speed,
            "mu": o.mu,
        },
        "locations": [
            {"lon_deg": loc.longitude, "lat_deg": loc.latitude, "value": loc.value}
            for loc in inst.locations
        ],
    }


def _number(data: dict, key: str, where: str) -> float:
    if key not in data:
        raise ValueError(f"{where}.{key}: missing field")
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{where}.{key}: expected a number, got {value!r}")
    return value


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise ValueError("instance: expected a JSON object")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValueError(f"seed: expected an integer, got {seed!r}")

    orbit_data = data.get("orbit", {})
    if not isinstance(orbit_data, dict):
        raise ValueError("orbit: expected a JSON object")
    kwargs = {}
    for key, attr in _ORBIT_KEYS.items():
        if key in orbit_data:
            kwargs[attr] = _number(orbit_data, key, "orbit")
            if not kwargs[attr] > 0:
                raise ValueError(f"orbit.{key}: must be > 0, got {kwargs[attr]!r}")
    orbit = OrbitConfig(**kwargs)

    locs = data.get("locations")
    if not isinstance(locs, list) or not locs:
        raise ValueError("locations: expected a non-empty list")
    locations = []
    for k, item in enumerate(locs):
        where = f"locations[{k}]"
        if not isinstance(item, dict):
            raise ValueError(f"{where}: expected a JSON object")
        lon = _number(item, "lon_deg", where)
        lat = _number(item, "lat_deg", where)
        value = _number(item, "value", where)
        if not 0.0 <= lon < 360.0:
            raise ValueError(f"{where}.lon_deg: {lon!r} outside [0, 360)")
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"{where}.lat_deg: {lat!r} outside [-90, 90]")
        if int(value) != value or value < 1:
            raise ValueError(f"{where}.value: expected a positive integer, got {value!r}")
        locations.append(Location(float(lon), float(lat), int(value)))
    return Instance(orbit, tuple(locations), seed)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return instance_from_dict(data)
