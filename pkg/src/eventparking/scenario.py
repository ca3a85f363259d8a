"""Study-region definition: lots, entries, destination, and parameters.

A scenario is an immutable description of one experiment: where the
parking lots and region entry links sit, where everyone is headed, how
many vehicles arrive, and every kinematic and behavioral parameter the
pipeline needs. Scenarios load from and save to a small versioned JSON
document so experiments stay reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .geo import DistanceMatrix, GeoPoint, build_distance_matrix, miller_project
from .timing import LotTimingParams

SCHEMA_VERSION = 1

# Arrival window: 10:00 to 12:00 as seconds of day, split into
# 10-minute segments.
DEFAULT_WINDOW_S = (36_000.0, 43_200.0)
DEFAULT_SEGMENTS = 12

DEFAULT_STRATEGY_MIX = (0.25, 0.25, 0.25, 0.25)
DEFAULT_GAMMA_SHAPE = 2.0
DEFAULT_GAMMA_SCALE_S = 450.0
DEFAULT_ARRIVAL_NOISE_SIGMA_S = 120.0
DEFAULT_INSPECTION_TIME_S = 30.0


class ScenarioError(ValueError):
    """Raised when a scenario file cannot be parsed or fails validation."""


@dataclass(frozen=True)
class ParkingLot:
    """One parking facility: position, capacity, and floor layout."""

    id: int
    location: GeoPoint
    capacity: int
    floor_capacities: tuple[int, ...]
    ramp_length_m: float = 50.0

    @property
    def floors(self) -> int:
        return len(self.floor_capacities)


@dataclass(frozen=True)
class EntryLink:
    """A street where vehicles enter the region, on the boundary."""

    id: int
    location: GeoPoint


@dataclass(frozen=True)
class Region:
    """Axis-aligned study rectangle in geographic radians."""

    southwest: GeoPoint
    northeast: GeoPoint

    @property
    def lon_span(self) -> float:
        return self.northeast.lon - self.southwest.lon

    @property
    def lat_span(self) -> float:
        return self.northeast.lat - self.southwest.lat


@dataclass(frozen=True)
class Scenario:
    """Everything one experiment needs, immutable after construction."""

    name: str
    region: Region
    lots: tuple[ParkingLot, ...]
    entries: tuple[EntryLink, ...]
    destination: GeoPoint
    vehicle_count: int
    window_s: tuple[float, float] = DEFAULT_WINDOW_S
    segments: int = DEFAULT_SEGMENTS
    kinematics: LotTimingParams = LotTimingParams()
    strategy_mix: tuple[float, float, float, float] = DEFAULT_STRATEGY_MIX
    random_fraction: float = 0.0
    gamma_shape: float = DEFAULT_GAMMA_SHAPE
    gamma_scale_s: float = DEFAULT_GAMMA_SCALE_S
    arrival_noise_sigma_s: float = DEFAULT_ARRIVAL_NOISE_SIGMA_S
    group2_exclusion_radius_m: float | None = None
    inspection_time_s: float = DEFAULT_INSPECTION_TIME_S

    @property
    def total_capacity(self) -> int:
        return sum(lot.capacity for lot in self.lots)

    @property
    def window_length_s(self) -> float:
        return self.window_s[1] - self.window_s[0]

    @property
    def segment_length_s(self) -> float:
        return self.window_length_s / self.segments

    def distances(self) -> DistanceMatrix:
        return build_distance_matrix(
            [lot.location for lot in self.lots],
            [entry.location for entry in self.entries],
            self.destination,
        )


# ============================================================
# Validation
# ============================================================

def _on_boundary(p: GeoPoint, region: Region, tol: float = 1e-9) -> bool:
    sw, ne = region.southwest, region.northeast
    in_lon = sw.lon - tol <= p.lon <= ne.lon + tol
    in_lat = sw.lat - tol <= p.lat <= ne.lat + tol
    on_vertical = abs(p.lon - sw.lon) <= tol or abs(p.lon - ne.lon) <= tol
    on_horizontal = abs(p.lat - sw.lat) <= tol or abs(p.lat - ne.lat) <= tol
    return (on_vertical and in_lat) or (on_horizontal and in_lon)


def validate(s: Scenario) -> list[str]:
    """Check every scenario invariant, returning one message per violation.

    An empty list means the scenario is valid. Violations are data, not
    exceptions, so callers can report all of them at once.
    """
    problems: list[str] = []
    for lot in s.lots:
        if lot.capacity < 1:
            problems.append(f"lot {lot.id}: capacity must be >= 1, got {lot.capacity}")
        if sum(lot.floor_capacities) != lot.capacity:
            problems.append(
                f"lot {lot.id}: floor_capacities sum to "
                f"{sum(lot.floor_capacities)}, capacity is {lot.capacity}"
            )
        if lot.floors < 1:
            problems.append(f"lot {lot.id}: needs at least one floor")
        if lot.floors > 1 and lot.ramp_length_m <= 0:
            problems.append(
                f"lot {lot.id}: ramp_length_m must be > 0 for multi-floor lots"
            )
    if len({lot.id for lot in s.lots}) != len(s.lots):
        problems.append("lot ids must be unique")
    if len({e.id for e in s.entries}) != len(s.entries):
        problems.append("entry ids must be unique")
    for entry in s.entries:
        if not _on_boundary(entry.location, s.region):
            problems.append(
                f"entry {entry.id}: not on the region boundary rectangle"
            )

    k = s.kinematics
    for name in (
        "slot_width_m",
        "drive_speed_mps",
        "walk_speed_mps",
        "ramp_speed_mps",
    ):
        if getattr(k, name) <= 0:
            problems.append(f"kinematics.{name} must be > 0")
    if k.park_stop_s < 0 or k.ramp_turn_s < 0:
        problems.append("kinematics stop/turn times must be >= 0")
    if k.walk_speed_mps >= k.drive_speed_mps:
        problems.append("kinematics: walk speed must be below drive speed")

    if s.vehicle_count < 1:
        problems.append(f"vehicle_count must be >= 1, got {s.vehicle_count}")
    if s.vehicle_count > s.total_capacity:
        problems.append(
            f"vehicle_count {s.vehicle_count} exceeds total capacity "
            f"{s.total_capacity}: demand exceeds supply"
        )
    if not s.entries:
        problems.append("at least one entry link is required")
    if not s.lots:
        problems.append("at least one lot is required")
    if not math.isclose(sum(s.strategy_mix), 1.0, rel_tol=0, abs_tol=1e-9):
        problems.append(
            f"strategy_mix must sum to 1, got {sum(s.strategy_mix)!r}"
        )
    if any(w < 0 for w in s.strategy_mix):
        problems.append("strategy_mix weights must be >= 0")
    if not 0.0 <= s.random_fraction <= 1.0:
        problems.append(
            f"random_fraction must lie in [0, 1], got {s.random_fraction!r}"
        )
    if s.window_s[1] <= s.window_s[0]:
        problems.append("window end must be after window start")
    if s.segments < 1:
        problems.append(f"segments must be >= 1, got {s.segments}")
    if s.gamma_shape <= 0 or s.gamma_scale_s <= 0:
        problems.append("gamma_tolerance shape and scale must be > 0")
    if s.arrival_noise_sigma_s < 0:
        problems.append("arrival_noise_sigma_s must be >= 0")
    if s.group2_exclusion_radius_m is not None and s.group2_exclusion_radius_m < 0:
        problems.append("group2_exclusion_radius_m must be >= 0 when set")
    if s.inspection_time_s < 0:
        problems.append("inspection_time_s must be >= 0")
    if s.region.lon_span <= 0 or s.region.lat_span <= 0:
        problems.append("region rectangle must have positive area")
    return problems


# ============================================================
# Serialization
# ============================================================

def scenario_to_dict(s: Scenario) -> dict:
    """Plain-dict form of a scenario, matching the file schema."""
    return {
        "schema": SCHEMA_VERSION,
        "name": s.name,
        "region": {
            "southwest": {"lon": s.region.southwest.lon, "lat": s.region.southwest.lat},
            "northeast": {"lon": s.region.northeast.lon, "lat": s.region.northeast.lat},
        },
        "destination": {"lon": s.destination.lon, "lat": s.destination.lat},
        "vehicle_count": s.vehicle_count,
        "window_s": list(s.window_s),
        "segments": s.segments,
        "kinematics": {
            "slot_width_m": s.kinematics.slot_width_m,
            "drive_speed_mps": s.kinematics.drive_speed_mps,
            "walk_speed_mps": s.kinematics.walk_speed_mps,
            "ramp_speed_mps": s.kinematics.ramp_speed_mps,
            "park_stop_s": s.kinematics.park_stop_s,
            "ramp_turn_s": s.kinematics.ramp_turn_s,
        },
        "strategy_mix": list(s.strategy_mix),
        "random_fraction": s.random_fraction,
        "gamma_tolerance": {"shape": s.gamma_shape, "scale_s": s.gamma_scale_s},
        "arrival_noise_sigma_s": s.arrival_noise_sigma_s,
        "group2_exclusion_radius_m": s.group2_exclusion_radius_m,
        "inspection_time_s": s.inspection_time_s,
        "lots": [
            {
                "id": lot.id,
                "lon": lot.location.lon,
                "lat": lot.location.lat,
                "capacity": lot.capacity,
                "floor_capacities": list(lot.floor_capacities),
                "ramp_length_m": lot.ramp_length_m,
            }
            for lot in s.lots
        ],
        "entries": [
            {"id": e.id, "lon": e.location.lon, "lat": e.location.lat}
            for e in s.entries
        ],
    }


def scenario_from_dict(doc: dict) -> Scenario:
    """Inverse of :func:`scenario_to_dict`; validates nothing by itself."""
    try:
        if doc.get("schema") != SCHEMA_VERSION:
            raise ScenarioError(
                f"unsupported schema version {doc.get('schema')!r}, "
                f"expected {SCHEMA_VERSION}"
            )
        region = Region(
            southwest=GeoPoint(
                doc["region"]["southwest"]["lon"], doc["region"]["southwest"]["lat"]
            ),
            northeast=GeoPoint(
                doc["region"]["northeast"]["lon"], doc["region"]["northeast"]["lat"]
            ),
        )
        kin = doc["kinematics"]
        radius = doc.get("group2_exclusion_radius_m")
        return Scenario(
            name=doc["name"],
            region=region,
            lots=tuple(
                ParkingLot(
                    id=int(lot["id"]),
                    location=GeoPoint(lot["lon"], lot["lat"]),
                    capacity=int(lot["capacity"]),
                    floor_capacities=tuple(int(c) for c in lot["floor_capacities"]),
                    ramp_length_m=float(lot["ramp_length_m"]),
                )
                for lot in doc["lots"]
            ),
            entries=tuple(
                EntryLink(id=int(e["id"]), location=GeoPoint(e["lon"], e["lat"]))
                for e in doc["entries"]
            ),
            destination=GeoPoint(doc["destination"]["lon"], doc["destination"]["lat"]),
            vehicle_count=int(doc["vehicle_count"]),
            window_s=(float(doc["window_s"][0]), float(doc["window_s"][1])),
            segments=int(doc["segments"]),
            kinematics=LotTimingParams(
                slot_width_m=float(kin["slot_width_m"]),
                drive_speed_mps=float(kin["drive_speed_mps"]),
                walk_speed_mps=float(kin["walk_speed_mps"]),
                ramp_speed_mps=float(kin["ramp_speed_mps"]),
                park_stop_s=float(kin["park_stop_s"]),
                ramp_turn_s=float(kin["ramp_turn_s"]),
            ),
            strategy_mix=tuple(float(w) for w in doc["strategy_mix"]),
            random_fraction=float(doc["random_fraction"]),
            gamma_shape=float(doc["gamma_tolerance"]["shape"]),
            gamma_scale_s=float(doc["gamma_tolerance"]["scale_s"]),
            arrival_noise_sigma_s=float(doc["arrival_noise_sigma_s"]),
            group2_exclusion_radius_m=None if radius is None else float(radius),
            inspection_time_s=float(doc["inspection_time_s"]),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ScenarioError(f"malformed scenario document: {exc!r}") from exc


def save_scenario(s: Scenario, path: str | Path) -> None:
    """Write a scenario file; identical scenarios produce identical bytes."""
    text = json.dumps(scenario_to_dict(s), sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario file.

    Raises:
        ScenarioError: on parse failure or any invariant violation; the
            message names every violated rule.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"could not parse {path}: {exc}") from exc
    s = scenario_from_dict(doc)
    problems = validate(s)
    if problems:
        raise ScenarioError(f"invalid scenario {path}: " + "; ".join(problems))
    return s


# ============================================================
# Synthetic generation
# ============================================================

def _partition_capacity(total: int, n: int, rng: np.random.Generator) -> list[int]:
    # Every lot gets one slot; the rest is split by random weights with
    # largest-remainder rounding so the total is exact.
    weights = rng.uniform(0.5, 1.5, size=n)
    remainder = total - n
    shares = weights / weights.sum() * remainder
    caps = np.floor(shares).astype(int)
    leftover = remainder - int(caps.sum())
    order = np.argsort(-(shares - caps), kind="stable")
    for i in range(leftover):
        caps[order[i]] += 1
    return [int(c) + 1 for c in caps]


def _boundary_point(region: Region, t: float) -> GeoPoint:
    # t in [0, 1) walks the rectangle counterclockwise from the
    # southwest corner: south edge, east edge, north edge, west edge.
    sw, ne = region.southwest, region.northeast
    w, h = region.lon_span, region.lat_span
    perimeter = 2 * (w + h)
    d = (t % 1.0) * perimeter
    if d < w:
        return GeoPoint(sw.lon + d, sw.lat)
    d -= w
    if d < h:
        return GeoPoint(ne.lon, sw.lat + d)
    d -= h
    if d < w:
        return GeoPoint(ne.lon - d, ne.lat)
    d -= w
    return GeoPoint(sw.lon, ne.lat - d)


def _local_scale(center: GeoPoint) -> tuple[float, float]:
    # Meters per radian of longitude / latitude near the region center,
    # from a small central difference through the projection.
    eps = 1e-7
    px0 = miller_project(GeoPoint(center.lon - eps, center.lat))
    px1 = miller_project(GeoPoint(center.lon + eps, center.lat))
    py0 = miller_project(GeoPoint(center.lon, center.lat - eps))
    py1 = miller_project(GeoPoint(center.lon, center.lat + eps))
    sx = abs(px1.x - px0.x) / (2 * eps)
    sy = abs(py1.y - py0.y) / (2 * eps)
    return sx, sy


DEFAULT_REGION_CENTER = GeoPoint(lon=-2.1337, lat=0.6609)


def generate_synthetic(
    n_lots: int,
    total_capacity: int,
    n_entries: int,
    seed: int,
    name: str | None = None,
    vehicle_count: int | None = None,
    center: GeoPoint = DEFAULT_REGION_CENTER,
    width_m: float = 2_000.0,
    height_m: float = 1_600.0,
    **overrides,
) -> Scenario:
    """Build a random scenario of the requested size, deterministically.

    Lots land uniformly inside a ``width_m`` x ``height_m`` rectangle
    around ``center``; the destination sits just inside the midpoint of
    the east edge (the venue analog); entries are evenly spaced along
    the boundary. Capacities are a random partition of
    ``total_capacity`` with at least one slot per lot. Vehicle count
    defaults to the total capacity, so demand matches supply.

    Args:
        n_lots: number of lots (>= 1).
        total_capacity: slots across all lots (>= n_lots).
        n_entries: entry links on the boundary (>= 1).
        seed: drives every random choice; same inputs, same scenario.
        name: scenario label; defaults to a size-derived one.
        vehicle_count: arriving vehicles; defaults to total_capacity.
        center: geographic center of the region, radians.
        width_m: east-west extent of the region in meters.
        height_m: north-south extent of the region in meters.
        **overrides: forwarded to the Scenario constructor (window_s,
            strategy_mix, gamma_shape, ...).

    Raises:
        ScenarioError: if the size parameters are infeasible.
    """
    if n_lots < 1 or n_entries < 1:
        raise ScenarioError("need at least one lot and one entry")
    if total_capacity < n_lots:
        raise ScenarioError(
            f"total_capacity {total_capacity} below n_lots {n_lots}: "
            "every lot needs at least one slot"
        )
    if width_m <= 0 or height_m <= 0:
        raise ScenarioError("region rectangle must have positive area")

    sx, sy = _local_scale(center)
    half_lon = width_m / sx / 2
    half_lat = height_m / sy / 2
    region = Region(
        southwest=GeoPoint(center.lon - half_lon, center.lat - half_lat),
        northeast=GeoPoint(center.lon + half_lon, center.lat + half_lat),
    )

    rng = np.random.default_rng(seed)
    lons = rng.uniform(region.southwest.lon, region.northeast.lon, size=n_lots)
    lats = rng.uniform(region.southwest.lat, region.northeast.lat, size=n_lots)
    caps = _partition_capacity(total_capacity, n_lots, rng)
    lots = tuple(
        ParkingLot(
            id=i,
            location=GeoPoint(float(lons[i]), float(lats[i])),
            capacity=caps[i],
            floor_capacities=(caps[i],),
        )
        for i in range(n_lots)
    )
    entries = tuple(
        EntryLink(id=j, location=_boundary_point(region, (j + 0.5) / n_entries))
        for j in range(n_entries)
    )
    # Venue analog: midpoint of the east edge, pulled 5% into the region.
    destination = GeoPoint(
        region.northeast.lon - 0.05 * region.lon_span, center.lat
    )

    s = Scenario(
        name=name or f"synthetic-{n_lots}lots-{total_capacity}cap",
        region=region,
        lots=lots,
        entries=entries,
        destination=destination,
        vehicle_count=total_capacity if vehicle_count is None else vehicle_count,
        **overrides,
    )
    problems = validate(s)
    if problems:
        raise ScenarioError("generated scenario invalid: " + "; ".join(problems))
    return s


def with_strategy_mix(
    s: Scenario,
    mix: tuple[float, float, float, float],
    random_fraction: float | None = None,
) -> Scenario:
    """Copy of ``s`` with a different driver mix (for method comparisons)."""
    kwargs = {"strategy_mix": mix}
    if random_fraction is not None:
        kwargs["random_fraction"] = random_fraction
    return replace(s, **kwargs)


def bundled_scenario_path(name: str = "berkeley_synthetic") -> Path:
    """Path to a scenario file shipped inside the package."""
    path = Path(__file__).parent / "data" / f"{name}.json"
    if not path.exists():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return path


def load_bundled(name: str = "berkeley_synthetic") -> Scenario:
    """Load a scenario shipped with the package.

    The default is the campus-scale benchmark: 21 lots totalling 3,992
    spaces, 12 entries, and a matching vehicle count, reproducible via
    ``generate_synthetic(21, 3992, 12, seed=7)``.
    """
    return load_scenario(bundled_scenario_path(name))
