"""Per-lot time components: in-lot search time and walk to destination.

The in-lot search model treats a lot as one or more floors of slanted
parking that fill from the bottom up. A driver cruises past half of the
occupied frontage on the first floor with space, stops to park, then
walks back along that frontage; each ramp climbed to reach that floor
adds a fixed driving and turning cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

# Slot width along the cruising aisle (meters) and movement speeds
# (meters/second) used when the scenario does not override them.
DEFAULT_SLOT_WIDTH_M = 2.5
DEFAULT_DRIVE_SPEED_MPS = 4.17
DEFAULT_WALK_SPEED_MPS = 1.39
DEFAULT_RAMP_SPEED_MPS = 2.78
DEFAULT_PARK_STOP_S = 60.0
DEFAULT_RAMP_TURN_S = 10.0


@dataclass(frozen=True)
class LotTimingParams:
    """Speeds and fixed delays for the in-lot model."""

    slot_width_m: float = DEFAULT_SLOT_WIDTH_M
    drive_speed_mps: float = DEFAULT_DRIVE_SPEED_MPS
    walk_speed_mps: float = DEFAULT_WALK_SPEED_MPS
    ramp_speed_mps: float = DEFAULT_RAMP_SPEED_MPS
    park_stop_s: float = DEFAULT_PARK_STOP_S
    ramp_turn_s: float = DEFAULT_RAMP_TURN_S


DEFAULT_TIMING = LotTimingParams()


def first_open_floor(occupied: int, floor_capacities: Sequence[int]) -> int:
    """1-based index of the lowest floor with a free slot.

    Floors fill bottom-up, so ``occupied`` cars fill the lowest floors
    completely before touching the next. A completely full lot reports
    the top floor (a search still climbs the whole structure).
    """
    if occupied < 0:
        raise ValueError(f"occupied count must be >= 0, got {occupied}")
    remaining = occupied
    for floor, cap in enumerate(floor_capacities, start=1):
        if remaining < cap:
            return floor
        remaining -= cap
    return len(floor_capacities)


def search_time_s(
    capacity: int,
    occupied: int,
    floor_capacities: Sequence[int] | None = None,
    ramp_length_m: float = 50.0,
    params: LotTimingParams = DEFAULT_TIMING,
) -> float:
    """Expected seconds from lot entrance to standing beside the parked car.

    Covers cruising past half of the occupied frontage (``occupied``
    slot widths over two), the fixed parking stop, walking back past the
    same frontage, and one ramp climb plus turn per floor below the
    first floor with space.

    Args:
        capacity: total number of slots in the lot.
        occupied: slots already taken when the search starts.
        floor_capacities: slots per floor, bottom-up; defaults to a
            single floor holding everything.
        ramp_length_m: driving distance between consecutive floors.
        params: speeds and fixed delays.

    Raises:
        ValueError: if ``occupied`` is outside [0, capacity].
    """
    if not 0 <= occupied <= capacity:
        raise ValueError(
            f"occupied must lie in [0, {capacity}], got {occupied}"
        )
    if floor_capacities is None:
        floor_capacities = [capacity]
    floor = first_open_floor(occupied, floor_capacities)
    frontage_m = params.slot_width_m / 2.0 * occupied
    time_s = (
        frontage_m / params.drive_speed_mps
        + frontage_m / params.walk_speed_mps
        + params.park_stop_s
    )
    time_s += (floor - 1) * (ramp_length_m / params.ramp_speed_mps + params.ramp_turn_s)
    return time_s


def walk_time_s(distance_m: float, params: LotTimingParams = DEFAULT_TIMING) -> float:
    """Seconds to walk ``distance_m`` meters to the destination."""
    return distance_m / params.walk_speed_mps


def drive_time_s(distance_m: float, params: LotTimingParams = DEFAULT_TIMING) -> float:
    """Seconds to drive ``distance_m`` meters at cruising speed."""
    return distance_m / params.drive_speed_mps
