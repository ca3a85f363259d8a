"""Driver search behavior: strategies, tolerance budgets, redirection.

Drivers are unfamiliar with the area: they head for whichever unvisited
lot their strategy ranks best, discover fullness only on arrival, and
give up once cumulative search time exceeds a personal tolerance budget
drawn from a gamma distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geo import DistanceMatrix
from .scenario import Scenario
from .timing import LotTimingParams


class SearchGroup(Enum):
    """The four driver strategies plus the uniform-random variant."""

    NEAREST_FROM_ENTRY = "nearest_from_entry"
    NEAREST_EXCLUDING_CORE = "nearest_excluding_core"
    NEAREST_TO_DESTINATION = "nearest_to_destination"
    MIN_DRIVE_PLUS_WALK = "min_drive_plus_walk"
    RANDOM = "random"


# Order in which the strategy-mix weights apply.
MIX_GROUPS = (
    SearchGroup.NEAREST_FROM_ENTRY,
    SearchGroup.NEAREST_EXCLUDING_CORE,
    SearchGroup.NEAREST_TO_DESTINATION,
    SearchGroup.MIN_DRIVE_PLUS_WALK,
)


@dataclass(frozen=True)
class DriverProfile:
    """Per-vehicle behavior: strategy plus abandonment budget."""

    vehicle_id: int
    group: SearchGroup
    tolerance_budget_s: float


def sample_tolerances(
    shape: float,
    scale_s: float,
    n: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> np.ndarray:
    """Draw ``n`` gamma-distributed tolerance budgets, in seconds.

    Draws are i.i.d. Gamma(shape, scale) and strictly positive; the
    sequence is deterministic for a given seed.
    """
    if shape <= 0 or scale_s <= 0:
        raise ValueError(
            f"gamma shape and scale must be > 0, got {shape!r}, {scale_s!r}"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = rng.gamma(shape, scale_s, size=n)
    # Guard the open support against underflow to exactly 0.0.
    return np.maximum(draws, np.finfo(float).tiny)


def assign_profiles(
    s: Scenario, seed: int | np.random.SeedSequence
) -> list[DriverProfile]:
    """Draw each vehicle's search group and tolerance budget.

    The random-variant fraction is carved out first; everyone else is
    drawn i.i.d. from the four-group mix. Group membership and tolerance
    budgets come from independent substreams, so changing the mix leaves
    the budgets untouched (paired comparisons across methods).
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    group_ss, tol_ss = ss.spawn(2)
    group_rng = np.random.default_rng(group_ss)

    k = s.vehicle_count
    mix = np.asarray(s.strategy_mix, dtype=float)
    mix = mix / mix.sum()
    is_random = group_rng.random(k) < s.random_fraction
    picks = group_rng.choice(len(MIX_GROUPS), size=k, p=mix)
    budgets = sample_tolerances(s.gamma_shape, s.gamma_scale_s, k, tol_ss)
    return [
        DriverProfile(
            vehicle_id=v,
            group=SearchGroup.RANDOM if is_random[v] else MIX_GROUPS[picks[v]],
            tolerance_budget_s=float(budgets[v]),
        )
        for v in range(k)
    ]


def default_exclusion_radius(dm: DistanceMatrix) -> float:
    """Radius below which the core-avoiding group skips lots.

    Scenario-relative: the 25th percentile of lot-to-destination
    distances, so "close to the venue" adapts to any geometry.
    """
    return float(np.percentile(dm.lot_dest, 25))


def next_target(
    group: SearchGroup,
    dist_from_current_m: np.ndarray,
    lot_dest_m: np.ndarray,
    visited: np.ndarray,
    kin: LotTimingParams,
    exclusion_radius_m: float,
    rng: np.random.Generator | None = None,
) -> int | None:
    """Pick the next lot to try, or None when every lot has been tried.

    Criteria over unvisited lots:
      - nearest_from_entry: distance from the current position;
      - nearest_excluding_core: same, but lots within the exclusion
        radius of the destination are skipped unless that would leave
        no candidates at all;
      - nearest_to_destination: lot-to-destination distance (a fixed
        ranking, independent of where the driver is);
      - min_drive_plus_walk: drive time from the current position plus
        walk time to the destination;
      - random: uniform over unvisited lots, drawn from ``rng``.

    Ties break toward the lowest lot index.
    """
    candidates = ~visited
    if not candidates.any():
        return None
    if group is SearchGroup.RANDOM:
        if rng is None:
            raise ValueError("random strategy requires an rng")
        options = np.flatnonzero(candidates)
        return int(options[rng.integers(len(options))])
    if group is SearchGroup.NEAREST_FROM_ENTRY:
        criterion = dist_from_current_m
    elif group is SearchGroup.NEAREST_EXCLUDING_CORE:
        allowed = candidates & (lot_dest_m >= exclusion_radius_m)
        if allowed.any():
            candidates = allowed
        criterion = dist_from_current_m
    elif group is SearchGroup.NEAREST_TO_DESTINATION:
        criterion = lot_dest_m
    elif group is SearchGroup.MIN_DRIVE_PLUS_WALK:
        criterion = (
            dist_from_current_m / kin.drive_speed_mps
            + lot_dest_m / kin.walk_speed_mps
        )
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown group {group!r}")
    return int(np.argmin(np.where(candidates, criterion, np.inf)))


def should_abandon(elapsed_search_s: float, tolerance_budget_s: float) -> bool:
    """True once cumulative search time strictly exceeds the budget."""
    return elapsed_search_s > tolerance_budget_s
