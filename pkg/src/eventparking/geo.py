"""Planar geometry for the study region.

Geographic coordinates (radians) are mapped to planar meters with a
cylindrical Miller-style projection, after which every distance in the
model is the Manhattan distance between projected points: the street grid
is treated as axis-aligned, so ``|dx| + |dy|`` is the drivable or walkable
separation between two positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Sphere radius (meters) behind the planar scale L = 2*pi*R, and the
# y-axis divisor that compresses the projected latitude range onto
# [0, L/2]. Both are pinned so distance matrices reproduce bit-for-bit.
EARTH_RADIUS_M = 6_381_372.0
CIRCUMFERENCE_M = 2.0 * math.pi * EARTH_RADIUS_M
Y_COMPRESSION = 2.3


@dataclass(frozen=True)
class GeoPoint:
    """Geographic position in radians, east and north positive."""

    lon: float
    lat: float


@dataclass(frozen=True)
class PlanePoint:
    """Projected position in meters."""

    x: float
    y: float


@dataclass(frozen=True)
class DistanceMatrix:
    """All pairwise Manhattan distances the model needs, in meters.

    Attributes:
        lot_lot: [n_lots, n_lots] lot-to-lot distances (symmetric, zero diagonal).
        lot_dest: [n_lots] lot-to-destination distances.
        entry_lot: [n_entries, n_lots] entry-link-to-lot distances.
    """

    lot_lot: np.ndarray
    lot_dest: np.ndarray
    entry_lot: np.ndarray


def miller_project(p: GeoPoint) -> PlanePoint:
    """Project a (lon, lat) point to planar meters.

    The longitude maps linearly onto [0, L]; the latitude goes through
    ``1.25 * ln(tan(pi/4 + 0.4*lat))`` and is then rescaled onto roughly
    [0, L/2], so in-range inputs yield positive coordinates.

    Raises:
        ValueError: if ``lat`` is at or beyond +/-pi/2, where the
            projected latitude diverges.
    """
    if not abs(p.lat) < math.pi / 2:
        raise ValueError(f"latitude {p.lat!r} outside the open range (-pi/2, pi/2)")
    x_proj = p.lon
    y_proj = 1.25 * math.log(math.tan(math.pi / 4 + 0.4 * p.lat))
    x = CIRCUMFERENCE_M / 2 + CIRCUMFERENCE_M / (2 * math.pi) * x_proj
    y = CIRCUMFERENCE_M / 4 - CIRCUMFERENCE_M / (4 * Y_COMPRESSION) * y_proj
    return PlanePoint(x, y)


def manhattan(a: PlanePoint, b: PlanePoint) -> float:
    """Manhattan (axis-aligned) distance in meters."""
    return abs(a.x - b.x) + abs(a.y - b.y)


def project_all(points: Sequence[GeoPoint]) -> tuple[np.ndarray, np.ndarray]:
    """Project a sequence of points, returning (x, y) coordinate arrays."""
    projected = [miller_project(p) for p in points]
    x = np.array([q.x for q in projected], dtype=float)
    y = np.array([q.y for q in projected], dtype=float)
    return x, y


def build_distance_matrix(
    lots: Sequence[GeoPoint],
    entries: Sequence[GeoPoint],
    destination: GeoPoint,
) -> DistanceMatrix:
    """Project all locations and assemble the pairwise distances.

    Pure function of its inputs: identical inputs produce bit-identical
    matrices.
    """
    lx, ly = project_all(lots)
    ex, ey = project_all(entries)
    dest = miller_project(destination)

    lot_lot = np.abs(lx[:, None] - lx[None, :]) + np.abs(ly[:, None] - ly[None, :])
    lot_dest = np.abs(lx - dest.x) + np.abs(ly - dest.y)
    entry_lot = np.abs(ex[:, None] - lx[None, :]) + np.abs(ey[:, None] - ly[None, :])
    return DistanceMatrix(lot_lot=lot_lot, lot_dest=lot_dest, entry_lot=entry_lot)
