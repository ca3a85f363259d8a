"""Projection and distance-matrix behavior."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from eventparking import (
    DistanceMatrix,
    GeoPoint,
    PlanePoint,
    build_distance_matrix,
    manhattan,
    miller_project,
)
from eventparking.geo import CIRCUMFERENCE_M, EARTH_RADIUS_M, Y_COMPRESSION

L = CIRCUMFERENCE_M


def mp_project(lon: float, lat: float) -> tuple[mpmath.mpf, mpmath.mpf]:
    # Independent 50-digit evaluation of the same closed forms.
    with mpmath.workdps(50):
        big_l = 2 * mpmath.pi * mpmath.mpf(EARTH_RADIUS_M)
        x_proj = mpmath.mpf(lon)
        y_proj = mpmath.mpf("1.25") * mpmath.log(
            mpmath.tan(mpmath.pi / 4 + mpmath.mpf("0.4") * mpmath.mpf(lat))
        )
        x = big_l / 2 + big_l / (2 * mpmath.pi) * x_proj
        y = big_l / 4 - big_l / (4 * mpmath.mpf(str(Y_COMPRESSION))) * y_proj
        return x, y


def test_origin_lands_at_plane_center():
    p = miller_project(GeoPoint(0.0, 0.0))
    assert p.x == pytest.approx(L / 2, rel=1e-12)
    assert p.y == pytest.approx(L / 4, rel=1e-12)


def test_antimeridian_lands_at_right_edge():
    p = miller_project(GeoPoint(math.pi, 0.0))
    assert p.x == pytest.approx(L, rel=1e-12)
    assert p.y == pytest.approx(L / 4, rel=1e-12)


def test_matches_high_precision_reference_on_random_points():
    rng = np.random.default_rng(8)
    lons = rng.uniform(-math.pi, math.pi, size=100)
    lats = rng.uniform(-math.pi / 2 + 1e-6, math.pi / 2 - 1e-6, size=100)
    for lon, lat in zip(lons, lats):
        got = miller_project(GeoPoint(lon, lat))
        want_x, want_y = mp_project(lon, lat)
        assert abs(got.x - float(want_x)) <= 1e-6 * abs(float(want_x))
        assert abs(got.y - float(want_y)) <= 1e-6 * max(abs(float(want_y)), 1.0)


def test_northern_latitudes_move_up_the_plane():
    # y decreases as latitude increases (plane y runs south-positive).
    y_prev = miller_project(GeoPoint(0.0, -1.5)).y
    for lat in np.linspace(-1.4, 1.5, 30):
        y = miller_project(GeoPoint(0.0, float(lat))).y
        assert y < y_prev
        y_prev = y


@pytest.mark.parametrize("lat", [math.pi / 2, -math.pi / 2, 2.0, -3.0])
def test_polar_latitudes_rejected(lat):
    with pytest.raises(ValueError):
        miller_project(GeoPoint(0.0, lat))


def test_manhattan_metric_properties():
    rng = np.random.default_rng(12)
    pts = rng.uniform(-1e7, 1e7, size=(10_000, 3, 2))
    for a_xy, b_xy, c_xy in pts:
        a, b, c = PlanePoint(*a_xy), PlanePoint(*b_xy), PlanePoint(*c_xy)
        d_ab = manhattan(a, b)
        assert d_ab >= 0.0
        assert manhattan(a, a) == 0.0
        assert d_ab == manhattan(b, a)
        assert manhattan(a, c) <= d_ab + manhattan(b, c) + 1e-6


def test_distance_matrix_matches_pairwise_recomputation():
    rng = np.random.default_rng(5)
    lots = [
        GeoPoint(float(lon), float(lat))
        for lon, lat in zip(
            rng.uniform(-2.15, -2.12, 20), rng.uniform(0.64, 0.68, 20)
        )
    ]
    entries = [
        GeoPoint(float(lon), float(lat))
        for lon, lat in zip(
            rng.uniform(-2.15, -2.12, 7), rng.uniform(0.64, 0.68, 7)
        )
    ]
    dest = GeoPoint(-2.13, 0.66)
    dm = build_distance_matrix(lots, entries, dest)
    assert isinstance(dm, DistanceMatrix)
    assert dm.lot_lot.shape == (20, 20)
    assert dm.lot_dest.shape == (20,)
    assert dm.entry_lot.shape == (7, 20)
    proj_lots = [miller_project(p) for p in lots]
    proj_entries = [miller_project(p) for p in entries]
    proj_dest = miller_project(dest)
    for i in range(20):
        assert dm.lot_dest[i] == pytest.approx(
            manhattan(proj_lots[i], proj_dest), abs=1e-9
        )
        for j in range(20):
            assert dm.lot_lot[i, j] == pytest.approx(
                manhattan(proj_lots[i], proj_lots[j]), abs=1e-9
            )
        for e in range(7):
            assert dm.entry_lot[e, i] == pytest.approx(
                manhattan(proj_entries[e], proj_lots[i]), abs=1e-9
            )


def test_distance_matrix_symmetry_and_diagonal():
    rng = np.random.default_rng(9)
    lots = [
        GeoPoint(float(lon), float(lat))
        for lon, lat in zip(rng.uniform(-2.2, -2.1, 15), rng.uniform(0.6, 0.7, 15))
    ]
    dm = build_distance_matrix(lots, [lots[0]], lots[-1])
    assert np.array_equal(dm.lot_lot, dm.lot_lot.T)
    assert np.all(np.diag(dm.lot_lot) == 0.0)
