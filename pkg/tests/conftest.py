"""Shared fixtures: small scenarios reused across test modules."""

from __future__ import annotations

import pytest

from eventparking import generate_synthetic, load_bundled


@pytest.fixture(scope="session")
def small_scenario():
    # 4 lots / 30 spaces / 3 entries: big enough to exercise contention,
    # small enough for brute-force cross-checks.
    return generate_synthetic(n_lots=4, total_capacity=30, n_entries=3, seed=1)


@pytest.fixture(scope="session")
def medium_scenario():
    return generate_synthetic(n_lots=8, total_capacity=300, n_entries=5, seed=3)


@pytest.fixture(scope="session")
def bundled_scenario():
    return load_bundled()
