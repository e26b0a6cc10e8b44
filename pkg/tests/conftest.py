"""Shared fixtures: the two heavy acceptance fields are built once per session."""

import time

import numpy as np
import pytest

from luq.diagnostics import LuqParams, Target
from luq.flows import Duffing, LinearSaddle
from luq.sweep import GridSpec, LuqField, sweep
from luq.trajectory import TimeWindow, prepare_advection


def _warm_kernels():
    # First call may JIT-compile; keep that out of timed sections.
    adv = prepare_advection(LinearSaddle(1.0), 0.0, 0.1, 0.05)
    adv.run(np.array([0.1]), np.array([0.1]))
    adv = prepare_advection(Duffing(0.1), 0.0, 0.1, 0.05)
    adv.run(np.array([0.1]), np.array([0.1]))


@pytest.fixture(scope="session")
def saddle_luq_field_201():
    """Saddle p=2 outer-root field on [-1,1]^2, 201x201, window [0,10], h=2e-3.

    Returns (field, elapsed_seconds) from a single-worker sweep.
    """
    _warm_kernels()
    grid = GridSpec(-1.0, 1.0, -1.0, 1.0, 201, 201)
    diag = LuqField(window=TimeWindow(0.0, 10.0), target=Target(0.5, 0.5),
                    params=LuqParams(2.0, "outer_root"), h=2e-3)
    t0 = time.perf_counter()
    field = sweep(grid, diag, LinearSaddle(1.0), workers=1)
    elapsed = time.perf_counter() - t0
    return field, elapsed


@pytest.fixture(scope="session")
def duffing_luq_field():
    """Duffing eps=0.1 p=2 field on [-1.6,1.6]x[-1,1], 161x101, target (1,0)."""
    _warm_kernels()
    grid = GridSpec(-1.6, 1.6, -1.0, 1.0, 161, 101)
    diag = LuqField(window=TimeWindow(0.0, 10.0), target=Target(1.0, 0.0),
                    params=LuqParams(2.0, "outer_root"), h=2e-3)
    field = sweep(grid, diag, Duffing(0.1), workers=1)
    return field
