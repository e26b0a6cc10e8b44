"""RK4 integration, map orbits, and their reproducibility contracts."""

import io
import math

import numpy as np
import pytest

from luq.flows import Duffing, GriddedFlow, LinearSaddle, RotatedSaddle, RotatedSaddleMap, SaddleMap, map_step
from luq.gridded import load_velocity_grid
from luq.trajectory import TimeWindow, integrate, iterate_map

ZERO_GRID = (
    "velgrid,1\n"
    "dims,2,2,1\n"
    "origin,-10,-10,0\n"
    "spacing,20,20,1\n"
    "geometry,planar\n"
    "time,0\n"
    "0,0\n0,0\n"
    "0,0\n0,0\n"
)


def _zero_flow():
    return GriddedFlow(field=load_velocity_grid(io.BytesIO(ZERO_GRID.encode())))


def test_zero_field_stays_put():
    tr = integrate(_zero_flow(), (0.7, -2.3), TimeWindow(0.0, 5.0), 0.1)
    assert tr.final_state == (0.7, -2.3)
    assert tr.arc_length == 0.0
    assert not tr.truncated


def test_saddle_against_closed_form():
    tr = integrate(LinearSaddle(1.0), (0.1, 1.0), TimeWindow(0.0, 1.0), 1e-3)
    xf, yf = tr.final_state
    assert abs(xf - 0.1 * math.e) < 1e-9
    assert abs(yf - math.exp(-1.0)) < 1e-9


def test_unforced_duffing_equilibrium():
    tr = integrate(Duffing(0.0), (1.0, 0.0), TimeWindow(0.0, 10.0), 1e-3)
    xf, yf = tr.final_state
    assert abs(xf - 1.0) < 1e-9 and abs(yf) < 1e-9


def test_rk4_fourth_order():
    def endpoint_error(h):
        tr = integrate(LinearSaddle(1.0), (0.3, 0.7), TimeWindow(0.0, 2.0), h)
        xf, yf = tr.final_state
        ex = 0.3 * math.exp(2.0)
        ey = 0.7 * math.exp(-2.0)
        return math.hypot(xf - ex, yf - ey)

    assert endpoint_error(1e-2) / endpoint_error(5e-3) >= 14.0


@pytest.mark.parametrize("flow", [LinearSaddle(1.0), RotatedSaddle(1.0), Duffing(0.1)])
def test_time_reversal_returns_to_start(flow):
    s0 = (0.31, 0.77)
    fwd = integrate(flow, s0, TimeWindow(0.0, 2.0), 1e-3)
    back = integrate(flow, fwd.final_state, TimeWindow(2.0, 0.0), 1e-3)
    xb, yb = back.final_state
    assert math.hypot(xb - s0[0], yb - s0[1]) < 1e-8
    assert back.times[0] == 2.0 and back.times[-1] == 0.0
    assert np.all(np.diff(back.times) < 0)


@pytest.mark.parametrize("flow", [LinearSaddle(1.0), RotatedSaddle(0.8)])
def test_arc_length_same_curve_both_directions(flow):
    s0 = (0.4, 1.1)
    fwd = integrate(flow, s0, TimeWindow(0.0, 2.0), 1e-3)
    back = integrate(flow, fwd.final_state, TimeWindow(2.0, 0.0), 1e-3)
    assert abs(fwd.arc_length - back.arc_length) < 1e-8


def test_integrate_is_deterministic():
    a = integrate(Duffing(0.1), (0.2, 0.1), TimeWindow(0.0, 3.0), 1e-3)
    b = integrate(Duffing(0.1), (0.2, 0.1), TimeWindow(0.0, 3.0), 1e-3)
    assert np.array_equal(a.states, b.states)
    assert a.arc_length == b.arc_length


def test_final_partial_step_lands_on_end():
    tr = integrate(LinearSaddle(1.0), (0.1, 0.1), TimeWindow(0.0, 1.0), 0.3)
    assert tr.times[-1] == 1.0
    assert len(tr.times) == 5  # 0, .3, .6, .9, 1.0


def test_step_validation():
    with pytest.raises(ValueError):
        integrate(LinearSaddle(1.0), (0.1, 0.1), TimeWindow(0.0, 1.0), 2.0)
    with pytest.raises(ValueError):
        integrate(LinearSaddle(1.0), (0.1, 0.1), TimeWindow(0.0, 1.0), -0.1)
    with pytest.raises(ValueError):
        TimeWindow(1.0, 1.0)


def test_gridded_truncation_flagged():
    # constant drift pushes the parcel out of the small domain
    text = ZERO_GRID.replace("origin,-10,-10,0", "origin,-1,-1,0").replace(
        "spacing,20,20,1", "spacing,2,2,1").replace("0,0\n0,0\n0,0\n0,0", "1,1\n1,1\n0,0\n0,0")
    flow = GriddedFlow(field=load_velocity_grid(io.BytesIO(text.encode())))
    tr = integrate(flow, (0.0, 0.0), TimeWindow(0.0, 5.0), 0.1)
    assert tr.truncated
    assert tr.final_state[0] <= 1.0
    assert len(tr.times) < 51


def test_iterate_map_identity_orbit():
    tr = iterate_map(SaddleMap(2.0), (0.3, 0.4), 0)
    assert tr.states.shape == (1, 2)
    assert tr.final_state == (0.3, 0.4)
    assert tr.arc_length == 0.0


def test_iterate_map_closed_forms():
    tr = iterate_map(SaddleMap(2.0), (1.0, 1.0), 3)
    assert tr.final_state == (8.0, 0.125)
    tr = iterate_map(RotatedSaddleMap(2.0), (1.0, -1.0), 4)
    assert tr.final_state == (0.0625, -0.0625)
    assert np.array_equal(tr.times, np.arange(5.0))


@pytest.mark.parametrize("m", [SaddleMap(2.0), RotatedSaddleMap(2.0), SaddleMap(1.5)])
def test_iterate_map_matches_step_composition_bitwise(m):
    rng = np.random.default_rng(21)
    for _ in range(20):
        s = tuple(rng.uniform(-1, 1, 2))
        n = int(rng.integers(1, 12))
        tr = iterate_map(m, s, n)
        cur = s
        for _k in range(n):
            cur = map_step(m, cur)
        assert tr.final_state == cur
