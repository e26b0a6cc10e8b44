"""Velocity evaluators, the spherical conversion, and map steps."""

import math

import numpy as np
import pytest

from luq.flows import (
    Duffing,
    LinearSaddle,
    PoleError,
    RotatedSaddle,
    RotatedSaddleMap,
    SaddleMap,
    SphericalWrapped,
    eval_spherical,
    eval_velocity,
    flow_from_config,
    map_from_config,
    map_step,
)


def test_linear_saddle_velocity():
    assert eval_velocity(LinearSaddle(1.0), (1.0, 1.0), 0.0) == (1.0, -1.0)
    assert eval_velocity(LinearSaddle(1.0), (1.0, 1.0), 37.5) == (1.0, -1.0)


def test_rotated_saddle_velocity():
    assert eval_velocity(RotatedSaddle(1.0), (1.0, 0.0), 2.0) == (0.0, 1.0)


def test_duffing_velocity():
    vx, vy = eval_velocity(Duffing(0.1), (2.0, 0.0), math.pi / 2)
    assert vx == 0.0
    assert vy == pytest.approx(-5.9, abs=1e-12)


def test_saddle_fixed_point():
    for t in (0.0, 1.0, -3.5, 100.0):
        assert eval_velocity(LinearSaddle(2.3), (0.0, 0.0), t) == (0.0, 0.0)


def test_rotated_stable_subspace_invariant():
    # on y = -x the velocity has no component along (1, 1)
    for x in (-2.0, -0.3, 0.7, 1.9):
        vx, vy = eval_velocity(RotatedSaddle(1.7), (x, -x), 0.0)
        assert vx + vy == 0.0


def test_duffing_unforced_equilibria():
    for s in ((0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)):
        assert eval_velocity(Duffing(0.0), s, 4.2) == (0.0, 0.0)


def test_duffing_time_periodicity():
    # exact 2*pi periodicity up to the float representation of pi
    rng = np.random.default_rng(3)
    for t in rng.uniform(-10, 10, 50):
        _, a1 = eval_velocity(Duffing(0.1), (0.3, -0.2), t)
        _, a2 = eval_velocity(Duffing(0.1), (0.3, -0.2), t + 2 * math.pi)
        assert abs(a1 - a2) < 1e-14


def test_eval_spherical_examples():
    assert eval_spherical(0.0, 0.0, 45.0, 6.371e6) == (0.0, 0.0)
    r = 6.371e6
    assert eval_spherical(r, 0.0, 0.0, r) == (1.0, 0.0)
    vx, vy = eval_spherical(r / 2, 0.0, 60.0, r)
    assert vx == pytest.approx(1.0, rel=1e-14)
    assert vy == 0.0


def test_eval_spherical_pole_error():
    with pytest.raises(PoleError):
        eval_spherical(1.0, 1.0, 90.0, 6.371e6)
    with pytest.raises(PoleError):
        eval_spherical(1.0, 1.0, -93.0, 6.371e6)


def test_spherical_wrapped_flow_degree_rates():
    r = 6.371e6
    flow = SphericalWrapped(sample_uv=lambda x, y, t: (r / 2, 0.0), earth_radius=r)
    vx, vy = eval_velocity(flow, (10.0, 60.0), 0.0)
    # 1 rad per unit time converted to degrees
    assert vx == pytest.approx(180.0 / math.pi, rel=1e-14)
    assert vy == 0.0


def test_map_step_examples():
    assert map_step(SaddleMap(2.0), (1.0, 1.0)) == (2.0, 0.5)
    assert map_step(RotatedSaddleMap(2.0), (1.0, 1.0)) == (2.0, 2.0)
    assert map_step(RotatedSaddleMap(2.0), (1.0, -1.0)) == (0.5, -0.5)


def test_saddle_map_preserves_product():
    rng = np.random.default_rng(11)
    for lam in (2.0, 1.7, 3.3):
        m = SaddleMap(lam)
        for _ in range(50):
            x, y = rng.uniform(-2, 2, 2)
            xn, yn = map_step(m, (x, y))
            assert xn * yn == pytest.approx(x * y, rel=1e-12)


def test_rotated_map_eigen_transform():
    rng = np.random.default_rng(12)
    for lam in (2.0, 1.5):
        m = RotatedSaddleMap(lam)
        for _ in range(50):
            x, y = rng.uniform(-2, 2, 2)
            xn, yn = map_step(m, (x, y))
            a, b = (x + y) / 2, (x - y) / 2
            an, bn = (xn + yn) / 2, (xn - yn) / 2
            assert an == pytest.approx(lam * a, rel=1e-12, abs=1e-15)
            assert bn == pytest.approx(b / lam, rel=1e-12, abs=1e-15)


def test_parameter_validation():
    with pytest.raises(ValueError):
        LinearSaddle(0.0)
    with pytest.raises(ValueError):
        RotatedSaddle(-1.0)
    with pytest.raises(ValueError):
        Duffing(-0.1)
    with pytest.raises(ValueError):
        SaddleMap(1.0)
    with pytest.raises(ValueError):
        RotatedSaddleMap(0.5)
    with pytest.raises(ValueError):
        SphericalWrapped(sample_uv=lambda x, y, t: (0, 0), earth_radius=0.0)


def test_config_registry():
    assert flow_from_config("linear_saddle", {"lambda": 2.0}) == LinearSaddle(2.0)
    assert flow_from_config("duffing", {"epsilon": 0.1}) == Duffing(0.1)
    assert map_from_config("saddle_map", {"lambda": 2.0}) == SaddleMap(2.0)
    assert map_from_config("rotated_saddle_map", {}) == RotatedSaddleMap(2.0)
    with pytest.raises(KeyError):
        flow_from_config("no_such_flow", {})
