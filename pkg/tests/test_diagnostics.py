"""Scalar diagnostics: distance measures, blob errors, arc-length descriptors."""

import io
import math

import numpy as np
import pytest

from luq.diagnostics import (
    BlobSpec,
    LuqParams,
    Target,
    blob_error,
    centroid,
    displacement,
    luq_map,
    luq_pointwise,
    luq_trajectory,
    m_average,
    m_descriptor,
)
from luq.flows import Duffing, GriddedFlow, LinearSaddle, SaddleMap
from luq.gridded import load_velocity_grid
from luq.trajectory import TimeWindow

P2 = LuqParams(2.0, "outer_root")

UNIFORM_GRID = (
    "velgrid,1\n"
    "dims,2,2,1\n"
    "origin,-50,-50,0\n"
    "spacing,100,100,1\n"
    "geometry,planar\n"
    "time,0\n"
    "{u},{u}\n{u},{u}\n"
    "0,0\n0,0\n"
)


def _uniform_flow(u=1.0):
    text = UNIFORM_GRID.format(u=u)
    return GriddedFlow(field=load_velocity_grid(io.BytesIO(text.encode())))


def test_params_validation():
    with pytest.raises(ValueError):
        LuqParams(1.0, "outer_root")
    with pytest.raises(ValueError):
        LuqParams(1.5, "inner_sum")
    with pytest.raises(ValueError):
        LuqParams(0.0, "inner_sum")
    with pytest.raises(ValueError):
        LuqParams(2.0, "pnorm")
    LuqParams(1.0, "inner_sum")  # boundary value is legal


def test_pointwise_examples():
    tgt = Target(1.0, -2.0)
    assert luq_pointwise((1.0, -2.0), tgt, P2) == 0.0
    assert luq_pointwise((1.0, -2.0), tgt, LuqParams(0.5, "inner_sum")) == 0.0
    assert luq_pointwise((3.0, 4.0), Target(0.0, 0.0), P2) == 5.0
    assert luq_pointwise((4.0, 9.0), Target(0.0, 0.0), LuqParams(0.5, "inner_sum")) == 5.0


def test_pointwise_swap_and_translation_invariance():
    rng = np.random.default_rng(31)
    for prm in (P2, LuqParams(0.5, "inner_sum")):
        for _ in range(40):
            a = rng.uniform(-5, 5, 2)
            b = rng.uniform(-5, 5, 2)
            c = rng.uniform(-5, 5)
            d1 = luq_pointwise(tuple(a), Target(*b), prm)
            d2 = luq_pointwise(tuple(b), Target(*a), prm)
            assert d1 == d2
            d3 = luq_pointwise((a[0] + c, a[1] + c), Target(b[0] + c, b[1] + c), prm)
            assert d3 == pytest.approx(d1, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_outer_root_triangle_inequality(p):
    prm = LuqParams(p, "outer_root")
    rng = np.random.default_rng(int(p * 10))
    for _ in range(200):
        a, b, c = rng.uniform(-10, 10, (3, 2))
        dac = luq_pointwise(tuple(a), Target(*c), prm)
        dab = luq_pointwise(tuple(a), Target(*b), prm)
        dbc = luq_pointwise(tuple(b), Target(*c), prm)
        assert dac <= dab + dbc + 1e-12


def test_inner_sum_monotone_in_component_gaps():
    prm = LuqParams(0.3, "inner_sum")
    base = luq_pointwise((1.0, 1.0), Target(0.0, 0.0), prm)
    assert luq_pointwise((1.5, 1.0), Target(0.0, 0.0), prm) >= base
    assert luq_pointwise((1.0, 1.5), Target(0.0, 0.0), prm) >= base


def test_luq_trajectory_zero_field_at_target():
    flow = _uniform_flow(0.0)
    val = luq_trajectory(flow, (0.5, 0.5), TimeWindow(0.0, 5.0), Target(0.5, 0.5), P2, 0.1)
    assert val == 0.0


def test_luq_trajectory_saddle_closed_form_values():
    # closed form: endpoint (0.2 e^10, 0.5 e^-10)
    expected = math.sqrt((0.2 * math.exp(10.0) - 0.5) ** 2 + (0.5 * math.exp(-10.0) - 0.5) ** 2)
    val = luq_trajectory(LinearSaddle(1.0), (0.2, 0.5), TimeWindow(0.0, 10.0),
                         Target(0.5, 0.5), P2, 2e-3)
    assert val == pytest.approx(expected, abs=1e-2)
    assert val == pytest.approx(4404.793, abs=1e-2)

    on_manifold = luq_trajectory(LinearSaddle(1.0), (0.0, 1.0), TimeWindow(0.0, 10.0),
                                 Target(0.5, 0.5), P2, 2e-3)
    expected2 = math.sqrt(0.25 + (math.exp(-10.0) - 0.5) ** 2)
    assert on_manifold == pytest.approx(expected2, abs=1e-4)
    assert on_manifold == pytest.approx(0.70707, abs=1e-4)


def test_luq_trajectory_requires_forward_window():
    with pytest.raises(ValueError):
        luq_trajectory(LinearSaddle(1.0), (0.1, 0.1), TimeWindow(10.0, 0.0),
                       Target(0.0, 0.0), P2, 1e-2)


def test_luq_trajectory_undefined_on_truncation():
    flow = _uniform_flow(1.0)  # drifts out of the 100-wide box before t=200
    val = luq_trajectory(flow, (0.0, 0.0), TimeWindow(0.0, 200.0), Target(0.0, 0.0), P2, 0.5)
    assert math.isnan(val)


def test_luq_map_examples():
    val = luq_map(SaddleMap(2.0), (0.0, 1.0), 10, Target(0.0, 0.0), LuqParams(0.1, "inner_sum"))
    assert val == pytest.approx(0.5, abs=1e-15)
    val = luq_map(SaddleMap(2.0), (1.0, 0.0), 3, Target(0.0, 0.0), P2)
    assert val == 8.0
    val = luq_map(SaddleMap(2.0), (1.0, 0.0), 3, Target(8.0, 0.0), P2)
    assert val == 0.0
    with pytest.raises(ValueError):
        luq_map(SaddleMap(2.0), (1.0, 0.0), 0, Target(0.0, 0.0), P2)


def test_centroid():
    assert centroid([(2.5, -1.0)]) == (2.5, -1.0)
    assert centroid([(0.0, 0.0), (2.0, 0.0), (1.0, 3.0)]) == (1.0, 1.0)
    assert centroid([(-1.0, -1.0), (1.0, 1.0)]) == (0.0, 0.0)
    with pytest.raises(ValueError):
        centroid([])


def test_blob_error_zero_field_centered_on_target():
    flow = _uniform_flow(0.0)
    blob = BlobSpec(center=(0.25, -0.4), radius=0.05, n_points=16)
    val = blob_error(flow, blob, TimeWindow(0.0, 3.0), Target(0.25, -0.4), 0.1)
    assert val == pytest.approx(0.0, abs=1e-15)


def test_blob_error_tracks_center_on_linear_flow():
    blob = BlobSpec(center=(0.2, 0.5), radius=1e-4, n_points=64)
    be = blob_error(LinearSaddle(1.0), blob, TimeWindow(0.0, 10.0), Target(0.5, 0.5), 2e-3)
    center_val = luq_trajectory(LinearSaddle(1.0), (0.2, 0.5), TimeWindow(0.0, 10.0),
                                Target(0.5, 0.5), P2, 2e-3)
    assert abs(be - center_val) < 5.0


def test_blob_error_converges_to_trajectory_value():
    # smooth-flow limit: the centroid error approaches the center trajectory's
    # value as the radius shrinks (observed convergence is second order in r,
    # the symmetric ring cancels the first-order term)
    tgt = Target(1.0, 0.0)
    w = TimeWindow(0.0, 10.0)
    center_val = luq_trajectory(Duffing(0.1), (0.1, 0.1), w, tgt, P2, 2e-3)
    diffs = []
    for r in (1e-3, 5e-4, 2.5e-4):
        blob = BlobSpec(center=(0.1, 0.1), radius=r, n_points=64)
        diffs.append(abs(blob_error(Duffing(0.1), blob, w, tgt, 2e-3) - center_val))
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[0] / diffs[1] > 4.0 / 3.0
    assert diffs[1] / diffs[2] > 4.0 / 3.0


def test_blob_error_undefined_when_any_point_truncates():
    flow = _uniform_flow(1.0)
    blob = BlobSpec(center=(0.0, 0.0), radius=0.1, n_points=8)
    val = blob_error(flow, blob, TimeWindow(0.0, 200.0), Target(0.0, 0.0), 0.5)
    assert math.isnan(val)


def test_m_descriptor_zero_field():
    flow = _uniform_flow(0.0)
    for mode in ("forward", "backward", "both"):
        assert m_descriptor(flow, (1.0, 1.0), 0.0, 2.0, mode, 0.05) == 0.0


def test_m_descriptor_uniform_speed():
    flow = _uniform_flow(1.0)
    val = m_descriptor(flow, (0.0, 0.0), 0.0, 2.0, "both", 0.01)
    assert val == pytest.approx(4.0, rel=1e-12)
    assert m_average(flow, (0.0, 0.0), 0.0, 2.0, 0.01) == pytest.approx(1.0, rel=1e-12)


def test_m_descriptor_stable_manifold_closed_form():
    val = m_descriptor(LinearSaddle(1.0), (0.0, 1.0), 0.0, 10.0, "forward", 2e-3)
    assert abs(val - (1.0 - math.exp(-10.0))) < 1e-7


def test_m_both_is_sum_of_parts():
    rng = np.random.default_rng(33)
    flow = Duffing(0.1)
    for _ in range(20):
        s = (rng.uniform(-1.5, 1.5), rng.uniform(-1, 1))
        f = m_descriptor(flow, s, 0.0, 2.0, "forward", 0.01)
        b = m_descriptor(flow, s, 0.0, 2.0, "backward", 0.01)
        both = m_descriptor(flow, s, 0.0, 2.0, "both", 0.01)
        assert both == pytest.approx(f + b, rel=1e-12)


def test_m_descriptor_validation():
    with pytest.raises(ValueError):
        m_descriptor(LinearSaddle(1.0), (0.0, 1.0), 0.0, -1.0, "forward", 0.01)
    with pytest.raises(ValueError):
        m_descriptor(LinearSaddle(1.0), (0.0, 1.0), 0.0, 1.0, "sideways", 0.01)


def test_displacement():
    assert displacement((1.0, 2.0), (1.0, 2.0)) == 0.0
    assert displacement((0.0, 0.0), (3.0, 4.0)) == 5.0
    rng = np.random.default_rng(34)
    for _ in range(30):
        s0 = tuple(rng.uniform(-5, 5, 2))
        s1 = tuple(rng.uniform(-5, 5, 2))
        assert displacement(s0, s1) == luq_pointwise(s1, Target(*s0), P2)


def test_luq_trajectory_saddle_mirror_and_oracle_regression():
    # flow symmetry: mirroring y0 and the target's y* reproduces the value;
    # magnitudes regress onto the closed form
    rng = np.random.default_rng(35)
    h = 2e-3
    for _ in range(8):
        x0 = rng.uniform(1e-3, 1.0) * rng.choice([-1.0, 1.0])
        y0 = rng.uniform(-1.0, 1.0)
        t_end = rng.choice([2.0, 5.0, 10.0])
        w = TimeWindow(0.0, float(t_end))
        val = luq_trajectory(LinearSaddle(1.0), (x0, y0), w, Target(0.5, 0.5), P2, h)
        mirrored = luq_trajectory(LinearSaddle(1.0), (x0, -y0), w, Target(0.5, -0.5), P2, h)
        assert mirrored == val
        xe = x0 * math.exp(t_end)
        ye = y0 * math.exp(-t_end)
        closed = math.sqrt((xe - 0.5) ** 2 + (ye - 0.5) ** 2)
        assert val == pytest.approx(closed, rel=1e-9)


def test_blob_spec_validation():
    with pytest.raises(ValueError):
        BlobSpec(center=(0, 0), radius=0.0)
    with pytest.raises(ValueError):
        BlobSpec(center=(0, 0), radius=0.1, n_points=2)
    with pytest.raises(ValueError):
        Target(math.inf, 0.0)
