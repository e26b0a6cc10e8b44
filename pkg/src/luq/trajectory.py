"""Trajectory integration for flows and orbit iteration for maps.

Continuous trajectories use classical fixed-step RK4 with the final step
shortened to land exactly on the window end; backward windows run the
time-reversed field. Arc length is accumulated alongside the state using
the RK stage speeds in a per-step Simpson rule,

    ds = (|h|/6) (|v1| + 2 |v2| + 2 |v3| + |v4|),

which is the same quadrature the M-descriptor sweeps use. Everything is
pure: identical inputs give bit-identical outputs regardless of worker
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._steps import build_time_grid, sin_tables
from .flows import (
    Duffing,
    FlowSpec,
    GriddedFlow,
    LinearSaddle,
    MapSpec,
    RotatedSaddle,
    RotatedSaddleMap,
    SaddleMap,
    eval_velocity,
    map_step,
    PoleError,
)
from .gridded import GridDomainError


class IntegrationError(RuntimeError):
    """A trajectory produced a non-finite state."""


@dataclass(frozen=True)
class TimeWindow:
    t_start: float
    t_end: float

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ValueError("window endpoints must be finite")
        if self.t_start == self.t_end:
            raise ValueError("window must have nonzero length")

    @property
    def length(self) -> float:
        return abs(self.t_end - self.t_start)

    @property
    def forward(self) -> bool:
        return self.t_end > self.t_start


@dataclass
class Trajectory:
    """Sampled path: times, states (n, 2), accumulated arc length."""

    times: np.ndarray
    states: np.ndarray
    arc_length: float
    truncated: bool = False

    @property
    def final_state(self) -> tuple[float, float]:
        return float(self.states[-1, 0]), float(self.states[-1, 1])


class Advection:
    """A flow + window + step baked into a reusable batch propagator.

    run(x0, y0) advects a batch of initial conditions through the whole
    window and returns (xf, yf, arc, alive); alive is False where the
    trajectory left the data domain or went non-finite.
    """

    def __init__(self, flow: FlowSpec, t_start: float, t_end: float, h: float):
        self.flow = flow
        self.ts = build_time_grid(t_start, t_end, h)
        self._sin = sin_tables(self.ts) if isinstance(flow, Duffing) else None

    def run(self, x0: np.ndarray, y0: np.ndarray):
        x0 = np.ascontiguousarray(x0, dtype=np.float64)
        y0 = np.ascontiguousarray(y0, dtype=np.float64)
        flow = self.flow
        if isinstance(flow, LinearSaddle):
            xf, yf, arc = kernels.advect_saddle(flow.lambda_rate, x0, y0, self.ts)
        elif isinstance(flow, RotatedSaddle):
            xf, yf, arc = kernels.advect_rotated(flow.lambda_rate, x0, y0, self.ts)
        elif isinstance(flow, Duffing):
            sin_t, sin_mid = self._sin
            xf, yf, arc = kernels.advect_duffing(flow.epsilon, x0, y0, self.ts, sin_t, sin_mid)
        elif isinstance(flow, GriddedFlow):
            g = flow.field
            xf, yf, arc, alive = kernels.advect_gridded(
                x0, y0, self.ts, g.xs, g.ys, g.ts, g.u, g.v,
                g.geometry == "spherical", g.earth_radius,
            )
            alive = alive & np.isfinite(xf) & np.isfinite(yf) & np.isfinite(arc)
            return xf, yf, arc, alive
        else:
            xf = np.empty_like(x0)
            yf = np.empty_like(y0)
            arc = np.empty_like(x0)
            alive = np.ones(x0.shape, dtype=bool)
            for j in range(len(x0)):
                xs, ys, a, n_valid = _generic_path(flow, x0[j], y0[j], self.ts)
                xf[j] = xs[n_valid - 1]
                yf[j] = ys[n_valid - 1]
                arc[j] = a
                alive[j] = n_valid == len(self.ts)
            alive = alive & np.isfinite(xf) & np.isfinite(yf) & np.isfinite(arc)
            return xf, yf, arc, alive
        alive = np.isfinite(xf) & np.isfinite(yf) & np.isfinite(arc)
        return xf, yf, arc, alive


def prepare_advection(flow: FlowSpec, t_start: float, t_end: float, h: float) -> Advection:
    return Advection(flow, t_start, t_end, h)


def _generic_path(flow, x0, y0, ts):
    """RK4 path for callback-style flows; mirrors the kernel stage order."""
    n = len(ts) - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    x = float(x0)
    y = float(y0)
    arc = 0.0
    n_valid = 1
    for i in range(n):
        t = ts[i]
        h = ts[i + 1] - ts[i]
        tm = t + h / 2.0
        t1 = ts[i + 1]
        try:
            k1x, k1y = eval_velocity(flow, (x, y), t)
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x, k2y = eval_velocity(flow, (x2, y2), tm)
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x, k3y = eval_velocity(flow, (x3, y3), tm)
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x, k4y = eval_velocity(flow, (x4, y4), t1)
        except (GridDomainError, PoleError):
            break
        sp1 = math.sqrt(k1x * k1x + k1y * k1y)
        sp2 = math.sqrt(k2x * k2x + k2y * k2y)
        sp3 = math.sqrt(k3x * k3x + k3y * k3y)
        sp4 = math.sqrt(k4x * k4x + k4y * k4y)
        arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i + 1] = x
        ys[i + 1] = y
        n_valid = i + 2
    return xs, ys, arc, n_valid


def integrate(flow: FlowSpec, s0: tuple[float, float], window: TimeWindow, h: float) -> Trajectory:
    """RK4 march of s0 across the window, sampled at every step."""
    x0, y0 = float(s0[0]), float(s0[1])
    if not (math.isfinite(x0) and math.isfinite(y0)):
        raise IntegrationError(f"initial state {s0!r} is not finite")
    ts = build_time_grid(window.t_start, window.t_end, h)
    truncated = False
    if isinstance(flow, LinearSaddle):
        xs, ys, arc = kernels.path_saddle(flow.lambda_rate, x0, y0, ts)
    elif isinstance(flow, RotatedSaddle):
        xs, ys, arc = kernels.path_rotated(flow.lambda_rate, x0, y0, ts)
    elif isinstance(flow, Duffing):
        sin_t, sin_mid = sin_tables(ts)
        xs, ys, arc = kernels.path_duffing(flow.epsilon, x0, y0, ts, sin_t, sin_mid)
    elif isinstance(flow, GriddedFlow):
        g = flow.field
        from .gridded import interp_velocity

        interp_velocity(g, (x0, y0), float(ts[0]))  # s0 must start in domain
        xs, ys, arc, n_valid = kernels.path_gridded(
            x0, y0, ts, g.xs, g.ys, g.ts, g.u, g.v,
            g.geometry == "spherical", g.earth_radius,
        )
        truncated = n_valid < len(ts)
        ts, xs, ys = ts[:n_valid], xs[:n_valid], ys[:n_valid]
    else:
        xs, ys, arc, n_valid = _generic_path(flow, x0, y0, ts)
        truncated = n_valid < len(ts)
        ts, xs, ys = ts[:n_valid], xs[:n_valid], ys[:n_valid]
    states = np.column_stack([xs, ys])
    if not np.isfinite(states).all() or not math.isfinite(arc):
        raise IntegrationError("trajectory produced a non-finite state")
    return Trajectory(times=ts, states=states, arc_length=float(arc), truncated=truncated)


def iterate_map(m: MapSpec, s0: tuple[float, float], n: int) -> Trajectory:
    """Orbit of length n+1 from repeated map application.

    arc_length is the sum of Euclidean distances between consecutive
    iterates. Matches n-fold map_step composition bitwise.
    """
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    x, y = float(s0[0]), float(s0[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise IntegrationError(f"initial state {s0!r} is not finite")
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x
    ys[0] = y
    arc = 0.0
    for k in range(n):
        xn, yn = map_step(m, (x, y))
        arc = arc + math.sqrt((xn - x) * (xn - x) + (yn - y) * (yn - y))
        x, y = xn, yn
        xs[k + 1] = x
        ys[k + 1] = y
    return Trajectory(
        times=np.arange(n + 1, dtype=np.float64),
        states=np.column_stack([xs, ys]),
        arc_length=float(arc),
    )


class MapIteration:
    """A map + iteration count baked into a reusable batch propagator.

    Rotated-saddle orbits march in the (a, b) eigenbasis so the endpoint
    matches the closed-form n-th iterate bit-for-bit at power-of-two
    multipliers.
    """

    def __init__(self, m: MapSpec, n: int):
        if n < 0:
            raise ValueError("iteration count must be >= 0")
        self.map = m
        self.n = n

    def run(self, x0: np.ndarray, y0: np.ndarray):
        x0 = np.ascontiguousarray(x0, dtype=np.float64)
        y0 = np.ascontiguousarray(y0, dtype=np.float64)
        if isinstance(self.map, SaddleMap):
            xf, yf = kernels.iterate_saddle_map(self.map.lambda_mult, x0, y0, self.n)
        elif isinstance(self.map, RotatedSaddleMap):
            xf, yf = kernels.iterate_rotated_map(self.map.lambda_mult, x0, y0, self.n)
        else:
            raise TypeError(f"not a map spec: {self.map!r}")
        alive = np.isfinite(xf) & np.isfinite(yf)
        return xf, yf, alive


def prepare_map(m: MapSpec, n: int) -> MapIteration:
    return MapIteration(m, n)
