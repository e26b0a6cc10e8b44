"""Scalar transport diagnostics.

Distance-to-target uncertainty measures in two forms (a p-root norm for
p > 1 and a plain p-power sum for p <= 1), blob-centroid error, arc-length
descriptors over forward/backward windows, and endpoint displacement.
Every diagnostic that touches a truncated or non-finite trajectory yields
NaN (the undefined marker), never a partial value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flows import FlowSpec, MapSpec
from .trajectory import TimeWindow, prepare_advection, prepare_map


@dataclass(frozen=True)
class Target:
    """Final observed state the uncertainty is measured against."""

    x_star: float
    y_star: float

    def __post_init__(self):
        if not (math.isfinite(self.x_star) and math.isfinite(self.y_star)):
            raise ValueError("target must be finite")


@dataclass(frozen=True)
class LuqParams:
    """Exponent and form of the uncertainty measure.

    form 'outer_root' is (|dx|^p + |dy|^p)^(1/p) and needs p > 1;
    form 'inner_sum' is |dx|^p + |dy|^p and needs 0 < p <= 1.
    """

    p: float
    form: str = "outer_root"

    def __post_init__(self):
        if self.form == "outer_root":
            if not (self.p > 1.0):
                raise ValueError("outer_root form requires p > 1")
        elif self.form == "inner_sum":
            if not (0.0 < self.p <= 1.0):
                raise ValueError("inner_sum form requires 0 < p <= 1")
        else:
            raise ValueError(f"unknown form {self.form!r}")


@dataclass(frozen=True)
class BlobSpec:
    """Circular blob of initial conditions: center, radius, boundary samples."""

    center: tuple[float, float]
    radius: float
    n_points: int = 64

    def __post_init__(self):
        if not (self.radius > 0.0):
            raise ValueError("radius must be > 0")
        if self.n_points < 3:
            raise ValueError("need at least 3 boundary samples")


def pointwise_batch(xf, yf, tx, ty, prm: LuqParams):
    """Uncertainty measure on endpoint arrays; shared by every call path."""
    with np.errstate(over="ignore", invalid="ignore"):
        ax = np.abs(np.asarray(xf, dtype=np.float64) - tx)
        ay = np.abs(np.asarray(yf, dtype=np.float64) - ty)
        if prm.form == "outer_root":
            return np.power(np.power(ax, prm.p) + np.power(ay, prm.p), 1.0 / prm.p)
        return np.power(ax, prm.p) + np.power(ay, prm.p)


def luq_pointwise(x_final: tuple[float, float], tgt: Target, prm: LuqParams) -> float:
    """Distance-type measure between one endpoint and the target."""
    v = pointwise_batch(
        np.array([float(x_final[0])]), np.array([float(x_final[1])]),
        tgt.x_star, tgt.y_star, prm,
    )
    return float(v[0])


def luq_trajectory(flow: FlowSpec, s0: tuple[float, float], window: TimeWindow,
                   tgt: Target, prm: LuqParams, h: float) -> float:
    """Advect s0 across a forward window and measure the endpoint."""
    if not window.forward:
        raise ValueError("luq_trajectory needs a forward window")
    adv = prepare_advection(flow, window.t_start, window.t_end, h)
    xf, yf, _, alive = adv.run(np.array([float(s0[0])]), np.array([float(s0[1])]))
    if not alive[0]:
        return math.nan
    return float(pointwise_batch(xf, yf, tgt.x_star, tgt.y_star, prm)[0])


def luq_map(m: MapSpec, s0: tuple[float, float], n: int, tgt: Target, prm: LuqParams) -> float:
    """Iterate the map n times and measure the n-th iterate."""
    if n < 1:
        raise ValueError("need at least one iteration")
    it = prepare_map(m, n)
    xf, yf, alive = it.run(np.array([float(s0[0])]), np.array([float(s0[1])]))
    if not alive[0]:
        return math.nan
    return float(pointwise_batch(xf, yf, tgt.x_star, tgt.y_star, prm)[0])


def centroid(points) -> tuple[float, float]:
    """Component-wise arithmetic mean of a non-empty point set."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise ValueError("centroid of an empty point set")
    pts = pts.reshape(-1, 2)
    return float(np.mean(pts[:, 0])), float(np.mean(pts[:, 1]))


def blob_boundary(blob: BlobSpec) -> tuple[np.ndarray, np.ndarray]:
    """Boundary samples (uniform on the circle) followed by the center."""
    theta = 2.0 * np.pi * np.arange(blob.n_points) / blob.n_points
    cx, cy = float(blob.center[0]), float(blob.center[1])
    bx = np.concatenate([cx + blob.radius * np.cos(theta), [cx]])
    by = np.concatenate([cy + blob.radius * np.sin(theta), [cy]])
    return bx, by


def blob_error(flow: FlowSpec, blob: BlobSpec, window: TimeWindow,
               target_centroid: Target, h: float) -> float:
    """Distance between the advected blob's centroid and the target centroid."""
    if not window.forward:
        raise ValueError("blob_error needs a forward window")
    bx, by = blob_boundary(blob)
    adv = prepare_advection(flow, window.t_start, window.t_end, h)
    xf, yf, _, alive = adv.run(bx, by)
    if not alive.all():
        return math.nan
    cmx = float(np.mean(xf))
    cmy = float(np.mean(yf))
    dx = cmx - target_centroid.x_star
    dy = cmy - target_centroid.y_star
    return math.sqrt(dx * dx + dy * dy)


def m_descriptor(flow: FlowSpec, s0: tuple[float, float], t0: float, tau: float,
                 mode: str = "both", h: float | None = None) -> float:
    """Trajectory arc length around t0.

    forward covers [t0, t0+tau], backward [t0-tau, t0], both their sum
    (the full window [t0-tau, t0+tau]).
    """
    if not (tau > 0.0):
        raise ValueError("tau must be > 0")
    if mode not in ("forward", "backward", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if h is None:
        from ._steps import default_step

        h = default_step(t0, t0 + tau)
    x0 = np.array([float(s0[0])])
    y0 = np.array([float(s0[1])])
    total = 0.0
    if mode in ("forward", "both"):
        adv = prepare_advection(flow, t0, t0 + tau, h)
        _, _, arc, alive = adv.run(x0, y0)
        if not alive[0]:
            return math.nan
        total += float(arc[0])
    if mode in ("backward", "both"):
        adv = prepare_advection(flow, t0, t0 - tau, h)
        _, _, arc, alive = adv.run(x0, y0)
        if not alive[0]:
            return math.nan
        total += float(arc[0])
    return total


def m_average(flow: FlowSpec, s0: tuple[float, float], t0: float, tau: float,
              h: float | None = None) -> float:
    """Two-sided arc length scaled by 1/(2 tau): the mean speed along the path."""
    m = m_descriptor(flow, s0, t0, tau, mode="both", h=h)
    return m / (2.0 * tau)


def displacement(s0: tuple[float, float], s_final: tuple[float, float]) -> float:
    """Euclidean distance between initial and final positions."""
    prm = LuqParams(p=2.0, form="outer_root")
    return luq_pointwise(s_final, Target(float(s0[0]), float(s0[1])), prm)
