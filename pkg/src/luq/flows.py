"""Velocity fields and discrete maps used throughout the package.

Continuous flows and maps are small frozen specs evaluated by pure
functions, so they can be shared read-only across any number of workers.
States are (x, y) pairs; under spherical geometry they are (lon, lat) in
degrees and velocities come back in degrees per unit time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

DEG_PER_RAD = 180.0 / math.pi
RAD_PER_DEG = math.pi / 180.0


class PoleError(ValueError):
    """Spherical conversion requested at or beyond a pole (|lat| >= 90)."""


@dataclass(frozen=True)
class LinearSaddle:
    """dx/dt = lam*x, dy/dt = -lam*y."""

    lambda_rate: float = 1.0

    def __post_init__(self):
        if not (self.lambda_rate > 0.0):
            raise ValueError("lambda_rate must be > 0")


@dataclass(frozen=True)
class RotatedSaddle:
    """dx/dt = lam*y, dy/dt = lam*x; stable direction along (1, -1)."""

    lambda_rate: float = 1.0

    def __post_init__(self):
        if not (self.lambda_rate > 0.0):
            raise ValueError("lambda_rate must be > 0")


@dataclass(frozen=True)
class Duffing:
    """dx/dt = y, dy/dt = x - x^3 + epsilon*sin(t)."""

    epsilon: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class GriddedFlow:
    """Velocity interpolated from a loaded GriddedField."""

    field: "object"


@dataclass(frozen=True)
class SphericalWrapped:
    """Zonal/meridional (u, v) supplier in m/s wrapped into degree rates.

    sample_uv(x_deg, y_deg, t) -> (u, v); the conversion divides by
    R*cos(lat) and R and rescales to degrees per unit time so trajectories
    stay in lon/lat degree coordinates.
    """

    sample_uv: Callable[[float, float, float], tuple[float, float]]
    earth_radius: float = 6.371e6

    def __post_init__(self):
        if not (self.earth_radius > 0.0):
            raise ValueError("earth_radius must be > 0")


FlowSpec = Union[LinearSaddle, RotatedSaddle, Duffing, GriddedFlow, SphericalWrapped]


@dataclass(frozen=True)
class SaddleMap:
    """(x, y) -> (lam*x, y/lam), lam > 1."""

    lambda_mult: float = 2.0

    def __post_init__(self):
        if not (self.lambda_mult > 1.0):
            raise ValueError("lambda_mult must be > 1")


@dataclass(frozen=True)
class RotatedSaddleMap:
    """Linear map with stable direction (1, -1) and unstable (1, 1).

    Matrix form (1/(2*lam)) [[lam^2+1, lam^2-1], [lam^2-1, lam^2+1]];
    applied in the eigenbasis a=(x+y)/2 -> lam*a, b=(x-y)/2 -> b/lam.
    """

    lambda_mult: float = 2.0

    def __post_init__(self):
        if not (self.lambda_mult > 1.0):
            raise ValueError("lambda_mult must be > 1")


MapSpec = Union[SaddleMap, RotatedSaddleMap]


def eval_spherical(u: float, v: float, phi: float, earth_radius: float) -> tuple[float, float]:
    """Angular rates (rad per unit time) for (u, v) in m/s at latitude phi degrees."""
    if abs(phi) >= 90.0:
        raise PoleError(f"latitude {phi} is at or beyond a pole")
    c = math.cos(phi * RAD_PER_DEG)
    return u / (earth_radius * c), v / earth_radius


def eval_velocity(flow: FlowSpec, s: tuple[float, float], t: float) -> tuple[float, float]:
    """Right-hand side of the selected system at state s and time t."""
    x, y = float(s[0]), float(s[1])
    if isinstance(flow, LinearSaddle):
        lam = flow.lambda_rate
        return lam * x, -lam * y
    if isinstance(flow, RotatedSaddle):
        lam = flow.lambda_rate
        return lam * y, lam * x
    if isinstance(flow, Duffing):
        return y, x - x * x * x + flow.epsilon * math.sin(t)
    if isinstance(flow, GriddedFlow):
        from .gridded import interp_velocity

        return interp_velocity(flow.field, (x, y), t)
    if isinstance(flow, SphericalWrapped):
        u, v = flow.sample_uv(x, y, t)
        dlon, dlat = eval_spherical(u, v, y, flow.earth_radius)
        return dlon * DEG_PER_RAD, dlat * DEG_PER_RAD
    raise TypeError(f"not a flow spec: {flow!r}")


def map_step(m: MapSpec, s: tuple[float, float]) -> tuple[float, float]:
    """One application of the map."""
    x, y = float(s[0]), float(s[1])
    if isinstance(m, SaddleMap):
        lam = m.lambda_mult
        return lam * x, y / lam
    if isinstance(m, RotatedSaddleMap):
        lam = m.lambda_mult
        a = (x + y) / 2.0
        b = (x - y) / 2.0
        return lam * a + b / lam, lam * a - b / lam
    raise TypeError(f"not a map spec: {m!r}")


# CLI-facing constructors keyed by the public system names.


def _need(params: dict, key: str, default=None):
    if key in params:
        return float(params[key])
    if default is not None:
        return default
    raise KeyError(key)


def flow_from_config(name: str, params: dict) -> FlowSpec:
    if name == "linear_saddle":
        return LinearSaddle(lambda_rate=_need(params, "lambda", 1.0))
    if name == "rotated_saddle":
        return RotatedSaddle(lambda_rate=_need(params, "lambda", 1.0))
    if name == "duffing":
        return Duffing(epsilon=_need(params, "epsilon", 0.0))
    raise KeyError(name)


def map_from_config(name: str, params: dict) -> MapSpec:
    if name == "saddle_map":
        return SaddleMap(lambda_mult=_need(params, "lambda", 2.0))
    if name == "rotated_saddle_map":
        return RotatedSaddleMap(lambda_mult=_need(params, "lambda", 2.0))
    raise KeyError(name)


FLOW_NAMES = ("linear_saddle", "rotated_saddle", "duffing", "gridded")
MAP_NAMES = ("saddle_map", "rotated_saddle_map")
