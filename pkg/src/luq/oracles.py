"""Closed-form solutions and large-time asymptotics for the model systems.

These are the independent ground truths the test suite measures the
numerical machinery against: exact saddle / rotated-saddle solutions,
exact map iterates, and the leading-order growth of the uncertainty
measure away from the stable manifold.
"""

from __future__ import annotations

import math

from .diagnostics import LuqParams
from .flows import MapSpec, RotatedSaddleMap, SaddleMap


class AsymptoteValidityError(ValueError):
    """Large-time asymptote evaluated outside its validity region."""


def saddle_solution(x0: float, y0: float, lambda_rate: float, t: float) -> tuple[float, float]:
    """(x0 e^{lam t}, y0 e^{-lam t})."""
    if not (lambda_rate > 0.0):
        raise ValueError("lambda_rate must be > 0")
    return x0 * math.exp(lambda_rate * t), y0 * math.exp(-lambda_rate * t)


def saddle_coords(x0: float, y0: float) -> tuple[float, float]:
    """Eigenbasis coordinates a=(x0+y0)/2, b=(x0-y0)/2 of the rotated saddle."""
    return (x0 + y0) / 2.0, (x0 - y0) / 2.0


def rotated_saddle_solution(x0: float, y0: float, lambda_rate: float, t: float) -> tuple[float, float]:
    """(a e^{lam t} + b e^{-lam t}, a e^{lam t} - b e^{-lam t})."""
    if not (lambda_rate > 0.0):
        raise ValueError("lambda_rate must be > 0")
    a, b = saddle_coords(x0, y0)
    grow = a * math.exp(lambda_rate * t)
    decay = b * math.exp(-lambda_rate * t)
    return grow + decay, grow - decay


def map_solutions(m: MapSpec, x0: float, y0: float, n: int) -> tuple[float, float]:
    """Exact n-th iterate of the map (lam^n in place of e^{lam t})."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    lam = m.lambda_mult
    if isinstance(m, SaddleMap):
        return x0 * lam**n, y0 * lam**-n
    if isinstance(m, RotatedSaddleMap):
        a, b = saddle_coords(x0, y0)
        grow = a * lam**n
        decay = b * lam**-n
        return grow + decay, grow - decay
    raise TypeError(f"not a map spec: {m!r}")


def _check_validity(growth: float, reference: float) -> None:
    if growth <= 10.0 * max(1.0, abs(reference)):
        raise AsymptoteValidityError(
            f"dominant term {growth!r} not yet dominant over target scale {reference!r}"
        )


def saddle_luq_asymptote(x0: float, y_star: float, prm: LuqParams,
                         lambda_rate: float, t: float) -> float:
    """Leading-order uncertainty for the saddle, valid once |x0| e^{lam t} is large.

    outer_root: |x0| e^{lam t}; inner_sum: |x0|^p e^{lam p t} + |y*|^p.
    """
    if x0 == 0.0:
        raise AsymptoteValidityError("x0 = 0 lies on the stable manifold")
    growth = abs(x0) * math.exp(lambda_rate * t)
    _check_validity(growth, y_star)
    if prm.form == "outer_root":
        return growth
    return abs(x0) ** prm.p * math.exp(lambda_rate * prm.p * t) + abs(y_star) ** prm.p


def rotated_luq_asymptote(a: float, prm: LuqParams, lambda_rate: float, t: float) -> float:
    """Leading-order uncertainty for the rotated saddle in terms of a=(x0+y0)/2.

    outer_root: 2^{1/p} |a| e^{lam t}; inner_sum: 2 |a|^p e^{lam p t}
    (both growing components contribute one leading term each).
    """
    if a == 0.0:
        raise AsymptoteValidityError("a = 0 lies on the stable manifold")
    growth = abs(a) * math.exp(lambda_rate * t)
    _check_validity(growth, 1.0)
    if prm.form == "outer_root":
        return 2.0 ** (1.0 / prm.p) * growth
    return 2.0 * abs(a) ** prm.p * math.exp(lambda_rate * prm.p * t)


def map_luq_asymptote(m: MapSpec, coord: float, prm: LuqParams,
                      lambda_mult: float, n: int, y_star: float = 0.0) -> float:
    """Dominant-term uncertainty for the maps: lam^n substituted for e^{lam t}.

    coord is x0 for the plain saddle map and a=(x0+y0)/2 for the rotated
    one. y_star enters only the plain saddle's inner_sum form, mirroring
    the continuous expression.
    """
    if coord == 0.0:
        raise AsymptoteValidityError("coordinate 0 lies on the stable manifold")
    growth = abs(coord) * lambda_mult**n
    if isinstance(m, SaddleMap):
        _check_validity(growth, y_star)
        if prm.form == "outer_root":
            return growth
        return abs(coord) ** prm.p * lambda_mult ** (n * prm.p) + abs(y_star) ** prm.p
    if isinstance(m, RotatedSaddleMap):
        _check_validity(growth, 1.0)
        if prm.form == "outer_root":
            return 2.0 ** (1.0 / prm.p) * growth
        return 2.0 * abs(coord) ** prm.p * lambda_mult ** (n * prm.p)
    raise TypeError(f"not a map spec: {m!r}")
