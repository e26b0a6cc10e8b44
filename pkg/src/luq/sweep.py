"""Diagnostic fields over grids of initial conditions, and ridge extraction.

A sweep evaluates one diagnostic at every node of a rectangular grid. Rows
are independent batch evaluations written to disjoint slots, so the
assembled field is bit-identical for any worker count and matches the
direct scalar diagnostic call at each node. Failed nodes become NaN.

Minimal ridges (the singular features of an uncertainty field) are
extracted per scan line either as the global minimum (min_locus) or as
second-difference spikes (gradient_jump).
"""

from __future__ import annotations

import math
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .diagnostics import (
    BlobSpec,
    LuqParams,
    Target,
    blob_boundary,
    pointwise_batch,
)
from .flows import FlowSpec, MapSpec
from .gridded import ScalarField2D
from .trajectory import TimeWindow, prepare_advection, prepare_map

_FLOW_CLASSES = typing.get_args(FlowSpec)
_MAP_CLASSES = typing.get_args(MapSpec)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of initial conditions."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid extents must satisfy min < max")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need nx, ny >= 2")

    def node_axes(self, cell_centered: bool = False):
        """(xs, ys, x0, dx, y0, dy); nodes are x0 + i*dx so the evaluated
        coordinates equal the exported ones bit for bit."""
        if cell_centered:
            dx = (self.x_max - self.x_min) / self.nx
            dy = (self.y_max - self.y_min) / self.ny
            x0 = self.x_min + dx / 2.0
            y0 = self.y_min + dy / 2.0
        else:
            dx = (self.x_max - self.x_min) / (self.nx - 1)
            dy = (self.y_max - self.y_min) / (self.ny - 1)
            x0 = self.x_min
            y0 = self.y_min
        xs = x0 + np.arange(self.nx) * dx
        ys = y0 + np.arange(self.ny) * dy
        return xs, ys, x0, dx, y0, dy


@dataclass(frozen=True)
class LuqField:
    """Endpoint uncertainty of each node against a fixed target."""

    window: TimeWindow
    target: Target
    params: LuqParams
    h: float

    def __post_init__(self):
        if not self.window.forward:
            raise ValueError("uncertainty fields need a forward window")


@dataclass(frozen=True)
class LuqMapField:
    """Map-iterate uncertainty of each node against a fixed target."""

    n_steps: int
    target: Target
    params: LuqParams

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("need at least one map iteration")


@dataclass(frozen=True)
class MField:
    """Arc-length descriptor: mode forward, backward, both, or average."""

    mode: str
    t0: float
    tau: float
    h: float

    def __post_init__(self):
        if self.mode not in ("forward", "backward", "both", "average"):
            raise ValueError(f"unknown descriptor mode {self.mode!r}")
        if not (self.tau > 0.0):
            raise ValueError("tau must be > 0")


@dataclass(frozen=True)
class BlobField:
    """Blob-centroid error for a blob centered at each node."""

    window: TimeWindow
    target: Target
    radius: float
    n_points: int
    h: float

    def __post_init__(self):
        if not self.window.forward:
            raise ValueError("blob fields need a forward window")
        if not (self.radius > 0.0):
            raise ValueError("radius must be > 0")
        if self.n_points < 3:
            raise ValueError("need at least 3 boundary samples")


@dataclass(frozen=True)
class DisplacementField:
    """Distance of each node's endpoint from the node itself."""

    window: TimeWindow
    h: float


FieldDiagnostic = typing.Union[LuqField, LuqMapField, MField, BlobField, DisplacementField]


def _blob_value(adv, cx, cy, radius, n_points, tx, ty) -> float:
    bx, by = blob_boundary(BlobSpec(center=(cx, cy), radius=radius, n_points=n_points))
    xf, yf, _, alive = adv.run(bx, by)
    if not alive.all():
        return math.nan
    dx = float(np.mean(xf)) - tx
    dy = float(np.mean(yf)) - ty
    return math.sqrt(dx * dx + dy * dy)


def _row_evaluator(diag: FieldDiagnostic, system, xs: np.ndarray, ys: np.ndarray):
    """Build eval_row(iy) -> row of diagnostic values."""
    nx = len(xs)
    if isinstance(diag, LuqMapField):
        if not isinstance(system, _MAP_CLASSES):
            raise ValueError("luq_map sweeps need a map system")
        it = prepare_map(system, diag.n_steps)
        tx, ty = diag.target.x_star, diag.target.y_star

        def eval_row(iy):
            xf, yf, alive = it.run(xs, np.full(nx, ys[iy]))
            vals = pointwise_batch(xf, yf, tx, ty, diag.params)
            return np.where(alive, vals, np.nan)

        return eval_row

    if not isinstance(system, _FLOW_CLASSES):
        raise ValueError(f"{type(diag).__name__} sweeps need a flow system")

    if isinstance(diag, LuqField):
        adv = prepare_advection(system, diag.window.t_start, diag.window.t_end, diag.h)
        tx, ty = diag.target.x_star, diag.target.y_star

        def eval_row(iy):
            xf, yf, _, alive = adv.run(xs, np.full(nx, ys[iy]))
            vals = pointwise_batch(xf, yf, tx, ty, diag.params)
            return np.where(alive, vals, np.nan)

        return eval_row

    if isinstance(diag, MField):
        fwd = bwd = None
        if diag.mode in ("forward", "both", "average"):
            fwd = prepare_advection(system, diag.t0, diag.t0 + diag.tau, diag.h)
        if diag.mode in ("backward", "both", "average"):
            bwd = prepare_advection(system, diag.t0, diag.t0 - diag.tau, diag.h)

        def eval_row(iy):
            yrow = np.full(nx, ys[iy])
            alive = np.ones(nx, dtype=bool)
            total = np.zeros(nx)
            if fwd is not None:
                _, _, arc, ok = fwd.run(xs, yrow)
                total = total + arc
                alive &= ok
            if bwd is not None:
                _, _, arc, ok = bwd.run(xs, yrow)
                total = total + arc
                alive &= ok
            if diag.mode == "average":
                total = total / (2.0 * diag.tau)
            return np.where(alive, total, np.nan)

        return eval_row

    if isinstance(diag, BlobField):
        adv = prepare_advection(system, diag.window.t_start, diag.window.t_end, diag.h)
        tx, ty = diag.target.x_star, diag.target.y_star

        def eval_row(iy):
            return np.array([
                _blob_value(adv, xs[ix], ys[iy], diag.radius, diag.n_points, tx, ty)
                for ix in range(nx)
            ])

        return eval_row

    if isinstance(diag, DisplacementField):
        adv = prepare_advection(system, diag.window.t_start, diag.window.t_end, diag.h)
        prm = LuqParams(p=2.0, form="outer_root")

        def eval_row(iy):
            yrow = np.full(nx, ys[iy])
            xf, yf, _, alive = adv.run(xs, yrow)
            vals = pointwise_batch(xf, yf, xs, yrow, prm)
            return np.where(alive, vals, np.nan)

        return eval_row

    raise ValueError(f"unknown field diagnostic {diag!r}")


def sweep(grid: GridSpec, diag: FieldDiagnostic, system, workers: int = 1,
          cell_centered: bool = False) -> ScalarField2D:
    """Evaluate a diagnostic at every grid node.

    workers only distributes whole rows across threads; each row is one
    batch evaluation, so the result is byte-identical for any count.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    xs, ys, x0, dx, y0, dy = grid.node_axes(cell_centered)
    eval_row = _row_evaluator(diag, system, xs, ys)
    out = np.empty((grid.ny, grid.nx))
    if workers == 1:
        for iy in range(grid.ny):
            out[iy] = eval_row(iy)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for iy, row in enumerate(pool.map(eval_row, range(grid.ny))):
                out[iy] = row
    return ScalarField2D(x0=x0, dx=dx, y0=y0, dy=dy, values=out)


@dataclass
class RidgeResult:
    """Detected feature cells, one scan line per entry."""

    scan_axis: str
    mode: str
    lines: np.ndarray
    indices: np.ndarray
    values: np.ndarray


def extract_minimal_ridge(f: ScalarField2D, scan_axis: str = "rows",
                          mode: str = "min_locus", threshold: float = 3.0) -> RidgeResult:
    """Locate singular features of a scalar field along scan lines.

    min_locus: the global minimum of each line's defined cells (ties break
    to the lowest index). gradient_jump: cells whose |central second
    difference| exceeds threshold times the line median of the defined
    second differences; undefined cells split lines into independently
    scanned segments.
    """
    if scan_axis not in ("rows", "columns"):
        raise ValueError(f"unknown scan axis {scan_axis!r}")
    if mode not in ("min_locus", "gradient_jump"):
        raise ValueError(f"unknown ridge mode {mode!r}")
    vals = f.values
    n_lines = f.ny if scan_axis == "rows" else f.nx
    lines, indices, feat_vals = [], [], []
    for li in range(n_lines):
        line = vals[li, :] if scan_axis == "rows" else vals[:, li]
        finite = np.isfinite(line)
        if mode == "min_locus":
            if not finite.any():
                continue
            idx = int(np.argmin(np.where(finite, line, np.inf)))
            lines.append(li)
            indices.append(idx)
            feat_vals.append(float(line[idx]))
        else:
            if len(line) < 3:
                continue
            d2 = np.abs(line[:-2] - 2.0 * line[1:-1] + line[2:])
            valid = finite[:-2] & finite[1:-1] & finite[2:]
            if not valid.any():
                continue
            med = float(np.median(d2[valid]))
            hits = np.nonzero(valid & (d2 > threshold * med))[0]
            for hit in hits:
                idx = int(hit) + 1
                lines.append(li)
                indices.append(idx)
                feat_vals.append(float(line[idx]))
    return RidgeResult(
        scan_axis=scan_axis,
        mode=mode,
        lines=np.asarray(lines, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int64),
        values=np.asarray(feat_vals, dtype=np.float64),
    )


def write_ridge_csv(result: RidgeResult, f: ScalarField2D, sink) -> None:
    """Ridge output rows: line_index,feature_index,x,y,value."""
    xs = f.node_xs()
    ys = f.node_ys()
    out = ["line_index,feature_index,x,y,value"]
    for li, idx, val in zip(result.lines, result.indices, result.values):
        if result.scan_axis == "rows":
            x, y = xs[idx], ys[li]
        else:
            x, y = xs[li], ys[idx]
        out.append(f"{li},{idx},{x:.17g},{y:.17g},{val:.17g}")
    data = ("\n".join(out) + "\n").encode("utf-8")
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "wb") as fh:
            fh.write(data)
