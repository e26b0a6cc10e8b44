"""Gridded velocity data: VELGRID-1 ingest, interpolation, field export.

VELGRID-1 is a line-oriented comma-separated text format (LF endings):

    velgrid,1
    dims,<nx>,<ny>,<nt>
    origin,<x0>,<y0>,<t0>
    spacing,<dx>,<dy>,<dt>
    geometry,planar            (or geometry,spherical,<earth_radius>)
    time,0
    <ny rows of nx u values>   (row iy=0 first)
    <ny rows of nx v values>
    time,1
    ...

Parsing is strict: malformed tokens raise with the offending line number,
structural mismatches raise dimension errors, and non-finite values raise
with their (it, iy, ix) index. A loaded field is immutable and safe for
shared read-only access.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .flows import DEG_PER_RAD, eval_spherical


class VelgridError(ValueError):
    """Base for VELGRID-1 ingest failures."""


class VelgridParseError(VelgridError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class VelgridDimensionError(VelgridError):
    pass


class VelgridValueError(VelgridError):
    def __init__(self, component: str, it: int, iy: int, ix: int, token: str):
        super().__init__(
            f"non-finite {component} value {token!r} at (it={it}, iy={iy}, ix={ix})"
        )
        self.index = (it, iy, ix)


class GridDomainError(ValueError):
    """Query outside the grid's spatial or temporal domain."""

    def __init__(self, axis: str, value: float, lo: float, hi: float):
        super().__init__(f"{axis}={value!r} outside grid domain [{lo!r}, {hi!r}]")
        self.axis = axis
        self.value = value


@dataclass(frozen=True)
class GriddedField:
    """Time-dependent (u, v) samples on a uniform rectangular grid.

    u and v have shape (nt, ny, nx); nt == 1 means a steady field valid at
    every time. Under spherical geometry the samples are in m/s and states
    are (lon, lat) degrees.
    """

    x0: float
    dx: float
    y0: float
    dy: float
    t0: float
    dt: float
    u: np.ndarray
    v: np.ndarray
    geometry: str = "planar"
    earth_radius: float = 0.0
    xs: np.ndarray = field(init=False, repr=False)
    ys: np.ndarray = field(init=False, repr=False)
    ts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nt, ny, nx = self.u.shape
        if nx < 2 or ny < 2 or nt < 1:
            raise VelgridDimensionError(f"need nx, ny >= 2 and nt >= 1, got {nx}x{ny}x{nt}")
        if self.v.shape != self.u.shape:
            raise VelgridDimensionError("u and v shapes differ")
        if not (self.dx > 0 and self.dy > 0 and self.dt > 0):
            raise VelgridError("grid spacings must be positive")
        if self.geometry not in ("planar", "spherical"):
            raise VelgridError(f"unknown geometry {self.geometry!r}")
        if self.geometry == "spherical" and not (self.earth_radius > 0):
            raise VelgridError("spherical geometry needs earth_radius > 0")
        if not (np.isfinite(self.u).all() and np.isfinite(self.v).all()):
            raise VelgridError("velocity samples must be finite")
        object.__setattr__(self, "xs", self.x0 + np.arange(nx) * self.dx)
        object.__setattr__(self, "ys", self.y0 + np.arange(ny) * self.dy)
        object.__setattr__(self, "ts", self.t0 + np.arange(nt) * self.dt)
        self.u.setflags(write=False)
        self.v.setflags(write=False)

    @property
    def nx(self) -> int:
        return self.u.shape[2]

    @property
    def ny(self) -> int:
        return self.u.shape[1]

    @property
    def nt(self) -> int:
        return self.u.shape[0]


@dataclass
class ScalarField2D:
    """Diagnostic values on a rectangular grid; NaN marks undefined cells.

    x_axis/y_axis carry explicit node coordinates when the field was parsed
    from FIELD-CSV, so a parse/re-export cycle reproduces the exact bytes.
    """

    x0: float
    dx: float
    y0: float
    dy: float
    values: np.ndarray  # (ny, nx)
    x_axis: np.ndarray | None = field(default=None, repr=False)
    y_axis: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid spacing must be positive")

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    def node_xs(self) -> np.ndarray:
        if self.x_axis is not None:
            return self.x_axis
        return self.x0 + np.arange(self.nx) * self.dx

    def node_ys(self) -> np.ndarray:
        if self.y_axis is not None:
            return self.y_axis
        return self.y0 + np.arange(self.ny) * self.dy

    def undefined_count(self) -> int:
        return int(np.isnan(self.values).sum())


def _read_text(source) -> str:
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def _parse_float(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise VelgridParseError(line_no, f"bad float {token!r}") from None


def _parse_int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise VelgridParseError(line_no, f"bad integer {token!r}") from None


def load_velocity_grid(source) -> GriddedField:
    """Parse a VELGRID-1 stream (file-like or path) into a GriddedField."""
    text = _read_text(source)
    if "\r" in text:
        raise VelgridParseError(1 + text[: text.index("\r")].count("\n"),
                                "carriage return; VELGRID-1 requires LF endings")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def expect(idx: int) -> str:
        if idx >= len(lines):
            raise VelgridDimensionError(
                f"unexpected end of file at line {idx + 1}: payload shorter than declared dims"
            )
        return lines[idx]

    if expect(0) != "velgrid,1":
        raise VelgridParseError(1, f"expected 'velgrid,1', got {lines[0]!r}")

    parts = expect(1).split(",")
    if len(parts) != 4 or parts[0] != "dims":
        raise VelgridParseError(2, "expected 'dims,<nx>,<ny>,<nt>'")
    nx = _parse_int(parts[1], 2)
    ny = _parse_int(parts[2], 2)
    nt = _parse_int(parts[3], 2)
    if nx < 2 or ny < 2 or nt < 1:
        raise VelgridDimensionError(f"need nx, ny >= 2 and nt >= 1, got {nx},{ny},{nt}")

    parts = expect(2).split(",")
    if len(parts) != 4 or parts[0] != "origin":
        raise VelgridParseError(3, "expected 'origin,<x0>,<y0>,<t0>'")
    x0 = _parse_float(parts[1], 3)
    y0 = _parse_float(parts[2], 3)
    t0 = _parse_float(parts[3], 3)

    parts = expect(3).split(",")
    if len(parts) != 4 or parts[0] != "spacing":
        raise VelgridParseError(4, "expected 'spacing,<dx>,<dy>,<dt>'")
    dx = _parse_float(parts[1], 4)
    dy = _parse_float(parts[2], 4)
    dt = _parse_float(parts[3], 4)
    if not (dx > 0 and dy > 0 and dt > 0):
        raise VelgridParseError(4, "spacings must be positive")

    parts = expect(4).split(",")
    if parts[0] != "geometry" or len(parts) < 2:
        raise VelgridParseError(5, "expected 'geometry,planar' or 'geometry,spherical,<R>'")
    if parts[1] == "planar" and len(parts) == 2:
        geometry, radius = "planar", 0.0
    elif parts[1] == "spherical" and len(parts) == 3:
        geometry = "spherical"
        radius = _parse_float(parts[2], 5)
        if not (radius > 0):
            raise VelgridParseError(5, "earth radius must be positive")
    else:
        raise VelgridParseError(5, f"bad geometry line {lines[4]!r}")

    u = np.empty((nt, ny, nx))
    v = np.empty((nt, ny, nx))
    idx = 5
    for it in range(nt):
        header = expect(idx)
        if header != f"time,{it}":
            raise VelgridParseError(idx + 1, f"expected 'time,{it}', got {header!r}")
        idx += 1
        for comp, arr in (("u", u), ("v", v)):
            for iy in range(ny):
                row = expect(idx).split(",")
                if len(row) != nx:
                    raise VelgridDimensionError(
                        f"line {idx + 1}: expected {nx} values, got {len(row)}"
                    )
                for ix, token in enumerate(row):
                    val = _parse_float(token, idx + 1)
                    if not math.isfinite(val):
                        raise VelgridValueError(comp, it, iy, ix, token)
                    arr[it, iy, ix] = val
                idx += 1
    if idx != len(lines):
        raise VelgridDimensionError(
            f"trailing content at line {idx + 1}: payload longer than declared dims"
        )
    return GriddedField(x0=x0, dx=dx, y0=y0, dy=dy, t0=t0, dt=dt,
                        u=u, v=v, geometry=geometry, earth_radius=radius)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_velocity_grid(g: GriddedField, sink) -> None:
    """Serialize a GriddedField back to canonical VELGRID-1 text."""
    out = []
    out.append("velgrid,1")
    out.append(f"dims,{g.nx},{g.ny},{g.nt}")
    out.append(f"origin,{_fmt(g.x0)},{_fmt(g.y0)},{_fmt(g.t0)}")
    out.append(f"spacing,{_fmt(g.dx)},{_fmt(g.dy)},{_fmt(g.dt)}")
    if g.geometry == "planar":
        out.append("geometry,planar")
    else:
        out.append(f"geometry,spherical,{_fmt(g.earth_radius)}")
    for it in range(g.nt):
        out.append(f"time,{it}")
        for arr in (g.u, g.v):
            for iy in range(g.ny):
                out.append(",".join(_fmt(val) for val in arr[it, iy]))
    data = ("\n".join(out) + "\n").encode("utf-8")
    if hasattr(sink, "write"):
        written = sink.write(data)
        if written is not None and hasattr(sink, "flush"):
            sink.flush()
    else:
        with open(sink, "wb") as fh:
            fh.write(data)


def sample_flow_to_grid(flow, x0, dx, nx, y0, dy, ny, t0=0.0, dt=1.0, nt=1) -> GriddedField:
    """Sample an analytic flow onto a planar velocity grid."""
    from .flows import eval_velocity

    u = np.empty((nt, ny, nx))
    v = np.empty((nt, ny, nx))
    xs = x0 + np.arange(nx) * dx
    ys = y0 + np.arange(ny) * dy
    tsv = t0 + np.arange(nt) * dt
    for it in range(nt):
        for iy in range(ny):
            for ix in range(nx):
                u[it, iy, ix], v[it, iy, ix] = eval_velocity(flow, (xs[ix], ys[iy]), tsv[it])
    return GriddedField(x0=x0, dx=dx, y0=y0, dy=dy, t0=t0, dt=dt, u=u, v=v)


def _locate(val: float, coords: np.ndarray, spacing: float) -> tuple[int, float]:
    """Cell index and fraction; exact 0/1 fractions at stored node coords."""
    n = len(coords)
    i = int(math.floor((val - coords[0]) / spacing))
    if i < 0:
        i = 0
    if i > n - 2:
        i = n - 2
    if i + 1 <= n - 2 and val >= coords[i + 1]:
        i += 1
    elif val < coords[i] and i > 0:
        i -= 1
    if val == coords[i]:
        f = 0.0
    elif val == coords[i + 1]:
        f = 1.0
    else:
        f = (val - coords[i]) / spacing
    return i, f


def interp_velocity(g: GriddedField, s: tuple[float, float], t: float) -> tuple[float, float]:
    """Bilinear-in-space, linear-in-time velocity at state s and time t.

    Exact at grid nodes. Under spherical geometry the interpolated (u, v)
    in m/s pass through the angular-rate conversion and come back in
    degrees per unit time, matching the degree state coordinates.
    """
    x, y = float(s[0]), float(s[1])
    if x < g.xs[0] or x > g.xs[-1]:
        raise GridDomainError("x", x, float(g.xs[0]), float(g.xs[-1]))
    if y < g.ys[0] or y > g.ys[-1]:
        raise GridDomainError("y", y, float(g.ys[0]), float(g.ys[-1]))
    if g.nt == 1:
        it, ft = 0, 0.0
    else:
        if t < g.ts[0] or t > g.ts[-1]:
            raise GridDomainError("t", t, float(g.ts[0]), float(g.ts[-1]))
        it, ft = _locate(t, g.ts, g.dt)
    ix, fx = _locate(x, g.xs, g.dx)
    iy, fy = _locate(y, g.ys, g.dy)

    def plane(w, k):
        return (1.0 - fy) * ((1.0 - fx) * w[k, iy, ix] + fx * w[k, iy, ix + 1]) + fy * (
            (1.0 - fx) * w[k, iy + 1, ix] + fx * w[k, iy + 1, ix + 1]
        )

    if ft == 0.0 and it == 0 and g.nt == 1:
        u = plane(g.u, 0)
        v = plane(g.v, 0)
    else:
        u = (1.0 - ft) * plane(g.u, it) + ft * plane(g.u, it + 1)
        v = (1.0 - ft) * plane(g.v, it) + ft * plane(g.v, it + 1)
    if g.geometry == "spherical":
        dlon, dlat = eval_spherical(float(u), float(v), y, g.earth_radius)
        return dlon * DEG_PER_RAD, dlat * DEG_PER_RAD
    return float(u), float(v)


def export_scalar_field(f: ScalarField2D, sink) -> None:
    """Write FIELD-CSV: header x,y,value then rows y-outer/x-inner.

    17 significant digits, so numeric cells round-trip bit-exactly;
    undefined cells emit an empty value column.
    """
    xs = f.node_xs()
    ys = f.node_ys()
    out = ["x,y,value"]
    for iy in range(f.ny):
        ysm = _fmt(ys[iy])
        for ix in range(f.nx):
            val = f.values[iy, ix]
            tail = "" if math.isnan(val) else _fmt(val)
            out.append(f"{_fmt(xs[ix])},{ysm},{tail}")
    data = ("\n".join(out) + "\n").encode("utf-8")
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "wb") as fh:
            fh.write(data)


def read_scalar_field(source) -> ScalarField2D:
    """Parse a FIELD-CSV stream back into a ScalarField2D."""
    text = _read_text(source)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "x,y,value":
        raise ValueError("FIELD-CSV must start with header 'x,y,value'")
    xs, ys, vals = [], [], []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"line {ln}: expected 3 columns")
        xs.append(float(parts[0]))
        ys.append(float(parts[1]))
        vals.append(math.nan if parts[2] == "" else float(parts[2]))
    if not xs:
        raise ValueError("FIELD-CSV has no data rows")
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    vals = np.asarray(vals)
    nx = 1
    while nx < len(ys) and ys[nx] == ys[0]:
        nx += 1
    if len(xs) % nx != 0:
        raise ValueError("row count is not a multiple of the inferred row length")
    ny = len(xs) // nx
    grid_x = xs[:nx]
    if not np.array_equal(xs.reshape(ny, nx), np.broadcast_to(grid_x, (ny, nx))):
        raise ValueError("x coordinates do not repeat consistently per row")
    grid_y = ys.reshape(ny, nx)[:, 0]
    if not np.array_equal(ys.reshape(ny, nx), np.broadcast_to(grid_y[:, None], (ny, nx))):
        raise ValueError("y coordinates are not constant within rows")
    dx = float(grid_x[1] - grid_x[0]) if nx > 1 else 1.0
    dy = float(grid_y[1] - grid_y[0]) if ny > 1 else 1.0
    for name, axis, d in (("x", grid_x, dx), ("y", grid_y, dy)):
        if len(axis) > 1:
            if d <= 0:
                raise ValueError(f"{name} coordinates must increase")
            steps = np.diff(axis)
            if np.any(np.abs(steps - d) > 1e-9 * max(1.0, abs(d))):
                raise ValueError(f"{name} spacing is not uniform")
    return ScalarField2D(x0=float(grid_x[0]), dx=dx, y0=float(grid_y[0]), dy=dy,
                         values=vals.reshape(ny, nx), x_axis=grid_x, y_axis=grid_y)
