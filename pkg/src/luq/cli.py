"""Scenario runner: field sweeps, trajectory dumps, blob meshes, ridge extraction.

One JSON config per scenario. Outputs are written with a shared prefix:
<prefix>.field.csv (FIELD-CSV), <prefix>.ridge.csv, <prefix>.traj.csv and
<prefix>.manifest.json. Re-running an identical config reproduces every
output byte except the manifest timestamp, and the worker count never
changes an output byte.

Exit codes: 0 success, 2 config validation error, 3 runtime/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._backend import active_backend
from ._steps import default_step
from .diagnostics import LuqParams, Target
from .flows import FLOW_NAMES, MAP_NAMES, GriddedFlow, flow_from_config, map_from_config
from .gridded import export_scalar_field, load_velocity_grid, read_scalar_field
from .sweep import (
    BlobField,
    DisplacementField,
    GridSpec,
    LuqField,
    LuqMapField,
    MField,
    extract_minimal_ridge,
    sweep,
    write_ridge_csv,
)
from .trajectory import TimeWindow, integrate, iterate_map

DIAGNOSTIC_NAMES = (
    "luq", "luq_map", "blob_error",
    "m_forward", "m_backward", "m_both", "m_average",
    "displacement",
)


class ConfigError(ValueError):
    """Invalid scenario config; message starts with the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be an object")
    return cfg


def _get(cfg: dict, key: str, kind, required: bool = True, default=None):
    if key not in cfg:
        if required:
            raise ConfigError(key, "missing required key")
        return default
    val = cfg[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(key, f"expected a number, got {val!r}")
        return float(val)
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ConfigError(key, f"expected an integer, got {val!r}")
        return val
    if not isinstance(val, kind):
        raise ConfigError(key, f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def _pair(cfg: dict, key: str) -> tuple[float, float]:
    val = _get(cfg, key, list)
    if len(val) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val):
        raise ConfigError(key, "expected a pair of numbers")
    return float(val[0]), float(val[1])


def _build_system(cfg: dict):
    spec = _get(cfg, "system", dict)
    name = spec.get("name")
    if name in MAP_NAMES:
        try:
            return map_from_config(name, spec)
        except ValueError as exc:
            raise ConfigError("system", str(exc)) from None
    if name == "gridded":
        path = spec.get("path")
        if not isinstance(path, str):
            raise ConfigError("system.path", "gridded systems need a 'path' string")
        g = load_velocity_grid(path)
        if "earth_radius" in spec:
            if g.geometry != "spherical":
                raise ConfigError("system.earth_radius",
                                  "only spherical grids take an earth-radius override")
            from .gridded import GriddedField

            g = GriddedField(x0=g.x0, dx=g.dx, y0=g.y0, dy=g.dy, t0=g.t0, dt=g.dt,
                             u=g.u.copy(), v=g.v.copy(), geometry="spherical",
                             earth_radius=float(spec["earth_radius"]))
        return GriddedFlow(field=g)
    if name in FLOW_NAMES:
        try:
            return flow_from_config(name, spec)
        except ValueError as exc:
            raise ConfigError("system", str(exc)) from None
    raise ConfigError("system.name", f"unknown system {name!r}")


def _build_grid(cfg: dict) -> tuple[GridSpec, bool]:
    g = _get(cfg, "grid", dict)
    try:
        grid = GridSpec(
            x_min=_get(g, "x_min", float), x_max=_get(g, "x_max", float),
            y_min=_get(g, "y_min", float), y_max=_get(g, "y_max", float),
            nx=_get(g, "nx", int), ny=_get(g, "ny", int),
        )
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from None
    cell_centered = bool(g.get("cell_centered", False))
    return grid, cell_centered


def _build_window(cfg: dict) -> TimeWindow:
    a, b = _pair(cfg, "window")
    try:
        return TimeWindow(a, b)
    except ValueError as exc:
        raise ConfigError("window", str(exc)) from None


def _step(cfg: dict, window: TimeWindow) -> float:
    h = _get(cfg, "h", float, required=False)
    if h is None:
        h = default_step(window.t_start, window.t_end)
    if not (h > 0):
        raise ConfigError("h", "step must be positive")
    return h


def _build_target(d: dict, key: str) -> Target:
    if "target" not in d:
        raise ConfigError(f"{key}.target", "missing required key")
    val = d["target"]
    if not isinstance(val, list) or len(val) != 2:
        raise ConfigError(f"{key}.target", "expected a pair of numbers")
    try:
        return Target(float(val[0]), float(val[1]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}.target", str(exc)) from None


def _build_params(d: dict, key: str) -> LuqParams:
    p = _get(d, "p", float)
    form = d.get("form", "outer_root")
    try:
        return LuqParams(p=p, form=form)
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None


def _build_field_diagnostic(cfg: dict):
    d = _get(cfg, "diagnostic", dict)
    name = d.get("name")
    if name not in DIAGNOSTIC_NAMES:
        raise ConfigError("diagnostic.name", f"unknown diagnostic {name!r}")
    if name == "luq":
        window = _build_window(cfg)
        return LuqField(window=window, target=_build_target(d, "diagnostic"),
                        params=_build_params(d, "diagnostic"), h=_step(cfg, window))
    if name == "luq_map":
        n = _get(cfg, "iterations", int)
        if n < 1:
            raise ConfigError("iterations", "need at least one iteration")
        return LuqMapField(n_steps=n, target=_build_target(d, "diagnostic"),
                           params=_build_params(d, "diagnostic"))
    if name in ("m_forward", "m_backward", "m_both", "m_average"):
        tau = _get(d, "tau", float)
        t0 = _get(d, "t0", float, required=False, default=0.0)
        if not (tau > 0):
            raise ConfigError("diagnostic.tau", "tau must be > 0")
        h = _get(cfg, "h", float, required=False)
        if h is None:
            h = default_step(t0, t0 + tau)
        try:
            return MField(mode=name.removeprefix("m_"), t0=t0, tau=tau, h=h)
        except ValueError as exc:
            raise ConfigError("diagnostic", str(exc)) from None
    if name == "blob_error":
        window = _build_window(cfg)
        try:
            return BlobField(window=window, target=_build_target(d, "diagnostic"),
                             radius=_get(d, "radius", float),
                             n_points=_get(d, "n_points", int, required=False, default=64),
                             h=_step(cfg, window))
        except ValueError as exc:
            raise ConfigError("diagnostic", str(exc)) from None
    # displacement
    window = _build_window(cfg)
    return DisplacementField(window=window, h=_step(cfg, window))


def _build_ridge_request(cfg: dict):
    if "ridge" not in cfg:
        return None
    r = _get(cfg, "ridge", dict)
    scan_axis = r.get("scan_axis", "rows")
    mode = r.get("mode", "min_locus")
    threshold = float(r.get("threshold", 3.0))
    if scan_axis not in ("rows", "columns"):
        raise ConfigError("ridge.scan_axis", f"unknown scan axis {scan_axis!r}")
    if mode not in ("min_locus", "gradient_jump"):
        raise ConfigError("ridge.mode", f"unknown ridge mode {mode!r}")
    return {"scan_axis": scan_axis, "mode": mode, "threshold": threshold}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_manifest(prefix: Path, manifest: dict) -> Path:
    manifest = dict(manifest)
    manifest["artifact_version"] = __version__
    manifest["backend"] = active_backend()
    manifest["created_utc"] = datetime.now(timezone.utc).isoformat()
    path = prefix.with_name(prefix.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _resolve_prefix(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(args.config).with_suffix("")


def _run_field(args) -> int:
    cfg = _load_config(args.config)
    system = _build_system(cfg)
    grid, cell_centered = _build_grid(cfg)
    diag = _build_field_diagnostic(cfg)
    ridge_req = _build_ridge_request(cfg)
    workers = args.workers if args.workers else _get(cfg, "workers", int, required=False, default=1)
    if workers < 1:
        raise ConfigError("workers", "must be >= 1")

    field = sweep(grid, diag, system, workers=workers, cell_centered=cell_centered)

    prefix = _resolve_prefix(args)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    field_path = prefix.with_name(prefix.name + ".field.csv")
    export_scalar_field(field, field_path)
    outputs = {"field": field_path.name}
    if ridge_req is not None:
        result = extract_minimal_ridge(field, scan_axis=ridge_req["scan_axis"],
                                       mode=ridge_req["mode"], threshold=ridge_req["threshold"])
        ridge_path = prefix.with_name(prefix.name + ".ridge.csv")
        write_ridge_csv(result, field, ridge_path)
        outputs["ridge"] = ridge_path.name
    undefined = field.undefined_count()
    manifest = {
        "command": "field",
        "config": {k: v for k, v in cfg.items() if k != "workers"},
        "outputs": outputs,
        "undefined_cells": undefined,
        "grid_shape": [field.ny, field.nx],
    }
    _write_manifest(prefix, manifest)
    print(f"wrote {field_path} ({undefined} undefined cells)")
    return 0


def _run_blob(args) -> int:
    cfg = _load_config(args.config)
    system = _build_system(cfg)
    grid, cell_centered = _build_grid(cfg)
    window = _build_window(cfg)
    target = _build_target(cfg, "blob")
    try:
        diag = BlobField(window=window, target=target,
                         radius=_get(cfg, "radius", float),
                         n_points=_get(cfg, "n_points", int, required=False, default=64),
                         h=_step(cfg, window))
    except ValueError as exc:
        raise ConfigError("blob", str(exc)) from None
    workers = args.workers if args.workers else _get(cfg, "workers", int, required=False, default=1)
    if workers < 1:
        raise ConfigError("workers", "must be >= 1")
    field = sweep(grid, diag, system, workers=workers, cell_centered=cell_centered)
    prefix = _resolve_prefix(args)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    field_path = prefix.with_name(prefix.name + ".field.csv")
    export_scalar_field(field, field_path)
    undefined = field.undefined_count()
    manifest = {
        "command": "blob",
        "config": {k: v for k, v in cfg.items() if k != "workers"},
        "outputs": {"field": field_path.name},
        "undefined_cells": undefined,
        "grid_shape": [field.ny, field.nx],
    }
    _write_manifest(prefix, manifest)
    print(f"wrote {field_path} ({undefined} undefined cells)")
    return 0


def _run_traj(args) -> int:
    cfg = _load_config(args.config)
    system = _build_system(cfg)
    s0 = _pair(cfg, "s0")
    if "iterations" in cfg:
        n = _get(cfg, "iterations", int)
        if n < 0:
            raise ConfigError("iterations", "must be >= 0")
        traj = iterate_map(system, s0, n)
    else:
        window = _build_window(cfg)
        traj = integrate(system, s0, window, _step(cfg, window))
    prefix = _resolve_prefix(args)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    traj_path = prefix.with_name(prefix.name + ".traj.csv")
    rows = ["t,x,y"]
    for t, (x, y) in zip(traj.times, traj.states):
        rows.append(f"{_fmt(t)},{_fmt(x)},{_fmt(y)}")
    traj_path.write_bytes(("\n".join(rows) + "\n").encode("utf-8"))
    manifest = {
        "command": "traj",
        "config": {k: v for k, v in cfg.items() if k != "workers"},
        "outputs": {"traj": traj_path.name},
        "samples": int(len(traj.times)),
        "arc_length": traj.arc_length,
        "truncated": traj.truncated,
    }
    _write_manifest(prefix, manifest)
    print(f"wrote {traj_path} ({len(traj.times)} samples)")
    return 0


def _run_ridge(args) -> int:
    cfg = _load_config(args.config)
    src = cfg.get("input")
    if not isinstance(src, str):
        raise ConfigError("input", "missing FIELD-CSV input path")
    ridge_req = _build_ridge_request({"ridge": cfg.get("ridge", {})}) or {
        "scan_axis": "rows", "mode": "min_locus", "threshold": 3.0,
    }
    field = read_scalar_field(src)
    result = extract_minimal_ridge(field, scan_axis=ridge_req["scan_axis"],
                                   mode=ridge_req["mode"], threshold=ridge_req["threshold"])
    prefix = _resolve_prefix(args)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ridge_path = prefix.with_name(prefix.name + ".ridge.csv")
    write_ridge_csv(result, field, ridge_path)
    manifest = {
        "command": "ridge",
        "config": {k: v for k, v in cfg.items() if k != "workers"},
        "outputs": {"ridge": ridge_path.name},
        "features": int(len(result.lines)),
    }
    _write_manifest(prefix, manifest)
    print(f"wrote {ridge_path} ({len(result.lines)} features)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luq",
        description="Uncertainty-quantifier and descriptor fields over 2-D flows and maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("field", "sweep a diagnostic over a grid of initial conditions"),
        ("traj", "dump a single trajectory or map orbit as CSV"),
        ("blob", "blob-centroid error over a mesh of blob centers"),
        ("ridge", "extract minimal-ridge features from a FIELD-CSV"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="scenario JSON")
        p.add_argument("--out", default=None, help="output path prefix")
        if name in ("field", "blob"):
            p.add_argument("--workers", type=int, default=None,
                           help="row-parallel worker threads (no effect on output bytes)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    runners = {"field": _run_field, "traj": _run_traj, "blob": _run_blob, "ridge": _run_ridge}
    try:
        return runners[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime/domain failures
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
