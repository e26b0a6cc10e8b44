"""Pure-numpy advection kernels (fallback backend).

Batch kernels are vectorized over initial conditions; path kernels record a
single trajectory with plain scalar arithmetic. Operation order matches the
numba backend statement for statement, so for identical step tables the two
backends produce bit-identical output.
"""

import math

import numpy as np

DEG_PER_RAD = 180.0 / math.pi
RAD_PER_DEG = math.pi / 180.0


def advect_saddle(lam, x0, y0, ts):
    x = x0.copy()
    y = y0.copy()
    arc = np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(len(ts) - 1):
            h = ts[i + 1] - ts[i]
            k1x = lam * x
            k1y = -lam * y
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x = lam * x2
            k2y = -lam * y2
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x = lam * x3
            k3y = -lam * y3
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x = lam * x4
            k4y = -lam * y4
            sp1 = np.sqrt(k1x * k1x + k1y * k1y)
            sp2 = np.sqrt(k2x * k2x + k2y * k2y)
            sp3 = np.sqrt(k3x * k3x + k3y * k3y)
            sp4 = np.sqrt(k4x * k4x + k4y * k4y)
            arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return x, y, arc


def advect_rotated(lam, x0, y0, ts):
    x = x0.copy()
    y = y0.copy()
    arc = np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(len(ts) - 1):
            h = ts[i + 1] - ts[i]
            k1x = lam * y
            k1y = lam * x
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x = lam * y2
            k2y = lam * x2
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x = lam * y3
            k3y = lam * x3
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x = lam * y4
            k4y = lam * x4
            sp1 = np.sqrt(k1x * k1x + k1y * k1y)
            sp2 = np.sqrt(k2x * k2x + k2y * k2y)
            sp3 = np.sqrt(k3x * k3x + k3y * k3y)
            sp4 = np.sqrt(k4x * k4x + k4y * k4y)
            arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return x, y, arc


def advect_duffing(eps, x0, y0, ts, sin_t, sin_mid):
    x = x0.copy()
    y = y0.copy()
    arc = np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(len(ts) - 1):
            h = ts[i + 1] - ts[i]
            s0 = sin_t[i]
            sm = sin_mid[i]
            s1 = sin_t[i + 1]
            k1x = y
            k1y = x - x * x * x + eps * s0
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x = y2
            k2y = x2 - x2 * x2 * x2 + eps * sm
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x = y3
            k3y = x3 - x3 * x3 * x3 + eps * sm
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x = y4
            k4y = x4 - x4 * x4 * x4 + eps * s1
            sp1 = np.sqrt(k1x * k1x + k1y * k1y)
            sp2 = np.sqrt(k2x * k2x + k2y * k2y)
            sp3 = np.sqrt(k3x * k3x + k3y * k3y)
            sp4 = np.sqrt(k4x * k4x + k4y * k4y)
            arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return x, y, arc


def _time_bracket(gt, dtg, t):
    """(index, fraction) of t on the snapshot axis, or None when outside."""
    nt = len(gt)
    if t < gt[0] or t > gt[nt - 1]:
        return None
    i = int(math.floor((t - gt[0]) / dtg))
    if i < 0:
        i = 0
    if i > nt - 2:
        i = nt - 2
    if i + 1 <= nt - 2 and t >= gt[i + 1]:
        i += 1
    elif t < gt[i] and i > 0:
        i -= 1
    if t == gt[i]:
        f = 0.0
    elif t == gt[i + 1]:
        f = 1.0
    else:
        f = (t - gt[i]) / dtg
    return i, f


def _locate_batch(vals, coords, spacing):
    """Vectorized cell locator, exact at stored node coordinates."""
    n = len(coords)
    ix = np.floor((vals - coords[0]) / spacing).astype(np.int64)
    np.clip(ix, 0, n - 2, out=ix)
    up = (ix + 1 <= n - 2) & (vals >= coords[ix + 1])
    ix = np.where(up, ix + 1, ix)
    down = (~up) & (vals < coords[ix]) & (ix > 0)
    ix = np.where(down, ix - 1, ix)
    frac = np.where(
        vals == coords[ix],
        0.0,
        np.where(vals == coords[ix + 1], 1.0, (vals - coords[ix]) / spacing),
    )
    return ix, frac


def _sample_grid(xq, yq, it, ft, gx, gy, uu, vv, dx, dy, spherical, radius):
    """Bilinear space / linear time velocity sample for a batch of points.

    Returns (vx, vy, valid); invalid points are sampled at clipped
    coordinates so the values are finite garbage, masked by the caller.
    """
    valid = (xq >= gx[0]) & (xq <= gx[-1]) & (yq >= gy[0]) & (yq <= gy[-1])
    if spherical:
        valid = valid & (np.abs(yq) < 90.0)
    xc = np.clip(xq, gx[0], gx[-1])
    yc = np.clip(yq, gy[0], gy[-1])
    ix, fx = _locate_batch(xc, gx, dx)
    iy, fy = _locate_batch(yc, gy, dy)

    def plane(w):
        w00 = w[iy, ix]
        w01 = w[iy, ix + 1]
        w10 = w[iy + 1, ix]
        w11 = w[iy + 1, ix + 1]
        return (1.0 - fy) * ((1.0 - fx) * w00 + fx * w01) + fy * (
            (1.0 - fx) * w10 + fx * w11
        )

    if ft == 0.0 and it == 0 and uu.shape[0] == 1:
        u = plane(uu[0])
        v = plane(vv[0])
    else:
        u = (1.0 - ft) * plane(uu[it]) + ft * plane(uu[it + 1])
        v = (1.0 - ft) * plane(vv[it]) + ft * plane(vv[it + 1])
    if spherical:
        c = np.cos(yc * RAD_PER_DEG)
        u = u / (radius * c) * DEG_PER_RAD
        v = v / radius * DEG_PER_RAD
    return u, v, valid


def advect_gridded(x0, y0, ts, gx, gy, gt, uu, vv, spherical, radius):
    x = x0.copy()
    y = y0.copy()
    arc = np.zeros_like(x)
    alive = np.ones(x.shape, dtype=np.bool_)
    nt = len(gt)
    dx = gx[1] - gx[0]
    dy = gy[1] - gy[0]
    dtg = gt[1] - gt[0] if nt > 1 else 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(len(ts) - 1):
            h = ts[i + 1] - ts[i]
            if nt == 1:
                b0 = bm = b1 = (0, 0.0)
            else:
                b0 = _time_bracket(gt, dtg, ts[i])
                bm = _time_bracket(gt, dtg, ts[i] + h / 2.0)
                b1 = _time_bracket(gt, dtg, ts[i + 1])
                if b0 is None or bm is None or b1 is None:
                    alive[:] = False
                    break
            k1x, k1y, m1 = _sample_grid(x, y, b0[0], b0[1], gx, gy, uu, vv, dx, dy, spherical, radius)
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x, k2y, m2 = _sample_grid(x2, y2, bm[0], bm[1], gx, gy, uu, vv, dx, dy, spherical, radius)
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x, k3y, m3 = _sample_grid(x3, y3, bm[0], bm[1], gx, gy, uu, vv, dx, dy, spherical, radius)
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x, k4y, m4 = _sample_grid(x4, y4, b1[0], b1[1], gx, gy, uu, vv, dx, dy, spherical, radius)
            sp1 = np.sqrt(k1x * k1x + k1y * k1y)
            sp2 = np.sqrt(k2x * k2x + k2y * k2y)
            sp3 = np.sqrt(k3x * k3x + k3y * k3y)
            sp4 = np.sqrt(k4x * k4x + k4y * k4y)
            step_ok = alive & m1 & m2 & m3 & m4
            arc = np.where(step_ok, arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4), arc)
            x = np.where(step_ok, x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x), x)
            y = np.where(step_ok, y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y), y)
            alive = step_ok
            if not alive.any():
                break
    return x, y, arc, alive


def path_saddle(lam, x0, y0, ts):
    n = len(ts) - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    x = x0
    y = y0
    arc = 0.0
    for i in range(n):
        h = ts[i + 1] - ts[i]
        k1x = lam * x
        k1y = -lam * y
        x2 = x + (h / 2.0) * k1x
        y2 = y + (h / 2.0) * k1y
        k2x = lam * x2
        k2y = -lam * y2
        x3 = x + (h / 2.0) * k2x
        y3 = y + (h / 2.0) * k2y
        k3x = lam * x3
        k3y = -lam * y3
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x = lam * x4
        k4y = -lam * y4
        sp1 = math.sqrt(k1x * k1x + k1y * k1y)
        sp2 = math.sqrt(k2x * k2x + k2y * k2y)
        sp3 = math.sqrt(k3x * k3x + k3y * k3y)
        sp4 = math.sqrt(k4x * k4x + k4y * k4y)
        arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i + 1] = x
        ys[i + 1] = y
    return xs, ys, arc


def path_rotated(lam, x0, y0, ts):
    n = len(ts) - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    x = x0
    y = y0
    arc = 0.0
    for i in range(n):
        h = ts[i + 1] - ts[i]
        k1x = lam * y
        k1y = lam * x
        x2 = x + (h / 2.0) * k1x
        y2 = y + (h / 2.0) * k1y
        k2x = lam * y2
        k2y = lam * x2
        x3 = x + (h / 2.0) * k2x
        y3 = y + (h / 2.0) * k2y
        k3x = lam * y3
        k3y = lam * x3
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x = lam * y4
        k4y = lam * x4
        sp1 = math.sqrt(k1x * k1x + k1y * k1y)
        sp2 = math.sqrt(k2x * k2x + k2y * k2y)
        sp3 = math.sqrt(k3x * k3x + k3y * k3y)
        sp4 = math.sqrt(k4x * k4x + k4y * k4y)
        arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i + 1] = x
        ys[i + 1] = y
    return xs, ys, arc


def path_duffing(eps, x0, y0, ts, sin_t, sin_mid):
    n = len(ts) - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    x = x0
    y = y0
    arc = 0.0
    for i in range(n):
        h = ts[i + 1] - ts[i]
        s0 = sin_t[i]
        sm = sin_mid[i]
        s1 = sin_t[i + 1]
        k1x = y
        k1y = x - x * x * x + eps * s0
        x2 = x + (h / 2.0) * k1x
        y2 = y + (h / 2.0) * k1y
        k2x = y2
        k2y = x2 - x2 * x2 * x2 + eps * sm
        x3 = x + (h / 2.0) * k2x
        y3 = y + (h / 2.0) * k2y
        k3x = y3
        k3y = x3 - x3 * x3 * x3 + eps * sm
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x = y4
        k4y = x4 - x4 * x4 * x4 + eps * s1
        sp1 = math.sqrt(k1x * k1x + k1y * k1y)
        sp2 = math.sqrt(k2x * k2x + k2y * k2y)
        sp3 = math.sqrt(k3x * k3x + k3y * k3y)
        sp4 = math.sqrt(k4x * k4x + k4y * k4y)
        arc = arc + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i + 1] = x
        ys[i + 1] = y
    return xs, ys, arc


def path_gridded(x0, y0, ts, gx, gy, gt, uu, vv, spherical, radius):
    """Single recorded trajectory; returns (xs, ys, arc, n_samples)."""
    n = len(ts) - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    xa = np.array([x0])
    ya = np.array([y0])
    arc = 0.0
    nt = len(gt)
    dx = gx[1] - gx[0]
    dy = gy[1] - gy[0]
    dtg = gt[1] - gt[0] if nt > 1 else 1.0
    n_valid = 1
    for i in range(n):
        h = ts[i + 1] - ts[i]
        if nt == 1:
            b0 = bm = b1 = (0, 0.0)
        else:
            b0 = _time_bracket(gt, dtg, ts[i])
            bm = _time_bracket(gt, dtg, ts[i] + h / 2.0)
            b1 = _time_bracket(gt, dtg, ts[i + 1])
            if b0 is None or bm is None or b1 is None:
                break
        k1x, k1y, m1 = _sample_grid(xa, ya, b0[0], b0[1], gx, gy, uu, vv, dx, dy, spherical, radius)
        x2 = xa + (h / 2.0) * k1x
        y2 = ya + (h / 2.0) * k1y
        k2x, k2y, m2 = _sample_grid(x2, y2, bm[0], bm[1], gx, gy, uu, vv, dx, dy, spherical, radius)
        x3 = xa + (h / 2.0) * k2x
        y3 = ya + (h / 2.0) * k2y
        k3x, k3y, m3 = _sample_grid(x3, y3, bm[0], bm[1], gx, gy, uu, vv, dx, dy, spherical, radius)
        x4 = xa + h * k3x
        y4 = ya + h * k3y
        k4x, k4y, m4 = _sample_grid(x4, y4, b1[0], b1[1], gx, gy, uu, vv, dx, dy, spherical, radius)
        if not (m1[0] and m2[0] and m3[0] and m4[0]):
            break
        sp1 = np.sqrt(k1x * k1x + k1y * k1y)
        sp2 = np.sqrt(k2x * k2x + k2y * k2y)
        sp3 = np.sqrt(k3x * k3x + k3y * k3y)
        sp4 = np.sqrt(k4x * k4x + k4y * k4y)
        arc = arc + float((abs(h) / 6.0) * (sp1[0] + 2.0 * sp2[0] + 2.0 * sp3[0] + sp4[0]))
        xa = xa + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        ya = ya + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i + 1] = xa[0]
        ys[i + 1] = ya[0]
        n_valid = i + 2
    return xs, ys, arc, n_valid


def iterate_saddle_map(lam, x0, y0, n):
    x = x0.copy()
    y = y0.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            x = x * lam
            y = y / lam
    return x, y


def iterate_rotated_map(lam, x0, y0, n):
    # march in the eigenbasis a=(x+y)/2, b=(x-y)/2: a -> lam*a, b -> b/lam
    a = (x0 + y0) / 2.0
    b = (x0 - y0) / 2.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            a = a * lam
            b = b / lam
    return a + b, a - b
