"""Numba-compiled advection kernels (default backend).

Same entry points and operation order as the numpy fallback; loops run per
node with scalar arithmetic, released GIL, and disk-cached compilation.
fastmath stays off so results are bit-reproducible.
"""

import math

import numpy as np
from numba import njit

DEG_PER_RAD = 180.0 / math.pi
RAD_PER_DEG = math.pi / 180.0


@njit(cache=True, nogil=True)
def advect_saddle(lam, x0, y0, ts):
    m = x0.shape[0]
    n = ts.shape[0] - 1
    xf = np.empty(m)
    yf = np.empty(m)
    arc = np.empty(m)
    for j in range(m):
        x = x0[j]
        y = y0[j]
        a = 0.0
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
            a = a + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xf[j] = x
        yf[j] = y
        arc[j] = a
    return xf, yf, arc


@njit(cache=True, nogil=True)
def advect_rotated(lam, x0, y0, ts):
    m = x0.shape[0]
    n = ts.shape[0] - 1
    xf = np.empty(m)
    yf = np.empty(m)
    arc = np.empty(m)
    for j in range(m):
        x = x0[j]
        y = y0[j]
        a = 0.0
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
            a = a + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xf[j] = x
        yf[j] = y
        arc[j] = a
    return xf, yf, arc


@njit(cache=True, nogil=True)
def advect_duffing(eps, x0, y0, ts, sin_t, sin_mid):
    m = x0.shape[0]
    n = ts.shape[0] - 1
    xf = np.empty(m)
    yf = np.empty(m)
    arc = np.empty(m)
    for j in range(m):
        x = x0[j]
        y = y0[j]
        a = 0.0
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
            a = a + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xf[j] = x
        yf[j] = y
        arc[j] = a
    return xf, yf, arc


@njit(cache=True, nogil=True)
def _time_bracket_nb(gt, dtg, t):
    """Snapshot bracket (index, fraction, in_range)."""
    nt = gt.shape[0]
    if t < gt[0] or t > gt[nt - 1]:
        return 0, 0.0, False
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
    return i, f, True


@njit(cache=True, nogil=True, inline="always")
def _locate_nb(val, coords, spacing):
    n = coords.shape[0]
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


@njit(cache=True, nogil=True, inline="always")
def _sample_grid_nb(xq, yq, it, ft, gx, gy, uu, vv, dx, dy, spherical, radius):
    valid = gx[0] <= xq <= gx[gx.shape[0] - 1] and gy[0] <= yq <= gy[gy.shape[0] - 1]
    if spherical:
        valid = valid and abs(yq) < 90.0
    xc = min(max(xq, gx[0]), gx[gx.shape[0] - 1])
    yc = min(max(yq, gy[0]), gy[gy.shape[0] - 1])
    ix, fx = _locate_nb(xc, gx, dx)
    iy, fy = _locate_nb(yc, gy, dy)
    u00 = uu[it, iy, ix]
    u01 = uu[it, iy, ix + 1]
    u10 = uu[it, iy + 1, ix]
    u11 = uu[it, iy + 1, ix + 1]
    ua = (1.0 - fy) * ((1.0 - fx) * u00 + fx * u01) + fy * ((1.0 - fx) * u10 + fx * u11)
    v00 = vv[it, iy, ix]
    v01 = vv[it, iy, ix + 1]
    v10 = vv[it, iy + 1, ix]
    v11 = vv[it, iy + 1, ix + 1]
    va = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11)
    if ft == 0.0 and it == 0 and uu.shape[0] == 1:
        u = ua
        v = va
    else:
        u00 = uu[it + 1, iy, ix]
        u01 = uu[it + 1, iy, ix + 1]
        u10 = uu[it + 1, iy + 1, ix]
        u11 = uu[it + 1, iy + 1, ix + 1]
        ub = (1.0 - fy) * ((1.0 - fx) * u00 + fx * u01) + fy * ((1.0 - fx) * u10 + fx * u11)
        v00 = vv[it + 1, iy, ix]
        v01 = vv[it + 1, iy, ix + 1]
        v10 = vv[it + 1, iy + 1, ix]
        v11 = vv[it + 1, iy + 1, ix + 1]
        vb = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11)
        u = (1.0 - ft) * ua + ft * ub
        v = (1.0 - ft) * va + ft * vb
    if spherical:
        c = math.cos(yc * RAD_PER_DEG)
        u = u / (radius * c) * DEG_PER_RAD
        v = v / radius * DEG_PER_RAD
    return u, v, valid


@njit(cache=True, nogil=True)
def advect_gridded(x0, y0, ts, gx, gy, gt, uu, vv, spherical, radius):
    m = x0.shape[0]
    n = ts.shape[0] - 1
    xf = x0.copy()
    yf = y0.copy()
    arc = np.zeros(m)
    alive = np.ones(m, dtype=np.bool_)
    nt = gt.shape[0]
    dx = gx[1] - gx[0]
    dy = gy[1] - gy[0]
    dtg = gt[1] - gt[0] if nt > 1 else 1.0
    for j in range(m):
        x = x0[j]
        y = y0[j]
        a = 0.0
        ok = True
        for i in range(n):
            h = ts[i + 1] - ts[i]
            if nt == 1:
                it0 = 0
                ft0 = 0.0
                itm = 0
                ftm = 0.0
                it1 = 0
                ft1 = 0.0
            else:
                it0, ft0, in0 = _time_bracket_nb(gt, dtg, ts[i])
                itm, ftm, inm = _time_bracket_nb(gt, dtg, ts[i] + h / 2.0)
                it1, ft1, in1 = _time_bracket_nb(gt, dtg, ts[i + 1])
                if not (in0 and inm and in1):
                    ok = False
                    break
            k1x, k1y, m1 = _sample_grid_nb(x, y, it0, ft0, gx, gy, uu, vv, dx, dy, spherical, radius)
            x2 = x + (h / 2.0) * k1x
            y2 = y + (h / 2.0) * k1y
            k2x, k2y, m2 = _sample_grid_nb(x2, y2, itm, ftm, gx, gy, uu, vv, dx, dy, spherical, radius)
            x3 = x + (h / 2.0) * k2x
            y3 = y + (h / 2.0) * k2y
            k3x, k3y, m3 = _sample_grid_nb(x3, y3, itm, ftm, gx, gy, uu, vv, dx, dy, spherical, radius)
            x4 = x + h * k3x
            y4 = y + h * k3y
            k4x, k4y, m4 = _sample_grid_nb(x4, y4, it1, ft1, gx, gy, uu, vv, dx, dy, spherical, radius)
            if not (m1 and m2 and m3 and m4):
                ok = False
                break
            sp1 = math.sqrt(k1x * k1x + k1y * k1y)
            sp2 = math.sqrt(k2x * k2x + k2y * k2y)
            sp3 = math.sqrt(k3x * k3x + k3y * k3y)
            sp4 = math.sqrt(k4x * k4x + k4y * k4y)
            a = a + (abs(h) / 6.0) * (sp1 + 2.0 * sp2 + 2.0 * sp3 + sp4)
            x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xf[j] = x
        yf[j] = y
        arc[j] = a
        alive[j] = ok
    return xf, yf, arc, alive


@njit(cache=True, nogil=True)
def path_saddle(lam, x0, y0, ts):
    n = ts.shape[0] - 1
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


@njit(cache=True, nogil=True)
def path_rotated(lam, x0, y0, ts):
    n = ts.shape[0] - 1
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


@njit(cache=True, nogil=True)
def path_duffing(eps, x0, y0, ts, sin_t, sin_mid):
    n = ts.shape[0] - 1
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


@njit(cache=True, nogil=True)
def path_gridded(x0, y0, ts, gx, gy, gt, uu, vv, spherical, radius):
    n = ts.shape[0] - 1
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = x0
    ys[0] = y0
    x = x0
    y = y0
    arc = 0.0
    nt = gt.shape[0]
    dx = gx[1] - gx[0]
    dy = gy[1] - gy[0]
    dtg = gt[1] - gt[0] if nt > 1 else 1.0
    n_valid = 1
    for i in range(n):
        h = ts[i + 1] - ts[i]
        if nt == 1:
            it0 = 0
            ft0 = 0.0
            itm = 0
            ftm = 0.0
            it1 = 0
            ft1 = 0.0
        else:
            it0, ft0, in0 = _time_bracket_nb(gt, dtg, ts[i])
            itm, ftm, inm = _time_bracket_nb(gt, dtg, ts[i] + h / 2.0)
            it1, ft1, in1 = _time_bracket_nb(gt, dtg, ts[i + 1])
            if not (in0 and inm and in1):
                break
        k1x, k1y, m1 = _sample_grid_nb(x, y, it0, ft0, gx, gy, uu, vv, dx, dy, spherical, radius)
        x2 = x + (h / 2.0) * k1x
        y2 = y + (h / 2.0) * k1y
        k2x, k2y, m2 = _sample_grid_nb(x2, y2, itm, ftm, gx, gy, uu, vv, dx, dy, spherical, radius)
        x3 = x + (h / 2.0) * k2x
        y3 = y + (h / 2.0) * k2y
        k3x, k3y, m3 = _sample_grid_nb(x3, y3, itm, ftm, gx, gy, uu, vv, dx, dy, spherical, radius)
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x, k4y, m4 = _sample_grid_nb(x4, y4, it1, ft1, gx, gy, uu, vv, dx, dy, spherical, radius)
        if not (m1 and m2 and m3 and m4):
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


@njit(cache=True, nogil=True)
def iterate_saddle_map(lam, x0, y0, n):
    m = x0.shape[0]
    xf = x0.copy()
    yf = y0.copy()
    for j in range(m):
        x = x0[j]
        y = y0[j]
        for _ in range(n):
            x = x * lam
            y = y / lam
        xf[j] = x
        yf[j] = y
    return xf, yf


@njit(cache=True, nogil=True)
def iterate_rotated_map(lam, x0, y0, n):
    m = x0.shape[0]
    xf = np.empty(m)
    yf = np.empty(m)
    for j in range(m):
        a = (x0[j] + y0[j]) / 2.0
        b = (x0[j] - y0[j]) / 2.0
        for _ in range(n):
            a = a * lam
            b = b / lam
        xf[j] = a + b
        yf[j] = a - b
    return xf, yf
