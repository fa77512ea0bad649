"""Numerical alpha-Holder seminorm of functions on P(R^2).

    v_alpha(f) = sup_{x != y} |f(x) - f(y)| / delta(x, y)^alpha

The projective line has diameter 1 in the sine metric, so the usual
``diam^alpha`` normalisation factor is 1 and is left out.

Estimates are maxima over evaluated pairs, hence lower bounds of the true
seminorm; they are not certified.  Everything below works on a batch of
functions at once: ``f(fid, t)`` evaluates function ``fid[m]`` at angle
``t[m]`` for every ``m``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._optimize import golden_max
from .projgeom import PI

DEFAULT_SEED_GRID = 720
DEFAULT_TOP = 10
FD_STEP = 1e-5
_TINY = 1e-14


def holder_ratio(fx, fy, x, y, alpha):
    """``|f(x) - f(y)| / delta(x, y)^alpha``, zero on (numerically) coincident lines."""
    d = np.abs(np.sin(np.subtract(x, y)))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.abs(np.subtract(fx, fy)) / d ** alpha
    return np.where(d < _TINY, 0.0, r)


@lru_cache(maxsize=8)
def _pair_table(G, alpha):
    theta = np.arange(G) * (PI / G)
    i, j = np.triu_indices(G, 1)
    inv = np.abs(np.sin(theta[j] - theta[i])) ** -alpha
    return theta, i, j, inv


def grid_pairs(values, alpha, top=DEFAULT_TOP):
    """Best ``top`` seed-grid pairs of each row of ``values``.

    ``values`` has shape ``(F, G)`` (F functions on the grid ``i pi / G``).
    Returns index arrays ``(i, j)`` and ratios, each of shape ``(F, top)``.
    """
    values = np.atleast_2d(values)
    F, G = values.shape
    _, ii, jj, inv = _pair_table(G, float(alpha))
    top = min(top, len(ii))
    bi = np.empty((F, top), dtype=np.intp)
    br = np.empty((F, top))
    for f in range(F):
        v = values[f]
        r = np.abs(v[ii] - v[jj]) * inv
        best = np.argpartition(r, len(r) - top)[-top:]
        best = best[np.argsort(r[best])[::-1]]
        bi[f], br[f] = best, r[best]
    return ii[bi], jj[bi], br


def refine_pairs(f, fid, x, y, alpha, h, tol=1e-10, sweeps=8):
    """Coordinate-wise golden-section ascent of the ratio for each pair.

    ``x`` stays in ``[x0 - h, x0 + h]`` and ``y`` in ``[y0 - h, y0 + h]``.
    Pairs drop out once a sweep stops improving them.
    """
    fid = np.asarray(fid)
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    x_lo, x_hi = x - h, x + h
    y_lo, y_hi = y - h, y + h
    fx, fy = f(fid, x), f(fid, y)
    best = holder_ratio(fx, fy, x, y, alpha)
    act = np.arange(len(x))
    for _ in range(sweeps):
        a = act
        prev = best[a]
        fa, ya, fya = fid[a], y[a], fy[a]
        nx, rx = golden_max(lambda t: holder_ratio(f(fa, t), fya, t, ya, alpha), x_lo[a], x_hi[a], tol)
        upd = rx > best[a]
        x[a[upd]] = nx[upd]
        best[a] = np.maximum(best[a], rx)
        fx[a] = f(fa, x[a])
        xa, fxa = x[a], fx[a]
        ny, ry = golden_max(lambda t: holder_ratio(fxa, f(fa, t), xa, t, alpha), y_lo[a], y_hi[a], tol)
        upd = ry > best[a]
        y[a[upd]] = ny[upd]
        best[a] = np.maximum(best[a], ry)
        fy[a] = f(fa, y[a])
        act = a[best[a] - prev > 1e-13 * np.maximum(best[a], 1.0)]
        if len(act) == 0:
            break
    return x, y, best


def _derivs(f, fid, t, step):
    fm, f0, fp = f(fid, t - step), f(fid, t), f(fid, t + step)
    return f0, (fp - fm) / (2 * step), (fp - 2 * f0 + fm) / step ** 2


def newton_pairs(f, fid, x, y, alpha, iters=30, step=FD_STEP):
    """Best ratio met along the pair Newton map for critical points of
    ``(f(x) - f(y)) / (x - y)^alpha``.

    Derivatives are central differences.  Iterates that stop being finite,
    collapse onto each other or stagnate are dropped.
    """
    fid = np.asarray(fid)
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    best = holder_ratio(f(fid, x), f(fid, y), x, y, alpha)
    act = np.arange(len(x))
    for _ in range(iters):
        fa, xa, ya = fid[act], x[act], y[act]
        fx, dfx, d2fx = _derivs(f, fa, xa, step)
        fy, dfy, d2fy = _derivs(f, fa, ya, step)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            slope = alpha * (fy - fx) / (ya - xa)
            x1 = xa + (slope - dfx) / d2fx
            y1 = ya + (slope - dfy) / d2fy
            ok = np.isfinite(x1) & np.isfinite(y1) & (np.abs(x1 - y1) < 4 * PI)
        ok[ok] &= np.abs(np.sin(x1[ok] - y1[ok])) > _TINY
        ok[ok] &= np.abs(x1[ok] - xa[ok]) + np.abs(y1[ok] - ya[ok]) > 1e-14
        act = act[ok]
        if len(act) == 0:
            break
        x[act], y[act] = x1[ok], y1[ok]
        r = holder_ratio(f(fid[act], x[act]), f(fid[act], y[act]), x[act], y[act], alpha)
        best[act] = np.maximum(best[act], r)
    return best


def extreme_points(values):
    """Grid indices of the discrete local maxima and minima on the circle,
    with ``+1`` for maxima and ``-1`` for minima."""
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    is_max = (values >= left) & (values > right)
    is_min = (values <= left) & (values < right)
    idx = np.flatnonzero(is_max | is_min)
    return idx, np.where(is_max[idx], 1.0, -1.0)


def _newton_seeds(f, values, alpha, h, tol, top):
    """Pairs of sharpened extreme points, best ``top`` per function."""
    theta = np.arange(values.shape[1]) * (PI / values.shape[1])
    fids, pos, sign = [], [], []
    for fid, row in enumerate(values):
        idx, sg = extreme_points(row)
        fids.append(np.full(len(idx), fid))
        pos.append(theta[idx])
        sign.append(sg)
    fids = np.concatenate(fids)
    if len(fids) == 0:
        return None
    pos = np.concatenate(pos)
    sign = np.concatenate(sign)
    xe, _ = golden_max(lambda t: sign * f(fids, t), pos - h, pos + h, tol)
    fe = f(fids, xe)
    seeds_f, seeds_x, seeds_y, seeds_r = [], [], [], []
    for fid in np.unique(fids):
        sel = np.flatnonzero(fids == fid)
        if len(sel) < 2:
            continue
        a, b = np.triu_indices(len(sel), 1)
        a, b = sel[a], sel[b]
        r = holder_ratio(fe[a], fe[b], xe[a], xe[b], alpha)
        pick = np.argsort(r)[::-1][:top]
        seeds_f.append(np.full(len(pick), fid))
        seeds_x.append(np.maximum(xe[a[pick]], xe[b[pick]]))
        seeds_y.append(np.minimum(xe[a[pick]], xe[b[pick]]))
        seeds_r.append(r[pick])
    if not seeds_f:
        return None
    return tuple(np.concatenate(s) for s in (seeds_f, seeds_x, seeds_y, seeds_r))


def holder_constants(f, n_funcs, alpha, seed_grid=DEFAULT_SEED_GRID, top=DEFAULT_TOP,
                     tol=1e-10, newton=True, values=None):
    """Estimate ``v_alpha`` for ``n_funcs`` functions at once.

    ``f(fid, t)`` evaluates function ``fid[m]`` at ``t[m]``; all functions
    must be pi-periodic.  Each estimate is the largest ratio among every
    pair of the seed grid ``i pi / seed_grid``, golden-section refinements
    of the ``top`` best grid pairs and, with ``newton``, pair-Newton
    iterates started from pairs of extreme points.  No estimate falls below
    its seed-grid maximum.
    """
    theta = np.arange(seed_grid) * (PI / seed_grid)
    if values is None:
        fid = np.repeat(np.arange(n_funcs), seed_grid)
        values = f(fid, np.tile(theta, n_funcs)).reshape(n_funcs, seed_grid)
    values = np.asarray(values, dtype=float).reshape(n_funcs, seed_grid)
    h = PI / seed_grid
    i, j, r = grid_pairs(values, alpha, top)
    best = r[:, 0].copy()
    flat = np.ptp(values, axis=1) == 0
    fid = np.repeat(np.arange(n_funcs), i.shape[1])
    _, _, rr = refine_pairs(f, fid, theta[i.ravel()], theta[j.ravel()], alpha, h, tol)
    np.maximum.at(best, fid, rr)
    if newton:
        seeds = _newton_seeds(f, values, alpha, h, tol, top)
        if seeds is not None:
            sf, sx, sy, sr = seeds
            np.maximum.at(best, sf, sr)
            np.maximum.at(best, sf, newton_pairs(f, sf, sx, sy, alpha))
    best[flat] = 0.0
    return best


def holder_constant(f, alpha, seed_grid=DEFAULT_SEED_GRID, top=DEFAULT_TOP, tol=1e-10,
                    newton=True):
    """Estimate ``v_alpha(f)`` for one vectorised, pi-periodic function ``f(theta)``."""
    return float(holder_constants(lambda fid, t: f(t), 1, alpha, seed_grid, top, tol, newton)[0])
