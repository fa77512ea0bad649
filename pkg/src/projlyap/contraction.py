"""Contraction rate of the transfer operator on Holder functions.

For an SL2 cocycle the averaged derivative

    H_alpha(x) = sum_j p_j |A_j x|^(-2 alpha)

bounds how much the transfer operator shrinks the alpha-Holder seminorm,
and ``kappa_alpha = max H_alpha``.  :func:`kappa_alpha` returns a
certificate holding a numerically refined maximum and a safe upper bound.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from ._optimize import golden_max
from .cocycle import DEFAULT_WORD_CAP, iterate_cocycle, operator_norms
from .errors import BadParam, CapExceeded, NoContraction, NotSl2
from .projgeom import PI, ProjPoint

log = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
DEFAULT_GRID_SIZE = 4096

# H_alpha evaluations are done in chunks of at most this many (matrix, point) pairs
_CHUNK = 1 << 21


def _require_sl2(c):
    if not c.sl2:
        raise NotSl2("H_alpha bounds need an SL2 cocycle")


def _check_alpha(alpha):
    if not 0 < alpha <= 1:
        raise BadParam(f"alpha must lie in (0, 1], got {alpha}")


def _h_values(c, alpha, theta):
    theta = np.asarray(theta, dtype=float)
    flat = theta.ravel()
    out = np.empty(flat.shape)
    step = max(1, _CHUNK // c.k)
    for s in range(0, len(flat), step):
        nsq = c.frame.norm_sq(flat[s:s + step])
        out[s:s + step] = c.probs @ nsq ** (-alpha)
    return out.reshape(theta.shape)


def h_alpha(c, alpha, x):
    """``H_alpha`` at a ProjPoint, an angle, or an array of angles."""
    _require_sl2(c)
    _check_alpha(alpha)
    if isinstance(x, ProjPoint):
        x = x.theta
    val = _h_values(c, alpha, x)
    return float(val) if np.ndim(val) == 0 else val


def h_alpha_deriv_bound(c, alpha):
    """Bound ``2 alpha sum_j p_j |A_j|^(2(alpha+1))`` on ``|dH_alpha/dtheta|``."""
    _require_sl2(c)
    norms = operator_norms(c.mats)
    return float(2.0 * alpha * (c.probs @ norms ** (2.0 * (alpha + 1.0))))


def h_alpha_cell_bound(c, alpha, lo, hi):
    """Upper bound of ``H_alpha`` on each interval ``[lo_i, hi_i]``.

    Each summand is maximised exactly on the interval (its peak sits at the
    contracted singular direction), so the bound is sharp up to the spread of
    the individual maximisers inside the cell.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.empty(lo.shape)
    step = max(1, _CHUNK // c.k)
    for s in range(0, len(lo), step):
        m = c.frame.min_norm_sq_on(lo[s:s + step], hi[s:s + step])
        out[s:s + step] = c.probs @ m ** (-alpha)
    return out


@dataclass(frozen=True)
class KappaCertificate:
    """Estimate and upper bound for ``kappa_alpha = max H_alpha``.

    ``grid_upper = grid_max + lipschitz_bound * h / 2`` is the uniform-grid
    Lipschitz certificate.  ``kappa_upper`` is the smaller of it and the
    adaptive cell bound, so ``kappa_upper <= grid_upper`` always.
    """

    alpha: float
    n: int
    grid_size: int
    grid_max: float
    lipschitz_bound: float
    grid_upper: float
    kappa_upper: float
    kappa_refined: float
    method: str
    cells: int

    @property
    def h(self):
        return PI / self.grid_size

    def to_dict(self):
        return asdict(self)


def kappa_alpha(c, alpha, grid_size=DEFAULT_GRID_SIZE, n=1, tol=1e-7,
                max_cells=400_000, stop_above=None):
    """Certify ``kappa_alpha`` for the (already iterated) cocycle ``c``.

    ``n`` is only recorded in the certificate.  Adaptive refinement stops
    once every cell bound is within ``tol`` of the best value found, when
    ``max_cells`` cell bounds have been computed, or as soon as the best
    value exceeds ``stop_above`` (the bound is valid at any stopping point).
    """
    _require_sl2(c)
    _check_alpha(alpha)
    if grid_size < 16:
        raise BadParam("grid_size must be at least 16")
    h = PI / grid_size
    grid = np.arange(grid_size) * h
    hv = _h_values(c, alpha, grid)
    grid_max = float(hv.max())
    lip = h_alpha_deriv_bound(c, alpha)
    grid_upper = grid_max + lip * h / 2

    # local refinement from the top grid points and every contracted direction
    top = grid[np.argsort(hv)[-5:]]
    seeds = np.concatenate([top, c.frame.contract])
    xs, fs = golden_max(lambda t: _h_values(c, alpha, t), seeds - h, seeds + h)
    fs = np.concatenate([fs, _h_values(c, alpha, c.frame.contract)])
    refined = max(grid_max, float(fs.max()))

    # branch and bound over cells [g_i, g_i + h]
    lo, hi = grid, grid + h
    ub = h_alpha_cell_bound(c, alpha, lo, hi)
    settled = -np.inf
    cells = len(lo)
    while True:
        keep = ub > refined + tol
        if np.any(~keep):
            settled = max(settled, float(ub[~keep].max()))
        lo, hi, ub = lo[keep], hi[keep], ub[keep]
        if len(lo) == 0:
            break
        if cells >= max_cells or (stop_above is not None and refined > stop_above):
            break
        if np.all(hi - lo <= 4 * np.spacing(hi)):
            break
        mid = 0.5 * (lo + hi)
        refined = max(refined, float(_h_values(c, alpha, mid).max()))
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        ub = h_alpha_cell_bound(c, alpha, lo, hi)
        cells += len(lo)
    bb_upper = max(settled, float(ub.max()) if len(ub) else -np.inf)
    # pad for rounding in the per-cell evaluation
    bb_upper = max(bb_upper, refined) * (1 + 1e-12)
    method = "adaptive" if bb_upper < grid_upper else "grid"
    kappa_upper = min(bb_upper, grid_upper)
    log.debug("kappa_alpha alpha=%g: grid %.6g refined %.9g upper %.9g (%s, %d cells)",
              alpha, grid_max, refined, kappa_upper, method, cells)
    return KappaCertificate(
        alpha=float(alpha), n=int(n), grid_size=int(grid_size), grid_max=grid_max,
        lipschitz_bound=lip, grid_upper=grid_upper, kappa_upper=float(kappa_upper),
        kappa_refined=refined, method=method, cells=int(cells))


def select_alpha_n(c, alpha_grid=DEFAULT_ALPHA_GRID, n_max=9, word_cap=DEFAULT_WORD_CAP,
                   grid_size=DEFAULT_GRID_SIZE):
    """Smallest iterate ``n`` with a certified ``kappa_upper < 1``.

    Among the alphas achieving it at that ``n``, the one with the smallest
    ``kappa_upper`` wins.  Returns ``(alpha, n, certificate)``.
    """
    alpha_grid = [float(a) for a in alpha_grid]
    if not alpha_grid or not all(0 < a < 1 for a in alpha_grid):
        raise BadParam("alpha_grid must be a non-empty subset of (0, 1)")
    for n in range(1, n_max + 1):
        try:
            cn = iterate_cocycle(c, n, cap=word_cap)
        except CapExceeded:
            break
        certs = [kappa_alpha(cn, a, grid_size, n=n, stop_above=1.0) for a in alpha_grid]
        ok = [ct for ct in certs if ct.kappa_upper < 1]
        if ok:
            best = min(ok, key=lambda ct: ct.kappa_upper)
            return best.alpha, n, best
    raise NoContraction(f"no (alpha, n) with kappa_alpha < 1 for n <= {n_max} "
                        f"within a word cap of {word_cap}")


def h_alpha_curve(c, alpha, num=DEFAULT_GRID_SIZE):
    """``(theta, H_alpha(theta))`` on a uniform grid, for plotting."""
    theta = np.arange(num) * (PI / num)
    return theta, h_alpha(c, alpha, theta)
