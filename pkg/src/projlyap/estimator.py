"""Lyapunov exponent from the discretized stationary measure, with error bound.

Furstenberg's formula writes the top exponent as the stationary average of
``phi_j(x) = log |A_j x|`` over the generators.  Averaging instead the
smoother ``psi_j = L phi_j`` (``L`` the transfer operator) over the
stationary vector of a mesh discretization gives the estimate, and

    |L1 - estimate| <= Delta_alpha * V_alpha / (1 - kappa_alpha)

bounds its error, where ``Delta_alpha`` measures how far the nearest-point
maps move points and ``V_alpha`` averages the Holder seminorms of ``psi_j``.
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import _kernels, holder
from .cocycle import iterate_cocycle, DEFAULT_WORD_CAP
from .contraction import DEFAULT_ALPHA_GRID, DEFAULT_GRID_SIZE, kappa_alpha, select_alpha_n
from .discretizer import discretize, stationary, uniform_mesh
from .errors import NoContraction, NotSl2
from .projgeom import ProjPoint

log = logging.getLogger(__name__)

def _angles(x):
    if isinstance(x, ProjPoint):
        return x.theta
    return np.asarray(x, dtype=float)


def phi_j(c, j, x):
    """``log |A_j x|`` for the unit vector of the line ``x`` (angle or array)."""
    t = _angles(x)
    val = 0.5 * np.log(c.frame[j].norm_sq(t)[0])
    return float(val) if np.ndim(val) == 0 else val


def _frame_args(c):
    fr = c.frame
    return (np.asarray(c.probs, dtype=float), fr.s_max, fr.s_min, fr.contract, fr.image, fr.orient)


def psi_matrix(c, theta, js=None):
    """``psi_j(theta)`` for the generators ``js`` (default all), shape ``(len(js), len(theta))``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    js = np.arange(c.k) if js is None else np.atleast_1d(np.asarray(js, dtype=np.intp))
    return _kernels.psi_grid(theta, *_frame_args(c), js)


def psi_at(c, js, theta):
    """``psi_{js[m]}(theta[m])`` elementwise."""
    theta = np.asarray(theta, dtype=float)
    js = np.broadcast_to(np.asarray(js, dtype=np.intp), theta.shape)
    out = _kernels.psi_points(theta.ravel(), np.ascontiguousarray(js.ravel()), *_frame_args(c))
    return out.reshape(theta.shape)


def psi_j(c, j, x):
    """``(L phi_j)(x) = sum_i p_i phi_j(A_i x)``, summed exactly."""
    t = _angles(x)
    val = psi_at(c, j, np.atleast_1d(t))
    return float(val[0]) if np.ndim(t) == 0 else val


def transfer(c, f):
    """``Lf = sum_i p_i f o Phi_{A_i}`` for a vectorised function ``f`` of the angle."""
    def Lf(theta):
        return np.tensordot(c.probs, f(c.frame.action(np.asarray(theta, dtype=float))), axes=1)
    return Lf


def l1_estimate(c, d, nu):
    """``sum_j p_j sum_x psi_j(x) nu(x)`` over the mesh."""
    psi = psi_matrix(c, d.mesh.points)
    return float(c.probs @ psi @ nu.weights)


def l1_phi_estimate(c, d, nu):
    """Same average with ``phi_j`` in place of ``psi_j`` (no extra transfer step)."""
    logs = 0.5 * np.log(c.frame.norm_sq(d.mesh.points))
    return float(c.probs @ logs @ nu.weights)


def delta_alpha(c, d, alpha):
    """Worst averaged ``alpha``-power displacement of the nearest-point maps."""
    disp = np.abs(np.sin(d.images - d.mesh.points[d.fmaps]))
    return float((c.probs @ disp ** alpha).max())


holder_constant = holder.holder_constant


def v_alpha_avg(c, alpha, seed_grid=holder.DEFAULT_SEED_GRID, newton=True):
    """``sum_j p_j v_alpha(psi_j)``."""
    if not c.sl2:
        raise NotSl2("V_alpha is only implemented for SL2 cocycles")
    theta = np.arange(seed_grid) * (np.pi / seed_grid)
    grid_vals = psi_matrix(c, theta)
    v = holder.holder_constants(lambda fid, t: psi_at(c, fid, t), c.k, alpha, seed_grid,
                                values=grid_vals, newton=newton)
    return float(c.probs @ v)


@dataclass
class EstimateReport:
    """One row of results.

    ``kappa`` is the refined maximum of ``H_alpha`` and ``kappa_upper`` its
    certified upper bound; the error bound uses the latter.  ``l1_estimate``
    refers to the n-step cocycle; ``l1_per_step`` divides by ``n``.
    """

    alpha: float
    n: int
    kappa: float
    kappa_upper: float
    mesh_size: int
    delta_alpha: float
    v_alpha_avg: float
    l1_estimate: float
    error_bound: float
    l1_per_step: float
    l1_phi: float
    stationary_residual: float
    mc_crosscheck: dict | None = None
    timings: dict = field(default_factory=dict)

    TABLE_FIELDS = ("alpha", "kappa", "mesh_size", "delta_alpha", "v_alpha_avg",
                    "l1_estimate", "error_bound")

    def to_dict(self, timings=False):
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        if not timings:
            out.pop("timings")
        return out

    def to_json(self, timings=False):
        return json.dumps(_round_floats(self.to_dict(timings)), indent=2)

    def csv_header(self):
        return ",".join(self.TABLE_FIELDS)

    def csv_row(self):
        return ",".join(_fmt(getattr(self, k)) for k in self.TABLE_FIELDS)


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return f"{x:.9g}"
    return str(x)


def _round_floats(obj):
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(f"{obj:.9g}")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def full_estimate(c, alpha=None, n=None, N=1000, seed_grid=holder.DEFAULT_SEED_GRID,
                  grid_size=DEFAULT_GRID_SIZE, alpha_grid=DEFAULT_ALPHA_GRID, n_max=9,
                  word_cap=DEFAULT_WORD_CAP, mc=None, mesh=None):
    """Run the whole pipeline on the base cocycle ``c``.

    ``alpha`` and ``n`` left as ``None`` are chosen by :func:`select_alpha_n`.
    ``mc`` is an optional dict of :func:`projlyap.mc.mc_l1` keyword
    arguments; the Monte Carlo result (scaled to the n-step cocycle) is
    attached as ``mc_crosscheck``.  ``mesh`` overrides the uniform mesh of
    size ``N``.
    """
    timings = {}
    t0 = time.perf_counter()
    if alpha is None or n is None:
        grid = [alpha] if alpha is not None else alpha_grid
        if n is None:
            alpha, n, cert = select_alpha_n(c, grid, n_max, word_cap, grid_size)
            cn = iterate_cocycle(c, n, cap=word_cap)
        else:
            cn = iterate_cocycle(c, n, cap=word_cap)
            certs = [kappa_alpha(cn, a, grid_size, n=n) for a in grid]
            cert = min(certs, key=lambda ct: ct.kappa_upper)
            alpha = cert.alpha
    else:
        cn = iterate_cocycle(c, n, cap=word_cap)
        cert = kappa_alpha(cn, alpha, grid_size, n=n)
    timings["kappa"] = time.perf_counter() - t0
    if cert.kappa_upper >= 1:
        raise NoContraction(f"kappa_alpha upper bound {cert.kappa_upper:.6g} >= 1 "
                            f"(alpha={alpha}, n={n})")

    t0 = time.perf_counter()
    mesh = uniform_mesh(N) if mesh is None else mesh
    d = discretize(cn, mesh)
    nu = stationary(d)
    timings["stationary"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    l1 = l1_estimate(cn, d, nu)
    l1_phi = l1_phi_estimate(cn, d, nu)
    delta = delta_alpha(cn, d, alpha)
    timings["l1_delta"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    v = v_alpha_avg(cn, alpha, seed_grid)
    timings["v_alpha"] = time.perf_counter() - t0

    bound = delta * v / (1.0 - cert.kappa_upper)
    mc_out = None
    if mc is not None:
        from .mc import mc_l1

        t0 = time.perf_counter()
        est = mc_l1(c, **mc)
        mc_out = est.to_dict()
        mc_out["scaled_mean"] = n * est.mean
        mc_out["scaled_stderr"] = n * est.stderr
        timings["mc"] = time.perf_counter() - t0
    log.info("estimate alpha=%g n=%d: L1=%.6g bound=%.3g", alpha, n, l1, bound)
    return EstimateReport(
        alpha=float(alpha), n=int(n), kappa=cert.kappa_refined, kappa_upper=cert.kappa_upper,
        mesh_size=int(mesh.N), delta_alpha=delta, v_alpha_avg=v, l1_estimate=l1,
        error_bound=float(bound), l1_per_step=l1 / n, l1_phi=l1_phi,
        stationary_residual=nu.residual, mc_crosscheck=mc_out, timings=timings)
