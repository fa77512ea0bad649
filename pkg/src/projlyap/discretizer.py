"""Finite-state approximation of the projective transfer operator.

A mesh ``F`` of lines is fixed, every generator is replaced by the map
sending a mesh point to the mesh point nearest its image, and the resulting
Markov chain on ``F`` (column-stochastic matrix ``P``) stands in for the
random walk on P(R^2).  Its stationary vector approximates the stationary
measure of the cocycle.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import BadParam, NoConvergence, NotMixing
from .projgeom import PI, ProjPoint, canonical_angle


@dataclass(frozen=True, eq=False)
class Mesh:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or len(pts) < 2:
            raise BadParam("a mesh needs at least two points")
        if np.any(pts < 0) or np.any(pts >= PI):
            raise BadParam("mesh angles must lie in [0, pi)")
        if np.any(np.diff(pts) <= 0):
            raise BadParam("mesh angles must be strictly increasing")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self):
        return len(self.points)

    def __len__(self):
        return len(self.points)


def uniform_mesh(N):
    """Mesh ``theta_i = i pi / N``, ``i = 0, ..., N - 1``."""
    if N < 2:
        raise BadParam("N must be at least 2")
    return Mesh(np.arange(N) * (PI / N))


def nearest_indices(mesh, theta):
    """Vectorised :func:`nearest` over an array of angles."""
    pts = mesh.points
    t = canonical_angle(np.asarray(theta, dtype=float))
    hi = np.searchsorted(pts, t, side="left") % mesh.N
    lo = (hi - 1) % mesh.N
    # circular distance is monotone in the sine metric up to pi/2
    d_lo = np.abs(t - pts[lo])
    d_lo = np.minimum(d_lo, PI - d_lo)
    d_hi = np.abs(t - pts[hi])
    d_hi = np.minimum(d_hi, PI - d_hi)
    pick_lo = (d_lo < d_hi) | ((d_lo == d_hi) & (lo < hi))
    return np.where(pick_lo, lo, hi)


def nearest(mesh, x):
    """Index of the mesh point closest to ``x``; ties go to the smaller index."""
    theta = x.theta if isinstance(x, ProjPoint) else x
    return int(nearest_indices(mesh, np.array([theta]))[0])


@dataclass(frozen=True, eq=False)
class Discretization:
    """Nearest-point maps of a cocycle on a mesh.

    ``fmaps[j, i]`` is the mesh index of the point nearest to ``A_j``
    applied to mesh point ``i``; ``images[j, i]`` the exact image angle.
    ``pmatrix[w, v]`` is the total probability of the maps sending ``v``
    to ``w``, so columns sum to one.
    """

    mesh: Mesh
    fmaps: np.ndarray
    images: np.ndarray
    probs: np.ndarray
    pmatrix: sp.csc_matrix

    @property
    def N(self):
        return self.mesh.N


def assemble_pmatrix(fmaps, probs, N):
    k = len(probs)
    rows = np.asarray(fmaps).ravel()
    cols = np.tile(np.arange(N), k)
    vals = np.repeat(np.asarray(probs, dtype=float), N)
    P = sp.coo_matrix((vals, (rows, cols)), shape=(N, N)).tocsc()
    P.sum_duplicates()
    return P


def discretize(c, mesh):
    images = c.frame.action(mesh.points)
    fmaps = nearest_indices(mesh, images)
    return Discretization(mesh, fmaps, images, np.asarray(c.probs), assemble_pmatrix(fmaps, c.probs, mesh.N))


@dataclass(frozen=True)
class MixingReport:
    mixing: bool
    n_classes: int
    closed_classes: list
    period: int | None
    reason: str

    def to_dict(self):
        return {"mixing": self.mixing, "n_classes": self.n_classes,
                "closed_class_sizes": [len(cl) for cl in self.closed_classes],
                "period": self.period, "reason": self.reason}


def _class_period(adj, members):
    """Period of a strongly connected class via BFS level differences."""
    sub = adj[members][:, members].tocsr()
    order, pred = breadth_first_order(sub, 0, directed=True, return_predecessors=True)
    level = np.full(len(members), -1)
    level[0] = 0
    for v in order[1:]:
        level[v] = level[pred[v]] + 1
    coo = sub.tocoo()
    diffs = level[coo.row] + 1 - level[coo.col]
    g = 0
    for d in np.unique(np.abs(diffs)):
        g = math.gcd(g, int(d))
    return g


def check_mixing(d):
    """Does the chain have a single closed class, and is it aperiodic?"""
    P = d.pmatrix if isinstance(d, Discretization) else sp.csc_matrix(d)
    # edge v -> w when P[w, v] > 0
    adj = sp.csr_matrix(P.T)
    adj.eliminate_zeros()
    n_comp, labels = connected_components(adj, directed=True, connection="strong")
    coo = adj.tocoo()
    leaving = labels[coo.row] != labels[coo.col]
    open_comp = np.zeros(n_comp, dtype=bool)
    open_comp[labels[coo.row[leaving]]] = True
    closed = [np.flatnonzero(labels == c) for c in range(n_comp) if not open_comp[c]]
    if len(closed) != 1:
        return MixingReport(False, n_comp, closed, None, f"{len(closed)} closed classes")
    period = _class_period(adj, closed[0])
    if period != 1:
        return MixingReport(False, n_comp, closed, period, f"closed class has period {period}")
    return MixingReport(True, n_comp, closed, 1, "single aperiodic closed class")


@dataclass(frozen=True, eq=False)
class StationaryVector:
    weights: np.ndarray
    residual: float
    iterations: int

    def to_csv(self, path, mesh, meta=None):
        write_measure_csv(path, mesh, self, meta)


def _residual(P, v):
    return float(np.abs(P @ v - v).sum())


def stationary(d, tol=1e-13, max_iter=10 ** 6, check_every=1000):
    """Stationary probability vector of a mixing discretization.

    Power iteration from the uniform vector.  Every ``check_every`` steps
    the Cesaro average of the last block is also tried, which settles
    chains whose subdominant eigenvalues sit close to the unit circle.
    """
    report = check_mixing(d)
    if not report.mixing:
        raise NotMixing(f"discretization is not mixing: {report.reason}; try a larger mesh",
                        report=report)
    P = d.pmatrix
    v = np.full(d.N, 1.0 / d.N)
    avg = np.zeros_like(v)
    best_res = np.inf
    it = 0
    while it < max_iter:
        w = P @ v
        res = float(np.abs(w - v).sum())
        it += 1
        v = w
        best_res = min(best_res, res)
        if res < tol:
            break
        avg += v
        if it % check_every == 0:
            cand = avg / check_every
            cand /= cand.sum()
            cres = _residual(P, cand)
            if cres < tol:
                v = cand
                break
            best_res = min(best_res, cres)
            avg[:] = 0.0
    v = np.clip(v, 0.0, None)
    v /= v.sum()
    res = _residual(P, v)
    if res >= max(10 * tol, 1e-12):
        raise NoConvergence("stationary vector did not converge", res)
    return StationaryVector(v, res, it)


def write_measure_csv(path, mesh, nu, meta=None):
    """Rows ``(theta, weight)``; ``meta`` goes into leading ``#`` comment lines."""
    with open(path, "w", newline="") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key}={_fmt(val)}\n")
        w = csv.writer(fh)
        w.writerow(["theta", "weight"])
        for t, p in zip(mesh.points, nu.weights):
            w.writerow([_fmt(t), _fmt(p)])


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return f"{x:.9g}"
    return str(x)
