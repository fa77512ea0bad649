"""Geometry of the real projective line.

A line through the origin of R^2 is stored as its angle ``theta`` in
``[0, pi)``.  Distances use the sine metric

    delta(x, y) = |x ^ y| / (|x| |y|) = |sin(theta_x - theta_y)|,

so ``P(R^2)`` has diameter 1.

Besides the scalar operations there is a vectorised "singular frame" of a
stack of 2x2 matrices.  It evaluates ``|A x|`` and the projective action in
coordinates centred at the least expanding singular direction, which keeps
both accurate for matrices with norms far beyond ``1e4`` (direct products
lose all relative accuracy near the contracted direction there).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePair, NonInvertible, NotSl2

PI = np.pi

INVERTIBLE_TOL = 1e-12
SL2_TOL = 1e-10
DEGENERATE_TOL = 1e-14


def canonical_angle(theta):
    """Reduce angles mod pi into ``[0, pi)``; works on scalars and arrays."""
    r = np.mod(theta, PI)
    # np.mod(-tiny, pi) rounds to pi itself
    r = np.where(r >= PI, 0.0, r)
    if np.ndim(r) == 0:
        return float(r)
    return r


@dataclass(frozen=True)
class ProjPoint:
    """A point of P(R^2), i.e. a line, given by its angle."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(float(self.theta)))

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (2,) or not np.any(v):
            raise ValueError("expected a non-zero vector of R^2")
        return cls(np.arctan2(v[1], v[0]))

    def representative(self):
        return np.array([np.cos(self.theta), np.sin(self.theta)])


def _theta(x):
    return x.theta if isinstance(x, ProjPoint) else float(x)


def as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {A.shape}")
    return A


def det2(A):
    return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]


def check_invertible(A):
    if abs(det2(A)) <= INVERTIBLE_TOL:
        raise NonInvertible(f"|det A| = {abs(det2(A)):.3e} <= {INVERTIBLE_TOL}")


def is_sl2(A):
    """Determinant-one test, scaled by ``|A|_F^2``.

    Products of many SL2 factors keep det = 1 only up to rounding of order
    ``eps * |A|^2``, so the absolute tolerance is relaxed accordingly.
    """
    A = np.asarray(A, dtype=float)
    scale = np.maximum(1.0, np.sum(A * A, axis=(-2, -1)))
    return np.abs(det2(A) - 1.0) < SL2_TOL * scale


def proj_metric(x, y):
    """Sine distance between two lines (scalars, ProjPoints or arrays of angles)."""
    if isinstance(x, ProjPoint) or isinstance(y, ProjPoint):
        return abs(np.sin(_theta(x) - _theta(y)))
    return np.abs(np.sin(np.subtract(x, y)))


def proj_action(A, x):
    """Projective action of ``A`` on the line ``x``."""
    A = as_matrix(A)
    check_invertible(A)
    v = A @ ProjPoint(_theta(x)).representative()
    return ProjPoint(np.arctan2(v[1], v[0]))


def dphi_norm_sl2(A, x):
    """Norm of the derivative of the projective action, ``1/|A x|^2``."""
    A = as_matrix(A)
    if not is_sl2(A):
        raise NotSl2(f"det A = {det2(A)!r}")
    v = A @ ProjPoint(_theta(x)).representative()
    return 1.0 / float(v @ v)


def dphi_norm_bound(A, x):
    """Upper bound ``|wedge^2 A| / |A x|^2`` for the projective derivative, any d.

    ``x`` is a ProjPoint (d = 2) or a non-zero vector of R^d.  For d = 2 the
    bound is attained and coincides with :func:`dphi_norm_sl2` on SL2.
    """
    A = np.asarray(A, dtype=float)
    if isinstance(x, ProjPoint):
        x = x.representative()
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    s = np.linalg.svd(A, compute_uv=False)
    if A.shape[0] == 2:
        wedge = abs(det2(A))
    else:
        wedge = s[0] * s[1]
    if abs(np.prod(s)) <= INVERTIBLE_TOL:
        raise NonInvertible("matrix is singular")
    Ax = A @ x
    return float(wedge / (Ax @ Ax))


def increment_ratio(A, x, y, alpha):
    """``[delta(A x, A y) / delta(x, y)] ** alpha`` for distinct lines.

    In the plane ``Ax ^ Ay = det(A) x ^ y``, so for unit ``x, y`` the ratio
    is ``|det A| / (|Ax| |Ay|)``; this avoids subtracting nearby image angles.
    """
    A = as_matrix(A)
    check_invertible(A)
    d = proj_metric(x, y)
    if d < DEGENERATE_TOL:
        raise DegeneratePair(f"delta(x, y) = {d:.3e}; use the derivative norm")
    ax = A @ ProjPoint(_theta(x)).representative()
    ay = A @ ProjPoint(_theta(y)).representative()
    ratio = abs(det2(A)) / (np.linalg.norm(ax) * np.linalg.norm(ay))
    return float(ratio ** alpha)


@dataclass(frozen=True)
class SingularFrame:
    """Closed-form singular data of a stack of k 2x2 matrices.

    ``contract`` is the angle of the least expanding right singular
    direction and ``image`` the angle of the most expanded image direction.
    With ``t = theta - contract``:

        |A x|^2      = s_min^2 cos^2 t + s_max^2 sin^2 t
        angle(A x)   = image + atan2(orient * s_min * cos t, -s_max * sin t)
    """

    s_max: np.ndarray
    s_min: np.ndarray
    contract: np.ndarray
    image: np.ndarray
    orient: np.ndarray

    @classmethod
    def from_matrices(cls, mats, sl2=False):
        mats = np.asarray(mats, dtype=float).reshape(-1, 2, 2)
        a, b = mats[:, 0, 0], mats[:, 0, 1]
        c, d = mats[:, 1, 0], mats[:, 1, 1]
        # A^T A = [[p, q], [q, r]]
        p = a * a + c * c
        q = a * b + c * d
        r = b * b + d * d
        lam = 0.5 * (p + r) + np.hypot(0.5 * (p - r), q)
        s_max = np.sqrt(lam)
        det = det2(mats)
        s_min = 1.0 / s_max if sl2 else np.abs(det) / s_max
        expand = 0.5 * np.arctan2(2.0 * q, p - r)
        u = np.stack([a * np.cos(expand) + b * np.sin(expand),
                      c * np.cos(expand) + d * np.sin(expand)], axis=-1)
        image = np.arctan2(u[:, 1], u[:, 0])
        orient = np.where(det < 0, -1.0, 1.0)
        return cls(s_max, s_min, canonical_angle(expand + PI / 2), image, orient)

    def __len__(self):
        return len(self.s_max)

    def __getitem__(self, idx):
        idx = np.atleast_1d(np.arange(len(self))[idx])
        return SingularFrame(self.s_max[idx], self.s_min[idx], self.contract[idx],
                             self.image[idx], self.orient[idx])

    def norm_sq(self, theta):
        """``|A_j x_theta|^2`` with shape ``(k,) + theta.shape``."""
        t = np.subtract.outer(np.asarray(theta, dtype=float), self.contract)
        t = np.moveaxis(t, -1, 0)
        shp = (-1,) + (1,) * (t.ndim - 1)
        c, s = np.cos(t), np.sin(t)
        return (self.s_min.reshape(shp) * c) ** 2 + (self.s_max.reshape(shp) * s) ** 2

    def action(self, theta):
        """Angles of ``A_j x_theta`` in ``[0, pi)``, shape ``(k,) + theta.shape``."""
        t = np.subtract.outer(np.asarray(theta, dtype=float), self.contract)
        t = np.moveaxis(t, -1, 0)
        shp = (-1,) + (1,) * (t.ndim - 1)
        ang = np.arctan2(self.orient.reshape(shp) * self.s_min.reshape(shp) * np.cos(t),
                         -self.s_max.reshape(shp) * np.sin(t))
        return canonical_angle(self.image.reshape(shp) + ang)

    def min_norm_sq_on(self, lo, hi):
        """Exact minimum of ``|A_j x|^2`` over ``theta in [lo, hi]``.

        Requires ``0 <= hi - lo < pi``; returns shape ``(k, len(lo))``.
        """
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        # distance (mod pi) from the contracted direction to the interval
        a = canonical_angle(np.subtract.outer(self.contract, lo))
        inside = a <= (hi - lo)[None, :]
        dist = np.minimum(a - (hi - lo)[None, :], PI - a)
        dist = np.where(inside, 0.0, np.maximum(dist, 0.0))
        c, s = np.cos(dist), np.sin(dist)
        return (self.s_min[:, None] * c) ** 2 + (self.s_max[:, None] * s) ** 2
