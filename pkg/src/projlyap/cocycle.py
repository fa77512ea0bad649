"""Bernoulli matrix cocycles: generator families, iteration, norms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadParam, CapExceeded, NonInvertible
from .projgeom import INVERTIBLE_TOL, SingularFrame, det2, is_sl2

DEFAULT_WORD_CAP = 2 ** 16
PROB_TOL = 1e-12


def S(lam):
    """Schrodinger-type matrix ``[[lam, -1], [1, 0]]``."""
    return np.array([[lam, -1.0], [1.0, 0.0]])


def D(lam):
    """Diagonal hyperbolic matrix ``diag(lam, 1/lam)``."""
    if lam == 0:
        raise BadParam("D family needs a non-zero parameter")
    return np.array([[lam, 0.0], [0.0, 1.0 / lam]])


def R(lam):
    """Rotation by ``lam`` radians."""
    c, s = np.cos(lam), np.sin(lam)
    return np.array([[c, -s], [s, c]])


FAMILIES = {"S": S, "D": D, "R": R}


@dataclass(frozen=True)
class GeneratorSpec:
    """One generator: a family member or an explicit matrix.

    ``conjugate`` (radians) replaces the matrix ``M`` by ``R(-phi) M R(phi)``,
    which is how the symmetric generators of a rotated hyperbolic family are
    written without spelling out the entries.
    """

    family: str
    param: float | None = None
    matrix: tuple | None = None
    conjugate: float | None = None

    def __post_init__(self):
        if self.family not in (*FAMILIES, "explicit"):
            raise BadParam(f"unknown generator family {self.family!r}")
        if self.family == "explicit":
            if self.matrix is None:
                raise BadParam("explicit generator needs a matrix")
            m = np.asarray(self.matrix, dtype=float)
            if m.size != 4:
                raise BadParam("explicit matrix needs four entries")
            object.__setattr__(self, "matrix", tuple(float(v) for v in m.ravel()))
        elif self.param is None:
            raise BadParam(f"family {self.family} needs a parameter")


def make_generator(spec):
    if spec.family == "explicit":
        M = np.array(spec.matrix, dtype=float).reshape(2, 2)
    else:
        M = FAMILIES[spec.family](float(spec.param))
    if spec.conjugate is not None:
        M = R(-spec.conjugate) @ M @ R(spec.conjugate)
    return M


@dataclass(frozen=True, eq=False)
class Cocycle:
    """Finitely many matrices ``A_j`` drawn i.i.d. with probabilities ``p_j``.

    ``sl2`` is detected from the matrices unless given; iterated cocycles
    inherit the flag of their base, since the determinant of long products
    is only known up to rounding.
    """

    mats: np.ndarray
    probs: np.ndarray = None
    sl2: bool | None = None

    def __post_init__(self):
        mats = np.array(self.mats, dtype=float).reshape(-1, 2, 2)
        if len(mats) == 0:
            raise BadParam("a cocycle needs at least one matrix")
        k = len(mats)
        probs = np.full(k, 1.0 / k) if self.probs is None else np.array(self.probs, dtype=float)
        if probs.shape != (k,):
            raise BadParam(f"expected {k} probabilities, got {probs.shape}")
        if np.any(probs <= 0):
            raise BadParam("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL * max(1, k):
            raise BadParam(f"probabilities sum to {probs.sum()!r}, not 1")
        dets = np.abs(det2(mats))
        if np.any(dets <= INVERTIBLE_TOL):
            raise NonInvertible(f"matrix {int(np.argmin(dets))} is singular")
        sl2 = bool(np.all(is_sl2(mats))) if self.sl2 is None else bool(self.sl2)
        mats.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "sl2", sl2)

    @classmethod
    def from_specs(cls, specs, probs=None):
        return cls(np.array([make_generator(s) for s in specs]), probs)

    @property
    def k(self):
        return len(self.mats)

    def __len__(self):
        return len(self.mats)

    @cached_property
    def frame(self):
        return SingularFrame.from_matrices(self.mats, sl2=self.sl2)


def iterate_cocycle(c, n, cap=DEFAULT_WORD_CAP):
    """The n-step cocycle over all words ``(x_0, ..., x_{n-1})``.

    Word ``w`` carries ``A_{x_{n-1}} ... A_{x_1} A_{x_0}`` with probability
    ``p_{x_0} ... p_{x_{n-1}}``; words are enumerated lexicographically.
    """
    if n < 1:
        raise BadParam("n must be a positive integer")
    required = c.k ** n
    if required > cap:
        raise CapExceeded(required, cap)
    if n == 1:
        return c
    # prefix products grow one letter at a time, keeping lexicographic order
    mats = c.mats.copy()
    probs = c.probs.copy()
    for _ in range(n - 1):
        mats = np.einsum("jab,wbc->wjac", c.mats, mats).reshape(-1, 2, 2)
        probs = np.outer(probs, c.probs).ravel()
    return Cocycle(mats, probs / probs.sum(), sl2=c.sl2)


def words(k, n):
    """Lexicographic word list matching :func:`iterate_cocycle`."""
    return list(itertools.product(range(k), repeat=n))


def operator_norms(mats):
    """Largest singular values via the closed-form 2x2 SVD."""
    return SingularFrame.from_matrices(mats).s_max


def max_norm(c):
    return float(operator_norms(c.mats).max())
