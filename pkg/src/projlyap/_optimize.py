"""Batched derivative-free 1-D maximisation."""
import numpy as np

INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-10, maxiter=200):
    """Golden-section search for maxima of ``f`` on many brackets at once.

    ``f`` maps an array of abscissae (one per bracket) to values.  The
    function need not be unimodal; the best point evaluated is returned,
    so the result never falls below the values seen at the bracket ends.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    best_x = a.copy()
    best_f = np.asarray(f(a), dtype=float).copy()
    fb = np.asarray(f(b), dtype=float)
    upd = fb > best_f
    best_x[upd], best_f[upd] = b[upd], fb[upd]

    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = np.asarray(f(c), dtype=float)
    fd = np.asarray(f(d), dtype=float)
    for _ in range(maxiter):
        for x, fx in ((c, fc), (d, fd)):
            upd = fx > best_f
            best_x[upd], best_f[upd] = x[upd], fx[upd]
        if np.all(b - a <= tol):
            break
        left = fc >= fd
        # left probe wins: keep [a, d], old c becomes the new d
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        keep_x = np.where(left, c, d)
        keep_f = np.where(left, fc, fd)
        probe = np.where(left, b - INVPHI * (b - a), a + INVPHI * (b - a))
        fp = np.asarray(f(probe), dtype=float)
        c = np.where(left, probe, keep_x)
        d = np.where(left, keep_x, probe)
        fc = np.where(left, fp, keep_f)
        fd = np.where(left, keep_f, fp)
    return best_x, best_f
