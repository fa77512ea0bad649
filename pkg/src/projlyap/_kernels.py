"""Compiled inner loops for evaluating ``psi_j = L phi_j``.

Both kernels work in the singular frame of :class:`projgeom.SingularFrame`
so they stay accurate for badly conditioned products.  Image vectors are
left unnormalised: ``|A_j w|^2 / |w|^2`` is all that is needed.
"""
import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _image(ct, st, s_max, s_min, orient, ci, si):
    # A_i x in the frame of A_i, rotated to standard coordinates
    a = -s_max * st
    b = orient * s_min * ct
    return ci * a - si * b, si * a + ci * b, a * a + b * b


@numba.njit(cache=True, inline="always")
def _norm_sq(wx, wy, s_max, s_min, cv, sv):
    c = wx * cv + wy * sv
    s = wy * cv - wx * sv
    return (s_min * c) ** 2 + (s_max * s) ** 2


@numba.njit(cache=True)
def psi_grid(theta, probs, s_max, s_min, contract, image, orient, js):
    """``out[m, g] = psi_{js[m]}(theta[g])``."""
    k = len(probs)
    G = len(theta)
    wx = np.empty((k, G))
    wy = np.empty((k, G))
    w2 = np.empty((k, G))
    for i in range(k):
        ci, si = np.cos(image[i]), np.sin(image[i])
        for g in range(G):
            t = theta[g] - contract[i]
            wx[i, g], wy[i, g], w2[i, g] = _image(np.cos(t), np.sin(t), s_max[i], s_min[i],
                                                  orient[i], ci, si)
    out = np.zeros((len(js), G))
    for m in range(len(js)):
        j = js[m]
        cv, sv = np.cos(contract[j]), np.sin(contract[j])
        for i in range(k):
            p = 0.5 * probs[i]
            for g in range(G):
                q = _norm_sq(wx[i, g], wy[i, g], s_max[j], s_min[j], cv, sv) / w2[i, g]
                out[m, g] += p * np.log(q)
    return out


@numba.njit(cache=True)
def psi_points(theta, js, probs, s_max, s_min, contract, image, orient):
    """``out[m] = psi_{js[m]}(theta[m])``."""
    k = len(probs)
    ci = np.cos(image)
    si = np.sin(image)
    cc = np.cos(contract)
    sc = np.sin(contract)
    out = np.empty(len(theta))
    for m in range(len(theta)):
        j = js[m]
        ct0, st0 = np.cos(theta[m]), np.sin(theta[m])
        acc = 0.0
        for i in range(k):
            # cos and sin of theta - contract[i]
            ct = ct0 * cc[i] + st0 * sc[i]
            st = st0 * cc[i] - ct0 * sc[i]
            wx, wy, w2 = _image(ct, st, s_max[i], s_min[i], orient[i], ci[i], si[i])
            acc += probs[i] * np.log(_norm_sq(wx, wy, s_max[j], s_min[j], cc[j], sc[j]) / w2)
        out[m] = 0.5 * acc
    return out
