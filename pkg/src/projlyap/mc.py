"""Monte Carlo estimate of the top Lyapunov exponent.

Random products are applied to a unit vector that is renormalised after
every factor; the mean of the accumulated ``log |A v|`` over the steps
estimates L1 (Furstenberg-Kesten).  Independent samples give a standard
error.  Sample ``s`` draws its symbols from ``numpy.random.Philox`` seeded
with ``seed + s``, so results are reproducible bit for bit.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .errors import BadParam

PRNG = "numpy.random.Philox"
BURN_IN = 1000
_BLOCK = 1 << 20


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    steps_per_sample: int
    samples: int
    seed: int
    prng: str = PRNG

    @property
    def l2(self):
        """Second exponent, ``-L1`` for SL2 cocycles."""
        return -self.mean

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        d = self.to_dict()
        for key in ("mean", "stderr"):
            d[key] = float(f"{d[key]:.9g}")
        return json.dumps(d, indent=2)

    def csv_row(self):
        return f"{self.mean:.9g},{self.stderr:.9g},{self.steps_per_sample},{self.samples},{self.seed}"


@numba.njit(cache=True)
def _run(mats, symbols, v0, v1, accumulate):
    total = 0.0
    for s in symbols:
        a = mats[s, 0, 0] * v0 + mats[s, 0, 1] * v1
        b = mats[s, 1, 0] * v0 + mats[s, 1, 1] * v1
        r = np.sqrt(a * a + b * b)
        v0 = a / r
        v1 = b / r
        if accumulate:
            total += np.log(r)
    return total, v0, v1


def _sample(mats, probs, steps, seed, start_theta, burn_in):
    rng = np.random.Generator(np.random.Philox(seed))
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    v0, v1 = np.cos(start_theta), np.sin(start_theta)
    if burn_in:
        sym = np.searchsorted(cum, rng.random(burn_in), side="right")
        _, v0, v1 = _run(mats, sym, v0, v1, False)
    total = 0.0
    left = steps
    while left > 0:
        m = min(left, _BLOCK)
        sym = np.searchsorted(cum, rng.random(m), side="right")
        part, v0, v1 = _run(mats, sym, v0, v1, True)
        total += part
        left -= m
    return total / steps


def mc_l1(c, steps=10 ** 6, samples=32, seed=0, start_theta=0.0, burn_in=BURN_IN):
    """Estimate L1 of the cocycle ``c`` by direct random products."""
    if steps < 1 or samples < 1:
        raise BadParam("steps and samples must be positive")
    mats = np.ascontiguousarray(c.mats)
    probs = np.asarray(c.probs, dtype=float)
    vals = np.array([_sample(mats, probs, int(steps), int(seed) + s, float(start_theta), int(burn_in))
                     for s in range(int(samples))])
    stderr = float(vals.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return McEstimate(float(vals.mean()), stderr, int(steps), int(samples), int(seed))
