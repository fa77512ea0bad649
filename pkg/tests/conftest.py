import math
import time
from pathlib import Path

import numpy as np
import pytest

from projlyap import Cocycle, GeneratorSpec, full_estimate, mc_l1
from projlyap.config import load

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


def example1_base():
    specs = [GeneratorSpec("D", 2.2, conjugate=j * math.pi / 8) for j in range(1, 9)]
    return Cocycle.from_specs(specs)


def example2_base():
    return Cocycle.from_specs([GeneratorSpec("S", 8.0), GeneratorSpec("S", 1.9)])


def example3_base():
    return Cocycle.from_specs([GeneratorSpec("D", 3.5), GeneratorSpec("R", 0.4)])


# (base cocycle, n, alpha, N)
EXAMPLES = {
    "example1": (example1_base, 3, 0.5, 1000),
    "example2": (example2_base, 9, 0.1, 512),
    "example3": (example3_base, 9, 0.1, 512),
}


def random_sl2(rng, n, max_stretch=10.0):
    """``n`` random SL2 matrices ``R(a) diag(s, 1/s) R(b)``, entries bounded by ``max_stretch``."""
    s = np.exp(rng.uniform(0.0, np.log(max_stretch), n))
    a, b = rng.uniform(0.0, 2 * np.pi, (2, n))
    ca, sa, cb, sb = np.cos(a), np.sin(a), np.cos(b), np.sin(b)
    Ra = np.stack([np.stack([ca, -sa], -1), np.stack([sa, ca], -1)], -2)
    Rb = np.stack([np.stack([cb, -sb], -1), np.stack([sb, cb], -1)], -2)
    D = np.zeros((n, 2, 2))
    D[:, 0, 0], D[:, 1, 1] = s, 1 / s
    return Ra @ D @ Rb


_reports = {}
_elapsed = {}
_mc = {}
ACCEPTANCE_LINES = []


def example_report(name):
    """Full pipeline on one of the three example cocycles, computed once per session."""
    if name not in _reports:
        make, n, alpha, N = EXAMPLES[name]
        t0 = time.perf_counter()
        _reports[name] = full_estimate(make(), alpha=alpha, n=n, N=N)
        _elapsed[name] = time.perf_counter() - t0
    return _reports[name]


def example_elapsed(name):
    """Wall time of the first (uncached) pipeline run, JIT compilation included."""
    example_report(name)
    return _elapsed[name]


def example_mc(name):
    if name not in _mc:
        _mc[name] = mc_l1(EXAMPLES[name][0](), steps=10 ** 6, samples=32, seed=0)
    return _mc[name]


@pytest.fixture(scope="session")
def configs():
    return CONFIGS


@pytest.fixture(scope="session")
def example_configs():
    return {name: load(CONFIGS / f"{name}.toml") for name in EXAMPLES}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
