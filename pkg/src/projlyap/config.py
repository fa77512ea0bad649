"""Run configuration files (TOML).

A configuration names the generators, their probabilities and the pipeline
parameters::

    iterate_n = 9
    alpha = 0.1
    mesh_N = 512

    [[generators]]
    family = "D"
    param = 3.5

    [[generators]]
    family = "R"
    param = 0.4

    [mc]
    steps = 1000000

Generators are ``family`` plus ``param`` (families S, D, R), or
``family = "explicit"`` with ``matrix = [a, b, c, d]`` in row-major order.
An optional ``conjugate = phi`` replaces ``M`` by ``R(-phi) M R(phi)``.
``iterate_n`` and ``alpha`` accept ``"auto"``.  ``mesh_points`` (sorted
angles in ``[0, pi)``) overrides the uniform mesh of size ``mesh_N``.
Unknown keys are errors.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import tomli
import tomli_w

from .cocycle import DEFAULT_WORD_CAP, Cocycle, GeneratorSpec, make_generator
from .contraction import DEFAULT_ALPHA_GRID, DEFAULT_GRID_SIZE
from .discretizer import Mesh, uniform_mesh
from .errors import ConfigError, ProjLyapError
from .holder import DEFAULT_SEED_GRID
from .mc import BURN_IN

PROB_SUM_TOL = 1e-9

TOP_KEYS = ("generators", "probs", "iterate_n", "alpha", "mesh_N", "mesh_points",
            "alpha_grid", "n_max", "word_cap", "seed_grid", "kappa_grid", "mc")
GEN_KEYS = ("family", "param", "matrix", "conjugate")
MC_KEYS = ("steps", "samples", "seed", "start_theta", "burn_in")

DEFAULTS = {
    "iterate_n": "auto",
    "alpha": "auto",
    "mesh_N": 1000,
    "alpha_grid": list(DEFAULT_ALPHA_GRID),
    "n_max": 9,
    "word_cap": DEFAULT_WORD_CAP,
    "seed_grid": DEFAULT_SEED_GRID,
    "kappa_grid": DEFAULT_GRID_SIZE,
}
MC_DEFAULTS = {"steps": 10 ** 6, "samples": 32, "seed": 0, "start_theta": 0.0, "burn_in": BURN_IN}


@dataclass(frozen=True)
class McConfig:
    steps: int = MC_DEFAULTS["steps"]
    samples: int = MC_DEFAULTS["samples"]
    seed: int = MC_DEFAULTS["seed"]
    start_theta: float = MC_DEFAULTS["start_theta"]
    burn_in: int = MC_DEFAULTS["burn_in"]

    def kwargs(self):
        return {"steps": self.steps, "samples": self.samples, "seed": self.seed,
                "start_theta": self.start_theta, "burn_in": self.burn_in}


@dataclass(frozen=True)
class RunConfig:
    generators: tuple
    probs: tuple | None = None
    iterate_n: int | str = DEFAULTS["iterate_n"]
    alpha: float | str = DEFAULTS["alpha"]
    mesh_N: int = DEFAULTS["mesh_N"]
    mesh_points: tuple | None = None
    alpha_grid: tuple = field(default_factory=lambda: tuple(DEFAULTS["alpha_grid"]))
    n_max: int = DEFAULTS["n_max"]
    word_cap: int = DEFAULTS["word_cap"]
    seed_grid: int = DEFAULTS["seed_grid"]
    kappa_grid: int = DEFAULTS["kappa_grid"]
    mc: McConfig | None = None

    def cocycle(self):
        """The base cocycle (probabilities rescaled to sum to 1 exactly)."""
        probs = None
        if self.probs is not None:
            probs = np.array(self.probs, dtype=float)
            probs /= probs.sum()
        return Cocycle.from_specs(self.generators, probs)

    def mesh(self):
        if self.mesh_points is not None:
            return Mesh(np.array(self.mesh_points, dtype=float))
        return uniform_mesh(self.mesh_N)

    @property
    def N(self):
        return len(self.mesh_points) if self.mesh_points is not None else self.mesh_N

    def to_dict(self):
        """Plain-data form with every default filled in."""
        out = {"generators": [_gen_dict(g) for g in self.generators]}
        if self.probs is not None:
            out["probs"] = list(self.probs)
        out.update(iterate_n=self.iterate_n, alpha=self.alpha, mesh_N=self.mesh_N)
        if self.mesh_points is not None:
            out["mesh_points"] = list(self.mesh_points)
        out.update(alpha_grid=list(self.alpha_grid), n_max=self.n_max, word_cap=self.word_cap,
                   seed_grid=self.seed_grid, kappa_grid=self.kappa_grid)
        if self.mc is not None:
            out["mc"] = self.mc.kwargs()
        return out


def _gen_dict(g):
    out = {"family": g.family}
    if g.family == "explicit":
        out["matrix"] = list(g.matrix)
    else:
        out["param"] = float(g.param)
    if g.conjugate is not None:
        out["conjugate"] = float(g.conjugate)
    return out


def _line_of(text, key):
    if text is None:
        return None
    m = re.search(rf"^\s*\[*\s*{re.escape(key)}\s*[=\]]", text, flags=re.MULTILINE)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Checker:
    def __init__(self, text):
        self.text = text

    def fail(self, msg, key, path=None):
        raise ConfigError(msg, field=path or key, line=_line_of(self.text, key))

    def unknown(self, table, allowed, prefix=""):
        for key in table:
            if key not in allowed:
                self.fail(f"unknown key {key!r}", key, prefix + key)

    def integer(self, table, key, lo=1, path=None):
        v = table[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(f"{key} must be an integer", key, path)
        if v < lo:
            self.fail(f"{key} must be >= {lo}", key, path)
        return v

    def real(self, table, key, path=None):
        v = table[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(f"{key} must be a number", key, path)
        v = float(v)
        if not np.isfinite(v):
            self.fail(f"{key} must be finite", key, path)
        return v

    def reals(self, table, key, path=None):
        v = table[key]
        if not isinstance(v, list) or not v:
            self.fail(f"{key} must be a non-empty list of numbers", key, path)
        return [self.real({key: x}, key, path) for x in v]


def normalize(data, text=None):
    """Validate a parsed TOML table and fill defaults; returns a plain dict."""
    return _build(data, text).to_dict()


def _build(data, text=None):
    ck = _Checker(text)
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a table")
    ck.unknown(data, TOP_KEYS)
    if "generators" not in data:
        raise ConfigError("missing generators", field="generators")
    gens = data["generators"]
    if not isinstance(gens, list) or not gens or not all(isinstance(g, dict) for g in gens):
        ck.fail("generators must be a non-empty array of tables", "generators")
    specs = []
    for i, g in enumerate(gens):
        path = f"generators[{i}]"
        ck.unknown(g, GEN_KEYS, path + ".")
        if "family" not in g:
            ck.fail("generator needs a family", "generators", path + ".family")
        kw = {"family": g["family"]}
        if "param" in g:
            kw["param"] = ck.real(g, "param", path + ".param")
        if "matrix" in g:
            kw["matrix"] = tuple(ck.reals(g, "matrix", path + ".matrix"))
        if "conjugate" in g:
            kw["conjugate"] = ck.real(g, "conjugate", path + ".conjugate")
        if g["family"] != "explicit" and "matrix" in g:
            ck.fail("matrix is only valid for explicit generators", "matrix", path + ".matrix")
        if g["family"] == "explicit" and "param" in g:
            ck.fail("param is not used by explicit generators", "param", path + ".param")
        try:
            spec = GeneratorSpec(**kw)
            make_generator(spec)
            specs.append(spec)
        except ProjLyapError as exc:
            ck.fail(str(exc), "family", path)

    out = {"generators": tuple(specs)}
    if "probs" in data:
        probs = ck.reals(data, "probs")
        if len(probs) != len(specs):
            ck.fail(f"expected {len(specs)} probabilities, got {len(probs)}", "probs")
        if min(probs) <= 0:
            ck.fail("probabilities must be strictly positive", "probs")
        if abs(sum(probs) - 1.0) > PROB_SUM_TOL:
            ck.fail(f"probabilities sum to {sum(probs):.12g}, not 1", "probs")
        out["probs"] = tuple(probs)
    for key in ("iterate_n", "alpha"):
        if key in data:
            if data[key] == "auto":
                out[key] = "auto"
            elif key == "iterate_n":
                out[key] = ck.integer(data, key)
            else:
                a = ck.real(data, key)
                if not 0 < a <= 1:
                    ck.fail("alpha must lie in (0, 1]", key)
                out[key] = a
    for key, lo in (("mesh_N", 2), ("n_max", 1), ("word_cap", 1), ("seed_grid", 2),
                    ("kappa_grid", 16)):
        if key in data:
            out[key] = ck.integer(data, key, lo)
    if "mesh_points" in data:
        pts = ck.reals(data, "mesh_points")
        try:
            Mesh(np.array(pts))
        except ProjLyapError as exc:
            ck.fail(str(exc), "mesh_points")
        out["mesh_points"] = tuple(pts)
    if "alpha_grid" in data:
        grid = ck.reals(data, "alpha_grid")
        if not all(0 < a < 1 for a in grid):
            ck.fail("alpha_grid values must lie in (0, 1)", "alpha_grid")
        out["alpha_grid"] = tuple(grid)
    if "mc" in data:
        mc = data["mc"]
        if not isinstance(mc, dict):
            ck.fail("mc must be a table", "mc")
        ck.unknown(mc, MC_KEYS, "mc.")
        kw = {}
        for key in ("steps", "samples", "burn_in", "seed"):
            if key in mc:
                kw[key] = ck.integer(mc, key, 0 if key in ("burn_in", "seed") else 1, "mc." + key)
        if "start_theta" in mc:
            kw["start_theta"] = ck.real(mc, "start_theta", "mc.start_theta")
        out["mc"] = McConfig(**kw)
    return RunConfig(**out)


def parse(text):
    """Parse and validate configuration text."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}", line=getattr(exc, "lineno", None)) from None
    return _build(data, text)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse(text)


def serialize(cfg):
    """TOML text of the normalized configuration."""
    return tomli_w.dumps(cfg.to_dict())
