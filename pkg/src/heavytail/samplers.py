"""Exact samplers, one per product representation.

Every target law has several registered constructions (recipes).  Each
recipe draws by exactly one construction so that two recipes for the same
law can be compared as independent witnesses of a distributional identity.

Conventions: ``S_d`` is the positive stable law with Laplace transform
``exp(-s**d)``; the symmetric stable law has characteristic function
``exp(-|t|**a)``; ``T_a = 2 / S_a``; ``R_d = S_d / S'_d``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .families import FamilySpec
from .rng import RngStream, as_generator

MAX_N = 2 ** 31 - 1


class RecipeError(KeyError):
    """Unknown representation id or a recipe/target mismatch."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


# ---------------------------------------------------------------------------
# array kernels; g is a numpy Generator

def exp_(g, n):
    return g.standard_exponential(n)


def weibull_(g, gamma, n):
    # W_gamma = W_1 ** (1/gamma)
    return g.standard_exponential(n) ** (1.0 / gamma)


def rayleigh_(g, n):
    return np.sqrt(g.standard_exponential(n))


def normal_(g, n):
    return g.standard_normal(n)


def sign_(g, n):
    return 2.0 * g.integers(0, 2, n) - 1.0


def _open_uniform(g, n):
    # uniform on the open interval (0, 1)
    return g.random(n) + 2.0 ** -54


def laplace_inverse_(g, n):
    u = _open_uniform(g, n)
    return np.where(u < 0.5, np.log(2.0 * u), -np.log(2.0 * (1.0 - u)))


def laplace_normal_(g, n, c=2.0):
    return g.standard_normal(n) * np.sqrt(c * g.standard_exponential(n))


def geometric_(g, p, n):
    return g.geometric(p, n).astype(float)


def pos_stable_(g, delta, n):
    """Positive stable draws with Laplace transform exp(-s**delta) (Kanter)."""
    if delta == 1.0:
        return np.ones(n)
    u = np.pi * _open_uniform(g, n)
    w = g.standard_exponential(n)
    a = np.sin(delta * u) / np.sin(u) ** (1.0 / delta)
    b = (np.sin((1.0 - delta) * u) / w) ** ((1.0 - delta) / delta)
    return a * b


def sym_stable_(g, alpha, n):
    """Symmetric stable draws, characteristic function exp(-|t|**alpha)."""
    if alpha == 2.0:
        return np.sqrt(2.0) * g.standard_normal(n)
    v = np.pi * (_open_uniform(g, n) - 0.5)
    if alpha == 1.0:
        return np.tan(v)
    w = g.standard_exponential(n)
    a = np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
    b = (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha)
    return a * b


def sym_stable_normal_(g, alpha, n):
    # normal scale mixture with positive stable mixing of index alpha/2
    x = g.standard_normal(n)
    return x * np.sqrt(2.0 * pos_stable_(g, alpha / 2.0, n))


def k_(g, rho, n):
    """K_rho by closed-form inverse distribution function; rho=1 is the atom at 1."""
    if rho == 1.0:
        return np.ones(n)
    q = _open_uniform(g, n)
    a = np.pi * rho
    return np.sin(a * q) / np.sin(a * (1.0 - q))


def ratio_q_(g, alpha, alpha_prime, n):
    if alpha == alpha_prime:
        return np.ones(n)
    return k_(g, alpha / alpha_prime, n) ** (1.0 / alpha)


def stable_ratio_(g, alpha, n):
    return pos_stable_(g, alpha, n) / pos_stable_(g, alpha, n)


def hdelta_(g, delta, n):
    r = stable_ratio_(g, delta, n)
    return 8.0 * g.standard_exponential(n) * r * r


def t_(g, alpha, n):
    return 2.0 / pos_stable_(g, alpha, n)


# ---------------------------------------------------------------------------
# data types

@dataclass(frozen=True)
class Recipe:
    """A registered construction for a target law.

    ``construction`` holds every parameter the construction uses, so a
    recipe can be deliberately mis-specified (its construction parameters
    perturbed away from the target) for sensitivity checks.
    """

    target: FamilySpec
    rep_id: str
    citation: str
    construction: tuple = field(default=())

    @property
    def params(self) -> dict:
        return dict(self.construction)

    def to_dict(self) -> dict:
        return {"rep_id": self.rep_id, "target": self.target.to_dict(),
                "citation": self.citation, "construction": self.params}


@dataclass
class SampleBatch:
    """Draws plus provenance."""

    values: np.ndarray
    family: FamilySpec | None
    label: str
    rng: RngStream | None = None
    recipe: Recipe | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def count(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.count

    def provenance(self) -> dict:
        d = {
            "family": self.family.name if self.family else None,
            "params": self.family.param_dict if self.family else {},
            "recipe": self.label,
            "n": self.count,
        }
        if self.rng is not None:
            d.update(seed=self.rng.seed, stream=list(self.rng.stream),
                     counter=self.rng.counter)
        else:
            d.update(seed=None, stream=None, counter=None)
        if self.recipe is not None:
            d["construction"] = self.recipe.params
        return d

    def summary(self) -> dict:
        v = self.values
        qs = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99]
        return {"min": float(v.min()), "max": float(v.max()),
                "quantiles": dict(zip([str(q) for q in qs],
                                      np.quantile(v, qs).tolist()))}

    def to_json(self, include_values=True) -> str:
        d = self.provenance()
        if include_values:
            d["values"] = self.values.tolist()
        else:
            d["summary"] = self.summary()
        return json.dumps(d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.provenance(), sort_keys=True) + "\n")
        buf.write("value\n")
        np.savetxt(buf, self.values, fmt="%.17g")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SampleBatch":
        lines = text.splitlines()
        prov = json.loads(lines[0][2:])
        vals = np.array([float(v) for v in lines[2:]])
        fam = FamilySpec(prov["family"], prov["params"]) if prov["family"] else None
        rng = None
        if prov.get("seed") is not None:
            rng = RngStream(prov["seed"], tuple(prov["stream"]), prov["counter"])
        return cls(vals, fam, prov["recipe"], rng)


def _check_n(n):
    n = int(n)
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in [1, {MAX_N}]; shard larger runs across streams")
    return n


def _stream(rng):
    return rng if isinstance(rng, RngStream) else None


# ---------------------------------------------------------------------------
# primitives, stable laws, mixing laws

_PRIMITIVES = {
    "Exponential": lambda g, p, n: exp_(g, n),
    "Weibull": lambda g, p, n: weibull_(g, p["gamma"], n),
    "Rayleigh": lambda g, p, n: rayleigh_(g, n),
    "Normal": lambda g, p, n: normal_(g, n),
    "HalfNormal": lambda g, p, n: np.abs(normal_(g, n)),
    "Laplace": lambda g, p, n: laplace_inverse_(g, n),
    "Geometric": lambda g, p, n: geometric_(g, p["p"], n),
}


def sample_primitive(family, rng, n, method="inverse") -> SampleBatch:
    """Draw from a primitive law.

    Parameters
    ----------
    family : FamilySpec or 'Sign'
        Exponential, Weibull, Rayleigh, Normal, HalfNormal, Laplace,
        Geometric, or the string ``'Sign'`` for equiprobable +-1.
    method : {'inverse', 'normal'}
        For Laplace only: inverse distribution function or the normal
        scale mixture ``X sqrt(2 W_1)``.
    """
    n = _check_n(n)
    g = as_generator(rng)
    if family == "Sign":
        return SampleBatch(sign_(g, n), None, "Sign", _stream(rng))
    if not isinstance(family, FamilySpec) or family.name not in _PRIMITIVES:
        raise ValueError(f"not a primitive family: {family!r}")
    if family.name == "Laplace" and method == "normal":
        return SampleBatch(laplace_normal_(g, n), family, "Laplace:normal", _stream(rng))
    if method not in ("inverse", "normal"):
        raise ValueError(f"unknown method {method!r}")
    vals = _PRIMITIVES[family.name](g, family.param_dict, n)
    return SampleBatch(vals, family, f"{family.name}:inverse", _stream(rng))


def sample_positive_stable(delta, rng, n) -> SampleBatch:
    """Positive stable draws; Laplace transform exactly ``exp(-s**delta)``."""
    spec = FamilySpec("PositiveStable", {"delta": delta})
    n = _check_n(n)
    return SampleBatch(pos_stable_(as_generator(rng), delta, n), spec,
                       "PositiveStable:kanter", _stream(rng))


def sample_symmetric_stable(alpha, rng, n, method="direct") -> SampleBatch:
    """Symmetric stable draws, characteristic function ``exp(-|t|**alpha)``.

    ``method='direct'`` uses the Chambers-Mallows-Stuck transform;
    ``method='normal_mixture'`` uses ``X sqrt(2 S_{alpha/2})``.
    """
    spec = FamilySpec("SymmetricStable", {"alpha": alpha})
    n = _check_n(n)
    g = as_generator(rng)
    if method == "direct":
        vals = sym_stable_(g, alpha, n)
    elif method == "normal_mixture":
        vals = sym_stable_normal_(g, alpha, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SampleBatch(vals, spec, f"SymmetricStable:{method}", _stream(rng))


def sample_mixinglaw(family, rng, n, **params) -> SampleBatch:
    """Draw from a mixing law.

    ``family`` is a FamilySpec (KozubowskiK, RatioQ, StableRatio, HDelta) or
    the string ``'T'`` with keyword ``alpha`` for ``T_alpha = 2 / S_alpha``.
    """
    n = _check_n(n)
    g = as_generator(rng)
    if family == "T":
        alpha = float(params["alpha"])
        if not 0 < alpha <= 1:
            raise ValueError("T_alpha needs alpha in (0, 1]")
        return SampleBatch(t_(g, alpha, n), None, f"T({alpha:g})", _stream(rng))
    name = family.name
    p = family.param_dict
    if name == "KozubowskiK":
        vals = k_(g, p["rho"], n)
    elif name == "RatioQ":
        vals = ratio_q_(g, p["alpha"], p["alpha_prime"], n)
    elif name == "StableRatio":
        vals = stable_ratio_(g, p["alpha"], n)
    elif name == "HDelta":
        vals = hdelta_(g, p["delta"], n)
    else:
        raise ValueError(f"not a mixing law: {family}")
    return SampleBatch(vals, family, f"{name}:mixing", _stream(rng))


# ---------------------------------------------------------------------------
# recipe registry

@dataclass(frozen=True)
class RecipeDef:
    rep_id: str
    family: str
    citation: str
    build: Callable
    defaults: Callable  # target params -> construction params
    primary: str  # construction parameter shifted by sensitivity checks
    valid: Callable = lambda c: True


def _ml_k_exp(g, d, n):
    if d == 1.0:
        return exp_(g, n)
    return k_(g, d, n) ** (1.0 / d) * exp_(g, n)


def _ml_stable_weibull(g, d, n):
    return pos_stable_(g, d, n) * weibull_(g, d, n)


def _mid(a, b):
    return 0.5 * (a + b)


_DEFS = {}


def _reg(rep_id, family, citation, build, defaults, primary, valid=lambda c: True):
    _DEFS[rep_id] = RecipeDef(rep_id, family, citation, build, defaults, primary, valid)


# Mittag-Leffler
_reg("ML_VIA_STABLE_WEIBULL", "MittagLeffler",
     "Mittag-Leffler law as a positive stable scale mixture with Weibull mixing",
     lambda g, c, n: pos_stable_(g, c["delta"], n) * weibull_(g, c["delta"], n),
     lambda p: {"delta": p["delta"]}, "delta")
_reg("ML_VIA_K_EXP", "MittagLeffler",
     "Mittag-Leffler law is mixed exponential with mixing K_delta^(1/delta)",
     lambda g, c, n: _ml_k_exp(g, c["delta"], n),
     lambda p: {"delta": p["delta"]}, "delta")
_reg("ML_VIA_EXP_RATIO", "MittagLeffler",
     "Mittag-Leffler law is exponential times a ratio of positive stable laws",
     lambda g, c, n: exp_(g, n) * stable_ratio_(g, c["delta"], n),
     lambda p: {"delta": p["delta"]}, "delta")
_reg("ML_VIA_HALF_NORMAL", "MittagLeffler",
     "Mittag-Leffler law as a half-normal scale mixture with mixing H_delta/4",
     lambda g, c, n: np.abs(normal_(g, n)) * np.sqrt(c["c"] * exp_(g, n))
     * stable_ratio_(g, c["delta"], n),
     lambda p: {"delta": p["delta"], "c": 2.0}, "delta")
_reg("ML_VIA_WEIBULL_MIX", "MittagLeffler",
     "Mittag-Leffler law as a mixed Weibull law with stable and K mixing",
     lambda g, c, n: weibull_(g, c["delta_prime"], n)
     * pos_stable_(g, c["delta_prime"], n)
     * k_(g, c["delta"] / c["delta_prime"], n) ** (1.0 / c["delta"]),
     lambda p: {"delta": p["delta"], "delta_prime": _mid(1.0, p["delta"])}, "delta",
     lambda c: c["delta"] <= c["delta_prime"])
_reg("ML_VIA_K_STEP", "MittagLeffler",
     "Mittag-Leffler law as a scale mixture of a Mittag-Leffler law with larger index",
     lambda g, c, n: _ml_k_exp(g, c["delta_prime"], n)
     * k_(g, c["delta"] / c["delta_prime"], n) ** (1.0 / c["delta"]),
     lambda p: {"delta": p["delta"], "delta_prime": _mid(1.0, p["delta"])}, "delta",
     lambda c: c["delta"] <= c["delta_prime"])

# Linnik
_reg("LINNIK_VIA_STABLE_WEIBULL", "Linnik",
     "Linnik law as a symmetric stable scale mixture with Weibull mixing",
     lambda g, c, n: sym_stable_(g, c["alpha"], n) * weibull_(g, c["alpha"], n),
     lambda p: {"alpha": p["alpha"]}, "alpha")
_reg("LINNIK_VIA_NORMAL_ML", "Linnik",
     "Linnik law as a normal scale mixture with Mittag-Leffler mixing of half index",
     lambda g, c, n: normal_(g, n)
     * np.sqrt(c["c"] * _ml_stable_weibull(g, c["alpha"] / 2.0, n)),
     lambda p: {"alpha": p["alpha"], "c": 2.0}, "alpha")
_reg("LINNIK_VIA_STABLE_ML", "Linnik",
     "Linnik law as a symmetric stable law scaled by a Mittag-Leffler power",
     lambda g, c, n: sym_stable_(g, c["alpha_s"], n)
     * _ml_k_exp(g, c["alpha"] / c["alpha_s"], n) ** (1.0 / c["alpha_s"]),
     lambda p: {"alpha": p["alpha"], "alpha_s": _mid(2.0, p["alpha"])}, "alpha",
     lambda c: c["alpha"] <= c["alpha_s"])
_reg("LINNIK_VIA_LAPLACE_RATIO", "Linnik",
     "Linnik law as a Laplace scale mixture with stable-ratio mixing",
     lambda g, c, n: laplace_inverse_(g, n)
     * np.sqrt(stable_ratio_(g, c["alpha"] / 2.0, n)),
     lambda p: {"alpha": p["alpha"]}, "alpha")
_reg("LINNIK_VIA_LAPLACE_Q", "Linnik",
     "Linnik law as a Laplace scale mixture with Q_(alpha,2) mixing",
     lambda g, c, n: laplace_inverse_(g, n) * ratio_q_(g, c["alpha"], 2.0, n),
     lambda p: {"alpha": p["alpha"]}, "alpha")
_reg("LINNIK_VIA_Q_STEP", "Linnik",
     "Linnik law as a scale mixture of a Linnik law with larger index",
     lambda g, c, n: sym_stable_(g, c["alpha_prime"], n)
     * weibull_(g, c["alpha_prime"], n)
     * ratio_q_(g, c["alpha"], c["alpha_prime"], n),
     lambda p: {"alpha": p["alpha"], "alpha_prime": _mid(2.0, p["alpha"])}, "alpha",
     lambda c: c["alpha"] <= c["alpha_prime"])

# Weibull and exponential
_reg("WEIBULL_VIA_RAYLEIGH", "Weibull",
     "Weibull law as a scale mixture of Rayleigh laws",
     lambda g, c, n: rayleigh_(g, n) / np.sqrt(pos_stable_(g, c["gamma"] / 2.0, n)),
     lambda p: {"gamma": p["gamma"]}, "gamma", lambda c: c["gamma"] <= 2.0)
_reg("WEIBULL_VIA_EXP", "Weibull",
     "Weibull law with shape at most one is mixed exponential with T mixing",
     lambda g, c, n: exp_(g, n) * t_(g, c["gamma"], n) / 2.0,
     lambda p: {"gamma": p["gamma"]}, "gamma", lambda c: c["gamma"] <= 1.0)
_reg("WEIBULL_VIA_WEIBULL", "Weibull",
     "Weibull law as a scale mixture of a Weibull law with larger shape",
     lambda g, c, n: weibull_(g, c["gamma_prime"], n)
     * pos_stable_(g, c["gamma"] / c["gamma_prime"], n) ** (-1.0 / c["gamma_prime"]),
     lambda p: {"gamma": p["gamma"], "gamma_prime": 2.0 * p["gamma"]}, "gamma",
     lambda c: c["gamma"] <= c["gamma_prime"])
_reg("WEIBULL_POWER", "Weibull",
     "power of a Weibull variable is Weibull",
     lambda g, c, n: weibull_(g, c["gamma_prime"], n) ** (c["gamma_prime"] / c["gamma"]),
     lambda p: {"gamma": p["gamma"], "gamma_prime": 2.0}, "gamma")
_reg("EXP_VIA_WEIBULL", "Exponential",
     "exponential law as a scale mixture of Weibull laws with shape at least one",
     lambda g, c, n: weibull_(g, c["gamma"], n)
     * pos_stable_(g, 1.0 / c["gamma_mix"], n) ** (-1.0 / c["gamma_mix"]),
     lambda p: {"gamma": 2.0, "gamma_mix": 2.0}, "gamma")
_reg("EXP_VIA_HALF_NORMAL", "Exponential",
     "exponential law as a half-normal scale mixture with exponential mixing",
     lambda g, c, n: np.sqrt(c["c"] * exp_(g, n)) * np.abs(normal_(g, n)),
     lambda p: {"c": 2.0}, "c")

# two-sided Mittag-Leffler and one-sided Linnik
_reg("TWOSIDED_ML_VIA_SIGN", "TwoSidedML",
     "two-sided Mittag-Leffler law as randomization symmetrization",
     lambda g, c, n: sign_(g, n) * _ml_k_exp(g, c["delta"], n),
     lambda p: {"delta": p["delta"]}, "delta")
_reg("TWOSIDED_ML_VIA_NORMAL", "TwoSidedML",
     "two-sided Mittag-Leffler law as a normal scale mixture with mixing H_delta/4",
     lambda g, c, n: normal_(g, n) * np.sqrt(c["c"] * exp_(g, n))
     * stable_ratio_(g, c["delta"], n),
     lambda p: {"delta": p["delta"], "c": 2.0}, "delta")
_reg("TWOSIDED_ML_VIA_LAPLACE", "TwoSidedML",
     "symmetrized mixed exponential law is the Laplace law with the same mixing",
     lambda g, c, n: laplace_inverse_(g, n)
     * (k_(g, c["delta"], n) ** (1.0 / c["delta"]) if c["delta"] < 1 else 1.0),
     lambda p: {"delta": p["delta"]}, "delta")
_reg("ONESIDED_LINNIK_VIA_ABS_NORMAL", "OneSidedLinnik",
     "one-sided Linnik law as a half-normal scale mixture with Mittag-Leffler mixing",
     lambda g, c, n: np.abs(normal_(g, n))
     * np.sqrt(c["c"] * _ml_k_exp(g, c["alpha"] / 2.0, n)),
     lambda p: {"alpha": p["alpha"], "c": 2.0}, "alpha")
_reg("ONESIDED_LINNIK_VIA_WEIBULL", "OneSidedLinnik",
     "one-sided Linnik law as a Weibull scale mixture with stable and stable-ratio mixing",
     lambda g, c, n: weibull_(g, c["gamma"], n)
     * pos_stable_(g, 1.0 / c["gamma"], n) ** (-1.0 / c["gamma"])
     * np.sqrt(stable_ratio_(g, c["alpha"] / 2.0, n)),
     lambda p: {"alpha": p["alpha"], "gamma": 2.0}, "alpha")

# stable laws
_reg("STABLE_DIRECT", "SymmetricStable",
     "symmetric stable law by the Chambers-Mallows-Stuck transform",
     lambda g, c, n: sym_stable_(g, c["alpha"], n),
     lambda p: {"alpha": p["alpha"]}, "alpha")
_reg("STABLE_VIA_NORMAL", "SymmetricStable",
     "symmetric stable law as a normal scale mixture with positive stable mixing",
     lambda g, c, n: normal_(g, n) * np.sqrt(c["c"] * pos_stable_(g, c["alpha"] / 2.0, n)),
     lambda p: {"alpha": p["alpha"], "c": 2.0}, "alpha")
_reg("STABLE_COMPOSE", "SymmetricStable",
     "symmetric stable law as a symmetric stable law scaled by a positive stable power",
     lambda g, c, n: sym_stable_(g, c["alpha_s"], n)
     * pos_stable_(g, c["alpha"] / c["alpha_s"], n) ** (1.0 / c["alpha_s"]),
     lambda p: {"alpha": p["alpha"], "alpha_s": _mid(2.0, p["alpha"])}, "alpha",
     lambda c: c["alpha"] <= c["alpha_s"])
_reg("POSITIVE_STABLE_KANTER", "PositiveStable",
     "positive stable law by Kanter's transform",
     lambda g, c, n: pos_stable_(g, c["delta"], n),
     lambda p: {"delta": p["delta"]}, "delta")

# Laplace
_reg("LAPLACE_INVERSE", "Laplace", "Laplace law by inverse distribution function",
     lambda g, c, n: laplace_inverse_(g, n), lambda p: {}, "")
_reg("LAPLACE_VIA_NORMAL", "Laplace",
     "Laplace law as a normal scale mixture with exponential mixing",
     lambda g, c, n: laplace_normal_(g, n, c["c"]), lambda p: {"c": 2.0}, "c")

# mixing laws
_reg("K_INVERSE", "KozubowskiK", "K_rho by closed-form inverse distribution function",
     lambda g, c, n: k_(g, c["rho"], n), lambda p: {"rho": p["rho"]}, "rho",
     lambda c: 0 < c["rho"] <= 1)
_reg("K_VIA_STABLE_RATIO", "KozubowskiK",
     "K_rho as a power of a ratio of positive stable laws",
     lambda g, c, n: stable_ratio_(g, c["rho"], n) ** c["rho"],
     lambda p: {"rho": p["rho"]}, "rho", lambda c: 0 < c["rho"] <= 1)
_reg("RATIO_Q_INVERSE", "RatioQ", "Q_(alpha,alpha') by closed-form inverse distribution function",
     lambda g, c, n: ratio_q_(g, c["alpha"], c["alpha_prime"], n),
     lambda p: {"alpha": p["alpha"], "alpha_prime": p["alpha_prime"]}, "alpha",
     lambda c: c["alpha"] <= c["alpha_prime"])
_reg("RATIO_Q_VIA_STABLE_RATIO", "RatioQ",
     "Q_(alpha,alpha') as a power of a ratio of positive stable laws",
     lambda g, c, n: stable_ratio_(g, c["alpha"] / c["alpha_prime"], n)
     ** (1.0 / c["alpha_prime"]),
     lambda p: {"alpha": p["alpha"], "alpha_prime": p["alpha_prime"]}, "alpha",
     lambda c: c["alpha"] <= c["alpha_prime"])
_reg("STABLE_RATIO_DIRECT", "StableRatio", "ratio of two independent positive stable draws",
     lambda g, c, n: stable_ratio_(g, c["alpha"], n), lambda p: {"alpha": p["alpha"]},
     "alpha", lambda c: 0 < c["alpha"] < 1)
_reg("STABLE_RATIO_VIA_K", "StableRatio", "stable ratio as a power of K_alpha",
     lambda g, c, n: k_(g, c["alpha"], n) ** (1.0 / c["alpha"]),
     lambda p: {"alpha": p["alpha"]}, "alpha", lambda c: 0 < c["alpha"] < 1)
_reg("HDELTA_DIRECT", "HDelta", "H_delta as 8 W_1 times a squared stable ratio",
     lambda g, c, n: hdelta_(g, c["delta"], n), lambda p: {"delta": p["delta"]}, "delta")
_reg("HDELTA_VIA_K", "HDelta", "H_delta as 8 W_1 times a power of K_delta",
     lambda g, c, n: 8.0 * exp_(g, n) * (k_(g, c["delta"], n) ** (2.0 / c["delta"])),
     lambda p: {"delta": p["delta"]}, "delta")

# Representation ids that reproduce a paper identity (the minimum set); the
# remaining ids are auxiliary constructions used by the verifier.
CORE_RECIPES = (
    "ML_VIA_STABLE_WEIBULL", "ML_VIA_K_EXP", "ML_VIA_EXP_RATIO", "ML_VIA_HALF_NORMAL",
    "ML_VIA_WEIBULL_MIX", "ML_VIA_K_STEP", "LINNIK_VIA_STABLE_WEIBULL",
    "LINNIK_VIA_NORMAL_ML", "LINNIK_VIA_STABLE_ML", "LINNIK_VIA_LAPLACE_RATIO",
    "LINNIK_VIA_LAPLACE_Q", "LINNIK_VIA_Q_STEP", "WEIBULL_VIA_RAYLEIGH",
    "WEIBULL_VIA_EXP", "WEIBULL_VIA_WEIBULL", "EXP_VIA_WEIBULL", "EXP_VIA_HALF_NORMAL",
    "TWOSIDED_ML_VIA_SIGN", "TWOSIDED_ML_VIA_NORMAL", "ONESIDED_LINNIK_VIA_ABS_NORMAL",
    "ONESIDED_LINNIK_VIA_WEIBULL", "STABLE_COMPOSE", "WEIBULL_POWER",
)


def recipe_ids() -> tuple:
    return tuple(_DEFS)


def recipes_for(family_name: str) -> tuple:
    """Representation ids whose target family is ``family_name``."""
    return tuple(k for k, d in _DEFS.items() if d.family == family_name)


def recipe_def(rep_id: str) -> RecipeDef:
    try:
        return _DEFS[rep_id]
    except KeyError:
        raise RecipeError(
            f"unknown recipe {rep_id!r}; valid ids: {', '.join(sorted(_DEFS))}") from None


def make_recipe(rep_id: str, target: FamilySpec | None = None, **params) -> Recipe:
    """Build a registered recipe.

    The target is given either as a FamilySpec or by keyword parameters of
    the recipe's family.  Construction parameters default from the target
    and may be overridden by keywords naming them (e.g. ``delta_prime``).
    """
    d = recipe_def(rep_id)
    fam_keys = {"delta", "alpha", "gamma", "rho", "alpha_prime", "p"}
    if target is None:
        from .families import family_params
        names = family_params(d.family)
        target = FamilySpec(d.family, {k: params[k] for k in names if k in params})
    elif target.name != d.family:
        raise RecipeError(f"recipe {rep_id} targets {d.family}, not {target.name}")
    construction = d.defaults(target.param_dict)
    for k, v in params.items():
        if k in construction and k not in target.param_dict:
            construction[k] = float(v)
        elif k not in fam_keys and k not in construction:
            raise RecipeError(f"recipe {rep_id} has no parameter {k!r}")
    if not d.valid(construction):
        raise ValueError(f"invalid construction parameters for {rep_id}: {construction}")
    return Recipe(target, rep_id, d.citation, tuple(sorted(construction.items())))


def perturbed(recipe: Recipe, shift: float = 0.15) -> Recipe:
    """Same target, primary construction parameter moved by ``shift``.

    If ``+shift`` leaves the valid range the parameter moves by ``-shift``.
    """
    d = recipe_def(recipe.rep_id)
    if not d.primary:
        raise ValueError(f"{recipe.rep_id} has no tunable parameter")
    for s in (shift, -shift):
        c = recipe.params
        c[d.primary] = c[d.primary] + s
        if _construction_ok(d, c):
            return Recipe(recipe.target, recipe.rep_id, d.citation + " [perturbed]",
                          tuple(sorted(c.items())))
    raise ValueError(f"cannot perturb {recipe.rep_id} by +-{shift}")


def _construction_ok(d, c):
    for k, v in c.items():
        if v <= 0:
            return False
        if k in ("delta", "delta_prime", "rho") and v > 1:
            return False
        if k in ("alpha", "alpha_prime", "alpha_s") and v > 2:
            return False
    return bool(d.valid(c))


def draw(recipe: Recipe, g, n) -> np.ndarray:
    """Array-level draw (no provenance)."""
    return _DEFS[recipe.rep_id].build(g, recipe.params, n)


def sample_target(recipe: Recipe, rng, n) -> SampleBatch:
    """Draw ``n`` values of the recipe's target law by its construction."""
    if recipe.rep_id not in _DEFS:
        recipe_def(recipe.rep_id)
    n = _check_n(n)
    vals = draw(recipe, as_generator(rng), n)
    return SampleBatch(vals, recipe.target, recipe.rep_id, _stream(rng), recipe)
