"""Parametric family descriptors.

A :class:`FamilySpec` is an immutable, validated tag naming one law from the
Mittag-Leffler / Linnik toolbox together with its shape parameters.  Scale is
always the standard one; there is no scale field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping


class FamilyError(ValueError):
    """Raised for unknown families or out-of-range parameters."""


def _open01(v):
    return 0.0 < v < 1.0


def _half_open01(v):
    return 0.0 < v <= 1.0


def _half_open02(v):
    return 0.0 < v <= 2.0


def _positive(v):
    return v > 0.0


# family name -> ordered (parameter name, range check, human readable range)
_PARAMS = {
    "MittagLeffler": (("delta", _half_open01, "(0, 1]"),),
    "Linnik": (("alpha", _half_open02, "(0, 2]"),),
    "TwoSidedML": (("delta", _half_open01, "(0, 1]"),),
    "OneSidedLinnik": (("alpha", _half_open02, "(0, 2]"),),
    "Weibull": (("gamma", _positive, "(0, inf)"),),
    "Exponential": (),
    "Rayleigh": (),
    "Laplace": (),
    "Normal": (),
    "HalfNormal": (),
    "PositiveStable": (("delta", _half_open01, "(0, 1]"),),
    "SymmetricStable": (("alpha", _half_open02, "(0, 2]"),),
    "KozubowskiK": (("rho", _open01, "(0, 1)"),),
    "RatioQ": (("alpha", _positive, "(0, alpha_prime)"),
               ("alpha_prime", _half_open02, "(alpha, 2]")),
    "StableRatio": (("alpha", _open01, "(0, 1)"),),
    "HDelta": (("delta", _half_open01, "(0, 1]"),),
    "Geometric": (("p", _open01, "(0, 1)"),),
}

NONNEGATIVE = frozenset({
    "MittagLeffler", "OneSidedLinnik", "Weibull", "Exponential", "Rayleigh",
    "HalfNormal", "PositiveStable", "KozubowskiK", "RatioQ", "StableRatio",
    "HDelta", "Geometric",
})

SYMMETRIC = frozenset({
    "Linnik", "TwoSidedML", "Laplace", "Normal", "SymmetricStable",
})

FAMILIES = tuple(_PARAMS)


@dataclass(frozen=True)
class FamilySpec:
    """A named family with validated dimensionless parameters.

    Parameters
    ----------
    name : str
        One of :data:`FAMILIES`.
    params : mapping
        Parameter values keyed by name (``delta``, ``alpha``, ``alpha_prime``,
        ``gamma``, ``rho`` or ``p``).  Stored as a sorted tuple so specs are
        hashable and compare by value.
    """

    name: str
    params: tuple = field(default=())

    def __init__(self, name: str, params: Mapping[str, float] | tuple = ()):
        if name not in _PARAMS:
            raise FamilyError(
                f"unknown family {name!r}; valid: {', '.join(FAMILIES)}")
        given = dict(params)
        expected = _PARAMS[name]
        names = {p[0] for p in expected}
        extra = set(given) - names
        if extra:
            raise FamilyError(f"{name} takes no parameter(s) {sorted(extra)}")
        values = {}
        for pname, check, rng in expected:
            if pname not in given:
                raise FamilyError(f"{name} requires parameter {pname!r}")
            v = float(given[pname])
            if not check(v):
                raise FamilyError(f"{name}: {pname}={v!r} outside {rng}")
            values[pname] = v
        if name == "RatioQ" and not values["alpha"] < values["alpha_prime"]:
            raise FamilyError(
                f"RatioQ needs alpha < alpha_prime, got {values['alpha']!r} "
                f">= {values['alpha_prime']!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "params", tuple(sorted(values.items())))

    def __getitem__(self, key: str) -> float:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    @property
    def nonnegative(self) -> bool:
        return self.name in NONNEGATIVE

    @property
    def symmetric(self) -> bool:
        return self.name in SYMMETRIC

    def to_dict(self) -> dict:
        return {"family": self.name, "params": self.param_dict}

    def __str__(self) -> str:
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.name}({inner})"


def family_params(name: str) -> tuple:
    """Parameter names of ``name`` in canonical order."""
    if name not in _PARAMS:
        raise FamilyError(f"unknown family {name!r}")
    return tuple(p[0] for p in _PARAMS[name])


# Short constructors.
def MittagLeffler(delta):
    return FamilySpec("MittagLeffler", {"delta": delta})


def Linnik(alpha):
    return FamilySpec("Linnik", {"alpha": alpha})


def TwoSidedML(delta):
    return FamilySpec("TwoSidedML", {"delta": delta})


def OneSidedLinnik(alpha):
    return FamilySpec("OneSidedLinnik", {"alpha": alpha})


def Weibull(gamma):
    return FamilySpec("Weibull", {"gamma": gamma})


def Exponential():
    return FamilySpec("Exponential")


def Rayleigh():
    return FamilySpec("Rayleigh")


def Laplace():
    return FamilySpec("Laplace")


def Normal():
    return FamilySpec("Normal")


def HalfNormal():
    return FamilySpec("HalfNormal")


def PositiveStable(delta):
    return FamilySpec("PositiveStable", {"delta": delta})


def SymmetricStable(alpha):
    return FamilySpec("SymmetricStable", {"alpha": alpha})


def KozubowskiK(rho):
    return FamilySpec("KozubowskiK", {"rho": rho})


def RatioQ(alpha, alpha_prime):
    return FamilySpec("RatioQ", {"alpha": alpha, "alpha_prime": alpha_prime})


def StableRatio(alpha):
    return FamilySpec("StableRatio", {"alpha": alpha})


def HDelta(delta):
    return FamilySpec("HDelta", {"delta": delta})


def Geometric(p):
    return FamilySpec("Geometric", {"p": p})
