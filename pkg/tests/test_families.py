import pytest
from hypothesis import given, strategies as st

from heavytail.families import (FAMILIES, FamilyError, FamilySpec, Linnik, MittagLeffler,
                                RatioQ, family_params)


@pytest.mark.parametrize("name, params", [
    ("MittagLeffler", {"delta": 0.0}),
    ("MittagLeffler", {"delta": 1.2}),
    ("Linnik", {"alpha": 2.5}),
    ("Weibull", {"gamma": -1.0}),
    ("KozubowskiK", {"rho": 1.0}),
    ("RatioQ", {"alpha": 1.5, "alpha_prime": 1.0}),
    ("RatioQ", {"alpha": 1.0, "alpha_prime": 1.0}),
    ("Geometric", {"p": 1.0}),
    ("StableRatio", {"alpha": 1.0}),
])
def test_out_of_range_rejected(name, params):
    with pytest.raises(FamilyError):
        FamilySpec(name, params)


def test_unknown_and_extra_parameters():
    with pytest.raises(FamilyError, match="unknown family"):
        FamilySpec("Gumbel", {})
    with pytest.raises(FamilyError, match="takes no"):
        FamilySpec("Exponential", {"delta": 0.5})
    with pytest.raises(FamilyError, match="requires"):
        FamilySpec("Linnik", {})


def test_boundaries_accepted():
    assert MittagLeffler(1.0)["delta"] == 1.0
    assert Linnik(2.0)["alpha"] == 2.0
    assert RatioQ(0.5, 2.0).param_dict == {"alpha": 0.5, "alpha_prime": 2.0}


def test_value_semantics():
    a = FamilySpec("Linnik", {"alpha": 1})
    b = Linnik(1.0)
    assert a == b and hash(a) == hash(b)
    assert str(b) == "Linnik(alpha=1)"
    assert b.symmetric and not b.nonnegative


def test_every_family_listed():
    assert len(FAMILIES) == 17
    for f in FAMILIES:
        assert isinstance(family_params(f), tuple)


@given(st.floats(min_value=1e-6, max_value=1.0))
def test_delta_range_roundtrip(d):
    assert MittagLeffler(d).to_dict() == {"family": "MittagLeffler", "params": {"delta": d}}
