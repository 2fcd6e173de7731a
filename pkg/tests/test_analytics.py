import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from heavytail import analytics as an
from heavytail.families import (Exponential, FamilySpec, HDelta, HalfNormal, KozubowskiK,
                                Laplace, Linnik, MittagLeffler, Normal, OneSidedLinnik,
                                PositiveStable, RatioQ, Rayleigh, StableRatio,
                                SymmetricStable, TwoSidedML, Weibull)

from conftest import load_fixture

ORACLE = load_fixture("analytic_oracle.json")


# --- Mittag-Leffler function -------------------------------------------------

def test_ml_function_examples():
    assert an.mittag_leffler_function(1.0, -2.0) == pytest.approx(math.exp(-2), abs=1e-15)
    assert an.mittag_leffler_function(0.5, 0.0) == 1.0
    # frozen from an extended-precision series summation
    assert an.mittag_leffler_function(0.5, -1.0) == pytest.approx(0.42758357615580700, rel=1e-14)
    assert an.mittag_leffler_function(0.5, -1.0) == pytest.approx(
        math.e * special.erfc(1.0), rel=1e-14)


def test_ml_function_matches_oracle():
    for delta, beta, z, ref in ORACLE["ml_function"]:
        got = an.mittag_leffler_function(delta, z, beta=beta)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-300), (delta, beta, z)


@given(st.floats(min_value=0.0, max_value=50.0))
def test_ml_function_delta_one_is_exponential(x):
    assert an.mittag_leffler_function(1.0, -x) == pytest.approx(math.exp(-x), rel=1e-12,
                                                                  abs=1e-300)


def test_ml_function_uses_all_regions():
    z = np.array([-1.0, -10.0, -40.0])
    vals, region = an.mittag_leffler_function(0.5, z, return_region=True)
    assert list(region) == ["series", "integral", "asymptotic"]
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    assert np.allclose(vals, special.erfcx(-z), rtol=1e-12)


def test_ml_function_errors():
    with pytest.raises(ValueError):
        an.mittag_leffler_function(1.5, 1.0)
    with pytest.raises(ValueError):
        an.mittag_leffler_function(0.5, np.inf)
    tight = an.EvalPolicy(series_tol=1e-14, quad_tol=1e-30)
    with pytest.raises(an.MittagLefflerEvaluationError) as info:
        an.mittag_leffler_function(0.3, -6.0, policy=tight)
    assert info.value.region == "integral"
    assert info.value.residual >= 0


@pytest.mark.parametrize("kwargs", [
    {"series_tol": 0.0}, {"quad_tol": -1.0},
    {"series_max": 30.0, "asymptotic_min": 20.0}, {"max_terms": 0},
])
def test_eval_policy_validation(kwargs):
    with pytest.raises(ValueError):
        an.EvalPolicy(**kwargs)


# --- densities ---------------------------------------------------------------

def test_pdf_examples():
    assert an.pdf(Laplace(), 0.0) == 0.5
    assert an.pdf(KozubowskiK(0.5), 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
    # the ratio density at alpha=1/2, x=1 reduces to 1/(2 pi)
    assert an.pdf(StableRatio(0.5), 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    # frozen from an extended-precision oracle
    assert an.pdf(MittagLeffler(0.7), 1.5) == pytest.approx(0.13019980320078571, rel=1e-12)


def test_stable_ratio_density_matches_simulation():
    # independent check of the 1/(2 pi) value: histogram of S/S' ratios
    rng = np.random.default_rng(1)
    from heavytail.samplers import pos_stable_
    r = pos_stable_(rng, 0.5, 400_000) / pos_stable_(rng, 0.5, 400_000)
    est = np.mean(np.abs(r - 1.0) < 0.05) / 0.1
    assert est == pytest.approx(1 / (2 * math.pi), abs=0.01)


def test_pdf_matches_oracle():
    for delta, x, ref in ORACLE["ml_pdf"]:
        assert an.pdf(MittagLeffler(delta), x) == pytest.approx(ref, rel=1e-11)
        assert an.pdf(MittagLeffler(delta), x, method="integral") == pytest.approx(ref, rel=1e-10)


def test_pdf_unsupported_is_explicit():
    with pytest.raises(an.UnsupportedError):
        an.pdf(PositiveStable(0.7), 1.0)
    with pytest.raises(an.UnsupportedError):
        an.pdf(SymmetricStable(1.5), 1.0)
    with pytest.raises(an.UnsupportedError):
        an.cdf(PositiveStable(0.3), 1.0)
    with pytest.raises(ValueError):
        an.pdf(Laplace(), 0.0, method="spline")


def test_support_below_zero():
    for spec in (MittagLeffler(0.5), Weibull(0.7), HDelta(0.5), OneSidedLinnik(1.2),
                 KozubowskiK(0.3), HalfNormal()):
        assert an.pdf(spec, -1.0) == 0.0
        assert an.cdf(spec, -1.0) == 0.0


# --- distribution functions --------------------------------------------------

def test_cdf_examples():
    assert an.cdf(MittagLeffler(1.0), 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-15)
    assert an.cdf(Linnik(2.0), 0.0) == 0.5
    assert an.cdf(HDelta(1.0), 8 * math.log(2)) == pytest.approx(0.5, abs=1e-15)
    assert an.cdf(MittagLeffler(0.7), 1.5) == pytest.approx(0.68308137351215877, rel=1e-12)


@pytest.mark.parametrize("key, family", [
    ("ml_cdf", MittagLeffler), ("linnik_cdf", Linnik), ("two_sided_ml_cdf", TwoSidedML)])
def test_cdf_matches_oracle(key, family):
    for p, x, ref in ORACLE[key]:
        assert an.cdf(family(p), x) == pytest.approx(ref, abs=1e-10)
        assert an.cdf_fast(family(p))(np.array([x]))[0] == pytest.approx(ref, abs=1e-9)


def test_cdf_limits_and_monotone():
    x = np.linspace(-50, 50, 401)
    for spec in (Linnik(0.8), TwoSidedML(0.4), Laplace(), SymmetricStable(1.0)):
        f = an.cdf(spec, x)
        assert np.all(np.diff(f) >= -1e-15)
        assert an.cdf(spec, -np.inf) == 0.0 and an.cdf(spec, np.inf) == 1.0


def test_ml_cdf_series_vs_integral():
    x = np.geomspace(0.1, 10, 25)
    for d in (0.3, 0.5, 0.7, 0.9):
        a = an.cdf(MittagLeffler(d), x)
        b = an.cdf(MittagLeffler(d), x, method="integral")
        assert np.max(np.abs(a - b)) < 1e-10


def test_one_sided_linnik_is_folded():
    x = np.linspace(0, 20, 81)
    for a in (0.5, 1.0, 1.5):
        lhs = an.cdf(OneSidedLinnik(a), x)
        rhs = 2 * an.cdf(Linnik(a), x) - 1
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_symmetry():
    x = np.linspace(0.05, 10, 30)
    for spec in (Linnik(0.7), Linnik(1.5), TwoSidedML(0.3), TwoSidedML(0.8)):
        assert np.allclose(an.pdf(spec, x), an.pdf(spec, -x), rtol=0, atol=0)
        assert an.cdf(spec, 0.0) == 0.5


# --- derivative, normalisation, quantile -----------------------------------------

CONTINUOUS = [
    MittagLeffler(0.3), MittagLeffler(0.7), MittagLeffler(1.0), Linnik(0.6), Linnik(1.0),
    Linnik(1.6), Linnik(2.0), TwoSidedML(0.5), OneSidedLinnik(1.2), Weibull(0.6),
    Weibull(2.5), Exponential(), Rayleigh(), Laplace(), Normal(), HalfNormal(),
    PositiveStable(0.5), SymmetricStable(1.0), SymmetricStable(2.0), KozubowskiK(0.3),
    RatioQ(0.8, 1.6), StableRatio(0.5), HDelta(0.5), HDelta(1.0),
]


def _grid(spec):
    pos = np.geomspace(0.1, 10, 50 if spec.nonnegative else 25)
    return pos if spec.nonnegative else np.concatenate([-pos[::-1], pos])


@pytest.mark.parametrize("spec", CONTINUOUS, ids=str)
def test_derivative_of_cdf_is_pdf(spec):
    x = _grid(spec)
    h = 1e-4 * np.maximum(np.abs(x), 1e-2)
    deriv = (an.cdf(spec, x + h) - an.cdf(spec, x - h)) / (2 * h)
    assert np.max(np.abs(deriv - an.pdf(spec, x))) < 1e-5


@pytest.mark.parametrize("spec", CONTINUOUS, ids=str)
def test_density_integrates_to_one(spec):
    # integrate in log x so the power singularities at 0 are harmless
    hi = 1e12

    def half(sign):
        def g(t):
            return float(an.pdf(spec, sign * math.exp(t))) * math.exp(t)
        return sum(integrate.quad(g, a, b, limit=400)[0]
                   for a, b in ((-40.0, 0.0), (0.0, 10.0), (10.0, math.log(hi))))

    total = half(1.0) + (0.0 if spec.nonnegative else half(-1.0))
    try:
        closure = float(an.tail_law(spec).survival(hi))
    except an.UnsupportedError:
        closure = 0.0
    total += closure if spec.nonnegative else 2 * closure
    assert 0.999 <= total <= 1.001


@pytest.mark.parametrize("spec", CONTINUOUS, ids=str)
def test_quantile_round_trip(spec):
    for q in (0.01, 0.1, 0.5, 0.9, 0.99):
        assert an.cdf(spec, an.quantile(spec, q)) == pytest.approx(q, abs=1e-8)


def test_quantile_examples():
    assert an.quantile(Exponential(), 1 - math.exp(-1)) == pytest.approx(1.0, rel=1e-15)
    assert an.quantile(Laplace(), 0.5) == 0.0
    x = an.quantile(MittagLeffler(0.7), 0.9)
    assert an.cdf(MittagLeffler(0.7), x) == pytest.approx(0.9, abs=1e-8)
    with pytest.raises(ValueError):
        an.quantile(Exponential(), 1.0)


# --- transforms ---------------------------------------------------------------

def test_transform_examples():
    assert an.transform(MittagLeffler(0.5), 1.0, "laplace") == pytest.approx(0.5)
    assert an.transform(Linnik(1.0), 1.0, "charfun") == pytest.approx(0.5)
    want = (1 + math.sqrt(2) / 2) / (2 + math.sqrt(2))
    assert an.transform(TwoSidedML(0.5), 1.0, "charfun") == pytest.approx(want, rel=1e-15)


def test_two_sided_ml_charfun_is_real_part():
    # the symmetrised law has the real part of the one-sided characteristic function
    t = np.linspace(-5, 5, 41)
    for d in (0.3, 0.7):
        one = an.transform(MittagLeffler(d), t, "charfun")
        two = an.transform(TwoSidedML(d), t, "charfun")
        assert np.allclose(two.real, one.real, atol=1e-14)
        assert np.all(two.imag == 0)


@given(st.floats(min_value=-5, max_value=5), st.sampled_from([0.3, 0.9, 1.0, 1.7, 2.0]))
def test_symmetric_stable_charfun(t, alpha):
    v = an.transform(SymmetricStable(alpha), t, "charfun")
    assert v.imag == 0 and v.real > 0
    assert v.real == pytest.approx(math.exp(-abs(t) ** alpha), abs=1e-12)


def test_transform_errors():
    with pytest.raises(an.UnsupportedError):
        an.transform(Linnik(1.0), 1.0, "laplace")
    with pytest.raises(an.UnsupportedError):
        an.transform(HDelta(0.5), 1.0, "laplace")
    with pytest.raises(ValueError):
        an.transform(MittagLeffler(0.5), 1.0, "mellin")


# --- tails ---------------------------------------------------------------------

def test_tail_law_examples():
    law = an.tail_law(MittagLeffler(0.5))
    assert law.exponent == 0.5
    assert law.constant == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    assert an.tail_law(MittagLeffler(0.9999)).constant < 1e-3
    lin = an.tail_law(Linnik(1.0))
    assert lin.exponent == 1.0
    assert [a[1] for a in lin.alternatives] == [0.5]
    with pytest.raises(an.UnsupportedError):
        an.tail_law(MittagLeffler(1.0))
    with pytest.raises(an.UnsupportedError):
        an.tail_law(Normal())


@pytest.mark.parametrize("spec, x", [
    (MittagLeffler(0.5), 1e8), (Linnik(1.0), 1e6), (Linnik(1.5), 1e5), (HDelta(0.5), 1e10),
    (OneSidedLinnik(0.8), 1e7), (TwoSidedML(0.6), 1e8), (KozubowskiK(0.4), 1e8)])
def test_tail_law_matches_survival(spec, x):
    law = an.tail_law(spec)
    assert float(an.sf(spec, x)) / float(law.survival(x)) == pytest.approx(1.0, rel=2e-2)


def test_tail_law_validation():
    with pytest.raises(ValueError):
        an.TailLaw(0.0, 1.0, Normal())
