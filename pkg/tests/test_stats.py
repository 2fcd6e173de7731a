import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from heavytail import samplers as sm
from heavytail.families import (Exponential, FamilySpec, HDelta, Laplace, Linnik,
                                MittagLeffler, PositiveStable, TwoSidedML, Weibull)
from heavytail.analytics import UnsupportedError, transform
from heavytail.rng import RngStream
from heavytail.stats import (ECDF, GofReport, TailEstimate, ks_critical, ks_distance_one,
                             ks_distance_two, ks_one_sample, ks_two_sample, mc_transform,
                             tail_slope)

small_samples = arrays(np.float64, st.integers(1, 40),
                       elements=st.integers(-5, 5).map(float))


# --- ECDF and KS primitives ------------------------------------------------------

@given(small_samples)
def test_ecdf_properties(x):
    f = ECDF(x)
    assert np.all(np.diff(f.levels) > 0) and f.levels[-1] == pytest.approx(1.0)
    for p, j in zip(f.points, f.jumps):
        assert j == pytest.approx(np.sum(x == p) / x.size)
        assert f(p) - f.left(p) == pytest.approx(j)
        assert f(p + 1e-9) == f(p)  # right-continuous
    grid = np.linspace(-6, 6, 49)
    assert np.all(np.diff(f(grid)) >= 0)


@given(small_samples, small_samples)
def test_ks_two_sample_symmetric(a, b):
    assert ks_distance_two(a, b) == ks_distance_two(b, a)
    assert 0 <= ks_distance_two(a, b) <= 1


def test_ks_distance_one_matches_scipy():
    from scipy import stats as sps
    x = np.random.default_rng(0).exponential(size=5000)
    cdf = lambda v: -np.expm1(-np.maximum(v, 0))
    assert ks_distance_one(x, cdf) == pytest.approx(sps.kstest(x, cdf).statistic, abs=1e-15)


def test_ks_distance_one_handles_atoms():
    x = np.ones(100)
    assert ks_distance_one(x, lambda v: np.where(v >= 1, 1.0, 0.0)) == 0.0


def test_ks_critical_value():
    c = math.sqrt(-math.log(5e-4) / 2)
    assert ks_critical(1e-3, 100) == pytest.approx(c / 10)
    assert ks_critical(1e-3, 100, 100) == pytest.approx(c * math.sqrt(0.02))
    with pytest.raises(ValueError):
        ks_critical(0.0, 10)


# --- spec examples -------------------------------------------------------------

def _exp(seed, n):
    return sm.sample_primitive(Exponential(), RngStream(seed), n)


def test_two_sample_examples():
    a = _exp(1, 10_000)
    r = ks_two_sample(a, a)
    assert r.statistic == 0 and r.passed
    w = sm.sample_primitive(Weibull(0.5), RngStream(2), 10_000)
    assert not ks_two_sample(a, w).passed
    passes = sum(ks_two_sample(_exp(100 + s, 10_000), _exp(200 + s, 10_000)).passed
                 for s in range(20))
    assert passes >= 18


def test_one_sample_examples():
    assert ks_one_sample(_exp(3, 10_000), Exponential()).passed
    ml = sm.sample_target(sm.make_recipe("ML_VIA_K_EXP", delta=0.5), RngStream(4), 100_000)
    assert ks_one_sample(ml, MittagLeffler(0.5)).statistic < 0.01
    lap = sm.sample_primitive(Laplace(), RngStream(5), 100_000)
    assert ks_one_sample(lap, Linnik(2.0)).passed


def test_errors():
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])
    with pytest.raises(ValueError):
        ks_one_sample([], Exponential())
    with pytest.raises(UnsupportedError):
        ks_one_sample([1.0], PositiveStable(0.3))


def test_report_invariants():
    with pytest.raises(ValueError):
        GofReport("x", 0.5, (10,), 1e-3, 0.4, "pass")
    with pytest.raises(ValueError):
        GofReport("x", -0.1, (10,), 1e-3, 0.4, "pass")
    r = ks_two_sample(_exp(1, 100), _exp(2, 100))
    d = r.to_dict()
    assert d["sizes"] == [100, 100]
    assert d["provenance"][0] == {"seed": 1, "stream": [0], "counter": 0}


# --- tail slopes -----------------------------------------------------------------

@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_tail_slope_pareto(beta):
    u = np.random.default_rng(int(beta * 10)).random(1_000_000)
    x = (1 - u) ** (-1 / beta)
    assert tail_slope(x).exponent == pytest.approx(beta, rel=0.05)


def test_tail_slope_examples():
    ml = sm.sample_target(sm.make_recipe("ML_VIA_K_EXP", delta=0.5), RngStream(6), 1_000_000)
    assert 0.45 <= tail_slope(ml).exponent <= 0.55
    h = sm.sample_target(sm.make_recipe("HDELTA_DIRECT", delta=0.5), RngStream(7), 1_000_000)
    assert 0.20 <= tail_slope(h).exponent <= 0.30
    ex = tail_slope(_exp(8, 1_000_000))
    assert ex.exponent > 3


def test_tail_slope_validation():
    with pytest.raises(ValueError):
        tail_slope(np.arange(100.0))
    with pytest.raises(ValueError):
        tail_slope(np.arange(1e5), window=(0.9, 1.0))
    with pytest.raises(ValueError):
        TailEstimate(float("nan"), 0.1, (0.9, 0.99), 10, 100)


# --- transforms ---------------------------------------------------------------

def test_mc_transform_examples():
    e = mc_transform(_exp(9, 100_000), "laplace", [1.0])
    assert e.zscores([0.5])[0] < 3
    ml = sm.sample_target(sm.make_recipe("ML_VIA_STABLE_WEIBULL", delta=0.7), RngStream(10),
                          100_000)
    assert mc_transform(ml, "laplace", [1.0]).zscores([0.5])[0] < 3
    ts = sm.sample_target(sm.make_recipe("TWOSIDED_ML_VIA_SIGN", delta=0.5), RngStream(11),
                          100_000)
    exact = transform(TwoSidedML(0.5), 1.0, "charfun")
    assert mc_transform(ts, "charfun", [1.0]).zscores([exact])[0] < 3


@pytest.mark.parametrize("rid, params", [
    ("LINNIK_VIA_STABLE_WEIBULL", {"alpha": 1.2}), ("TWOSIDED_ML_VIA_NORMAL", {"delta": 0.4})])
def test_symmetric_charfun_imaginary_part(rid, params):
    b = sm.sample_target(sm.make_recipe(rid, **params), RngStream(12), 100_000)
    e = mc_transform(b, "charfun", [0.5, 1.0, 2.0])
    assert np.all(np.abs(e.estimate.imag) < 3 * e.se_imag)


def test_mc_transform_errors():
    with pytest.raises(ValueError):
        mc_transform([-1.0, 1.0], "laplace", [1.0])
    with pytest.raises(ValueError):
        mc_transform([1.0, 2.0], "mellin", [1.0])
    with pytest.raises(ValueError):
        mc_transform([], "charfun", [1.0])
