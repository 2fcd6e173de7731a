import math

import numpy as np
import pytest

from heavytail import analytics as an
from heavytail import samplers as sm
from heavytail.families import (Exponential, FamilySpec, Geometric, HDelta, Laplace, Linnik,
                                MittagLeffler, Normal, RatioQ, StableRatio, Weibull)
from heavytail.rng import RngStream
from heavytail.stats import ks_distance_one, ks_one_sample, ks_two_sample, mc_transform

N = 100_000


def rs(seed, *path):
    return RngStream(seed, path or (0,))


# --- primitives ----------------------------------------------------------------

def test_geometric_mean():
    v = sm.sample_primitive(Geometric(0.3), rs(1), N).values
    assert np.all(v >= 1) and np.all(v == np.floor(v))
    se = math.sqrt(0.7) / 0.3 / math.sqrt(N)
    assert abs(v.mean() - 1 / 0.3) < 3 * se


def test_weibull_boundaries():
    w1 = sm.sample_primitive(Weibull(1.0), rs(2), N)
    ex = sm.sample_primitive(Exponential(), rs(3), N)
    assert ks_two_sample(w1, ex).passed
    w2 = sm.sample_primitive(Weibull(2.0), rs(4), N)
    assert ks_distance_one(w2, lambda x: -np.expm1(-np.maximum(x, 0) ** 2)) < 0.01


def test_sign_and_laplace_methods():
    z = sm.sample_primitive("Sign", rs(5), 10_000).values
    assert set(np.unique(z)) == {-1.0, 1.0}
    a = sm.sample_primitive(Laplace(), rs(6), N)
    b = sm.sample_primitive(Laplace(), rs(7), N, method="normal")
    assert ks_two_sample(a, b).passed
    with pytest.raises(ValueError):
        sm.sample_primitive(Linnik(1.0), rs(0), 10)


# --- stable laws -----------------------------------------------------------------

def test_positive_stable_examples():
    assert np.all(sm.sample_positive_stable(1.0, rs(1), 1000).values == 1.0)
    levy = sm.sample_positive_stable(0.5, rs(2), N)
    assert ks_distance_one(levy, lambda x: an.cdf(FamilySpec("PositiveStable", {"delta": 0.5}), x)) < 0.01
    b = sm.sample_positive_stable(0.7, rs(3), N)
    est = mc_transform(b, "laplace", [0.5, 1, 2])
    assert np.all(est.zscores(np.exp(-est.args ** 0.7)) < 3)


@pytest.mark.parametrize("delta", [0.3, 0.5, 0.8])
def test_positive_stable_laplace_grid(delta):
    b = sm.sample_positive_stable(delta, rs(10, int(delta * 10)), N)
    est = mc_transform(b, "laplace", [0.25, 0.5, 1, 2, 4])
    assert np.all(est.zscores(np.exp(-est.args ** delta)) < 3)


def test_symmetric_stable_examples():
    g2 = sm.sample_symmetric_stable(2.0, rs(1), N)
    assert ks_distance_one(g2, lambda x: an.cdf(Normal(), x / math.sqrt(2))) < 0.01
    c = sm.sample_symmetric_stable(1.0, rs(2), N)
    assert ks_distance_one(c, lambda x: 0.5 + np.arctan(x) / np.pi) < 0.01
    a = sm.sample_symmetric_stable(1.3, rs(3), N)
    b = sm.sample_symmetric_stable(1.3, rs(4), N, method="normal_mixture")
    assert ks_two_sample(a, b).passed


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_symmetric_stable_charfun(alpha):
    b = sm.sample_symmetric_stable(alpha, rs(20, int(alpha * 10)), N)
    est = mc_transform(b, "charfun", [0.25, 0.5, 1, 2])
    assert np.all(est.zscores(np.exp(-est.args ** alpha)) < 3.5)


# --- mixing laws ----------------------------------------------------------------

def test_stable_ratio_binned_density():
    v = sm.sample_mixinglaw(StableRatio(0.5), rs(1), N).values
    edges = np.linspace(0.1, 3.0, 30)
    counts, _ = np.histogram(v, edges)
    width = np.diff(edges)
    p = np.diff(an.cdf(StableRatio(0.5), edges))
    se = np.sqrt(N * p * (1 - p))
    assert np.max(np.abs(counts - N * p) / se) < 5
    mid = 0.5 * (edges[1:] + edges[:-1])
    # binned density against the pointwise formula
    assert np.allclose(counts / (N * width), an.pdf(StableRatio(0.5), mid), rtol=0.15)


def test_ratio_q_composes_stable_ratio():
    q = sm.sample_mixinglaw(RatioQ(1.0, 2.0), rs(2), N)
    r = sm.sample_mixinglaw(StableRatio(0.5), rs(3), N).values ** 0.5
    assert ks_two_sample(q, r).passed


def test_hdelta_boundary():
    h = sm.sample_mixinglaw(HDelta(1.0), rs(4), N)
    assert ks_distance_one(h, lambda x: -np.expm1(-np.maximum(x, 0) / 8)) < 0.01


def test_t_alpha():
    t = sm.sample_mixinglaw("T", rs(5), 1000, alpha=1.0)
    assert np.all(t.values == 2.0)
    with pytest.raises(ValueError):
        sm.sample_mixinglaw("T", rs(5), 10, alpha=1.5)


# --- recipes --------------------------------------------------------------------

def test_registry_contains_minimum_set():
    ids = set(sm.recipe_ids())
    assert set(sm.CORE_RECIPES) <= ids
    for rid in ids:
        assert sm.recipe_def(rid).citation


def test_unknown_recipe_lists_ids():
    with pytest.raises(sm.RecipeError) as info:
        sm.make_recipe("ML_VIA_MAGIC", delta=0.5)
    assert "ML_VIA_K_EXP" in str(info.value)


def test_recipe_target_mismatch():
    with pytest.raises(sm.RecipeError):
        sm.make_recipe("ML_VIA_K_EXP", Linnik(1.0))
    with pytest.raises(sm.RecipeError):
        sm.make_recipe("ML_VIA_K_EXP", delta=0.5, bogus=1.0)


def test_recipe_examples():
    r = sm.make_recipe("ML_VIA_STABLE_WEIBULL", delta=1.0)
    assert ks_one_sample(sm.sample_target(r, rs(1), N), Exponential()).passed
    r = sm.make_recipe("LINNIK_VIA_NORMAL_ML", alpha=2.0)
    assert ks_one_sample(sm.sample_target(r, rs(2), N), Laplace()).passed
    a = sm.sample_target(sm.make_recipe("ML_VIA_K_EXP", delta=0.6), rs(3), N)
    b = sm.sample_target(sm.make_recipe("ML_VIA_EXP_RATIO", delta=0.6), rs(4), N)
    assert ks_two_sample(a, b).passed


def _spec_for(family):
    return {
        "MittagLeffler": MittagLeffler(0.6), "Linnik": Linnik(1.3),
        "TwoSidedML": FamilySpec("TwoSidedML", {"delta": 0.6}),
        "OneSidedLinnik": FamilySpec("OneSidedLinnik", {"alpha": 1.3}),
        "Weibull": Weibull(0.7), "Exponential": Exponential(),
        "SymmetricStable": FamilySpec("SymmetricStable", {"alpha": 1.3}),
        "PositiveStable": FamilySpec("PositiveStable", {"delta": 0.6}),
        "Laplace": Laplace(), "KozubowskiK": FamilySpec("KozubowskiK", {"rho": 0.4}),
        "RatioQ": RatioQ(0.8, 1.6), "StableRatio": StableRatio(0.6), "HDelta": HDelta(0.6),
    }[family]


@pytest.mark.parametrize("rid", sm.recipe_ids())
def test_every_recipe_deterministic_and_in_support(rid):
    d = sm.recipe_def(rid)
    r = sm.make_recipe(rid, _spec_for(d.family))
    a = sm.sample_target(r, rs(9, 1), 5000)
    b = sm.sample_target(r, rs(9, 1), 5000)
    assert np.array_equal(a.values, b.values)
    assert a.count == len(a.values) == 5000
    assert np.all(np.isfinite(a.values))
    if r.target.nonnegative:
        assert np.all(a.values >= 0)


@pytest.mark.parametrize("rid", [
    "ML_VIA_STABLE_WEIBULL", "ML_VIA_K_EXP", "ML_VIA_HALF_NORMAL",
    "LINNIK_VIA_STABLE_WEIBULL", "LINNIK_VIA_NORMAL_ML", "TWOSIDED_ML_VIA_SIGN",
    "ONESIDED_LINNIK_VIA_ABS_NORMAL", "WEIBULL_VIA_RAYLEIGH", "EXP_VIA_HALF_NORMAL"])
def test_degenerate_boundaries(rid):
    fam = sm.recipe_def(rid).family
    key = {"MittagLeffler": "delta", "TwoSidedML": "delta", "Linnik": "alpha",
                        "OneSidedLinnik": "alpha", "Weibull": "gamma"}.get(fam)
    spec = FamilySpec(fam, {key: 2.0 if key == "alpha" else 1.0} if key else {})
    v = sm.sample_target(sm.make_recipe(rid, spec), rs(3), 20_000).values
    assert np.all(np.isfinite(v))
    assert ks_one_sample(v, spec).passed


def test_perturbed_moves_primary_only():
    r = sm.make_recipe("ML_VIA_K_EXP", delta=0.5)
    p = sm.perturbed(r)
    assert p.target == r.target and p.params["delta"] == pytest.approx(0.65)
    r1 = sm.make_recipe("ML_VIA_K_EXP", delta=0.95)
    assert sm.perturbed(r1).params["delta"] == pytest.approx(0.8)


def test_batch_serialisation_round_trip():
    b = sm.sample_target(sm.make_recipe("LINNIK_VIA_LAPLACE_Q", alpha=1.2), rs(4, 2, 3), 50)
    back = sm.SampleBatch.from_csv(b.to_csv())
    assert np.array_equal(back.values, b.values)
    assert back.rng == b.rng and back.family == b.family
    import json
    d = json.loads(b.to_json())
    assert d["n"] == 50 and d["recipe"] == "LINNIK_VIA_LAPLACE_Q" and len(d["values"]) == 50
    assert "summary" in json.loads(b.to_json(include_values=False))


def test_n_cap():
    with pytest.raises(ValueError):
        sm.sample_positive_stable(0.5, rs(0), sm.MAX_N + 1)
    with pytest.raises(ValueError):
        sm.sample_primitive(Exponential(), rs(0), 0)
