import re

import numpy as np
import pytest

from heavytail import verify as vf
from heavytail.analytics import UnsupportedError
from heavytail.stats import GofReport

from conftest import load_fixture


def test_registry_shape():
    ids = [s.id for s in vf.list_identities()]
    assert len(ids) >= 22
    assert len(set(ids)) == len(ids)
    for s in vf.list_identities():
        assert s.citation.strip()
        assert not re.search(r"\b(Eq|Lemma|Theorem|Corollary|Section)\b", s.citation)
        for point in s.grid:
            assert s.left_recipe(point).target == s.target(point)


def test_unknown_identity():
    with pytest.raises(vf.IdentityError, match="valid ids"):
        vf.run_identity("no_such_identity")


@pytest.mark.parametrize("seeds, need", [(1, 1), (5, 5), (10, 9), (20, 18), (21, 19)])
def test_required_passes(seeds, need):
    assert vf.required_passes(seeds) == need


def test_required_passes_rejects_zero():
    with pytest.raises(ValueError):
        vf.required_passes(0)


def test_verdict_follows_pass_count():
    ok = GofReport("k", 0.1, (1,), 1e-3, 0.2, "pass")
    bad = GofReport("k", 0.3, (1,), 1e-3, 0.2, "fail")
    assert vf.PointRun({}, [ok] * 18 + [bad] * 2, 1e-3).verdict == "pass"
    assert vf.PointRun({}, [ok] * 17 + [bad] * 3, 1e-3).verdict == "fail"


def test_mixed_exponential_vs_exponential_ratio():
    run = vf.run_identity("ml_exponential_ratio", n=100_000, seeds=20)
    assert run.kind == "two_sample"
    point = next(p for p in run.points if p.params == {"delta": 0.5})
    assert point.verdict == "pass" and point.seeds == 20


def test_stable_ratio_density_identity():
    run = vf.run_identity("stable_ratio_density")
    assert run.kind == "analytic"
    assert any(p.params == {"alpha": 0.5} for p in run.points)
    assert run.passed


def test_stable_compose_gaussian_boundary():
    run = vf.run_identity("stable_compose", n=20_000, seeds=5)
    point = next(p for p in run.points if p.params == {"alpha": 2.0})
    assert point.verdict == "pass"


def test_run_is_thread_independent():
    a = vf.run_identity("linnik_laplace_q", n=5000, seeds=3, seed=4, threads=1)
    b = vf.run_identity("linnik_laplace_q", n=5000, seeds=3, seed=4, threads=3)
    assert a.to_dict() == b.to_dict()


def test_run_depends_on_seed():
    a = vf.run_identity("weibull_power", n=5000, seeds=2, seed=1)
    b = vf.run_identity("weibull_power", n=5000, seeds=2, seed=2)
    assert a.to_dict() != b.to_dict()


# --- transform checks -------------------------------------------------------------

def test_transform_check_examples():
    r = vf.run_transform_check("Exponential", {}, "laplace", [1.0])
    assert r.passed
    r = vf.run_transform_check("MittagLeffler", {"delta": 0.7}, "laplace", [1.0])
    assert r.passed and r.critical == 3.0
    r = vf.run_transform_check("TwoSidedML", {"delta": 0.5}, "charfun", [1.0])
    assert r.passed


def test_transform_check_unsupported():
    with pytest.raises(UnsupportedError):
        vf.run_transform_check("HDelta", {"delta": 0.5}, "laplace", [1.0])


# --- tail checks --------------------------------------------------------------

@pytest.mark.slow
def test_tail_check_examples():
    ml = vf.run_tail_check("MittagLeffler", {"delta": 0.5})
    assert ml.passed and ml.estimate.exponent == pytest.approx(0.5, rel=0.1)
    h = vf.run_tail_check("HDelta", {"delta": 0.8})
    assert h.passed and h.estimate.exponent == pytest.approx(0.4, abs=0.05)
    lin = vf.run_tail_check("Linnik", {"alpha": 1.0})
    assert set(lin.candidates.values()) == {0.5, 1.0}
    assert lin.supported == "derived" and lin.passed


def test_linnik_tail_matches_independent_oracle():
    # exponent fixed by a numpy-only simulation of Cauchy x Exponential draws
    oracle = load_fixture("tail_oracle.json")
    assert oracle["supported"] == "alpha"
    lin = vf.run_tail_check("Linnik", {"alpha": 1.0}, n=1_000_000, seed=3)
    assert abs(lin.estimate.exponent - oracle["mean"]) < 5 * oracle["std"]


def test_tail_check_light_tail_rejected():
    with pytest.raises(UnsupportedError):
        vf.run_tail_check("Exponential", {})
    with pytest.raises(UnsupportedError):
        vf.run_tail_check("MittagLeffler", {"delta": 1.0})
