"""Acceptance suite: one test and one printed PASS/FAIL line per criterion."""

import math
import os

import numpy as np
import pytest

from heavytail import analytics as an
from heavytail import cli, limitlab, verify
from heavytail.families import MittagLeffler

from conftest import load_fixture

THREADS = max(1, min(8, os.cpu_count() or 1))
WORKERS = 4  # compared against a single worker, independent of the host

# tolerances
KS_LEVEL = 1e-3
REGISTRY_N = 100_000
REGISTRY_SEEDS = 20
MIN_IDENTITIES = 22
TRANSFORM_Z = 3.0
SERIES_VS_INTEGRAL = 1e-6
EXP_IDENTITY = 1e-12
ML_TAIL_REL = 0.10
HDELTA_TAIL_ABS = 0.05
TAIL_N = 1_000_000
LADDER = (100, 1000, 10_000)
LIMIT_REPS = 10_000
MONOTONE_BAND = 0.01
CONTROL_KS = 0.02
STAT_AGREEMENT = 1e-12


def test_criterion_1_identity_registry(acceptance_line):
    runs = verify.run_registry(n=REGISTRY_N, seeds=REGISTRY_SEEDS, alpha=KS_LEVEL,
                               threads=THREADS)
    failed = [r.identity for r in runs if not r.passed]
    ok = len(runs) >= MIN_IDENTITIES and not failed
    acceptance_line(1, ok, f"{len(runs)} identities, {len(runs) - len(failed)} pass "
                           f"(n={REGISTRY_N}, {REGISTRY_SEEDS} seeds, level {KS_LEVEL}, "
                           f"need {verify.required_passes(REGISTRY_SEEDS)}/{REGISTRY_SEEDS})"
                    + (f"; failed: {', '.join(failed)}" if failed else ""))
    assert ok


def test_criterion_2_transforms(acceptance_line):
    reports = cli.transform_suite(n=REGISTRY_N)
    bad = [r.label for r in reports if r.statistic >= TRANSFORM_Z]
    worst = max(r.statistic for r in reports)
    ok = not bad
    acceptance_line(2, ok, f"{len(reports)} transform checks, max |z| = {worst:.2f} "
                           f"(limit {TRANSFORM_Z})" + (f"; failed: {bad}" if bad else ""))
    assert ok


def test_criterion_3_special_functions(acceptance_line):
    x = np.linspace(0.1, 10, 50)
    worst = 0.0
    for d in (0.3, 0.5, 0.7, 0.9):
        s = an.pdf(MittagLeffler(d), x, method="series")
        i = an.pdf(MittagLeffler(d), x, method="integral")
        worst = max(worst, float(np.max(np.abs(s - i))))
    xe = np.linspace(0, 10, 101)
    e1 = float(np.max(np.abs(an.mittag_leffler_function(1.0, -xe) - np.exp(-xe))))
    ok = worst < SERIES_VS_INTEGRAL and e1 < EXP_IDENTITY
    acceptance_line(3, ok, f"series vs integral pdf max diff {worst:.2e} (< {SERIES_VS_INTEGRAL}),"
                           f" E_1(-x) vs exp(-x) max diff {e1:.2e} (< {EXP_IDENTITY})")
    assert ok


def test_criterion_4_tails(acceptance_line):
    oracle = load_fixture("tail_oracle.json")
    checks = [verify.run_tail_check(f, p, TAIL_N) for f, p in cli.TAIL_SUITE]
    parts, ok = [], True
    for c in checks:
        e = c.estimate.exponent
        if c.family == "MittagLeffler":
            good = abs(e - c.expected) <= ML_TAIL_REL * c.expected
        elif c.family == "HDelta":
            good = abs(e - c.expected) <= HDELTA_TAIL_ABS
        else:
            good = c.supported == "derived" and oracle["supported"] == "alpha"
        ok &= good
        parts.append(f"{c.family}{tuple(c.params.values())}: {e:.3f} "
                     f"(expected {c.expected:g}){'' if good else ' FAIL'}")
    lin = checks[-1]
    acceptance_line(4, ok, "; ".join(parts) + f"; Linnik alpha=1 data support exponent "
                           f"{lin.candidates[lin.supported]:g} over "
                           f"{min(lin.candidates.values()):g}, committed oracle "
                           f"mean {oracle['mean']:.3f}")
    assert ok


def test_criterion_5_limit_ladder(acceptance_line):
    names = limitlab.ACCEPTANCE_EXPERIMENTS + limitlab.CONTROL_EXPERIMENTS
    parts, bad = [], []
    for name in names:
        r = limitlab.run_experiment(name, LADDER, LIMIT_REPS, threads=THREADS)
        limit = CONTROL_KS if name in limitlab.CONTROL_EXPERIMENTS else r.threshold
        monotone = all(b <= a + MONOTONE_BAND for a, b in zip(r.ks, r.ks[1:]))
        good = r.final_ks < limit and monotone
        if not good:
            bad.append(name)
        parts.append(f"{name} {r.final_ks:.4f}/{limit}")
    ok = not bad
    acceptance_line(5, ok, f"{len(names) - len(bad)}/{len(names)} experiments below threshold "
                           f"at n={LADDER[-1]}, reps={LIMIT_REPS}: " + ", ".join(parts)
                    + (f"; failed: {', '.join(bad)}" if bad else ""))
    assert ok


def test_criterion_6_determinism(acceptance_line, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"s{k}.csv"
        cli.main(["sample", "--recipe", "LINNIK_VIA_LAPLACE_RATIO", "--alpha", "1.4", "--n",
                  "20000", "--seed", "11", "--format", "csv", "--output", str(path)])
        outs.append(path.read_bytes())
    same_bytes = outs[0] == outs[1]

    ids = ["ml_half_normal_mixture", "linnik_q_step", "two_sided_ml_normal_mixture"]
    one = verify.run_registry(ids, n=20_000, seeds=5, seed=11, threads=1)
    many = verify.run_registry(ids, n=20_000, seeds=5, seed=11, threads=WORKERS)
    stat_diff = max(abs(a.statistic - b.statistic)
                    for ra, rb in zip(one, many) for pa, pb in zip(ra.points, rb.points)
                    for a, b in zip(pa.reports, pb.reports))
    same_verdicts = [r.verdict for r in one] == [r.verdict for r in many]

    l1 = limitlab.run_experiment("statistic_linnik", (100, 1000), 5000, seed=11, threads=1)
    l2 = limitlab.run_experiment("statistic_linnik", (100, 1000), 5000, seed=11,
                                 threads=WORKERS)
    limit_diff = max(abs(a - b) for a, b in zip(l1.ks, l2.ks))
    ok = (same_bytes and same_verdicts and stat_diff <= STAT_AGREEMENT
          and limit_diff <= STAT_AGREEMENT and l1.verdict == l2.verdict)
    acceptance_line(6, ok, f"repeat run bit-identical: {same_bytes}; threads 1 vs {WORKERS}: "
                           f"max KS difference {max(stat_diff, limit_diff):.1e} "
                           f"(<= {STAT_AGREEMENT}), verdicts equal: {same_verdicts}")
    assert ok


def test_criterion_7_negative_controls(acceptance_line):
    controls = verify.negative_controls(threads=THREADS)
    parts = []
    for c in controls:
        missed = [r.identity for r in c.runs if r.verdict != "fail"]
        parts.append(f"{c.name}: {len(c.runs) - len(missed)}/{len(c.runs)} fail as required")
    ok = len(controls) == 3 and all(c.detected for c in controls)
    acceptance_line(7, ok, "; ".join(parts))
    assert ok
