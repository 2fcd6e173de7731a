"""Command-line front end: ``heavytail {eval,sample,verify,limit,tails}``.

Exit codes: 0 success or all checks passed, 1 a check failed (reports are
still written), 2 invalid input.  JSON output is a versioned envelope, see
``heavytail/schema/report-v1.json``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__, analytics, limitlab, samplers, verify
from .families import FamilyError, FamilySpec, family_params
from .rng import RngStream, default_seed

SCHEMA_VERSION = "1.0"

FAMILY_FLAGS = {
    "mittag-leffler": "MittagLeffler", "linnik": "Linnik", "two-sided-ml": "TwoSidedML",
    "one-sided-linnik": "OneSidedLinnik", "weibull": "Weibull", "exponential": "Exponential",
    "rayleigh": "Rayleigh", "laplace": "Laplace", "normal": "Normal",
    "half-normal": "HalfNormal", "positive-stable": "PositiveStable",
    "symmetric-stable": "SymmetricStable", "k": "KozubowskiK", "ratio-q": "RatioQ",
    "stable-ratio": "StableRatio", "hdelta": "HDelta", "geometric": "Geometric",
}
PARAM_FLAGS = ("delta", "alpha", "gamma", "rho", "alpha_prime", "p")

EXPERIMENT_KINDS = {
    ("random-sum", "alpha"): "random_sum_linnik",
    ("random-sum", "delta"): "random_sum_two_sided_ml",
    ("statistic", "alpha"): "statistic_linnik",
    ("statistic", "delta"): "statistic_two_sided_ml",
    ("max-sums", "delta"): "max_sums_ml",
    ("max-sums", "alpha"): "max_sums_one_sided_linnik",
    ("min-extreme", "delta"): "min_extreme_ml",
    ("min-extreme", "alpha"): "min_extreme_one_sided_linnik",
}
TAIL_SUITE = (("MittagLeffler", {"delta": 0.5}), ("MittagLeffler", {"delta": 0.8}),
              ("HDelta", {"delta": 0.5}), ("HDelta", {"delta": 0.8}),
              ("Linnik", {"alpha": 1.0}))


class UsageError(Exception):
    """Invalid command-line input; ``flag`` names the offending option."""

    def __init__(self, flag, message):
        super().__init__(message)
        self.flag = flag


def _flag(name):
    return "--" + name.replace("_", "-")


# ---------------------------------------------------------------------------
# argument parsing

def _range(text):
    """``a:b:step`` inclusive grid, or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:stop:step")
        a, b, s = (float(p) for p in parts)
        if s <= 0 or b < a:
            raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
        k = int(np.floor((b - a) / s + 1e-9))
        return [a + i * s for i in range(k + 1)]
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text):
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected lo,hi")
    return tuple(vals)


def _add_params(p):
    g = p.add_argument_group("shape parameters")
    g.add_argument("--delta", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--rho", type=float)
    g.add_argument("--alpha-prime", dest="alpha_prime", type=float)
    g.add_argument("--p", type=float)


def _add_common(p, fmt=True):
    p.add_argument("--seed", type=int, default=None,
                   help="global seed (default: $HEAVYTAIL_SEED or 0)")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heavytail",
                                 description="Mittag-Leffler and Linnik laboratory")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate pdf, cdf, quantiles or transforms")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_FLAGS))
    _add_params(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--grid", type=_range, help="start:stop:step or comma list")
    src.add_argument("--x", type=_range, help="evaluation point(s)")
    src.add_argument("--t", type=_range, help="characteristic function argument(s)")
    src.add_argument("--s", type=_range, help="Laplace transform argument(s)")
    src.add_argument("--q", type=_range, help="probability level(s) for quantiles")
    p.add_argument("--what", default="pdf,cdf",
                   help="comma list of pdf, cdf, sf, pmf, quantile, laplace, charfun, tail")
    _add_common(p)

    p = sub.add_parser("sample", help="draw from a registered recipe")
    p.add_argument("--recipe", required=True)
    _add_params(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--stream", type=_ints, default=[0])
    p.add_argument("--summary", action="store_true", help="JSON summary instead of values")
    _add_common(p)

    p = sub.add_parser("verify", help="run the identity registry")
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--all", action="store_true")
    sel.add_argument("--identity", action="append")
    sel.add_argument("--controls", action="store_true",
                     help="run the negative controls (each must be detected)")
    sel.add_argument("--transforms", action="store_true",
                     help="Monte Carlo transform checks for every ML and Linnik recipe")
    sel.add_argument("--list", action="store_true")
    p.add_argument("--n", type=int, default=verify.DEFAULT_N)
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--level", type=float, default=verify.DEFAULT_ALPHA,
                   help="KS significance level")
    _add_common(p, fmt=False)

    p = sub.add_parser("limit", help="limit-theorem experiments")
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--experiment")
    sel.add_argument("--all", action="store_true")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--ladder", type=_ints, default=list(limitlab.DEFAULT_LADDER))
    p.add_argument("--reps", type=int, default=limitlab.DEFAULT_REPS)
    p.add_argument("--index", choices=("mixed-poisson", "geometric-stable"),
                   default="mixed-poisson")
    _add_common(p)

    p = sub.add_parser("tails", help="tail-exponent estimates")
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--family", choices=("mittag-leffler", "hdelta", "linnik"))
    sel.add_argument("--all", action="store_true")
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--window", type=_pair, default=(0.99, 0.9999))
    _add_common(p, fmt=False)
    return ap


# ---------------------------------------------------------------------------
# helpers

def _spec_from(args, family):
    names = family_params(family)
    params = {}
    for k in names:
        v = getattr(args, k, None)
        if v is None:
            raise UsageError(_flag(k), f"{family} requires {_flag(k)}")
        params[k] = v
    for k in PARAM_FLAGS:
        if k not in names and getattr(args, k, None) is not None:
            raise UsageError(_flag(k), f"{family} takes no {_flag(k)}")
    try:
        return FamilySpec(family, params)
    except FamilyError as e:
        bad = next((k for k in names if f"{k}=" in str(e)), names[0] if names else "family")
        raise UsageError(_flag(bad), str(e)) from None


def _envelope(command, seed, threads, result):
    return {"schema": "heavytail-report", "schema_version": SCHEMA_VERSION,
            "version": __version__, "command": command, "seed": seed,
            "threads": threads, "result": result}


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    raise TypeError(type(v).__name__)


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, default=_jsonable, indent=1, allow_nan=True)


def _num(v):
    return f"{v:.17g}"


# ---------------------------------------------------------------------------
# commands

_EVAL_ARG = {"pdf": "x", "cdf": "x", "sf": "x", "pmf": "x", "quantile": "q",
             "laplace": "s", "charfun": "t", "tail": None}


def cmd_eval(args) -> int:
    family = FAMILY_FLAGS[args.family]
    spec = _spec_from(args, family)
    what = [w.strip() for w in args.what.split(",") if w.strip()]
    for w in what:
        if w not in _EVAL_ARG:
            raise UsageError("--what", f"unknown quantity {w!r}")
    if what == ["tail"]:
        law = analytics.tail_law(spec)
        _write(args.output, _dump(_envelope("eval", None, 1, law.to_dict())))
        return 0
    kinds = {_EVAL_ARG[w] for w in what}
    if len(kinds) != 1 or None in kinds:
        raise UsageError("--what", "mix of quantities needing different arguments")
    arg_name = kinds.pop()
    values = None
    for name in ("grid", "x", "t", "s", "q"):
        v = getattr(args, name)
        if v is not None:
            if name not in ("grid", arg_name):
                raise UsageError(f"--{name}", f"--{name} does not apply to {args.what}")
            values = v
    if values is None:
        raise UsageError("--grid", f"give evaluation points with --grid or --{arg_name}")
    cols = []
    for w in what:
        if w in ("laplace", "charfun"):
            z = [complex(analytics.transform(spec, v, w)) for v in values]
            cols.append((w + "_re", [c.real for c in z]))
            cols.append((w + "_im", [c.imag for c in z]))
        else:
            fn = {"pdf": analytics.pdf, "cdf": analytics.cdf, "sf": analytics.sf,
                  "pmf": analytics.pmf, "quantile": analytics.quantile}[w]
            cols.append((w, [float(fn(spec, v)) for v in values]))
    header = [arg_name] + [c[0] for c in cols]
    rows = [[values[i]] + [c[1][i] for c in cols] for i in range(len(values))]
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([_num(v) for v in r])
        _write(args.output, buf.getvalue())
    else:
        result = {"target": spec.to_dict(), "columns": header, "rows": rows}
        _write(args.output, _dump(_envelope("eval", None, 1, result)))
    return 0


def cmd_sample(args) -> int:
    try:
        d = samplers.recipe_def(args.recipe)
    except samplers.RecipeError as e:
        raise UsageError("--recipe", str(e)) from None
    spec = _spec_from(args, d.family)
    if not 1 <= args.n <= samplers.MAX_N:
        raise UsageError("--n", f"--n must be in [1, {samplers.MAX_N}]")
    seed = default_seed() if args.seed is None else args.seed
    try:
        stream = RngStream(seed, tuple(args.stream))
        recipe = samplers.make_recipe(args.recipe, spec)
    except ValueError as e:
        raise UsageError("--seed" if "seed" in str(e) else "--recipe", str(e)) from None
    batch = samplers.sample_target(recipe, stream, args.n)
    if args.format == "csv":
        _write(args.output, batch.to_csv())
    else:
        body = json.loads(batch.to_json(include_values=not args.summary))
        _write(args.output, _dump(_envelope("sample", seed, 1, body)))
    return 0


def transform_suite(n=verify.DEFAULT_N, seed=None):
    """Transform checks for every Mittag-Leffler, Linnik and two-sided recipe."""
    out = []
    for rep in samplers.recipes_for("MittagLeffler"):
        for d in verify.DELTAS:
            out.append(verify.run_transform_check("MittagLeffler", {"delta": d}, "laplace",
                                                  [0.25, 0.5, 1, 2, 4], n, rep, seed))
    for rep in samplers.recipes_for("Linnik"):
        for a in verify.ALPHAS:
            out.append(verify.run_transform_check("Linnik", {"alpha": a}, "charfun",
                                                  [0.5, 1, 2], n, rep, seed))
    for rep in samplers.recipes_for("TwoSidedML"):
        for d in verify.DELTAS:
            out.append(verify.run_transform_check("TwoSidedML", {"delta": d}, "charfun",
                                                  [0.5, 1, 2], n, rep, seed))
    return out


def cmd_verify(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.threads < 1:
        raise UsageError("--threads", "--threads must be at least 1")
    if args.seeds is not None and args.seeds < 1:
        raise UsageError("--seeds", "--seeds must be at least 1")
    if not 0 < args.level < 1:
        raise UsageError("--level", "--level must lie in (0, 1)")
    if args.list:
        body = [s.to_dict() for s in verify.list_identities()]
        _write(args.output, _dump(_envelope("verify", seed, args.threads, body)))
        return 0
    if args.controls:
        seeds = args.seeds or verify.CONTROL_SEEDS
        res = verify.negative_controls(args.n, seeds, args.level, seed, args.threads)
        body = [c.to_dict() for c in res]
        ok = all(c.detected for c in res)
    elif args.transforms:
        res = transform_suite(args.n, seed)
        body = [r.to_dict() for r in res]
        ok = all(r.passed for r in res)
    else:
        ids = None
        if args.identity:
            for i in args.identity:
                try:
                    verify.get_identity(i)
                except verify.IdentityError as e:
                    raise UsageError("--identity", str(e)) from None
            ids = args.identity
        seeds = args.seeds or verify.DEFAULT_SEEDS
        runs = verify.run_registry(ids, args.n, seeds, args.level, seed, args.threads)
        body = [r.to_dict() for r in runs]
        ok = all(r.passed for r in runs)
    _write(args.output, _dump(_envelope("verify", seed, args.threads, body)))
    return 0 if ok else 1


def _experiment_name(args):
    key = args.experiment.replace("_", "-")
    if key.replace("-", "_") in limitlab.EXPERIMENTS:
        return key.replace("-", "_")
    given = [k for k in ("alpha", "delta") if getattr(args, k) is not None]
    if len(given) != 1:
        raise UsageError("--experiment",
                         f"{args.experiment!r} needs exactly one of --alpha or --delta")
    name = EXPERIMENT_KINDS.get((key, given[0]))
    if name is None:
        raise UsageError("--experiment",
                         f"unknown experiment {args.experiment!r}; valid: "
                         f"{', '.join(sorted({k for k, _ in EXPERIMENT_KINDS}))}, "
                         f"{', '.join(limitlab.EXPERIMENTS)}")
    return name


def cmd_limit(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.reps < 1:
        raise UsageError("--reps", "--reps must be positive")
    lad = args.ladder
    if not lad or min(lad) < 1 or any(b <= a for a, b in zip(lad, lad[1:])):
        raise UsageError("--ladder", "--ladder must be strictly increasing positive integers")
    index = args.index.replace("-", "_")
    if args.all:
        names = limitlab.ACCEPTANCE_EXPERIMENTS + limitlab.CONTROL_EXPERIMENTS
        params = {}
    else:
        names = (_experiment_name(args),)
        params = {k: getattr(args, k) for k in ("alpha", "delta")}
    reports = []
    for name in names:
        try:
            reports.append(limitlab.run_experiment(name, lad, args.reps, seed, args.threads,
                                                   index=index, **params))
        except (limitlab.LimitError, FamilyError) as e:
            flag = "--index" if "index" in str(e) else (
                "--alpha" if "alpha" in str(e) else "--delta")
            raise UsageError(flag, str(e)) from None
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["experiment", "n", "ks"])
        for r in reports:
            for n, k in zip(r.ladder, r.ks):
                wr.writerow([r.experiment, n, _num(k)])
        _write(args.output, buf.getvalue())
    else:
        body = [r.to_dict() for r in reports]
        _write(args.output, _dump(_envelope("limit", seed, args.threads, body)))
    return 0 if all(r.verdict == "pass" for r in reports) else 1


def cmd_tails(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    lo, hi = args.window
    if not 0 < lo < hi < 1:
        raise UsageError("--window", "--window needs 0 < lo < hi < 1")
    if args.n < 100_000:
        raise UsageError("--n", "--n must be at least 100000 for tail estimation")
    if args.all:
        jobs = TAIL_SUITE
    else:
        family = FAMILY_FLAGS[args.family]
        spec = _spec_from(args, family)
        jobs = ((family, spec.param_dict),)
    checks = []
    for family, params in jobs:
        try:
            checks.append(verify.run_tail_check(family, params, args.n, seed, (lo, hi)))
        except analytics.UnsupportedError as e:
            raise UsageError("--family", str(e)) from None
    body = [c.to_dict() for c in checks]
    _write(args.output, _dump(_envelope("tails", seed, args.threads, body)))
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {"eval": cmd_eval, "sample": cmd_sample, "verify": cmd_verify,
            "limit": cmd_limit, "tails": cmd_tails}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.exit(2, f"heavytail {args.command}: error: {e.flag}: {e}\n")
    except (analytics.UnsupportedError, FamilyError, samplers.RecipeError) as e:
        parser.exit(2, f"heavytail {args.command}: error: {e}\n")


if __name__ == "__main__":
    sys.exit(main())
