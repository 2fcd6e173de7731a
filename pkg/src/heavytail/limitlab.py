"""Monte Carlo laboratory for limit theorems with random indices.

Random sums, sample means over random-size samples, extremal running sums
and minima over Cox-process samples are simulated replication by
replication, and the empirical law at each point of an ``n`` ladder is
compared with the analytic limit by the KS distance.

Rademacher summands are simulated exactly through their count
representation: ``S_N = 2 B - N`` with ``B ~ Binomial(N, 1/2)``, the running
maximum (including ``S_0 = 0``) by inverting the reflection identity
``P(M >= m) = P(S_N >= m) + P(S_N > m)``, and the running maximum of
``|S_k|`` by the alternating reflection sum over the strip ``(-m, m)``.
Costs are therefore independent of ``N``, which matters because the mixed
indices are heavy tailed.  Counts beyond ``2**53`` use the Brownian limit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import analytics, samplers, stats
from .families import (FamilySpec, HDelta, HalfNormal, Linnik, MittagLeffler, Normal,
                       OneSidedLinnik, RatioQ, StableRatio, TwoSidedML, Weibull)
from .rng import RngStream, default_seed, name_key

EXACT_LIMIT = 2.0 ** 53
POISSON_NORMAL = 1e15
SHARD = 2500
DEFAULT_LADDER = (100, 1000, 10000)
DEFAULT_REPS = 10_000
MONOTONE_BAND = 0.01


class LimitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# counts

def mixed_poisson(g, lam):
    """Poisson counts with means ``lam`` (normal approximation above 1e15)."""
    lam = np.asarray(lam, dtype=float)
    out = np.empty(lam.shape)
    big = lam > POISSON_NORMAL
    out[~big] = g.poisson(lam[~big])
    lb = lam[big]
    out[big] = np.round(lb + np.sqrt(lb) * g.standard_normal(lb.size))
    return out


@dataclass(frozen=True)
class IndexBuilder:
    """Random index ``N_n`` whose scaled law ``N_n / n`` has a known limit.

    Parameters
    ----------
    kind : {'mixed_poisson', 'geometric_stable'}
        Poisson count with random mean ``n * U``, or the geometric-stable
        construction ``[n^(1 - 1/delta) * sum_{j <= V} Y_j]`` with ``V``
        geometric of mean ``n`` and ``Y_j`` positive stable.
    mixing : Recipe or None
        Construction of ``U``; None means ``U = 1``.
    scale : float
        Constant multiplying ``U``.
    reciprocal : bool
        Use ``scale / U`` in place of ``scale * U``.
    delta : float or None
        Stable index for the geometric-stable construction.
    """

    kind: str = "mixed_poisson"
    mixing: samplers.Recipe | None = None
    scale: float = 1.0
    reciprocal: bool = False
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in ("mixed_poisson", "geometric_stable"):
            raise LimitError(f"unknown index kind {self.kind!r}")
        if not self.scale > 0:
            raise LimitError("scale must be positive")
        if self.kind == "geometric_stable":
            if self.delta is None or not 0 < self.delta <= 1:
                raise LimitError("geometric_stable needs delta in (0, 1]")
            if self.mixing is not None or self.reciprocal:
                raise LimitError("geometric_stable takes no mixing recipe")

    @classmethod
    def constant(cls):
        return cls("mixed_poisson")

    @classmethod
    def poisson_mixture(cls, mixing, scale=1.0, reciprocal=False):
        """Mixed Poisson index; ``mixing`` is a Recipe or a FamilySpec."""
        if isinstance(mixing, FamilySpec):
            mixing = samplers.make_recipe(_MIXING_RECIPES[mixing.name], mixing)
        return cls("mixed_poisson", mixing, float(scale), bool(reciprocal))

    @classmethod
    def geometric_stable(cls, delta, scale=1.0):
        return cls("geometric_stable", None, float(scale), False, float(delta))

    @property
    def degenerate(self) -> bool:
        return self.kind == "mixed_poisson" and self.mixing is None

    def mixing_draws(self, g, reps):
        """Draws of the limit law of ``N_n / n``."""
        if self.kind == "geometric_stable":
            d = self.delta
            return self.scale * samplers.weibull_(g, d, reps) * samplers.pos_stable_(g, d, reps)
        if self.mixing is None:
            u = np.ones(reps)
        else:
            u = samplers.draw(self.mixing, g, reps)
        return self.scale / u if self.reciprocal else self.scale * u

    def draw(self, g, n, reps):
        if self.kind == "geometric_stable":
            d = self.delta
            v = g.geometric(min(1.0, 1.0 / n), reps).astype(float)
            # a sum of V i.i.d. stable draws is V^(1/delta) times one draw
            s = samplers.pos_stable_(g, d, reps)
            return np.floor(self.scale * n ** (1.0 - 1.0 / d) * v ** (1.0 / d) * s)
        return mixed_poisson(g, n * self.mixing_draws(g, reps))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "scale": self.scale, "reciprocal": self.reciprocal,
                "delta": self.delta,
                "mixing": None if self.mixing is None else self.mixing.to_dict()}


_MIXING_RECIPES = {"MittagLeffler": "ML_VIA_K_EXP", "HDelta": "HDELTA_VIA_K",
                   "StableRatio": "STABLE_RATIO_VIA_K", "RatioQ": "RATIO_Q_INVERSE",
                   "KozubowskiK": "K_INVERSE", "Exponential": "EXP_VIA_HALF_NORMAL"}


def build_index(builder: IndexBuilder, n, rng, reps) -> np.ndarray:
    """Draw ``reps`` indices ``N_n``.

    Values are nonnegative integers stored as float64, because heavy-tailed
    mixing routinely produces counts beyond the int64 range.
    """
    if n < 1:
        raise LimitError("n must be at least 1")
    g = rng if isinstance(rng, np.random.Generator) else _gen(rng)
    return builder.draw(g, n, int(reps))


def _gen(rng):
    from .rng import as_generator
    return as_generator(rng)


# ---------------------------------------------------------------------------
# summands

def _binom_sf(k, N):
    """``P(B >= k)`` for ``B ~ Binomial(N, 1/2)``, elementwise."""
    k = np.asarray(k, dtype=float)
    with np.errstate(invalid="ignore"):
        inner = special.betainc(np.maximum(k, 1.0), np.maximum(N - k + 1.0, 1.0), 0.5)
    return np.where(k <= 0, 1.0, np.where(k > N, 0.0, inner))


def _walk_ge(m, N):
    """``P(S_N >= m)`` for the simple random walk."""
    return _binom_sf(np.ceil((N + m) / 2.0), N)


def _walk_gt(m, N):
    return _binom_sf(np.floor((N + m) / 2.0) + 1.0, N)


def _invert_integer(sf, u, upper):
    """Largest integer ``m`` in ``[0, upper]`` with ``sf(m) > u``, by bisection."""
    lo = np.zeros(u.shape)
    hi = upper + 1.0
    while np.any(hi - lo > 1):
        mid = np.floor(0.5 * (lo + hi))
        ok = sf(mid) > u
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def _sup_abs_brownian_cdf(x, terms=60):
    """``P(sup_{t <= 1} |B_t| <= x)`` for standard Brownian motion."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    pos = x > 0
    xp = x[pos]
    small = xp < 1.0
    res = np.empty(xp.shape)
    k = np.arange(terms)[:, None]
    xs = xp[small]
    if xs.size:
        j = 2 * k + 1
        res[small] = (4 / np.pi) * np.sum((-1.0) ** k / j
                                           * np.exp(-(j * np.pi) ** 2 / (8 * xs ** 2)), axis=0)
    xl = xp[~small]
    if xl.size:
        kk = np.arange(-terms, terms + 1)[:, None]
        res[~small] = np.sum((-1.0) ** kk * (special.ndtr((2 * kk + 1) * xl)
                                             - special.ndtr((2 * kk - 1) * xl)), axis=0)
    out[pos] = np.clip(res, 0.0, 1.0)
    return out


@dataclass(frozen=True)
class SummandModel:
    """I.i.d. zero-mean summands with unit variance.

    ``rademacher`` supports sums and all running extremes;
    ``centered_exponential`` and ``normal`` support sums only (both exact:
    a Gamma(N) shift and ``sqrt(N) Z``).
    """

    kind: str = "rademacher"

    def __post_init__(self):
        if self.kind not in ("rademacher", "centered_exponential", "normal"):
            raise LimitError(f"unknown summand law {self.kind!r}")

    @property
    def sigma(self) -> float:
        return 1.0

    def sum(self, g, N):
        N = np.asarray(N, dtype=float)
        out = np.empty(N.shape)
        big = N > EXACT_LIMIT
        out[big] = np.sqrt(N[big]) * g.standard_normal(int(big.sum()))
        Ns = N[~big]
        if self.kind == "rademacher":
            out[~big] = 2.0 * g.binomial(Ns.astype(np.int64), 0.5) - Ns
        elif self.kind == "centered_exponential":
            gam = np.zeros(Ns.shape)
            pos = Ns > 0
            gam[pos] = g.standard_gamma(Ns[pos])
            out[~big] = gam - Ns
        else:
            out[~big] = np.sqrt(Ns) * g.standard_normal(Ns.size)
        return out

    def running_max(self, g, N):
        """``max_{0 <= k <= N} S_k``."""
        self._need_walk()
        N = np.asarray(N, dtype=float)
        out = np.empty(N.shape)
        big = N > EXACT_LIMIT
        out[big] = np.sqrt(N[big]) * np.abs(g.standard_normal(int(big.sum())))
        Ns = N[~big]
        u = g.random(Ns.size)
        out[~big] = _invert_integer(lambda m: _walk_ge(m, Ns) + _walk_gt(m, Ns), u, Ns)
        return out

    def running_min(self, g, N):
        """``min_{0 <= k <= N} S_k`` (the reflection of the running maximum)."""
        return -self.running_max(g, N)

    def running_abs_max(self, g, N):
        """``max_{0 <= k <= N} |S_k|``."""
        self._need_walk()
        N = np.asarray(N, dtype=float)
        out = np.empty(N.shape)
        big = N > EXACT_LIMIT
        if big.any():
            ub = g.random(int(big.sum()))
            out[big] = np.sqrt(N[big]) * _invert_continuous(_sup_abs_brownian_cdf, ub)
        Ns = N[~big]
        u = g.random(Ns.size)

        def sf(m):
            return 1.0 - _strip_prob(m, Ns)

        # P(max |S| >= m) > u, largest such m
        out[~big] = _invert_integer(sf, u, Ns)
        return out

    def _need_walk(self):
        if self.kind != "rademacher":
            raise analytics.UnsupportedError(
                f"running extremes are simulated exactly only for rademacher summands")


def _strip_prob(m, N, terms=40):
    """``P(|S_k| < m for all k <= N)`` by the alternating reflection sum."""
    m = np.asarray(m, dtype=float)
    total = np.zeros(np.broadcast(m, N).shape)
    mm = np.maximum(m, 1.0)

    def between(a, b):
        # P(a < S_N < b) for integer a < b
        return _walk_gt(a, N) - _walk_ge(b, N)

    for k in range(-terms, terms + 1):
        total += (-1.0) ** k * between((2 * k - 1) * mm, (2 * k + 1) * mm)
    return np.where(m <= 0, 0.0, np.clip(total, 0.0, 1.0))


def _invert_continuous(cdf, u, lo=1e-3, hi=20.0, iters=60):
    a = np.full(u.shape, lo)
    b = np.full(u.shape, hi)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        below = cdf(mid) < u
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# extremes

@dataclass(frozen=True)
class ExtremeModel:
    """Base law for minima: Weibull with shape ``delta_prime`` (exponential by default).

    The left endpoint is 0 and ``F(x) ~ x**delta_prime`` at 0, so the norming
    constants are ``a_k = 0`` and ``b_k = F^{-1}(1 / d_k)``.
    """

    delta_prime: float = 1.0

    def __post_init__(self):
        if not self.delta_prime > 0:
            raise LimitError("delta_prime must be positive")

    @property
    def lext(self) -> float:
        return 0.0

    def a(self, d):
        return 0.0

    def b(self, d):
        return (-math.log1p(-1.0 / d)) ** (1.0 / self.delta_prime)

    def minimum(self, g, N):
        """Minimum of ``N`` i.i.d. draws (exact: ``(W / N)^(1/delta_prime)``)."""
        w = g.standard_exponential(np.shape(N))
        return (w / np.asarray(N, dtype=float)) ** (1.0 / self.delta_prime)


# ---------------------------------------------------------------------------
# reports

@dataclass
class LimitExperimentReport:
    """KS distances to the analytic limit along an ``n`` ladder."""

    experiment: str
    kind: str
    ladder: list
    ks: list
    target: FamilySpec
    reps: int
    seed: int
    threshold: float | None = None
    reflected: bool = False
    zero_resamples: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    summands: str = "rademacher"

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise LimitError("ladder must be strictly increasing")
        if any(not 0 <= k <= 1 for k in self.ks):
            raise LimitError("KS distances must lie in [0, 1]")

    @property
    def final_ks(self) -> float:
        return self.ks[-1]

    @property
    def monotone(self) -> bool:
        """Nonincreasing up to the noise band."""
        return all(b <= a + MONOTONE_BAND for a, b in zip(self.ks, self.ks[1:]))

    @property
    def below_threshold(self) -> bool | None:
        if self.threshold is None:
            return None
        return self.final_ks < self.threshold

    @property
    def verdict(self) -> str:
        ok = self.monotone and (self.below_threshold is not False)
        return "pass" if ok else "fail"

    def to_dict(self) -> dict:
        return {"experiment": self.experiment, "kind": self.kind,
                "ladder": list(self.ladder), "ks": list(self.ks),
                "target": self.target.to_dict(), "reflected": self.reflected,
                "reps": self.reps, "seed": self.seed, "threshold": self.threshold,
                "monotone": self.monotone, "below_threshold": self.below_threshold,
                "verdict": self.verdict, "zero_resamples": list(self.zero_resamples),
                "index": self.index, "summands": self.summands}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "ks"])
        for n, k in zip(self.ladder, self.ks):
            w.writerow([n, f"{k:.17g}"])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# simulation core

def _nonzero_index(builder, g, n, reps):
    """Indices conditioned on ``N >= 1`` by resampling; returns (N, resamples)."""
    N = builder.draw(g, n, reps)
    redraws = 0
    zero = N == 0
    while zero.any():
        k = int(zero.sum())
        redraws += k
        N[zero] = builder.draw(g, n, k)
        zero = N == 0
    return N, redraws


def _simulate(kind, g, n, reps, builder, summands, mode=None, model=None):
    """One shard of replications; returns (values, zero resamples)."""
    if kind == "random_sum":
        N = builder.draw(g, n, reps)
        return summands.sum(g, N) / (summands.sigma * math.sqrt(n)), 0
    if kind == "statistic":
        N, z = _nonzero_index(builder, g, n, reps)
        mean = summands.sum(g, N) / N
        return math.sqrt(n) * mean / summands.sigma, z
    if kind == "extremal_sums":
        N = builder.draw(g, n, reps)
        if mode == "max":
            v = summands.running_max(g, N)
        elif mode == "min":
            v = summands.running_min(g, N)
        elif mode == "abs":
            v = summands.running_abs_max(g, N)
        else:
            raise LimitError(f"mode must be max, min or abs, got {mode!r}")
        return v / (summands.sigma * math.sqrt(n)), 0
    if kind == "min_extreme":
        N, z = _nonzero_index(builder, g, n, reps)
        return (model.minimum(g, N) - model.a(n)) / model.b(n), z
    raise LimitError(f"unknown experiment kind {kind!r}")


def _shard_task(task):
    kind, seed, key, i, s, n, size, builder, summands, mode, model = task
    g = RngStream(seed, (key, i, s)).generator()
    return _simulate(kind, g, n, size, builder, summands, mode, model)


def _target_cdf(target, reflected):
    if callable(target) and not isinstance(target, FamilySpec):
        f = target
    else:
        f = analytics.cdf_fast(target)
    if reflected:
        return lambda x: 1.0 - f(-np.asarray(x, dtype=float))
    return f


def _check_ladder(ladder):
    ladder = [int(v) for v in ladder]
    if not ladder or min(ladder) < 1:
        raise LimitError("ladder values must be positive")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise LimitError("ladder must be strictly increasing")
    return ladder


def _run(name, kind, target, ladder, reps, rng, builder, summands=None, mode=None,
         model=None, threshold=None, reflected=False, threads=1):
    ladder = _check_ladder(ladder)
    summands = summands or SummandModel()
    seed, key = _seed_key(rng, name)
    cdf = _target_cdf(target, reflected)
    tasks = []
    for i, n in enumerate(ladder):
        for s, start in enumerate(range(0, reps, SHARD)):
            size = min(SHARD, reps - start)
            tasks.append((kind, seed, key, i, s, n, size, builder, summands, mode, model))
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_shard_task, tasks))
    else:
        parts = [_shard_task(t) for t in tasks]
    ks, zeros = [], []
    for i in range(len(ladder)):
        chunk = [p for t, p in zip(tasks, parts) if t[3] == i]
        vals = np.concatenate([c[0] for c in chunk])
        zeros.append(int(sum(c[1] for c in chunk)))
        ks.append(stats.ks_distance_one(vals, cdf))
    tgt = target if isinstance(target, FamilySpec) else FamilySpec("Normal", {})
    return LimitExperimentReport(name, kind, ladder, ks, tgt, reps, seed, threshold,
                                 reflected, zeros, builder.to_dict(), summands.kind)


def _seed_key(rng, name):
    if rng is None:
        return default_seed(), name_key(name)
    if isinstance(rng, RngStream):
        return rng.seed, name_key(name) ^ (rng.stream[0] if rng.stream else 0)
    return int(rng), name_key(name)


def _pairing_check(builder, target, allowed):
    if builder.degenerate:
        return
    if target.name not in allowed:
        raise LimitError(f"target {target} is not a limit for this experiment; "
                         f"expected one of {sorted(allowed)}")


def run_random_sum(summands, builder, target, ladder=DEFAULT_LADDER, reps=DEFAULT_REPS,
                   rng=None, threshold=None, threads=1, name="random_sum"):
    """Simulate ``S_{N_n} / (sigma sqrt(n))`` and compare with ``target``."""
    _pairing_check(builder, target, {"Linnik", "TwoSidedML", "Laplace"})
    return _run(name, "random_sum", target, ladder, reps, rng, builder, summands,
                threshold=threshold, threads=threads)


def run_statistic(summands, builder, target, ladder=DEFAULT_LADDER, reps=DEFAULT_REPS,
                  rng=None, threshold=None, threads=1, name="statistic",
                  statistic="sample_mean"):
    """Simulate ``sqrt(n) (T_{N_n} - theta) / sigma`` for the sample mean.

    Replications with an empty sample are redrawn and counted in the report.
    """
    if statistic != "sample_mean":
        raise LimitError("only the sample mean is implemented")
    _pairing_check(builder, target, {"Linnik", "TwoSidedML", "Laplace"})
    return _run(name, "statistic", target, ladder, reps, rng, builder, summands,
                threshold=threshold, threads=threads)


def run_extremal_sums(summands, builder, mode, target, ladder=DEFAULT_LADDER,
                      reps=DEFAULT_REPS, rng=None, threshold=None, threads=1,
                      name="extremal_sums"):
    """Simulate running extremes of the sums, scaled by ``sigma sqrt(n)``.

    ``min`` is compared with the reflection of ``target``.  ``abs`` accepts
    a callable distribution function as ``target``.
    """
    if isinstance(target, FamilySpec):
        _pairing_check(builder, target, {"MittagLeffler", "OneSidedLinnik", "Exponential"})
    return _run(name, "extremal_sums", target, ladder, reps, rng, builder, summands,
                mode=mode, threshold=threshold, reflected=(mode == "min"), threads=threads)


def run_min_extreme(model, builder, target, ladder=DEFAULT_LADDER, reps=DEFAULT_REPS,
                    rng=None, threshold=None, threads=1, name="min_extreme"):
    """Simulate ``(min_{j <= N_k} X_j - a_k) / b_k`` with ``N_k`` a Cox count."""
    _pairing_check(builder, target, {"MittagLeffler", "OneSidedLinnik", "Weibull"})
    return _run(name, "min_extreme", target, ladder, reps, rng, builder, model=model,
                threshold=threshold, threads=threads)


# ---------------------------------------------------------------------------
# experiment catalog

@dataclass(frozen=True)
class Experiment:
    """A named limit experiment with its acceptance threshold at the top rung."""

    name: str
    kind: str
    description: str
    threshold: float
    build: object  # params -> (builder, target, extra kwargs)
    defaults: tuple

    def setup(self, **params):
        p = dict(self.defaults)
        for k, v in params.items():
            if v is None:
                continue
            if k not in p:
                raise LimitError(f"experiment {self.name} has no parameter {k!r}")
            p[k] = float(v)
        return p


def _ml(d):
    return samplers.make_recipe("ML_VIA_K_EXP", MittagLeffler(d))


def _h(d):
    return samplers.make_recipe("HDELTA_VIA_K", HDelta(d))


EXPERIMENTS = {}


def _exp(name, kind, description, threshold, build, **defaults):
    EXPERIMENTS[name] = Experiment(name, kind, description, threshold, build,
                                   tuple(sorted(defaults.items())))


_exp("random_sum_linnik", "random_sum",
     "random sums with N_n/n -> 2 M_(alpha/2) converge to the Linnik law", 0.02,
     lambda p: (IndexBuilder.poisson_mixture(_ml(p["alpha"] / 2), 2.0),
                Linnik(p["alpha"]), {}), alpha=1.0)
_exp("random_sum_two_sided_ml", "random_sum",
     "random sums with N_n/n -> H_delta/4 converge to the two-sided Mittag-Leffler law",
     0.02, lambda p: (IndexBuilder.poisson_mixture(_h(p["delta"]), 0.25),
                      TwoSidedML(p["delta"]), {}), delta=0.5)
_exp("statistic_linnik", "statistic",
     "sample means with N_n/n -> 1/(2 M_(alpha/2)) converge to the Linnik law", 0.03,
     lambda p: (IndexBuilder.poisson_mixture(_ml(p["alpha"] / 2), 0.5, reciprocal=True),
                Linnik(p["alpha"]), {}), alpha=1.0)
_exp("statistic_two_sided_ml", "statistic",
     "sample means with N_n/n -> 4/H_delta converge to the two-sided Mittag-Leffler law",
     0.03, lambda p: (IndexBuilder.poisson_mixture(_h(p["delta"]), 4.0, reciprocal=True),
                      TwoSidedML(p["delta"]), {}), delta=0.5)
_exp("max_sums_ml", "extremal_sums",
     "maxima of random sums with N_n/n -> H_delta/4 converge to the Mittag-Leffler law",
     0.03, lambda p: (IndexBuilder.poisson_mixture(_h(p["delta"]), 0.25),
                      MittagLeffler(p["delta"]), {"mode": "max"}), delta=0.5)
_exp("max_sums_one_sided_linnik", "extremal_sums",
     "maxima of random sums with N_n/n -> 2 M_(alpha/2) converge to the one-sided Linnik law",
     0.03, lambda p: (IndexBuilder.poisson_mixture(_ml(p["alpha"] / 2), 2.0),
                      OneSidedLinnik(p["alpha"]), {"mode": "max"}), alpha=1.0)
_exp("min_extreme_ml", "min_extreme",
     "exponential minima over Cox samples with U_k/k -> R_delta converge to Mittag-Leffler",
     0.05, lambda p: (IndexBuilder.poisson_mixture(
         samplers.make_recipe("STABLE_RATIO_VIA_K", StableRatio(p["delta"]))),
         MittagLeffler(p["delta"]), {"model": ExtremeModel(1.0)}), delta=0.5)
_exp("min_extreme_one_sided_linnik", "min_extreme",
     "exponential minima over Cox samples with U_k/k -> Q_(alpha,2) converge to "
     "the one-sided Linnik law", 0.05,
     lambda p: (IndexBuilder.poisson_mixture(
         samplers.make_recipe("RATIO_Q_INVERSE", RatioQ(p["alpha"], 2.0))),
         OneSidedLinnik(p["alpha"]), {"model": ExtremeModel(1.0)}), alpha=1.0)

# degenerate-index controls
_exp("control_random_sum_normal", "random_sum", "classical central limit theorem", 0.02,
     lambda p: (IndexBuilder.constant(), Normal(), {}))
_exp("control_statistic_normal", "statistic", "asymptotic normality of the sample mean",
     0.02, lambda p: (IndexBuilder.constant(), Normal(), {}))
_exp("control_max_half_normal", "extremal_sums",
     "maximum of the walk converges to the half-normal law", 0.02,
     lambda p: (IndexBuilder.constant(), HalfNormal(), {"mode": "max"}))
_exp("control_min_weibull", "min_extreme",
     "minima over Poisson samples with constant intensity", 0.02,
     lambda p: (IndexBuilder.constant(), Weibull(1.0), {"model": ExtremeModel(1.0)}))

ACCEPTANCE_EXPERIMENTS = ("random_sum_linnik", "random_sum_two_sided_ml",
                          "statistic_linnik", "statistic_two_sided_ml", "max_sums_ml",
                          "max_sums_one_sided_linnik", "min_extreme_ml",
                          "min_extreme_one_sided_linnik")
CONTROL_EXPERIMENTS = ("control_random_sum_normal", "control_statistic_normal",
                       "control_max_half_normal", "control_min_weibull")


def get_experiment(name) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise LimitError(f"unknown experiment {name!r}; valid: {', '.join(EXPERIMENTS)}") \
            from None


def run_experiment(name, ladder=DEFAULT_LADDER, reps=DEFAULT_REPS, seed=None, threads=1,
                   index=None, **params) -> LimitExperimentReport:
    """Run a catalog experiment.

    ``index='geometric_stable'`` swaps the mixed Poisson index for the
    geometric-stable construction when the mixing law is Mittag-Leffler.
    """
    e = get_experiment(name)
    p = e.setup(**params)
    builder, target, extra = e.build(p)
    if index == "geometric_stable":
        m = builder.mixing
        if m is None or m.target.name != "MittagLeffler" or builder.reciprocal:
            raise LimitError(f"{name} has no geometric-stable index")
        builder = IndexBuilder.geometric_stable(m.target["delta"], builder.scale)
    elif index not in (None, "mixed_poisson"):
        raise LimitError(f"unknown index construction {index!r}")
    seed = default_seed() if seed is None else int(seed)
    kw = dict(ladder=ladder, reps=reps, rng=seed, threshold=e.threshold, threads=threads,
              name=name)
    summ = SummandModel()
    if e.kind == "random_sum":
        return run_random_sum(summ, builder, target, **kw)
    if e.kind == "statistic":
        return run_statistic(summ, builder, target, **kw)
    if e.kind == "extremal_sums":
        return run_extremal_sums(summ, builder, extra["mode"], target, **kw)
    return run_min_extreme(extra["model"], builder, target, **kw)
