"""Empirical distribution functions, Kolmogorov-Smirnov tests, tail slopes
and Monte Carlo transform estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import analytics
from .families import FamilySpec
from .samplers import SampleBatch


def _values(a):
    if isinstance(a, SampleBatch):
        return a.values
    return np.asarray(a, dtype=float).ravel()


def _provenance(*batches):
    out = []
    for b in batches:
        if isinstance(b, SampleBatch) and b.rng is not None:
            out.append(b.rng.to_dict())
        else:
            out.append(None)
    return out


class ECDF:
    """Right-continuous empirical distribution function.

    Tied observations are aggregated, so the jump at a value equals its
    multiplicity over n.
    """

    def __init__(self, sample):
        x = np.sort(_values(sample))
        if x.size == 0:
            raise ValueError("empty sample")
        self.n = x.size
        self.points, counts = np.unique(x, return_counts=True)
        self.jumps = counts / self.n
        self.levels = np.cumsum(counts) / self.n
        self._sorted = x

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.searchsorted(self._sorted, t, side="right") / self.n

    def left(self, t):
        """Left limit ``F(t-)``."""
        t = np.asarray(t, dtype=float)
        return np.searchsorted(self._sorted, t, side="left") / self.n


@dataclass
class GofReport:
    """Outcome of a goodness-of-fit comparison."""

    kind: str
    statistic: float
    sizes: tuple
    alpha: float
    critical: float
    verdict: str
    provenance: list = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        if not self.statistic >= 0:
            raise ValueError("statistic must be nonnegative")
        expected = "pass" if self.statistic < self.critical else "fail"
        if self.verdict != expected:
            raise ValueError("verdict inconsistent with statistic and critical value")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        return d


@dataclass
class TailEstimate:
    """Least-squares tail exponent over a quantile window."""

    exponent: float
    stderr: float
    window: tuple
    points: int
    n: int

    def __post_init__(self):
        lo, hi = self.window
        if not 0 < lo < hi < 1:
            raise ValueError("window must satisfy 0 < lo < hi < 1")
        if not math.isfinite(self.exponent):
            raise ValueError("exponent is not finite")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


@dataclass
class TransformEstimate:
    """Monte Carlo transform estimates with per-component standard errors."""

    kind: str
    args: np.ndarray
    estimate: np.ndarray
    se_real: np.ndarray
    se_imag: np.ndarray
    n: int

    def zscores(self, exact) -> np.ndarray:
        """Largest of the real/imaginary |error| / SE per argument."""
        exact = np.asarray(exact, dtype=complex)
        zr = np.abs(self.estimate.real - exact.real) / np.maximum(self.se_real, 1e-300)
        zi = np.abs(self.estimate.imag - exact.imag) / np.maximum(self.se_imag, 1e-300)
        zi = np.where(self.se_imag > 0, zi, 0.0)
        return np.maximum(zr, zi)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "args": self.args.tolist(),
                "real": self.estimate.real.tolist(), "imag": self.estimate.imag.tolist(),
                "se_real": self.se_real.tolist(), "se_imag": self.se_imag.tolist(),
                "n": self.n}


def ks_critical(alpha, m, n=None):
    """Asymptotic KS critical value, one-sample (n None) or two-sample."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    c = math.sqrt(-math.log(alpha / 2.0) / 2.0)
    if n is None:
        return c / math.sqrt(m)
    return c * math.sqrt((m + n) / (m * n))


def ks_distance_two(a, b) -> float:
    """Sup distance between two empirical distribution functions."""
    x = np.sort(_values(a))
    y = np.sort(_values(b))
    if x.size == 0 or y.size == 0:
        raise ValueError("empty sample")
    allv = np.concatenate([x, y])
    fx = np.searchsorted(x, allv, side="right") / x.size
    fy = np.searchsorted(y, allv, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def ks_distance_one(a, cdf) -> float:
    """Sup distance between an empirical and an analytic distribution function.

    Left limits of ``cdf`` are taken one ulp below each sample point, so
    atoms of the target located at sample values are handled exactly.
    """
    x = np.sort(_values(a))
    if x.size == 0:
        raise ValueError("empty sample")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    f_left = np.asarray(cdf(np.nextafter(x, -np.inf)), dtype=float)
    hi = np.searchsorted(x, x, side="right") / n
    lo = np.searchsorted(x, x, side="left") / n
    return float(max(np.max(hi - f), np.max(f_left - lo), 0.0))


def ks_two_sample(a, b, alpha=1e-3) -> GofReport:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic critical value."""
    va, vb = _values(a), _values(b)
    if va.size == 0 or vb.size == 0:
        raise ValueError("empty batch")
    d = ks_distance_two(va, vb)
    crit = ks_critical(alpha, va.size, vb.size)
    return GofReport("ks_two_sample", d, (va.size, vb.size), alpha, crit,
                     "pass" if d < crit else "fail", _provenance(a, b))


def ks_one_sample(a, target: FamilySpec, alpha=1e-3) -> GofReport:
    """One-sample Kolmogorov-Smirnov test against an analytic target."""
    va = _values(a)
    if va.size == 0:
        raise ValueError("empty batch")
    f = analytics.cdf_fast(target)
    f(np.array([1.0]))  # raises UnsupportedError early
    d = ks_distance_one(va, f)
    crit = ks_critical(alpha, va.size)
    return GofReport("ks_one_sample", d, (va.size,), alpha, crit,
                     "pass" if d < crit else "fail", _provenance(a), str(target))


def tail_slope(a, window=(0.99, 0.9999), min_points=20) -> TailEstimate:
    """Tail exponent from a log-log regression of the empirical survival.

    Uses the order statistics whose ranks fall in ``window`` (as quantile
    levels) and the survival plotting position ``(n - i + 1/2) / n``.
    """
    lo, hi = window
    if not 0 < lo < hi < 1:
        raise ValueError("window must satisfy 0 < lo < hi < 1")
    x = np.sort(_values(a))
    n = x.size
    i0 = int(math.ceil(lo * n))
    i1 = int(math.floor(hi * n))
    idx = np.arange(max(i0, 1), min(i1, n) + 1)  # 1-based ranks
    xs = x[idx - 1]
    keep = xs > 0
    idx, xs = idx[keep], xs[keep]
    if idx.size < min_points:
        raise ValueError(f"too few tail points ({idx.size} < {min_points})")
    surv = (n - idx + 0.5) / n
    lx, ly = np.log(xs), np.log(surv)
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope = coef[0]
    resid = ly - A @ coef
    dof = max(idx.size - 2, 1)
    s2 = float(resid @ resid) / dof
    sxx = float(((lx - lx.mean()) ** 2).sum())
    se = math.sqrt(s2 / sxx) if sxx > 0 else float("inf")
    return TailEstimate(float(-slope), se, (lo, hi), int(idx.size), int(n))


def mc_transform(a, kind, grid) -> TransformEstimate:
    """Sample means of ``exp(-s X)`` or ``exp(i t X)`` with standard errors."""
    v = _values(a)
    if v.size == 0:
        raise ValueError("empty batch")
    args = np.atleast_1d(np.asarray(grid, dtype=float))
    n = v.size
    est = np.empty(args.size, dtype=complex)
    ser = np.empty(args.size)
    sei = np.empty(args.size)
    for j, s in enumerate(args):
        if kind == "laplace":
            if np.any(v < 0):
                raise ValueError("Laplace transform needs nonnegative draws")
            r = np.exp(-s * v)
            est[j] = r.mean()
            ser[j] = r.std(ddof=1) / math.sqrt(n)
            sei[j] = 0.0
        elif kind == "charfun":
            c, sn = np.cos(s * v), np.sin(s * v)
            est[j] = complex(c.mean(), sn.mean())
            ser[j] = c.std(ddof=1) / math.sqrt(n)
            sei[j] = sn.std(ddof=1) / math.sqrt(n)
        else:
            raise ValueError(f"kind must be 'laplace' or 'charfun', got {kind!r}")
    return TransformEstimate(kind, args, est, ser, sei, n)
