"""Special functions and classical tests used throughout the scheduler.

Chi-squared and non-central chi-squared densities/CDFs, Student-t quantiles,
a one-sample Kolmogorov-Smirnov test, one-sided confidence bounds, and the
effect-size / significance helpers used by the experiment harness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import stats as sps


@dataclass(frozen=True)
class ConfidenceBound:
    """One-sided upper confidence bound on a mean.

    ``degenerate`` marks bounds computed from samples with zero spread,
    where the bound collapses to the sample mean.
    """

    estimate: float
    upper: float
    level: float
    side: str = "one-sided-upper"
    degenerate: bool = False


class EffectSize(NamedTuple):
    d: float
    degenerate: bool


class TestResult(NamedTuple):
    p_value: float
    degenerate: bool


def _check_chi2_args(x: float, d: int) -> None:
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if d < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {d}")


def chi2_pdf(x, d: int):
    """Density of the central chi-squared distribution with d degrees of freedom."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    _check_chi2_args(0.0, d)
    out = sps.chi2.pdf(xs, d)
    return float(out) if np.isscalar(x) else out


def chi2_cdf(x, d: int):
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    _check_chi2_args(0.0, d)
    out = sps.chi2.cdf(xs, d)
    return float(out) if np.isscalar(x) else out


def noncentral_chi2_pdf(x, d: int, lam: float):
    """Density of the non-central chi-squared distribution chi2_d(lam).

    lam = 0 reduces exactly to the central density.
    """
    if lam < 0:
        raise ValueError(f"non-centrality must be >= 0, got {lam}")
    if lam == 0:
        return chi2_pdf(x, d)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    _check_chi2_args(0.0, d)
    out = sps.ncx2.pdf(xs, d, lam)
    return float(out) if np.isscalar(x) else out


def noncentral_chi2_cdf(x, d: int, lam: float):
    if lam < 0:
        raise ValueError(f"non-centrality must be >= 0, got {lam}")
    if lam == 0:
        return chi2_cdf(x, d)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("x must be >= 0")
    _check_chi2_args(0.0, d)
    out = sps.ncx2.cdf(xs, d, lam)
    return float(out) if np.isscalar(x) else out


def t_quantile(p: float, nu: float) -> float:
    """Inverse CDF of Student's t with nu degrees of freedom.

    Fractional nu is allowed (Welch-Satterthwaite).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if nu <= 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    return float(sps.t.ppf(p, nu))


def ks_test(samples: Sequence[float], cdf: Callable[[np.ndarray], np.ndarray]):
    """One-sample Kolmogorov-Smirnov test against a fully specified CDF.

    Returns (D, p) with D the sup distance between the empirical CDF and
    ``cdf`` and p from the asymptotic Kolmogorov series.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 8:
        raise ValueError(f"need at least 8 samples, got {n}")
    f = np.asarray(cdf(x), dtype=float)
    grid = np.arange(1, n + 1) / n
    d_stat = float(max(np.max(grid - f), np.max(f - (grid - 1.0 / n))))
    p = _kolmogorov_sf(math.sqrt(n) * d_stat)
    return d_stat, p


def _kolmogorov_sf(t: float) -> float:
    """Survival function of the Kolmogorov distribution, 2 sum (-1)^(k-1) exp(-2 k^2 t^2)."""
    if t <= 0:
        return 1.0
    total = 0.0
    for k in itertools.count(1):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * t * t)
        total += term
        if abs(term) < 1e-12:
            break
    return float(min(1.0, max(0.0, total)))


def one_sided_ucb(samples: Sequence[float], level: float) -> ConfidenceBound:
    """Upper confidence bound mean + t_{n-1,level} * s / sqrt(n) on paired samples.

    Zero sample spread yields a degenerate bound equal to the mean.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    mean = float(np.mean(x))
    s = float(np.std(x, ddof=1))
    if s == 0.0:
        return ConfidenceBound(estimate=mean, upper=mean, level=level, degenerate=True)
    upper = mean + t_quantile(level, n - 1) * s / math.sqrt(n)
    return ConfidenceBound(estimate=mean, upper=upper, level=level)


def welch_ucb(a: Sequence[float], b: Sequence[float], level: float) -> ConfidenceBound:
    """Two-sample Welch upper bound on mean(a) - mean(b) with fractional dof."""
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    if xa.size < 2 or xb.size < 2:
        raise ValueError("both samples need at least 2 observations")
    va = float(np.var(xa, ddof=1))
    vb = float(np.var(xb, ddof=1))
    diff = float(np.mean(xa) - np.mean(xb))
    se_sq = va / xa.size + vb / xb.size
    if se_sq == 0.0:
        return ConfidenceBound(estimate=diff, upper=diff, level=level, degenerate=True)
    nu = se_sq**2 / (
        (va / xa.size) ** 2 / (xa.size - 1) + (vb / xb.size) ** 2 / (xb.size - 1)
    )
    upper = diff + t_quantile(level, nu) * math.sqrt(se_sq)
    return ConfidenceBound(estimate=diff, upper=upper, level=level)


def clopper_pearson_upper(successes: int, trials: int, alpha: float) -> float:
    """Exact one-sided upper binomial confidence bound at level 1 - alpha."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must be in [0, {trials}], got {successes}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if successes == trials:
        return 1.0
    return float(sps.beta.ppf(1.0 - alpha, successes + 1, trials - successes))


def cohens_d(a: Sequence[float], b: Sequence[float]) -> EffectSize:
    """Pooled-standard-deviation Cohen's d for two equal-length samples."""
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    if xa.size == 0 or xa.size != xb.size:
        raise ValueError("samples must be equal-length and non-empty")
    va = float(np.var(xa, ddof=1)) if xa.size > 1 else 0.0
    vb = float(np.var(xb, ddof=1)) if xb.size > 1 else 0.0
    pooled = math.sqrt((va + vb) / 2.0)
    diff = float(np.mean(xa) - np.mean(xb))
    if pooled == 0.0:
        return EffectSize(d=0.0, degenerate=True)
    return EffectSize(d=diff / pooled, degenerate=False)


def paired_t_test(diffs: Sequence[float]) -> TestResult:
    """Two-tailed paired t-test on the vector of paired differences."""
    x = np.asarray(diffs, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 pairs, got {n}")
    s = float(np.std(x, ddof=1))
    if s == 0.0:
        return TestResult(p_value=1.0 if np.mean(x) == 0 else 0.0, degenerate=True)
    t = float(np.mean(x)) / (s / math.sqrt(n))
    p = 2.0 * float(sps.t.sf(abs(t), n - 1))
    return TestResult(p_value=min(1.0, p), degenerate=False)


def wilcoxon_signed_rank(diffs: Sequence[float]) -> TestResult:
    """Two-tailed Wilcoxon signed-rank test on paired differences.

    Zero differences are dropped; ties get average ranks. Exact permutation
    null for <= 15 nonzero pairs, normal approximation with tie correction
    above that.
    """
    x = np.asarray(diffs, dtype=float)
    if x.size < 6:
        raise ValueError(f"need at least 6 pairs, got {x.size}")
    nz = x[x != 0.0]
    if nz.size == 0:
        return TestResult(p_value=1.0, degenerate=True)
    ranks = sps.rankdata(np.abs(nz))
    w_plus = float(np.sum(ranks[nz > 0]))
    n = nz.size
    if n <= 15:
        # Enumerate all sign assignments of the observed ranks.
        totals = np.zeros(1)
        for r in ranks:
            totals = np.concatenate([totals, totals + r])
        total_sum = float(np.sum(ranks))
        dist = np.minimum(totals, total_sum - totals)
        observed = min(w_plus, total_sum - w_plus)
        p = float(np.mean(dist <= observed + 1e-12))
        return TestResult(p_value=min(1.0, p), degenerate=False)
    mean = n * (n + 1) / 4.0
    _, counts = np.unique(ranks, return_counts=True)
    tie_corr = float(np.sum(counts**3 - counts)) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_corr
    z = (w_plus - mean) / math.sqrt(var)
    p = 2.0 * float(sps.norm.sf(abs(z)))
    return TestResult(p_value=min(1.0, p), degenerate=False)
