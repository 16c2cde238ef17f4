"""Sequential plateau-vs-informative regime test.

The detector whitens a per-coordinate gradient estimate into a statistic s
that is chi-squared under a true plateau and non-central chi-squared in an
informative region, accumulates log-likelihood increments across rounds, and
decides once the cumulative sum crosses an upper or lower threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .stats import chi2_pdf, noncentral_chi2_pdf


@dataclass(frozen=True)
class GradientEstimate:
    """Per-coordinate gradient means with their shot-noise variances."""

    means: np.ndarray
    variances: np.ndarray
    shots: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "variances", np.asarray(self.variances, dtype=float))
        object.__setattr__(self, "shots", np.asarray(self.shots, dtype=int))
        if not (self.means.shape == self.variances.shape == self.shots.shape):
            raise ValueError("means, variances and shots must have equal length")

    @property
    def dimension(self) -> int:
        return self.means.size

    @property
    def shots_spent(self) -> int:
        return int(np.sum(self.shots))


@dataclass(frozen=True)
class WhitenedStatistic:
    s: float
    d: int
    shots_per_coord: np.ndarray
    sigma_sq: np.ndarray


class Decision(str, Enum):
    CONTINUE = "continue"
    PLATEAU = "plateau"
    INFORMATIVE = "informative"


def default_lambda1(d: int) -> float:
    """Design alternative one chi-squared standard deviation above the null mean."""
    return d + 2.0 * math.sqrt(2.0 * d)


@dataclass(frozen=True)
class RegimeTestConfig:
    alpha: float = 0.05
    beta: float = 0.05
    lambda1: float = 0.0  # 0 means "use default_lambda1(d)"
    calibration: str = "ville"  # "ville" or "wald"
    max_rounds: int = 50
    exact_llr: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5 or not 0.0 < self.beta < 0.5:
            raise ValueError("alpha and beta must lie in (0, 1/2)")
        if self.calibration not in ("ville", "wald"):
            raise ValueError(f"unknown calibration {self.calibration!r}")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")

    def lambda1_for(self, d: int) -> float:
        return self.lambda1 if self.lambda1 > 0 else default_lambda1(d)


@dataclass(frozen=True)
class RegimeTestState:
    Lambda: float = 0.0
    round: int = 0
    decision: Decision = Decision.CONTINUE


def whiten(grad: GradientEstimate, sigma_sq, shots) -> WhitenedStatistic:
    """Whitened squared gradient norm s = sum_i (B_i / sigma_i^2) g_i^2.

    The same allocation appears in numerator and scaling, so s stays central
    chi-squared under a plateau regardless of how shots were distributed.
    """
    sig = np.asarray(sigma_sq, dtype=float)
    b = np.asarray(shots, dtype=float)
    if sig.size != grad.dimension or b.size != grad.dimension:
        raise ValueError("sigma_sq and shots must match the gradient dimension")
    if np.any(sig <= 0):
        raise ValueError("all sigma_sq must be positive")
    if np.any(b < 1):
        raise ValueError("all shot counts must be >= 1")
    s = float(np.sum((b / sig) * grad.means**2))
    return WhitenedStatistic(s=s, d=grad.dimension, shots_per_coord=b, sigma_sq=sig)


def llr_step(s: float, d: int, lambda1: float) -> float:
    """Per-round log-likelihood increment (s - d)/2 - lambda1/2."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return (s - d) / 2.0 - lambda1 / 2.0


def exact_llr_step(s: float, d: int, lambda1: float) -> float:
    """Exact log density ratio of chi2_d(lambda1) to chi2_d at s."""
    if s < 0:
        raise ValueError("s must be >= 0")
    p1 = noncentral_chi2_pdf(s, d, lambda1)
    p0 = chi2_pdf(s, d)
    if p0 == 0.0 or p1 == 0.0:
        # Both densities vanish at the origin for d > 2; treat as no evidence.
        return 0.0 if p1 == p0 else math.copysign(700.0, p1 - p0)
    return math.log(p1) - math.log(p0)


def thresholds(config: RegimeTestConfig) -> tuple[float, float]:
    """Upper/lower stopping thresholds (A, B) for the cumulative log-likelihood."""
    if config.calibration == "ville":
        return math.log(1.0 / config.alpha), math.log(config.beta)
    return (
        math.log((1.0 - config.beta) / config.alpha),
        math.log(config.beta / (1.0 - config.alpha)),
    )


def update(state: RegimeTestState, s: float, d: int, config: RegimeTestConfig) -> RegimeTestState:
    """Advance the test by one observed statistic.

    After max_rounds without a crossing the test resolves to plateau:
    exploring costs bounded shots while exploiting a false informative call
    wastes the remaining budget.
    """
    if state.decision is not Decision.CONTINUE:
        raise ValueError("cannot update a decided test state")
    lam1 = config.lambda1_for(d)
    step = exact_llr_step(s, d, lam1) if config.exact_llr else llr_step(s, d, lam1)
    a, b = thresholds(config)
    lam = state.Lambda + step
    k = state.round + 1
    if lam >= a:
        decision = Decision.INFORMATIVE
    elif lam <= b:
        decision = Decision.PLATEAU
    elif k >= config.max_rounds:
        decision = Decision.PLATEAU
    else:
        decision = Decision.CONTINUE
    return RegimeTestState(Lambda=lam, round=k, decision=decision)
