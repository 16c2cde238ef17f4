"""Regime-switching shot-frugal optimizer.

One outer iteration draws a whitened gradient statistic, advances the
sequential regime test, and dispatches to trust-region exploration (plateau)
or variance-adaptive gradient descent (informative). A global shot ledger
accounts for every objective evaluation across pilot, testing, exploration
and exploitation phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .objectives import Objective
from .regime import (
    Decision,
    GradientEstimate,
    RegimeTestConfig,
    RegimeTestState,
    update,
    whiten,
)
from .stats import one_sided_ucb


class BudgetError(RuntimeError):
    """Raised when a run cannot even cover its mandatory phases."""


@dataclass(frozen=True)
class PtrConfig:
    r0: float = 0.1
    k_max: int = 6
    m: int = 8
    tau: float = 0.1
    alpha_acc: float = 0.05
    n_pair: int = 8
    shots_per_eval: int = 4

    def __post_init__(self):
        if self.r0 <= 0 or self.tau <= 0:
            raise ValueError("r0 and tau must be positive")
        if self.k_max < 1 or self.m < 1 or self.n_pair < 2:
            raise ValueError("k_max, m must be >= 1 and n_pair >= 2")
        if not 0.0 < self.alpha_acc < 0.5:
            raise ValueError("alpha_acc must be in (0, 1/2)")

    def candidate_shots(self) -> int:
        return 2 * self.n_pair * self.shots_per_eval


@dataclass(frozen=True)
class SpartaConfig:
    eta: float = 0.05
    ema_mu: float = 0.9
    s_min: int = 6
    lipschitz_l: float = 1.0
    budget_total: int = 25_000
    pilot_fraction: float = 0.10
    pilot_shots_per_coord: int = 100
    test_shots_per_coord: int = 100
    exploit_steps: int = 10
    ptr: PtrConfig = field(default_factory=PtrConfig)
    test: RegimeTestConfig = field(default_factory=RegimeTestConfig)
    lie_weights: str = "uniform"  # "uniform" or "commutator"
    allocation_rule: str = "gcans"  # "gcans" or "sigma_proportional"
    sigma_rule_total: int = 0  # 0 -> d * s_min
    refine_lambda1: bool = False

    def __post_init__(self):
        if not 0.0 < self.eta < 2.0 / self.lipschitz_l:
            raise ValueError("need 0 < eta < 2/L for the exploitation phase")
        if not 0.0 < self.pilot_fraction < 0.5:
            raise ValueError("pilot_fraction must lie in (0, 0.5)")
        if self.s_min < 1 or self.exploit_steps < 1:
            raise ValueError("s_min and exploit_steps must be >= 1")
        if self.lie_weights not in ("uniform", "commutator"):
            raise ValueError(f"unknown lie_weights {self.lie_weights!r}")
        if self.allocation_rule not in ("gcans", "sigma_proportional"):
            raise ValueError(f"unknown allocation_rule {self.allocation_rule!r}")


@dataclass
class ShotLedger:
    budget: int
    breakdown: dict = field(
        default_factory=lambda: {"pilot": 0, "regime_test": 0, "ptr": 0, "exploit": 0}
    )

    def debit(self, phase: str, shots: int) -> None:
        self.breakdown[phase] += int(shots)

    @property
    def spent(self) -> int:
        return sum(self.breakdown.values())

    @property
    def remaining(self) -> int:
        return self.budget - self.spent

    @property
    def exhausted(self) -> bool:
        return self.spent >= self.budget


@dataclass
class GcansState:
    chi: np.ndarray
    sigma_ema: np.ndarray
    step: int = 0


@dataclass(frozen=True)
class PilotResult:
    sigma_sq: np.ndarray
    proxies: np.ndarray
    explore_shots: np.ndarray
    mean_whitened: float
    rounds: int


@dataclass
class TrialResult:
    trajectory: list
    final_theta: np.ndarray
    final_exact_cost: float
    iterations: int
    plateau_iterations: int
    exploit_iterations: int
    seed: int
    spent: int
    breakdown: dict
    thetas: list = field(default_factory=list)  # one parameter vector per row


def explore_allocation(proxies, sigma_sq, round_budget: int, s_min: int) -> np.ndarray:
    """Integer shot allocation proportional to V_i / sigma_i^2, each >= s_min."""
    weights = np.asarray(proxies, dtype=float) / np.asarray(sigma_sq, dtype=float)
    if np.all(weights <= 0):
        weights = np.ones_like(weights)
    weights = np.maximum(weights, 1e-12 * np.max(weights))
    raw = weights / np.sum(weights) * round_budget
    return np.maximum(s_min, np.rint(raw).astype(int))


def pilot(
    objective: Objective,
    theta,
    config: SpartaConfig,
    rng: np.random.Generator,
    ledger: ShotLedger,
) -> PilotResult:
    """Estimate per-coordinate noise scales and set the exploration allocation."""
    d = objective.dimension
    share = config.pilot_fraction * config.budget_total
    b_pilot = config.pilot_shots_per_coord
    rounds = max(5, int(share // (d * b_pilot)))
    if ledger.remaining < rounds * d * b_pilot:
        raise BudgetError(
            f"pilot needs {rounds * d * b_pilot} shots but only "
            f"{ledger.remaining} remain"
        )
    shots = np.full(d, b_pilot, dtype=int)
    estimates = []
    for _ in range(rounds):
        grad = objective.grad_noisy(theta, shots, rng)
        ledger.debit("pilot", grad.shots_spent)
        estimates.append(grad.means)
    stacked = np.vstack(estimates)
    sigma_sq = np.var(stacked, axis=0, ddof=1) * b_pilot
    if np.any(sigma_sq <= 0):
        # Noiseless objective; fall back to the reported shot-noise variances.
        reported = objective.grad_noisy(theta, shots, rng).variances * b_pilot
        ledger.debit("pilot", int(np.sum(shots)))
        sigma_sq = np.where(sigma_sq > 0, sigma_sq, np.maximum(reported, 1e-12))

    proxies = np.ones(d)
    if config.lie_weights == "commutator":
        lie = objective.lie_proxies()
        if lie is not None:
            proxies = np.asarray(lie, dtype=float)

    explore_shots = explore_allocation(
        proxies, sigma_sq, d * config.test_shots_per_coord, config.s_min
    )
    mean_grad = np.mean(stacked, axis=0)
    mean_whitened = float(np.sum(rounds * b_pilot / sigma_sq * mean_grad**2))
    return PilotResult(
        sigma_sq=sigma_sq,
        proxies=proxies,
        explore_shots=explore_shots,
        mean_whitened=mean_whitened,
        rounds=rounds,
    )


@dataclass(frozen=True)
class PtrOutcome:
    theta: np.ndarray
    accepted: bool
    moves_tested: int
    radius: float


def ptr_explore(
    objective: Objective,
    theta,
    config: SpartaConfig,
    rng: np.random.Generator,
    ledger: ShotLedger,
) -> PtrOutcome:
    """Probabilistic trust-region scan with geometric radii.

    Radii grow as r0 * 2^k; each candidate move is accepted only when the
    one-sided upper confidence bound on the paired cost difference certifies
    descent of at least tau * R^2. The first accepted move ends the scan.
    """
    theta = np.asarray(theta, dtype=float)
    ptr = config.ptr
    tested = 0
    radius = ptr.r0
    for k in range(ptr.k_max):
        radius = ptr.r0 * 2**k
        for _ in range(ptr.m):
            if ledger.remaining < ptr.candidate_shots():
                return PtrOutcome(theta, False, tested, radius)
            v = rng.normal(size=theta.size)
            v /= np.linalg.norm(v)
            candidate = theta + radius * v
            deltas = np.empty(ptr.n_pair)
            for j in range(ptr.n_pair):
                plus = objective.eval_noisy(candidate, ptr.shots_per_eval, rng)
                base = objective.eval_noisy(theta, ptr.shots_per_eval, rng)
                deltas[j] = plus.mean - base.mean
            ledger.debit("ptr", ptr.candidate_shots())
            tested += 1
            bound = one_sided_ucb(deltas, 1.0 - ptr.alpha_acc)
            if bound.degenerate and ptr.n_pair < 4:
                continue  # never accept on zero evidence spread
            if bound.upper <= -ptr.tau * radius**2:
                return PtrOutcome(candidate, True, tested, radius)
    return PtrOutcome(theta, False, tested, radius)


def gcans_allocate(state: GcansState, config: SpartaConfig, d: int) -> np.ndarray:
    """Variance-adaptive shot allocation for one gradient step."""
    sigma = np.maximum(state.sigma_ema, 0.0)
    chi_norm_sq = float(state.chi @ state.chi)
    if config.allocation_rule == "sigma_proportional":
        total = config.sigma_rule_total if config.sigma_rule_total > 0 else d * config.s_min
        if np.sum(sigma) <= 0:
            return np.full(d, config.s_min, dtype=int)
        raw = total * sigma / np.sum(sigma)
        return np.maximum(config.s_min, np.rint(raw).astype(int))
    if chi_norm_sq <= 0:
        return np.full(d, config.s_min, dtype=int)
    factor = 2.0 * config.lipschitz_l * config.eta / (2.0 - config.lipschitz_l * config.eta)
    raw = factor * sigma * np.sum(sigma) / chi_norm_sq
    return np.ceil(np.maximum(raw, config.s_min)).astype(int)


def gcans_step(
    objective: Objective,
    theta,
    state: GcansState,
    config: SpartaConfig,
    rng: np.random.Generator,
    ledger: ShotLedger,
):
    """One exploitation step: allocate shots, estimate the gradient, descend."""
    theta = np.asarray(theta, dtype=float)
    shots = gcans_allocate(state, config, objective.dimension)
    grad = objective.grad_noisy(theta, shots, rng)
    ledger.debit("exploit", grad.shots_spent)
    mu = config.ema_mu
    per_shot_sigma = np.sqrt(grad.variances * shots)
    state = GcansState(
        chi=mu * state.chi + (1.0 - mu) * grad.means,
        sigma_ema=mu * state.sigma_ema + (1.0 - mu) * per_shot_sigma,
        step=state.step + 1,
    )
    theta_new = theta - config.eta * grad.means
    return theta_new, state


@dataclass
class SpartaState:
    regime: RegimeTestState
    gcans: GcansState
    pilot: PilotResult
    test_config: RegimeTestConfig


def init_state(objective: Objective, pilot_result: PilotResult, config: SpartaConfig) -> SpartaState:
    d = objective.dimension
    test_config = config.test
    if config.refine_lambda1:
        default = test_config.lambda1_for(d)
        refined = max(default, 0.5 * pilot_result.mean_whitened - d)
        test_config = replace(test_config, lambda1=refined)
    return SpartaState(
        regime=RegimeTestState(),
        gcans=GcansState(chi=np.zeros(d), sigma_ema=np.sqrt(pilot_result.sigma_sq)),
        pilot=pilot_result,
        test_config=test_config,
    )


def sparta_step(
    objective: Objective,
    theta,
    config: SpartaConfig,
    state: SpartaState,
    rng: np.random.Generator,
    ledger: ShotLedger,
):
    """One outer iteration: test round, then PTR or exploitation on a decision.

    Returns (theta_new, state_new, events) where each event is a dict row for
    the trial trajectory.
    """
    theta = np.asarray(theta, dtype=float)
    d = objective.dimension
    if ledger.exhausted:
        raise BudgetError("budget exhausted")

    grad = objective.grad_noisy(theta, state.pilot.explore_shots, rng)
    ledger.debit("regime_test", grad.shots_spent)
    stat = whiten(grad, state.pilot.sigma_sq, state.pilot.explore_shots)
    regime = update(state.regime, stat.s, d, state.test_config)
    events = []

    if regime.decision is Decision.CONTINUE:
        state.regime = regime
        events.append(
            {"mode": "test", "decision": regime.decision.value,
             "lambda_cum": regime.Lambda, "accepted_ptr": "", "radius": "",
             "step_norm": 0.0}
        )
        return theta, state, events

    if regime.decision is Decision.PLATEAU:
        outcome = ptr_explore(objective, theta, config, rng, ledger)
        events.append(
            {"mode": "ptr", "decision": regime.decision.value,
             "lambda_cum": regime.Lambda,
             "accepted_ptr": int(outcome.accepted), "radius": outcome.radius,
             "step_norm": float(np.linalg.norm(outcome.theta - theta))}
        )
        theta = outcome.theta
    else:
        lam = regime.Lambda
        for _ in range(config.exploit_steps):
            if ledger.exhausted:
                break
            theta_new, state.gcans = gcans_step(objective, theta, state.gcans, config, rng, ledger)
            events.append(
                {"mode": "exploit", "decision": Decision.INFORMATIVE.value,
                 "lambda_cum": lam, "accepted_ptr": "", "radius": "",
                 "step_norm": float(np.linalg.norm(theta_new - theta))}
            )
            theta = theta_new
    state.regime = RegimeTestState()  # fresh test after either branch
    return theta, state, events


_MODE_FIELDS = ("iteration", "mode", "cumulative_shots", "exact_cost",
                "lambda_cum", "decision", "accepted_ptr", "radius", "step_norm")


def _row(iteration, mode, ledger, cost, **extra):
    row = {
        "iteration": iteration,
        "mode": mode,
        "cumulative_shots": ledger.spent,
        "exact_cost": cost,
        "lambda_cum": extra.get("lambda_cum", 0.0),
        "decision": extra.get("decision", ""),
        "accepted_ptr": extra.get("accepted_ptr", ""),
        "radius": extra.get("radius", ""),
        "step_norm": extra.get("step_norm", 0.0),
    }
    return row


def run_trial(
    objective: Objective,
    config: SpartaConfig,
    seed: int,
    theta0=None,
) -> TrialResult:
    """Run the full scheduler until the shot budget is exhausted."""
    if config.budget_total <= 0:
        raise BudgetError("budget must be positive")
    rng = np.random.default_rng(seed)
    ledger = ShotLedger(budget=config.budget_total)
    theta = np.zeros(objective.dimension) if theta0 is None else np.asarray(theta0, float)

    pilot_result = pilot(objective, theta, config, rng, ledger)
    state = init_state(objective, pilot_result, config)

    trajectory = [_row(0, "pilot", ledger, objective.eval_exact(theta))]
    thetas = [theta.copy()]
    iteration = 0
    plateau_iters = 0
    exploit_iters = 0
    while not ledger.exhausted:
        theta, state, events = sparta_step(objective, theta, config, state, rng, ledger)
        for ev in events:
            iteration += 1
            if ev["mode"] == "ptr":
                plateau_iters += 1
            elif ev["mode"] == "exploit":
                exploit_iters += 1
            extra = {k: v for k, v in ev.items() if k != "mode"}
            trajectory.append(_row(iteration, ev["mode"], ledger,
                                   objective.eval_exact(theta), **extra))
            thetas.append(theta.copy())
    return TrialResult(
        trajectory=trajectory,
        final_theta=theta,
        final_exact_cost=objective.eval_exact(theta),
        iterations=iteration,
        plateau_iterations=plateau_iters,
        exploit_iterations=exploit_iters,
        seed=seed,
        spent=ledger.spent,
        breakdown=dict(ledger.breakdown),
        thetas=thetas,
    )


def run_gcans_baseline(
    objective: Objective,
    config: SpartaConfig,
    seed: int,
    theta0=None,
) -> TrialResult:
    """Pure exploitation baseline: pilot for noise scales, then gradient steps only."""
    if config.budget_total <= 0:
        raise BudgetError("budget must be positive")
    rng = np.random.default_rng(seed)
    ledger = ShotLedger(budget=config.budget_total)
    theta = np.zeros(objective.dimension) if theta0 is None else np.asarray(theta0, float)

    pilot_result = pilot(objective, theta, config, rng, ledger)
    gcans = GcansState(chi=np.zeros(objective.dimension),
                       sigma_ema=np.sqrt(pilot_result.sigma_sq))
    trajectory = [_row(0, "pilot", ledger, objective.eval_exact(theta))]
    thetas = [theta.copy()]
    iteration = 0
    while not ledger.exhausted:
        theta_new, gcans = gcans_step(objective, theta, gcans, config, rng, ledger)
        iteration += 1
        trajectory.append(_row(iteration, "exploit", ledger,
                               objective.eval_exact(theta_new),
                               decision="informative",
                               step_norm=float(np.linalg.norm(theta_new - theta))))
        theta = theta_new
        thetas.append(theta.copy())
    return TrialResult(
        trajectory=trajectory,
        final_theta=theta,
        final_exact_cost=objective.eval_exact(theta),
        iterations=iteration,
        plateau_iterations=0,
        exploit_iterations=iteration,
        seed=seed,
        spent=ledger.spent,
        breakdown=dict(ledger.breakdown),
        thetas=thetas,
    )
