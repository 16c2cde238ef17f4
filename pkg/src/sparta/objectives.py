"""Objective abstractions consumed by the optimizer.

Every objective exposes exact (diagnostic) evaluation plus noisy evaluation
and noisy gradient estimation whose variance scales inversely with the shot
count spent, so the optimizer can treat quantum-circuit objectives and the
synthetic plateau landscape uniformly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .pauli import lie_proxy
from .regime import GradientEstimate
from .sim import (
    QaoaCircuit,
    ShotNoiseModel,
    exact_cost,
    exact_gradient,
    ground_energy,
    param_shift_gradient,
)


@dataclass(frozen=True)
class NoisyValue:
    mean: float
    variance_estimate: float
    shots_spent: int


class Objective:
    """Interface shared by all objectives."""

    dimension: int

    def eval_exact(self, theta) -> float:
        raise NotImplementedError

    def eval_noisy(self, theta, shots: int, rng: np.random.Generator) -> NoisyValue:
        raise NotImplementedError

    def grad_noisy(self, theta, shots_per_coord, rng: np.random.Generator) -> GradientEstimate:
        raise NotImplementedError

    def grad_oracle(self, theta) -> np.ndarray:
        raise NotImplementedError

    def lie_proxies(self):
        """Per-parameter commutator proxies, or None when generators are unknown."""
        return None


class QaoaObjective(Objective):
    """TFIM/QAOA circuit energy under the Gaussian shot-noise surrogate."""

    def __init__(self, circuit: QaoaCircuit, noise: ShotNoiseModel | None = None):
        self.circuit = circuit
        self.noise = noise if noise is not None else ShotNoiseModel()
        self.dimension = circuit.dimension
        self._ground: float | None = None

    def eval_exact(self, theta) -> float:
        return exact_cost(self.circuit, theta)

    def eval_noisy(self, theta, shots: int, rng: np.random.Generator) -> NoisyValue:
        if shots < 1:
            raise ValueError("shots must be >= 1")
        value = self.eval_exact(theta)
        var = self.noise.sigma**2 / shots
        if self.noise.mode == "gaussian":
            value += rng.normal(0.0, math.sqrt(var))
        else:
            var = 0.0
        return NoisyValue(mean=value, variance_estimate=var, shots_spent=shots)

    def grad_noisy(self, theta, shots_per_coord, rng) -> GradientEstimate:
        return param_shift_gradient(self.circuit, theta, shots_per_coord, self.noise, rng)

    def grad_oracle(self, theta) -> np.ndarray:
        return exact_gradient(self.circuit, theta)

    def lie_proxies(self) -> np.ndarray:
        obs = self.circuit.hamiltonian
        return np.array([lie_proxy(g, obs) for g in self.circuit.generators])

    def ground_energy(self) -> float:
        if self._ground is None:
            self._ground = ground_energy(self.circuit.hamiltonian)
        return self._ground


class PlateauLandscape(Objective):
    """Synthetic barren-plateau objective.

    A high-frequency separable ripple carries gradient variance calibrated to
    b_v**-n_eff while keeping cost values shallow, and a deep Gaussian gorge
    of width b_w**-n_eff supported on the first n_eff coordinates holds the
    global minimum near -depth_coeff * n_eff.
    """

    def __init__(
        self,
        d: int,
        n_eff: int,
        b_v: float,
        b_w: float,
        seed: int,
        depth_coeff: float = 15.0,
        ripple_scale: float = 8.0,
        noise_sigma: float = 0.05,
        grad_noise_sigma: float = 5.0,
        base_variance: float = 1.0,
        _frozen: dict | None = None,
    ):
        if d < 2:
            raise ValueError("d must be >= 2")
        if b_v <= 1.0 or b_w <= 1.0:
            raise ValueError("scaling bases must exceed 1")
        if not 1 <= n_eff <= d:
            raise ValueError("n_eff must lie in [1, d]")
        self.dimension = d
        self.n_eff = n_eff
        self.b_v = b_v
        self.b_w = b_w
        self.seed = seed
        self.depth_coeff = depth_coeff
        self.ripple_scale = ripple_scale
        self.noise_sigma = noise_sigma
        self.grad_noise_sigma = grad_noise_sigma
        self.base_variance = base_variance

        self.width = b_w ** (-n_eff)
        self.depth = depth_coeff * n_eff
        n_info = math.ceil(d / 3)
        self.informative_mask = np.zeros(d, dtype=bool)
        self.informative_mask[:n_info] = True
        self.gorge_dims = np.arange(n_eff)

        if _frozen is not None:
            self.c = np.asarray(_frozen["c"], dtype=float)
            self.phi = np.asarray(_frozen["phi"], dtype=float)
            self.theta_star = np.asarray(_frozen["theta_star"], dtype=float)
            self.amplitude = float(_frozen["amplitude"])
            return

        rng = np.random.default_rng(seed)
        self.c = np.where(self.informative_mask, 1.0, 0.1)
        self.phi = rng.uniform(-np.pi, np.pi, size=d)
        self.theta_star = rng.uniform(-2.0, 2.0, size=d)
        # Calibrate the ripple amplitude with a frozen Monte Carlo probe so the
        # mean per-coordinate plateau gradient variance hits the target law.
        probe = rng.uniform(-np.pi, np.pi, size=(10_000, d))
        grads = self.c[None, :] * np.cos(self.ripple_scale * (probe - self.phi[None, :]))
        measured = float(np.mean(np.var(grads, axis=0)))
        target = base_variance * b_v ** (-n_eff)
        self.amplitude = math.sqrt(target / measured)

    @property
    def variance_suppression(self) -> float:
        return self.b_v ** (-self.n_eff)

    def _gorge(self, theta: np.ndarray) -> float:
        delta = theta[self.gorge_dims] - self.theta_star[self.gorge_dims]
        return -self.depth * math.exp(-float(delta @ delta) / (2.0 * self.width**2))

    def eval_exact(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        ripple = (self.amplitude / self.ripple_scale) * float(
            np.sum(self.c * np.sin(self.ripple_scale * (theta - self.phi)))
        )
        return ripple + self._gorge(theta)

    def grad_oracle(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        grad = self.amplitude * self.c * np.cos(self.ripple_scale * (theta - self.phi))
        delta = np.zeros_like(theta)
        delta[self.gorge_dims] = theta[self.gorge_dims] - self.theta_star[self.gorge_dims]
        grad += -delta / self.width**2 * self._gorge(theta)
        return grad

    def eval_noisy(self, theta, shots: int, rng) -> NoisyValue:
        if shots < 1:
            raise ValueError("shots must be >= 1")
        var = self.noise_sigma**2 / shots
        value = self.eval_exact(theta) + rng.normal(0.0, math.sqrt(var))
        return NoisyValue(mean=value, variance_estimate=var, shots_spent=shots)

    def grad_noisy(self, theta, shots_per_coord, rng) -> GradientEstimate:
        shots = np.asarray(shots_per_coord, dtype=int)
        if shots.size != self.dimension or np.any(shots < 1):
            raise ValueError("need one positive shot count per coordinate")
        variances = self.grad_noise_sigma**2 / shots
        means = self.grad_oracle(theta) + rng.normal(0.0, np.sqrt(variances))
        return GradientEstimate(means=means, variances=variances, shots=shots)

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.dimension,
                "n_eff": self.n_eff,
                "b_v": self.b_v,
                "b_w": self.b_w,
                "seed": self.seed,
                "depth_coeff": self.depth_coeff,
                "ripple_scale": self.ripple_scale,
                "noise_sigma": self.noise_sigma,
                "grad_noise_sigma": self.grad_noise_sigma,
                "base_variance": self.base_variance,
                "c": self.c.tolist(),
                "phi": self.phi.tolist(),
                "theta_star": self.theta_star.tolist(),
                "amplitude": self.amplitude,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PlateauLandscape":
        p = json.loads(text)
        return cls(
            d=p["d"],
            n_eff=p["n_eff"],
            b_v=p["b_v"],
            b_w=p["b_w"],
            seed=p["seed"],
            depth_coeff=p["depth_coeff"],
            ripple_scale=p["ripple_scale"],
            noise_sigma=p["noise_sigma"],
            grad_noise_sigma=p["grad_noise_sigma"],
            base_variance=p["base_variance"],
            _frozen={
                "c": p["c"],
                "phi": p["phi"],
                "theta_star": p["theta_star"],
                "amplitude": p["amplitude"],
            },
        )


def plateau_landscape(
    d: int = 12,
    n_eff: int = 2,
    b_v: float = 2.0,
    b_w: float = 1.4,
    seed: int = 0,
    **kwargs,
) -> PlateauLandscape:
    return PlateauLandscape(d=d, n_eff=n_eff, b_v=b_v, b_w=b_w, seed=seed, **kwargs)


START_DISTANCE_WIDTHS = 6.1


def standard_start(landscape: PlateauLandscape) -> np.ndarray:
    """Deterministic start at 6.1 gorge widths from the gorge center.

    The offset lies inside the gorge-supporting subspace so that the start
    distance is meaningful in the coordinates where the gorge lives.
    """
    rng = np.random.default_rng(landscape.seed + 1)
    direction = np.zeros(landscape.dimension)
    raw = rng.normal(size=landscape.gorge_dims.size)
    direction[landscape.gorge_dims] = raw / np.linalg.norm(raw)
    return landscape.theta_star + START_DISTANCE_WIDTHS * landscape.width * direction


def estimate_direction_probability(
    objective: Objective,
    theta,
    radius: float,
    tau: float,
    n_directions: int = 10_000,
    rng: np.random.Generator | None = None,
) -> float:
    """Fraction of uniform unit directions that descend by at least tau * R^2."""
    if rng is None:
        rng = np.random.default_rng(0)
    theta = np.asarray(theta, dtype=float)
    base = objective.eval_exact(theta)
    hits = 0
    for _ in range(n_directions):
        v = rng.normal(size=theta.size)
        v /= np.linalg.norm(v)
        if objective.eval_exact(theta + radius * v) - base <= -tau * radius**2:
            hits += 1
    return hits / n_directions


class QuadraticObjective(Objective):
    """Strongly convex quadratic f = 0.5 ||theta||^2 with Gaussian shot noise."""

    def __init__(self, d: int, noise_sigma: float = 0.05):
        self.dimension = d
        self.noise_sigma = noise_sigma

    def eval_exact(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        return 0.5 * float(theta @ theta)

    def grad_oracle(self, theta) -> np.ndarray:
        return np.asarray(theta, dtype=float).copy()

    def eval_noisy(self, theta, shots: int, rng) -> NoisyValue:
        var = self.noise_sigma**2 / shots
        return NoisyValue(
            mean=self.eval_exact(theta) + rng.normal(0.0, math.sqrt(var)),
            variance_estimate=var,
            shots_spent=shots,
        )

    def grad_noisy(self, theta, shots_per_coord, rng) -> GradientEstimate:
        shots = np.asarray(shots_per_coord, dtype=int)
        variances = self.noise_sigma**2 / shots
        means = self.grad_oracle(theta) + rng.normal(0.0, np.sqrt(variances))
        return GradientEstimate(means=means, variances=variances, shots=shots)
