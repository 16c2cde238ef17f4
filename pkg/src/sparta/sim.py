"""Dense statevector simulation of small TFIM/QAOA instances.

Layer unitaries are computed through cached eigendecompositions of the layer
generators, which is exact and fast at the register sizes used here (n <= 10).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .pauli import PauliSum, PauliTerm
from .regime import GradientEstimate

PARAM_SHIFT = np.pi / 2.0


def build_tfim_chain(n: int, J: float, h: float) -> PauliSum:
    """Open transverse-field Ising chain -J sum Z_i Z_{i+1} - h sum X_i."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    terms = []
    for i in range(n - 1):
        letters = ["I"] * n
        letters[i] = "Z"
        letters[i + 1] = "Z"
        terms.append(PauliTerm(-J, "".join(letters)))
    for i in range(n):
        letters = ["I"] * n
        letters[i] = "X"
        terms.append(PauliTerm(-h, "".join(letters)))
    return PauliSum(terms, n_qubits=n)


def build_mixer(n: int) -> PauliSum:
    terms = []
    for i in range(n):
        letters = ["I"] * n
        letters[i] = "X"
        terms.append(PauliTerm(1.0, "".join(letters)))
    return PauliSum(terms, n_qubits=n)


def plus_state(n: int) -> np.ndarray:
    dim = 2**n
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


@dataclass(frozen=True)
class ShotNoiseModel:
    """Gaussian surrogate for shot noise: Var[g_i] = sigma^2 / B_i."""

    mode: str = "gaussian"  # "gaussian" or "exact"
    sigma: float = 0.02

    def __post_init__(self):
        if self.mode not in ("gaussian", "exact"):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.mode == "gaussian" and self.sigma <= 0:
            raise ValueError("sigma must be positive in gaussian mode")


class QaoaCircuit:
    """Alternating cost/mixer ansatz exp(-i beta H_M) exp(-i gamma H_C) per layer.

    Parameters are ordered (gamma_1, beta_1, ..., gamma_p, beta_p); the layer
    generators in parameter order are (H_C, H_M, H_C, H_M, ...).
    """

    def __init__(self, hamiltonian: PauliSum, depth: int, mixer: PauliSum | None = None):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        if hamiltonian.n_qubits < 2:
            raise ValueError("need at least 2 qubits")
        self.n_qubits = hamiltonian.n_qubits
        self.depth = depth
        self.hamiltonian = hamiltonian
        self.mixer = mixer if mixer is not None else build_mixer(self.n_qubits)
        hc = np.real(hamiltonian.to_matrix())
        hm = np.real(self.mixer.to_matrix())
        self._evals_c, self._evecs_c = np.linalg.eigh(hc)
        self._evals_m, self._evecs_m = np.linalg.eigh(hm)

    @property
    def dimension(self) -> int:
        return 2 * self.depth

    @property
    def generators(self) -> list[PauliSum]:
        gens = []
        for _ in range(self.depth):
            gens.extend([self.hamiltonian, self.mixer])
        return gens

    def _apply_exp(self, evals, evecs, angle: float, psi: np.ndarray) -> np.ndarray:
        coeffs = evecs.conj().T @ psi
        coeffs *= np.exp(-1j * angle * evals)
        return evecs @ coeffs

    def evolve(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.size != self.dimension:
            raise ValueError(
                f"expected {self.dimension} parameters, got {theta.size}"
            )
        psi = plus_state(self.n_qubits)
        for layer in range(self.depth):
            gamma, beta = theta[2 * layer], theta[2 * layer + 1]
            psi = self._apply_exp(self._evals_c, self._evecs_c, gamma, psi)
            psi = self._apply_exp(self._evals_m, self._evecs_m, beta, psi)
        return psi


def expectation(state: np.ndarray, hamiltonian: PauliSum) -> float:
    if state.size != 2**hamiltonian.n_qubits:
        raise ValueError("statevector dimension mismatch")
    value = np.vdot(state, hamiltonian.apply(state))
    assert abs(value.imag) < 1e-10
    return float(value.real)


def exact_cost(circuit: QaoaCircuit, theta) -> float:
    return expectation(circuit.evolve(theta), circuit.hamiltonian)


def exact_gradient(circuit: QaoaCircuit, theta) -> np.ndarray:
    """Parameter-shift gradient with shift pi/2, evaluated without noise."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty(theta.size)
    for i in range(theta.size):
        shifted = theta.copy()
        shifted[i] += PARAM_SHIFT
        f_plus = exact_cost(circuit, shifted)
        shifted[i] -= 2.0 * PARAM_SHIFT
        f_minus = exact_cost(circuit, shifted)
        grad[i] = 0.5 * (f_plus - f_minus)
    return grad


def param_shift_gradient(
    circuit: QaoaCircuit,
    theta,
    shots,
    noise: ShotNoiseModel,
    rng: np.random.Generator | None = None,
) -> GradientEstimate:
    """Parameter-shift gradient estimate under the Gaussian shot-noise surrogate."""
    shots = np.asarray(shots, dtype=int)
    if shots.size != 2 * circuit.depth:
        raise ValueError("one shot count per parameter required")
    if np.any(shots < 1):
        raise ValueError("all shot counts must be >= 1")
    means = exact_gradient(circuit, theta)
    if noise.mode == "gaussian":
        if rng is None:
            raise ValueError("gaussian mode requires an rng")
        variances = noise.sigma**2 / shots
        means = means + rng.normal(0.0, np.sqrt(variances))
    else:
        variances = np.zeros_like(means)
    return GradientEstimate(means=means, variances=variances, shots=shots)


def sample_gradients_at(
    circuit: QaoaCircuit,
    theta,
    shots,
    noise: ShotNoiseModel,
    rng: np.random.Generator,
    n_samples: int,
) -> np.ndarray:
    """Draw many independent noisy gradient estimates at a fixed point.

    The exact shifted costs are computed once and only the noise is redrawn,
    which keeps large calibration studies cheap.
    """
    shots = np.asarray(shots, dtype=int)
    means = exact_gradient(circuit, theta)
    sigma = noise.sigma / np.sqrt(shots)
    return means[None, :] + rng.normal(0.0, 1.0, size=(n_samples, means.size)) * sigma


def ground_energy(hamiltonian: PauliSum, v0: np.ndarray | None = None) -> float:
    """Smallest eigenvalue via Lanczos iteration on the matrix-vector product."""
    n = hamiltonian.n_qubits
    if n > 10:
        raise ValueError(f"register too large for the dense oracle: n={n}")
    dim = 2**n
    if dim <= 4:
        return float(np.min(np.linalg.eigvalsh(hamiltonian.to_matrix())))
    op = LinearOperator(
        (dim, dim), matvec=lambda v: hamiltonian.apply(v.astype(complex)), dtype=complex
    )
    if v0 is None:
        v0 = np.full(dim, 1.0 / np.sqrt(dim))
    vals = eigsh(op, k=1, which="SA", v0=v0, tol=1e-10, return_eigenvectors=False)
    return float(np.real(vals[0]))
