"""Pauli-string algebra for Hamiltonians and commutator variance proxies.

Qubit index 0 is the leftmost letter of a Pauli string and corresponds to
bit 0 (least significant) of the statevector amplitude index.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

import numpy as np

_SINGLE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (phase, product letter) for single-qubit Pauli multiplication a*b.
_PRODUCT = {}
for _p in "IXYZ":
    _PRODUCT[("I", _p)] = (1.0, _p)
    _PRODUCT[(_p, "I")] = (1.0, _p)
    _PRODUCT[(_p, _p)] = (1.0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (1j, _c)
    _PRODUCT[(_b, _a)] = (-1j, _c)


@dataclass(frozen=True)
class PauliTerm:
    """A weighted Pauli string, e.g. -1.0 * ZZIIII."""

    coefficient: complex
    letters: str

    def __post_init__(self):
        if not self.letters or any(c not in "IXYZ" for c in self.letters):
            raise ValueError(f"invalid Pauli string {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)


def _term_product(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    phase = 1.0 + 0.0j
    out = []
    for la, lb in zip(a.letters, b.letters):
        ph, lc = _PRODUCT[(la, lb)]
        phase *= ph
        out.append(lc)
    return PauliTerm(a.coefficient * b.coefficient * phase, "".join(out))


class PauliSum:
    """Sum of Pauli terms on a fixed qubit register.

    Hamiltonians carry real coefficients; intermediate products (commutators)
    may be complex.
    """

    def __init__(self, terms, n_qubits: int | None = None):
        terms = list(terms)
        if not terms and n_qubits is None:
            raise ValueError("empty sums need an explicit n_qubits")
        self.n_qubits = n_qubits if n_qubits is not None else terms[0].n_qubits
        for t in terms:
            if t.n_qubits != self.n_qubits:
                raise ValueError("all terms must act on the same register")
        self.terms = terms
        self._lock = threading.Lock()
        self._matrix: np.ndarray | None = None

    def simplify(self, tol: float = 0.0) -> "PauliSum":
        """Combine like terms and drop coefficients with |c| <= tol."""
        acc: dict[str, complex] = {}
        for t in self.terms:
            acc[t.letters] = acc.get(t.letters, 0.0) + t.coefficient
        kept = [
            PauliTerm(c, s) for s, c in sorted(acc.items()) if abs(c) > tol
        ]
        return PauliSum(kept, n_qubits=self.n_qubits)

    def __mul__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise ValueError("register size mismatch")
        prods = [_term_product(a, b) for a in self.terms for b in other.terms]
        return PauliSum(prods, n_qubits=self.n_qubits).simplify(tol=1e-15)

    def scaled(self, factor: complex) -> "PauliSum":
        return PauliSum(
            [PauliTerm(factor * t.coefficient, t.letters) for t in self.terms],
            n_qubits=self.n_qubits,
        )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise ValueError("register size mismatch")
        return PauliSum(self.terms + other.terms, n_qubits=self.n_qubits)

    def frobenius_norm_sq(self) -> float:
        """||A||_F^2 = sum_s |c_s|^2 * 2^n over the combined terms."""
        combined = self.simplify()
        return float(
            sum(abs(t.coefficient) ** 2 for t in combined.terms) * 2**self.n_qubits
        )

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; qubit 0 is the least significant amplitude bit."""
        with self._lock:
            if self._matrix is None:
                dim = 2**self.n_qubits
                mat = np.zeros((dim, dim), dtype=complex)
                for t in self.terms:
                    term_mat = np.array([[t.coefficient]], dtype=complex)
                    for letter in reversed(t.letters):
                        term_mat = np.kron(term_mat, _SINGLE_MATRICES[letter])
                    mat += term_mat
                self._matrix = mat
            return self._matrix

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Matrix-vector product without forming the dense matrix."""
        if psi.size != 2**self.n_qubits:
            raise ValueError("statevector dimension mismatch")
        out = np.zeros_like(psi, dtype=complex)
        tensor = psi.reshape((2,) * self.n_qubits)
        for t in self.terms:
            cur = tensor
            phase = complex(t.coefficient)
            for qubit, letter in enumerate(t.letters):
                axis = self.n_qubits - 1 - qubit  # qubit 0 = least significant bit
                if letter == "I":
                    continue
                if letter in ("Z", "Y"):
                    sign = np.ones((2,) * self.n_qubits)
                    idx = [slice(None)] * self.n_qubits
                    idx[axis] = 1
                    sign[tuple(idx)] = -1.0
                    cur = cur * sign
                if letter in ("X", "Y"):
                    cur = np.flip(cur, axis=axis)
                if letter == "Y":
                    phase *= 1j
            out += phase * cur.reshape(-1)
        return out

    def to_json(self) -> str:
        payload = {
            "n": self.n_qubits,
            "terms": [
                {"coeff": float(np.real(t.coefficient)), "pauli": t.letters}
                for t in self.terms
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "PauliSum":
        payload = json.loads(text)
        terms = [
            PauliTerm(float(item["coeff"]), str(item["pauli"]))
            for item in payload["terms"]
        ]
        return cls(terms, n_qubits=int(payload["n"]))


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    return ((a * b) + (b * a).scaled(-1.0)).simplify(tol=1e-15)


def lie_proxy(generator: PauliSum, observable: PauliSum) -> float:
    """Squared Frobenius norm of [generator, observable] via Pauli algebra."""
    if generator.n_qubits != observable.n_qubits:
        raise ValueError("register size mismatch")
    return commutator(generator, observable).frobenius_norm_sq()
