"""Pauli algebra checked against dense-matrix oracles."""

import numpy as np
import pytest

from sparta.pauli import PauliSum, PauliTerm, commutator, lie_proxy

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense(term: PauliTerm) -> np.ndarray:
    # Oracle built independently: qubit 0 = least significant amplitude bit.
    mat = np.array([[term.coefficient]], dtype=complex)
    for letter in reversed(term.letters):
        mat = np.kron(mat, SINGLE[letter])
    return mat


def random_sum(rng, n_qubits: int, n_terms: int) -> PauliSum:
    terms = []
    for _ in range(n_terms):
        letters = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        terms.append(PauliTerm(float(rng.normal()), letters))
    return PauliSum(terms, n_qubits=n_qubits)


class TestMatrixAgreement:
    def test_to_matrix_matches_kron_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            s = random_sum(rng, 3, 4)
            oracle = sum(dense(t) for t in s.terms)
            np.testing.assert_allclose(s.to_matrix(), oracle, atol=1e-12)

    def test_apply_matches_dense_matvec(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            s = random_sum(rng, 3, 4)
            psi = rng.normal(size=8) + 1j * rng.normal(size=8)
            np.testing.assert_allclose(s.apply(psi), s.to_matrix() @ psi, atol=1e-12)

    def test_product_matches_matrix_product(self):
        rng = np.random.default_rng(2)
        a = random_sum(rng, 2, 3)
        b = random_sum(rng, 2, 3)
        np.testing.assert_allclose(
            (a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12
        )

    def test_commutator_matches_matrix_commutator(self):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            a = random_sum(rng, n, 3)
            b = random_sum(rng, n, 3)
            ma, mb = a.to_matrix(), b.to_matrix()
            np.testing.assert_allclose(
                commutator(a, b).to_matrix(), ma @ mb - mb @ ma, atol=1e-10
            )

    def test_frobenius_norm_matches_dense(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            s = random_sum(rng, 3, 5)
            expected = np.linalg.norm(s.to_matrix(), "fro") ** 2
            assert s.frobenius_norm_sq() == pytest.approx(expected, rel=1e-10)


class TestLieProxy:
    def test_single_qubit_value(self):
        # [Z, X] = 2iY, so the squared Frobenius norm is 4 * 2 = 8.
        z = PauliSum([PauliTerm(1.0, "Z")])
        x = PauliSum([PauliTerm(1.0, "X")])
        assert lie_proxy(z, x) == pytest.approx(8.0)

    def test_commuting_strings_vanish(self):
        a = PauliSum([PauliTerm(1.0, "ZZ")])
        b = PauliSum([PauliTerm(1.0, "ZI")])
        assert lie_proxy(a, b) == 0.0

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            a = random_sum(rng, 3, 3)
            b = random_sum(rng, 3, 3)
            ma, mb = a.to_matrix(), b.to_matrix()
            expected = np.linalg.norm(ma @ mb - mb @ ma, "fro") ** 2
            assert lie_proxy(a, b) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    def test_register_mismatch_rejected(self):
        with pytest.raises(ValueError):
            lie_proxy(PauliSum([PauliTerm(1.0, "Z")]), PauliSum([PauliTerm(1.0, "ZZ")]))


class TestStructure:
    def test_simplify_combines_like_terms(self):
        s = PauliSum([PauliTerm(1.0, "XZ"), PauliTerm(2.0, "XZ"), PauliTerm(0.0, "YY")])
        out = s.simplify()
        assert len(out.terms) == 1
        assert out.terms[0].letters == "XZ"
        assert out.terms[0].coefficient == pytest.approx(3.0)

    def test_invalid_letters_rejected(self):
        with pytest.raises(ValueError):
            PauliTerm(1.0, "XA")

    def test_json_round_trip(self):
        s = PauliSum([PauliTerm(-1.0, "ZZI"), PauliTerm(-0.5, "IXI")])
        back = PauliSum.from_json(s.to_json())
        np.testing.assert_allclose(back.to_matrix(), s.to_matrix(), atol=1e-15)
