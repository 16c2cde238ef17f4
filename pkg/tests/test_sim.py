"""Statevector simulation checked against expm and finite-difference oracles."""

import numpy as np
import pytest
import scipy.linalg

from sparta.sim import (
    QaoaCircuit,
    ShotNoiseModel,
    build_mixer,
    build_tfim_chain,
    exact_cost,
    exact_gradient,
    expectation,
    ground_energy,
    param_shift_gradient,
    plus_state,
    sample_gradients_at,
)


class TestHamiltonians:
    def test_tfim_term_count(self):
        h = build_tfim_chain(4, 1.0, 0.5)
        assert len(h.terms) == 3 + 4

    def test_tfim_rejects_single_qubit(self):
        with pytest.raises(ValueError):
            build_tfim_chain(1, 1.0, 0.5)

    def test_plus_state_is_x_ground(self):
        # |+>^n is the -X eigenstate, so <H> at theta=0 equals -h*n.
        for n in (2, 4, 6):
            h = build_tfim_chain(n, 1.0, 0.5)
            circuit = QaoaCircuit(h, depth=2)
            assert exact_cost(circuit, np.zeros(4)) == pytest.approx(-0.5 * n, abs=1e-12)

    def test_expectation_matches_dense(self):
        h = build_tfim_chain(3, 1.0, 0.7)
        rng = np.random.default_rng(0)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        expected = np.real(np.vdot(psi, h.to_matrix() @ psi))
        assert expectation(psi, h) == pytest.approx(expected, abs=1e-12)


class TestEvolution:
    def test_evolve_matches_expm_oracle(self):
        h = build_tfim_chain(2, 1.0, 0.5)
        circuit = QaoaCircuit(h, depth=1)
        theta = np.array([0.37, -0.61])
        hc = h.to_matrix()
        hm = build_mixer(2).to_matrix()
        oracle = (
            scipy.linalg.expm(-1j * theta[1] * hm)
            @ scipy.linalg.expm(-1j * theta[0] * hc)
            @ plus_state(2)
        )
        np.testing.assert_allclose(circuit.evolve(theta), oracle, atol=1e-12)

    def test_norm_preserved(self):
        circuit = QaoaCircuit(build_tfim_chain(4, 1.0, 0.5), depth=3)
        rng = np.random.default_rng(1)
        theta = rng.normal(size=6)
        assert np.linalg.norm(circuit.evolve(theta)) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_and_generators(self):
        circuit = QaoaCircuit(build_tfim_chain(3, 1.0, 0.5), depth=2)
        assert circuit.dimension == 4
        gens = circuit.generators
        assert len(gens) == 4
        assert gens[0] is circuit.hamiltonian and gens[1] is circuit.mixer

    def test_wrong_parameter_count_rejected(self):
        circuit = QaoaCircuit(build_tfim_chain(2, 1.0, 0.5), depth=2)
        with pytest.raises(ValueError):
            circuit.evolve(np.zeros(3))


class TestGradients:
    def test_exact_gradient_matches_shift_definition(self):
        # The estimator is defined as 0.5 * [f(theta + pi/2 e_i) - f(theta - pi/2 e_i)].
        circuit = QaoaCircuit(build_tfim_chain(3, 1.0, 0.5), depth=2)
        rng = np.random.default_rng(2)
        theta = rng.normal(size=4)
        grad = exact_gradient(circuit, theta)
        for i in range(4):
            e = np.zeros(4)
            e[i] = np.pi / 2
            expected = 0.5 * (exact_cost(circuit, theta + e) - exact_cost(circuit, theta - e))
            assert grad[i] == pytest.approx(expected, abs=1e-12)

    def test_shift_rule_exact_for_half_pauli_generators(self):
        # With generator eigenvalues +-1/2 the pi/2 shift rule reproduces the
        # analytic derivative, so it must agree with finite differences.
        from sparta.pauli import PauliSum, PauliTerm

        hamiltonian = PauliSum([PauliTerm(0.5, "ZZ")])
        mixer = PauliSum([PauliTerm(0.5, "XI")])
        circuit = QaoaCircuit(hamiltonian, depth=1, mixer=mixer)
        theta = np.array([0.37, -0.61])
        grad = exact_gradient(circuit, theta)
        eps = 1e-6
        for i in range(2):
            e = np.zeros(2)
            e[i] = eps
            fd = (exact_cost(circuit, theta + e) - exact_cost(circuit, theta - e)) / (2 * eps)
            assert grad[i] == pytest.approx(fd, abs=1e-7)

    def test_noisy_gradient_statistics(self):
        circuit = QaoaCircuit(build_tfim_chain(2, 1.0, 0.5), depth=1)
        noise = ShotNoiseModel(sigma=0.02)
        theta = np.array([0.5, 0.4])
        shots = np.array([100, 400])
        rng = np.random.default_rng(3)
        draws = np.vstack([
            param_shift_gradient(circuit, theta, shots, noise, rng).means
            for _ in range(4000)
        ])
        truth = exact_gradient(circuit, theta)
        np.testing.assert_allclose(np.mean(draws, axis=0), truth, atol=5e-4)
        np.testing.assert_allclose(
            np.var(draws, axis=0), noise.sigma**2 / shots, rtol=0.15
        )

    def test_sample_gradients_matches_sequential_moments(self):
        circuit = QaoaCircuit(build_tfim_chain(2, 1.0, 0.5), depth=1)
        noise = ShotNoiseModel(sigma=0.02)
        theta = np.array([0.2, -0.3])
        shots = np.array([100, 100])
        rng = np.random.default_rng(4)
        batch = sample_gradients_at(circuit, theta, shots, noise, rng, 5000)
        truth = exact_gradient(circuit, theta)
        np.testing.assert_allclose(np.mean(batch, axis=0), truth, atol=2e-4)
        np.testing.assert_allclose(np.var(batch, axis=0), noise.sigma**2 / shots, rtol=0.15)

    def test_exact_mode_reports_zero_variance(self):
        circuit = QaoaCircuit(build_tfim_chain(2, 1.0, 0.5), depth=1)
        est = param_shift_gradient(
            circuit, np.array([0.1, 0.2]), np.array([10, 10]), ShotNoiseModel(mode="exact")
        )
        np.testing.assert_allclose(est.variances, 0.0)
        np.testing.assert_allclose(est.means, exact_gradient(circuit, np.array([0.1, 0.2])))


class TestGroundEnergy:
    def test_n2_closed_form(self):
        # Two-qubit TFIM at J=1, h=0.5 has ground energy -sqrt(J^2 + h^2 ... )
        value = ground_energy(build_tfim_chain(2, 1.0, 0.5))
        dense = float(np.min(np.linalg.eigvalsh(build_tfim_chain(2, 1.0, 0.5).to_matrix())))
        assert value == pytest.approx(dense, abs=1e-12)
        assert value == pytest.approx(-np.sqrt(2.0), abs=1e-8)

    def test_matches_dense_oracle_up_to_n6(self):
        for n in (3, 4, 5, 6):
            h = build_tfim_chain(n, 1.0, 0.5)
            dense = float(np.min(np.linalg.eigvalsh(h.to_matrix())))
            assert ground_energy(h) == pytest.approx(dense, abs=1e-8)

    def test_large_register_rejected(self):
        with pytest.raises(ValueError):
            ground_energy(build_tfim_chain(11, 1.0, 0.5))
