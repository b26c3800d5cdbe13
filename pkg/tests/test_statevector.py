"""Kernel tests: basis states, gate application, measurement, marginals."""
import numpy as np
import pytest

from helpers import random_state
from sfvqd.errors import InvalidGateError, InvalidStateError
from sfvqd.oracle import circuit_unitary
from sfvqd.statevector import (
    Circuit,
    StateVector,
    apply_gate,
    init_basis_state,
    inner_product,
    marginal_distribution,
    measure_subset,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def haar_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestInitBasisState:
    def test_zero_state(self):
        st = init_basis_state(2, "00")
        assert np.allclose(st.amplitudes, [1, 0, 0, 0])

    def test_one_one(self):
        st = init_basis_state(2, "11")
        assert st.amplitudes[0b11] == 1.0
        assert np.count_nonzero(st.amplitudes) == 1

    def test_reference_occupation(self):
        st = init_basis_state(6, "110000")
        assert abs(st.norm() - 1) < 1e-12
        nonzero = np.nonzero(st.amplitudes)[0]
        assert list(nonzero) == [0b110000]

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            init_basis_state(3, "00")


class TestApplyGate:
    def test_identity(self):
        rng = np.random.default_rng(0)
        st = StateVector(3, random_state(3, rng))
        before = st.amplitudes.copy()
        apply_gate(st, np.eye(2), (1,))
        assert np.allclose(st.amplitudes, before)

    def test_pauli_x(self):
        st = init_basis_state(1, "0")
        apply_gate(st, X, (0,))
        assert np.allclose(st.amplitudes, [0, 1])

    def test_controlled_x_inactive(self):
        st = init_basis_state(2, "01")  # control qubit 0 is |0>
        apply_gate(st, X, (1,), controls=(0,))
        assert st.amplitudes[0b01] == 1.0

    def test_controlled_x_active(self):
        st = init_basis_state(2, "10")
        apply_gate(st, X, (1,), controls=(0,))
        assert st.amplitudes[0b11] == 1.0

    def test_non_unitary_rejected(self):
        st = init_basis_state(1, "0")
        with pytest.raises(InvalidGateError):
            apply_gate(st, np.array([[1, 0], [0, 2]]), (0,))

    def test_index_collision_rejected(self):
        st = init_basis_state(2, "00")
        with pytest.raises(ValueError):
            apply_gate(st, X, (0,), controls=(0,))

    def test_norm_preserved(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            st = StateVector(4, random_state(4, rng))
            u = haar_unitary(4, rng)
            apply_gate(st, u, (1, 3), controls=(0,))
            assert abs(st.norm() - 1) < 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(2)
        u = haar_unitary(2, rng)
        a = random_state(3, rng)
        b = random_state(3, rng)
        al, be = 0.3 - 0.1j, 0.8 + 0.4j
        combo = StateVector(3, al * a + be * b)
        apply_gate(combo, u, (2,))
        sa = StateVector(3, a.copy())
        sb = StateVector(3, b.copy())
        apply_gate(sa, u, (2,))
        apply_gate(sb, u, (2,))
        assert np.allclose(
            combo.amplitudes, al * sa.amplitudes + be * sb.amplitudes, atol=1e-10
        )

    def test_composition_matches_dense_product(self):
        # sequential kernel application == dense product built by the oracle
        rng = np.random.default_rng(3)
        for n in (3, 5, 6):
            circ = Circuit(n)
            for _ in range(12):
                k = int(rng.integers(1, 3))
                wires = list(rng.choice(n, size=k + 1, replace=False))
                circ.add(haar_unitary(2**k, rng), wires[:k], controls=wires[k:])
            dense = circuit_unitary(circ)
            st = StateVector(n, random_state(n, rng))
            expected = dense @ st.amplitudes
            circ.apply(st)
            assert np.max(np.abs(st.amplitudes - expected)) < 1e-9

    def test_circuit_norm_assertion(self):
        rng = np.random.default_rng(4)
        circ = Circuit(5)
        for _ in range(60):
            circ.add(haar_unitary(2, rng), (int(rng.integers(5)),))
        st = StateVector(5, random_state(5, rng))
        circ.apply(st)
        assert abs(st.norm() - 1) < 1e-9


class TestInnerProduct:
    def test_orthonormal_basis(self):
        z = init_basis_state(1, "0")
        o = init_basis_state(1, "1")
        assert inner_product(z, z) == pytest.approx(1)
        assert inner_product(z, o) == pytest.approx(0)

    def test_cauchy_schwarz(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            psi = StateVector(3, random_state(3, rng))
            rotated = psi.copy()
            apply_gate(rotated, haar_unitary(8, rng), (0, 1, 2))
            assert abs(inner_product(psi, rotated)) <= 1 + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(init_basis_state(1, "0"), init_basis_state(2, "00"))


class TestMeasurement:
    def test_deterministic_on_basis_state(self):
        rng = np.random.default_rng(0)
        st = init_basis_state(1, "0")
        outcome, collapsed = measure_subset(st, [0], rng)
        assert outcome == "0"
        assert np.allclose(collapsed.amplitudes, st.amplitudes)

    def test_bell_state_collapse(self):
        rng = np.random.default_rng(1)
        bell = StateVector(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
        counts = {"0": 0, "1": 0}
        for _ in range(200):
            outcome, collapsed = measure_subset(bell, [0], rng)
            counts[outcome] += 1
            target = "00" if outcome == "0" else "11"
            assert abs(collapsed.amplitudes[int(target, 2)]) == pytest.approx(1)
        assert counts["0"] > 50 and counts["1"] > 50

    def test_repeated_measurement_is_stable(self):
        rng = np.random.default_rng(2)
        st = StateVector(3, random_state(3, rng))
        outcome, collapsed = measure_subset(st, [0, 2], rng)
        again, _ = measure_subset(collapsed, [0, 2], rng)
        assert again == outcome

    def test_seed_reproducibility(self):
        st = StateVector(3, random_state(3, np.random.default_rng(9)))
        seq_a = [
            measure_subset(st, [1], np.random.default_rng(s))[0] for s in range(40)
        ]
        seq_b = [
            measure_subset(st, [1], np.random.default_rng(s))[0] for s in range(40)
        ]
        assert seq_a == seq_b

    def test_zero_norm_rejected(self):
        st = StateVector(1, np.zeros(2))
        with pytest.raises(InvalidStateError):
            measure_subset(st, [0], np.random.default_rng(0))


class TestMarginals:
    def test_plus_state(self):
        st = init_basis_state(1, "0")
        apply_gate(st, H, (0,))
        dist = marginal_distribution(st, [0])
        assert dist["0"] == pytest.approx(0.5)
        assert dist["1"] == pytest.approx(0.5)

    def test_product_state_marginal(self):
        st = init_basis_state(2, "00")
        apply_gate(st, H, (0,))
        dist = marginal_distribution(st, [1])
        assert dist["0"] == pytest.approx(1.0)

    def test_normalization(self):
        rng = np.random.default_rng(6)
        st = StateVector(4, random_state(4, rng))
        dist = marginal_distribution(st, [1, 3])
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-10)
        assert all(p >= 0 for p in dist.values())

    def test_sampling_agrees_with_marginal(self):
        # frequency estimate over 1e5 seeded measure_subset shots: per-outcome
        # 3 sigma binomial bounds plus an overall chi-squared test
        from scipy.stats import chisquare

        rng = np.random.default_rng(7)
        st = StateVector(3, random_state(3, rng))
        dist = marginal_distribution(st, [0, 2])
        n_shots = 100_000
        counts = dict.fromkeys(dist, 0)
        shot_rng = np.random.default_rng(8)
        for _ in range(n_shots):
            outcome, _ = measure_subset(st, [0, 2], shot_rng)
            counts[outcome] += 1
        for key, p in dist.items():
            sigma = np.sqrt(p * (1 - p) / n_shots)
            assert abs(counts[key] / n_shots - p) < 3 * sigma + 1e-12
        keys = sorted(dist)
        observed = np.array([counts[k] for k in keys])
        expected = np.array([dist[k] * n_shots for k in keys])
        _, p_value = chisquare(observed, expected)
        assert p_value > 0.001
