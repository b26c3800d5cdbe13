"""Spin operator construction, Wigner-d values, screening pass probabilities."""
from fractions import Fraction

import numpy as np
import pytest

from helpers import spin_free_toy
from sfvqd.pauli import PauliSum, expectation, to_dense
from sfvqd.spinops import (
    SpinSector,
    build_number_operators,
    build_s_squared,
    build_spin_component,
    pass_probability,
    wigner_d_half_pi,
    wigner_d_half_pi_series,
)
from sfvqd.statevector import StateVector, init_basis_state


class TestSpinComponents:
    def test_sz_single_orbital_eigenvalues(self):
        sz = to_dense(build_spin_component("z", 1))
        # diagonal on {|00>, |01>, |10>, |11>}
        assert np.allclose(np.diag(sz), [0, -0.5, 0.5, 0])

    def test_commutators_cyclic(self):
        for ns in (1, 2, 3):
            sx, sy, sz = (to_dense(build_spin_component(a, ns)) for a in "xyz")
            assert np.max(np.abs(sx @ sy - sy @ sx - 1j * sz)) < 1e-11
            assert np.max(np.abs(sy @ sz - sz @ sy - 1j * sx)) < 1e-11
            assert np.max(np.abs(sz @ sx - sx @ sz - 1j * sy)) < 1e-11

    def test_sz_on_closed_shell_reference(self):
        sz = build_spin_component("z", 3)
        psi = init_basis_state(6, "110000")
        assert expectation(psi, sz) == pytest.approx(0.0, abs=1e-12)

    def test_hermitian(self):
        for axis in "xyz":
            m = to_dense(build_spin_component(axis, 2))
            assert np.max(np.abs(m - m.conj().T)) < 1e-12

    def test_commutes_with_spin_free_hamiltonian(self):
        h = to_dense(spin_free_toy(3, seed=3))
        for axis in "xyz":
            s = to_dense(build_spin_component(axis, 3))
            assert np.max(np.abs(h @ s - s @ h)) < 1e-8


class TestSSquared:
    def test_single_orbital_spectrum(self):
        # Fock space of one orbital: vacuum and paired states are singlets,
        # the two singly-occupied states carry S = 1/2, i.e. S(S+1) = 3/4
        s2 = to_dense(build_s_squared(1))
        assert np.allclose(
            sorted(np.linalg.eigvalsh(s2)), [0, 0, 0.75, 0.75], atol=1e-9
        )

    def test_matches_sum_of_squares_dense(self):
        for ns in (1, 2):
            comps = [to_dense(build_spin_component(a, ns)) for a in "xyz"]
            direct = sum(c @ c for c in comps)
            assert np.max(np.abs(to_dense(build_s_squared(ns)) - direct)) < 1e-12

    def test_singlet_combination(self):
        # (|1a 2b> - |1b 2a>)/sqrt(2) on two orbitals
        up_down = init_basis_state(4, "1001").amplitudes
        down_up = init_basis_state(4, "0110").amplitudes
        singlet = StateVector(4, (up_down - down_up) / np.sqrt(2))
        assert expectation(singlet, build_s_squared(2)) == pytest.approx(0, abs=1e-12)

    def test_triplet_combination(self):
        up_down = init_basis_state(4, "1001").amplitudes
        down_up = init_basis_state(4, "0110").amplitudes
        triplet = StateVector(4, (up_down + down_up) / np.sqrt(2))
        assert expectation(triplet, build_s_squared(2)) == pytest.approx(2, abs=1e-12)

    def test_spectrum_is_s_times_s_plus_one(self):
        for ns in (1, 2, 3):
            evals = np.linalg.eigvalsh(to_dense(build_s_squared(ns)))
            allowed = [s / 2 * (s / 2 + 1) for s in range(0, 2 * ns + 1)]
            for v in evals:
                assert min(abs(v - a) for a in allowed) < 1e-9


class TestNumberOperators:
    @pytest.mark.parametrize(
        "occ,expected",
        [("10", (1, 0)), ("11", (1, 1)), ("01", (0, 1))],
    )
    def test_single_orbital(self, occ, expected):
        na, nb = build_number_operators(1)
        psi = init_basis_state(2, occ)
        assert expectation(psi, na) == pytest.approx(expected[0], abs=1e-12)
        assert expectation(psi, nb) == pytest.approx(expected[1], abs=1e-12)

    def test_reference_occupation(self):
        na, nb = build_number_operators(3)
        psi = init_basis_state(6, "110000")
        assert expectation(psi, na) == pytest.approx(1, abs=1e-12)
        assert expectation(psi, nb) == pytest.approx(1, abs=1e-12)

    def test_diagonal(self):
        na, _ = build_number_operators(2)
        dense = to_dense(na)
        assert np.max(np.abs(dense - np.diag(np.diag(dense)))) == 0


class TestWignerD:
    def test_spin1_center_element(self):
        # d^1_{0,0}(beta) = cos beta, so it vanishes at pi/2
        assert wigner_d_half_pi(1, 0, 0) == pytest.approx(0, abs=1e-12)

    def test_spin2_center_element(self):
        # (3 cos^2 - 1)/2 at pi/2
        assert wigner_d_half_pi(2, 0, 0) == pytest.approx(-0.5, abs=1e-12)
        assert wigner_d_half_pi(2, 0, 0) ** 2 == pytest.approx(0.25, abs=1e-12)

    def test_row_normalization(self):
        for two_s in range(0, 11):
            s = two_s / 2
            mz = -s
            while mz <= s:
                total = 0.0
                mx = -s
                while mx <= s:
                    total += wigner_d_half_pi(s, mx, mz) ** 2
                    mx += 1
                assert total == pytest.approx(1.0, abs=1e-12)
                mz += 1

    def test_two_routes_agree(self):
        for two_s in range(0, 11):
            s = two_s / 2
            mx = -s
            while mx <= s:
                mz = -s
                while mz <= s:
                    a = wigner_d_half_pi(s, mx, mz)
                    b = wigner_d_half_pi_series(s, mx, mz)
                    assert a == pytest.approx(b, abs=1e-10)
                    mz += 1
                mx += 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            wigner_d_half_pi(1, 2, 0)


TABLE_CELLS = {
    (0, 0): Fraction(1),
    (1, 0): Fraction(0),
    (1, 1): Fraction(1),
    (2, 0): Fraction(1, 4),
    (2, 1): Fraction(1, 2),
    (2, 2): Fraction(1),
    (3, 0): Fraction(0),
    (3, 1): Fraction(7, 32),
    (3, 2): Fraction(13, 16),
    (3, 3): Fraction(1),
    (4, 0): Fraction(9, 64),
    (4, 1): Fraction(9, 32),
    (4, 2): Fraction(11, 32),
    (4, 3): Fraction(15, 16),
    (5, 0): Fraction(0),
    (5, 1): Fraction(1, 8),
    # (5, 2) is checked separately: the tabulated reference value for that
    # cell disagrees with the defining sum; see test_acceptance.py.
    (5, 3): Fraction(305, 512),
}


class TestPassProbability:
    @pytest.mark.parametrize("cell,value", sorted(TABLE_CELLS.items()))
    def test_reference_cells(self, cell, value):
        s, mz = cell
        assert pass_probability(s, mz) == pytest.approx(float(value), abs=1e-9)

    def test_definition_is_inclusive_sum(self):
        for s in range(6):
            for mz in range(s + 1):
                direct = sum(
                    wigner_d_half_pi(s, mx, mz) ** 2 for mx in range(-mz, mz + 1)
                )
                assert pass_probability(s, mz) == pytest.approx(direct, abs=1e-12)

    def test_diagonal_is_unity(self):
        for s in range(6):
            assert pass_probability(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_negative_mz_symmetric(self):
        assert pass_probability(2, -1) == pytest.approx(
            pass_probability(2, 1), abs=1e-12
        )

    def test_invalid_sector(self):
        with pytest.raises(ValueError):
            pass_probability(1, 2)


class TestSpinSector:
    def test_m_z(self):
        sector = SpinSector(n_alpha=3, n_beta=1, s_target=1)
        assert sector.m_z == pytest.approx(1.0)
        assert sector.n_elec == 4

    def test_rejects_odd_totals(self):
        with pytest.raises(ValueError):
            SpinSector(n_alpha=2, n_beta=1, s_target=0.5)

    def test_rejects_s_below_mz(self):
        with pytest.raises(ValueError):
            SpinSector(n_alpha=3, n_beta=1, s_target=0)
