"""Ancilla-assisted spin-projection phase estimation and the extended Hamiltonian.

The screen prepends Hadamards on an ancilla register appended after the
system qubits, applies controlled pair rotations realizing powers of
exp(i theta S_axis), and finishes with an inverse QFT.  On a spin eigenstate
|S, m_z> (x-axis screen) the ancilla marginal is |d^S_{m_x, m_z}(pi/2)|^2
with m_x stored as a signed integer: unsigned readout u decodes to u for
u < 2^(n_anc-1) and u - 2^n_anc otherwise.

Half-angle rule: A(theta, -pi/2) has eigenvalues e^{+-i theta} on the
singly-occupied pair subspace, i.e. it equals exp(i 2 theta s_axis) per pair,
so realizing exp(i theta S_x) takes A(theta/2, -pi/2) on every pair.  The
y-axis block is A(theta, 0) = A(-theta, pi); the sign is fixed by requiring
the product over pairs to match the dense exp(i theta S_y) with S_y from the
Jordan-Wigner convention in `spinops`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import a_gate_matrix, phase1
from .errors import InvalidPenaltyError, UnsupportedSectorError
from .pauli import PauliSum, one_norm
from .spinops import SpinSector
from .statevector import Circuit, StateVector, measure_subset

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def required_ancillas(n_spatial: int, n_elec: int) -> int:
    """Smallest register expressing every reachable m_x, floored at one qubit."""
    if n_elec <= 0 or n_elec > 2 * n_spatial:
        raise ValueError(f"n_elec={n_elec} infeasible in {n_spatial} orbitals")
    if n_elec % 2 != 0:
        raise UnsupportedSectorError(
            "odd electron counts (half-integer spin) are not supported: "
            "half-integer m_x would alias under the 2*pi-periodic phase encoding"
        )
    s_max2 = min(n_elec, 2 * n_spatial - n_elec)  # 2 * S_max
    return max(1, int(s_max2).bit_length())


def pair_rotation(axis: str, theta: float) -> np.ndarray:
    """exp(i 2 theta s_axis) on one orbital pair (identity on |00>, |11>)."""
    if axis == "x":
        return a_gate_matrix(theta, -np.pi / 2)
    if axis == "y":
        return a_gate_matrix(theta, 0.0)
    raise ValueError(f"axis must be 'x' or 'y': {axis!r}")


def qft(n: int) -> Circuit:
    """Forward QFT, |u> -> 2^(-n/2) sum_v exp(2 pi i u v / 2^n) |v>."""
    if n < 1:
        raise ValueError("QFT needs at least one qubit")
    circ = Circuit(n)
    for j in range(n):
        circ.add(_H, (j,))
        for k in range(j + 1, n):
            lam = 2 * np.pi / 2 ** (k - j + 1)
            circ.add(phase1(lam), (j,), controls=(k,))
    for j in range(n // 2):
        circ.add(_SWAP, (j, n - 1 - j))
    return circ


def inverse_qft(n: int) -> Circuit:
    return qft(n).inverse()


def decode_mx(outcome: str, n_anc: int) -> int:
    """Signed readout: unsigned u maps to u, or u - 2^n_anc when u >= 2^(n_anc-1)."""
    if len(outcome) != n_anc:
        raise ValueError(f"outcome {outcome!r} has length {len(outcome)} != {n_anc}")
    u = int(outcome, 2)
    return u if u < 2 ** (n_anc - 1) else u - 2**n_anc


def encode_mx(m_x: int, n_anc: int) -> int:
    """Unsigned ancilla index holding the signed value m_x."""
    lo, hi = -(2 ** (n_anc - 1)), 2 ** (n_anc - 1) - 1
    if not lo <= m_x <= hi:
        raise ValueError(f"m_x={m_x} outside signed range [{lo}, {hi}]")
    return m_x % 2**n_anc


def build_screen_circuit(n_spatial: int, n_anc: int, axis: str = "x") -> Circuit:
    """Hadamards, controlled pair rotations, inverse QFT on the ancilla block.

    The register is 2*n_spatial system qubits followed by n_anc ancillas; the
    ancilla listed first is the most significant readout bit.  The ancilla of
    binary weight 2^b controls exp(i theta_b S_axis) with
    theta_b = 2 pi 2^b / 2^n_anc, applied as A(theta_b / 2, .) per pair.
    """
    n_sys = 2 * n_spatial
    circ = Circuit(n_sys + n_anc)
    for k in range(n_anc):
        circ.add(_H, (n_sys + k,))
    for k in range(n_anc):
        weight = 2 ** (n_anc - 1 - k)
        theta_b = 2 * np.pi * weight / 2**n_anc
        block = pair_rotation(axis, theta_b / 2)
        for i in range(n_spatial):
            circ.add(block, (2 * i, 2 * i + 1), controls=(n_sys + k,))
    circ.extend(inverse_qft(n_anc), offset=n_sys)
    return circ


def attach_ancillas(state: StateVector, n_anc: int) -> StateVector:
    """System state tensored with |0...0> on a fresh trailing ancilla register."""
    amps = np.zeros((state.dim, 2**n_anc), dtype=np.complex128)
    amps[:, 0] = state.amplitudes
    return StateVector(state.n_qubits + n_anc, amps.reshape(-1))


def ancilla_distribution(state: StateVector, n_anc: int) -> dict[int, float]:
    """Marginal over the trailing ancilla register, signed-decoded; sums to 1."""
    cols = np.abs(state.amplitudes.reshape(-1, 2**n_anc)) ** 2
    marg = cols.sum(axis=0)
    return {
        decode_mx(format(u, f"0{n_anc}b"), n_anc): float(p)
        for u, p in enumerate(marg)
    }


def shot_filter(
    state: StateVector,
    sector: SpinSector,
    n_anc: int,
    rng: np.random.Generator,
):
    """Measure the ancillas of a screened state and apply the sector rule.

    Returns (passed, m_x, collapsed); passed iff |m_x| <= S_target.
    """
    n_sys = state.n_qubits - n_anc
    outcome, collapsed = measure_subset(
        state, list(range(n_sys, state.n_qubits)), rng
    )
    m_x = decode_mx(outcome, n_anc)
    return abs(m_x) <= sector.s_target + 1e-9, m_x, collapsed


@dataclass(frozen=True)
class ExtendedHamiltonian:
    """(H - c_H I) x D_anc + c_H I x I_anc, evaluated ancilla-block-diagonally.

    D_anc scales the system expectation by 1 on ancilla values in `valid_set`
    and by `c_penalty` elsewhere, which pushes the effective energy of
    out-of-sector components up toward the norm bound c_H >= ||H||.
    """

    base: PauliSum
    norm_bound: float
    c_penalty: float
    n_anc: int
    valid_set: frozenset[int]

    @property
    def n_qubits(self) -> int:
        return self.base.n_qubits + self.n_anc

    def scaling(self, m_x: int) -> float:
        return 1.0 if m_x in self.valid_set else self.c_penalty

    def _base_matvec(self, cols: np.ndarray) -> np.ndarray:
        # the system register stays small (<= 14 qubit guard), so a cached
        # dense base beats per-term application inside the optimization loop
        if self.base.n_qubits <= 10:
            cache = getattr(self, "_dense_base", None)
            if cache is None:
                from .pauli import to_dense

                cache = to_dense(self.base)
                object.__setattr__(self, "_dense_base", cache)
            return cache @ cols
        return self.base.apply_to_array(cols)

    def expectation(self, state: StateVector) -> float:
        """<state|H_ext|state> = sum_j p_j [s(j) (E_j - c_H) + c_H]."""
        if state.n_qubits != self.n_qubits:
            raise ValueError(
                f"width mismatch: state {state.n_qubits}, extended operator "
                f"{self.n_qubits}"
            )
        cols = state.amplitudes.reshape(-1, 2**self.n_anc)
        weights = cols.real**2 + cols.imag**2
        p = weights.sum(axis=0)
        h_cols = self._base_matvec(cols)
        energies = np.einsum("ij,ij->j", cols.conj(), h_cols)
        assert np.max(np.abs(energies.imag)) < 1e-9
        s = getattr(self, "_scaling_vector", None)
        if s is None:
            s = np.array(
                [
                    self.scaling(decode_mx(format(u, f"0{self.n_anc}b"), self.n_anc))
                    for u in range(2**self.n_anc)
                ]
            )
            object.__setattr__(self, "_scaling_vector", s)
        total = float(np.dot(s, energies.real - self.norm_bound * p))
        return total + self.norm_bound * float(p.sum())


def build_extended_hamiltonian(
    base: PauliSum,
    sector: SpinSector,
    n_anc: int,
    c_penalty: float = 0.0,
) -> ExtendedHamiltonian:
    """Extended operator with norm bound from the Pauli one-norm."""
    if c_penalty >= 1.0:
        raise InvalidPenaltyError(
            f"c_penalty must lie in (-inf, 1), got {c_penalty}"
        )
    lo, hi = -(2 ** (n_anc - 1)), 2 ** (n_anc - 1) - 1
    valid = frozenset(
        m for m in range(lo, hi + 1) if abs(m) <= sector.s_target + 1e-9
    )
    return ExtendedHamiltonian(
        base=base,
        norm_bound=one_norm(base),
        c_penalty=float(c_penalty),
        n_anc=int(n_anc),
        valid_set=valid,
    )
