"""Exact dense diagonalization and spin/particle sector labeling.

This module is the ground truth the rest of the package is tested against,
so it deliberately builds full matrices (within a qubit guard) and never
reuses the statevector stride kernel: `circuit_unitary` embeds gates by
explicit bit arithmetic on basis columns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LabelingError, ResourceLimitError
from .pauli import PauliSum, to_dense
from .spinops import SpinSector, build_number_operators, build_s_squared
from .statevector import Circuit, StateVector

DEGENERACY_GAP = 1e-9
LABEL_ATOL = 1e-6


@dataclass
class LabeledEigenstate:
    """Eigenpair carrying particle and spin quantum numbers."""

    energy: float
    vector: StateVector
    n_alpha: int
    n_beta: int
    s: float
    degeneracy: int  # multiplicity of the parent eigenvalue cluster

    @property
    def m_z(self) -> float:
        return (self.n_alpha - self.n_beta) / 2


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense product matrix of a circuit, built independently of the kernel."""
    n = circuit.n_qubits
    if n > 12:
        raise ResourceLimitError(f"dense circuit unitary limited to 12 qubits, got {n}")
    dim = 2**n
    unitary = np.eye(dim, dtype=np.complex128)
    for gate in circuit.gates:
        embedded = np.zeros((dim, dim), dtype=np.complex128)
        k = len(gate.targets)
        shifts = [n - 1 - t for t in gate.targets]
        for col in range(dim):
            if any((col >> (n - 1 - c)) & 1 == 0 for c in gate.controls):
                embedded[col, col] = 1.0
                continue
            sub = 0
            for j, sh in enumerate(shifts):
                sub |= ((col >> sh) & 1) << (k - 1 - j)
            stripped = col
            for sh in shifts:
                stripped &= ~(1 << sh)
            for row_sub in range(2**k):
                amp = gate.matrix[row_sub, sub]
                if amp == 0:
                    continue
                row = stripped
                for j, sh in enumerate(shifts):
                    row |= ((row_sub >> (k - 1 - j)) & 1) << sh
                embedded[row, col] = amp
        unitary = embedded @ unitary
    return unitary


def exact_spectrum(op: PauliSum):
    """Full Hermitian eigendecomposition, eigenvalues ascending.

    Returns (eigenvalues, eigenvectors) with eigenvectors as columns.
    """
    dense = to_dense(op)
    assert np.max(np.abs(dense - dense.conj().T)) < 1e-10, "operator not Hermitian"
    evals, evecs = np.linalg.eigh(dense)
    return evals, evecs


def _refine(basis: np.ndarray, operators: list[np.ndarray], atol: float):
    """Simultaneously diagonalize `operators` on the span of `basis` columns."""
    if not operators or basis.shape[1] == 1:
        for op in operators:
            small = basis.conj().T @ op @ basis
            off = np.max(np.abs(small - np.diag(np.diag(small))))
            if off > atol:
                raise LabelingError(
                    f"residual off-diagonal {off:.3e} while labeling a "
                    "degenerate cluster"
                )
        return [basis[:, [j]] for j in range(basis.shape[1])]
    op = operators[0]
    small = basis.conj().T @ op @ basis
    small = (small + small.conj().T) / 2
    vals, rot = np.linalg.eigh(small)
    rotated = basis @ rot
    blocks = []
    start = 0
    for j in range(1, len(vals) + 1):
        if j == len(vals) or vals[j] - vals[j - 1] > atol:
            blocks.append(rotated[:, start:j])
            start = j
    out = []
    for block in blocks:
        out.extend(_refine(block, operators[1:], atol))
    return out


def sector_labels(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, n_spatial: int
) -> list[LabeledEigenstate]:
    """Label every eigenstate with (n_alpha, n_beta, S).

    Degenerate clusters (gap below 1e-9) are simultaneously diagonalized
    against N_alpha, then N_beta, then S^2, so the labels are basis
    independent.
    """
    n_qubits = 2 * n_spatial
    n_alpha_op = to_dense(build_number_operators(n_spatial)[0])
    n_beta_op = to_dense(build_number_operators(n_spatial)[1])
    s2_op = to_dense(build_s_squared(n_spatial))
    ops = [n_alpha_op, n_beta_op, s2_op]

    labeled = []
    start = 0
    m = len(eigenvalues)
    for j in range(1, m + 1):
        if j < m and eigenvalues[j] - eigenvalues[j - 1] <= DEGENERACY_GAP:
            continue
        cluster = eigenvectors[:, start:j]
        energy = float(np.mean(eigenvalues[start:j]))
        vectors = _refine(cluster, ops, LABEL_ATOL)
        for v in vectors:
            vec = v[:, 0]
            na = float((vec.conj() @ n_alpha_op @ vec).real)
            nb = float((vec.conj() @ n_beta_op @ vec).real)
            s2 = float((vec.conj() @ s2_op @ vec).real)
            s = 0.5 * (-1 + np.sqrt(max(0.0, 1 + 4 * s2)))
            for value, name in ((na, "n_alpha"), (nb, "n_beta"), (2 * s, "2S")):
                if abs(value - round(value)) > LABEL_ATOL:
                    raise LabelingError(
                        f"{name} = {value} is not integral within {LABEL_ATOL}"
                    )
            labeled.append(
                LabeledEigenstate(
                    energy=energy,
                    vector=StateVector(n_qubits, vec),
                    n_alpha=round(na),
                    n_beta=round(nb),
                    s=round(2 * s) / 2,
                    degeneracy=j - start,
                )
            )
        start = j
    return labeled


def labeled_spectrum(op: PauliSum) -> list[LabeledEigenstate]:
    """exact_spectrum + sector_labels in one call."""
    evals, evecs = exact_spectrum(op)
    return sector_labels(evals, evecs, op.n_qubits // 2)


@dataclass(frozen=True)
class CasciReference:
    """Sector-restricted exact energies; `complete` is False when truncated."""

    energies: tuple[float, ...]
    complete: bool


def casci_reference(
    op: PauliSum, sector: SpinSector, n_states: int
) -> CasciReference:
    """Lowest exact eigenvalues whose labels match the sector, ascending."""
    if n_states == 0:
        return CasciReference((), True)
    matches = [
        st
        for st in labeled_spectrum(op)
        if st.n_alpha == sector.n_alpha
        and st.n_beta == sector.n_beta
        and abs(st.s - sector.s_target) < 1e-6
    ]
    matches.sort(key=lambda st: st.energy)
    found = tuple(st.energy for st in matches[:n_states])
    return CasciReference(found, len(found) == n_states)


def find_spin_eigenstate(
    labels: list[LabeledEigenstate],
    s: float,
    m_z: float,
    index: int = 0,
    n_elec: int | None = None,
) -> LabeledEigenstate:
    """The index-th lowest eigenstate with total spin s and projection m_z."""
    matches = sorted(
        (
            st
            for st in labels
            if abs(st.s - s) < 1e-6
            and abs(st.m_z - m_z) < 1e-6
            and (n_elec is None or st.n_alpha + st.n_beta == n_elec)
        ),
        key=lambda st: st.energy,
    )
    if index >= len(matches):
        raise ValueError(
            f"no eigenstate with S={s}, m_z={m_z} at index {index} "
            f"({len(matches)} available)"
        )
    return matches[index]
