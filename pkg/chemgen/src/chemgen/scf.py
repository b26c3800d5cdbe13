"""Restricted Hartree-Fock with DIIS acceleration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh


class ScfError(RuntimeError):
    """SCF failed to converge within the iteration budget."""


@dataclass
class ScfResult:
    energy: float  # total RHF energy incl. nuclear repulsion
    mo_coeffs: np.ndarray  # columns are MOs in the AO basis
    mo_energies: np.ndarray
    density: np.ndarray
    n_occ: int
    n_iter: int


def _fock(h_core, eri, density):
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return h_core + j - 0.5 * k


def run_rhf(
    s_mat,
    t_mat,
    v_mat,
    eri,
    e_nuc,
    n_electrons: int,
    max_iter: int = 200,
    conv: float = 1e-10,
    diis_depth: int = 8,
) -> ScfResult:
    """Closed-shell SCF; density convention D = 2 sum_occ C C^T."""
    if n_electrons % 2 != 0:
        raise ValueError("restricted HF needs an even electron count")
    n_occ = n_electrons // 2
    h_core = t_mat + v_mat
    # symmetric orthogonalization
    s_vals, s_vecs = np.linalg.eigh(s_mat)
    if np.min(s_vals) < 1e-10:
        raise ScfError("near-singular overlap matrix")
    x = s_vecs @ np.diag(s_vals**-0.5) @ s_vecs.T

    def solve(fock):
        fp = x.T @ fock @ x
        evals, evecs = np.linalg.eigh(fp)
        c = x @ evecs
        d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        return c, evals, d

    c, mo_e, density = solve(h_core)
    errors, focks = [], []
    energy = 0.0
    for iteration in range(1, max_iter + 1):
        fock = _fock(h_core, eri, density)
        err = fock @ density @ s_mat - s_mat @ density @ fock
        err = x.T @ err @ x
        errors.append(err)
        focks.append(fock)
        if len(errors) > diis_depth:
            errors.pop(0)
            focks.pop(0)
        if len(errors) > 1:
            m = len(errors)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(errors[i] * errors[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, focks))
            except np.linalg.LinAlgError:
                pass
        c, mo_e, density = solve(fock)
        new_energy = 0.5 * np.sum(density * (h_core + _fock(h_core, eri, density)))
        new_energy += e_nuc
        residual = np.max(np.abs(errors[-1]))
        if abs(new_energy - energy) < conv and residual < np.sqrt(conv):
            return ScfResult(
                energy=float(new_energy),
                mo_coeffs=c,
                mo_energies=mo_e,
                density=density,
                n_occ=n_occ,
                n_iter=iteration,
            )
        energy = new_energy
    raise ScfError(f"no convergence in {max_iter} iterations (last E={energy:.8f})")
