"""Frozen-core active-space reduction in the canonical MO basis.

Orbital selection: the lowest MO(s) are frozen as core; p-type orbitals
perpendicular to the molecular axis (pure pi for the linear molecules
handled here) are dropped from the virtual/active window; the remaining
sigma-symmetric valence set becomes the active space, ordered by orbital
energy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ActiveSpace:
    h_eff: np.ndarray  # one-body integrals over active MOs, core-field folded
    eri: np.ndarray  # (pq|rs) over active MOs, chemist notation
    core_energy: float  # nuclear repulsion + frozen-core mean-field energy
    n_active: int
    n_active_electrons: int
    active_indices: list[int]  # MO indices kept
    frozen_indices: list[int]
    orbital_energies: list[float]  # of the active MOs


def mo_transform(ao_mat: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    return coeffs.T @ ao_mat @ coeffs


def mo_eri_transform(eri_ao: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    out = np.einsum("pqrs,pi->iqrs", eri_ao, coeffs, optimize=True)
    out = np.einsum("iqrs,qj->ijrs", out, coeffs, optimize=True)
    out = np.einsum("ijrs,rk->ijks", out, coeffs, optimize=True)
    return np.einsum("ijks,sl->ijkl", out, coeffs, optimize=True)


def pi_weights(basis, mo_coeffs: np.ndarray, s_mat: np.ndarray) -> np.ndarray:
    """Mulliken-style weight of each MO on axis-perpendicular p functions."""
    pi_idx = [i for i, f in enumerate(basis) if f.is_pi_perpendicular]
    n_mo = mo_coeffs.shape[1]
    weights = np.zeros(n_mo)
    if not pi_idx:
        return weights
    for m in range(n_mo):
        c = mo_coeffs[:, m]
        weights[m] = sum(
            c[i] * s_mat[i, j] * c[j] for i in pi_idx for j in pi_idx
        )
    return weights


def select_active_orbitals(
    basis,
    mo_coeffs,
    mo_energies,
    s_mat,
    n_frozen_core: int,
    n_active: int,
) -> tuple[list[int], list[int]]:
    """(frozen core, active) MO indices; pi-dominated MOs are excluded."""
    n_mo = mo_coeffs.shape[1]
    frozen = list(range(n_frozen_core))
    weights = pi_weights(basis, mo_coeffs, s_mat)
    sigma = [m for m in range(n_frozen_core, n_mo) if weights[m] < 0.5]
    if len(sigma) < n_active:
        raise ValueError(
            f"only {len(sigma)} sigma-type MOs available, need {n_active}"
        )
    sigma.sort(key=lambda m: mo_energies[m])
    return frozen, sigma[:n_active]


def reduce_to_active_space(
    h_core_ao,
    eri_ao,
    e_nuc,
    mo_coeffs,
    frozen: list[int],
    active: list[int],
    mo_energies,
    n_electrons: int,
) -> ActiveSpace:
    """Fold frozen doubly-occupied orbitals into the one-body term and a constant."""
    h_mo = mo_transform(h_core_ao, mo_coeffs)
    eri_mo = mo_eri_transform(eri_ao, mo_coeffs)
    core_e = e_nuc
    for c in frozen:
        core_e += 2 * h_mo[c, c]
        for cp in frozen:
            core_e += 2 * eri_mo[c, c, cp, cp] - eri_mo[c, cp, cp, c]
    n_act = len(active)
    h_eff = np.zeros((n_act, n_act))
    for i, p in enumerate(active):
        for j, q in enumerate(active):
            val = h_mo[p, q]
            for c in frozen:
                val += 2 * eri_mo[p, q, c, c] - eri_mo[p, c, c, q]
            h_eff[i, j] = val
    eri_act = np.zeros((n_act, n_act, n_act, n_act))
    for i, p in enumerate(active):
        for j, q in enumerate(active):
            for k, r in enumerate(active):
                for l, s in enumerate(active):
                    eri_act[i, j, k, l] = eri_mo[p, q, r, s]
    return ActiveSpace(
        h_eff=h_eff,
        eri=eri_act,
        core_energy=float(core_e),
        n_active=n_act,
        n_active_electrons=n_electrons - 2 * len(frozen),
        active_indices=list(active),
        frozen_indices=list(frozen),
        orbital_energies=[float(mo_energies[m]) for m in active],
    )
