"""Determinant-basis CASCI via Slater-Condon rules.

Independent of the Jordan-Wigner route: determinants are occupation sets of
spin orbitals (interleaved alpha/beta indexing) and matrix elements come
from the one- and two-electron integrals directly, so agreement with the
qubit Hamiltonian's spectrum cross-validates the whole mapping pipeline.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np


def _spin_orbital_integrals(active):
    """(h_so, g_phys_antisym) over interleaved spin orbitals."""
    n = active.n_active
    m = 2 * n
    h_so = np.zeros((m, m))
    for p in range(n):
        for q in range(n):
            for s in (0, 1):
                h_so[2 * p + s, 2 * q + s] = active.h_eff[p, q]
    # physicist <PQ|RS> = (PR|QS) with spin deltas, then antisymmetrize
    g = np.zeros((m, m, m, m))
    for pp in range(m):
        for qq in range(m):
            for rr in range(m):
                for ss in range(m):
                    if pp % 2 == rr % 2 and qq % 2 == ss % 2:
                        g[pp, qq, rr, ss] = active.eri[
                            pp // 2, rr // 2, qq // 2, ss // 2
                        ]
    g_anti = g - g.transpose(0, 1, 3, 2)
    return h_so, g_anti


def determinants(n_active: int, n_alpha: int, n_beta: int) -> list[tuple[int, ...]]:
    """All (n_alpha, n_beta) occupation tuples of interleaved spin orbitals."""
    alphas = list(combinations([2 * p for p in range(n_active)], n_alpha))
    betas = list(combinations([2 * p + 1 for p in range(n_active)], n_beta))
    dets = []
    for a in alphas:
        for b in betas:
            dets.append(tuple(sorted(a + b)))
    return dets


def _phase(det: tuple[int, ...], removed: int) -> int:
    """Sign from anticommuting past occupied modes below `removed`."""
    return -1 if sum(1 for m in det if m < removed) % 2 else 1


def _excitation_phase(det_i, det_j, holes, particles):
    """Phase aligning det_j to det_i for the given hole/particle sets."""
    sign = 1
    det = list(det_j)
    # annihilate holes then create particles, tracking parity each time
    for h, p in zip(sorted(holes), sorted(particles)):
        pos_h = sum(1 for m in det if m < h)
        det.remove(h)
        pos_p = sum(1 for m in det if m < p)
        det.append(p)
        det.sort()
        sign *= (-1) ** (pos_h + pos_p)
    return sign


def ci_matrix(active, n_alpha: int, n_beta: int):
    """(H_CI without the core constant, determinant list)."""
    h_so, g = _spin_orbital_integrals(active)
    dets = determinants(active.n_active, n_alpha, n_beta)
    dim = len(dets)
    mat = np.zeros((dim, dim))
    sets = [frozenset(d) for d in dets]
    for i in range(dim):
        occ_i = dets[i]
        # diagonal
        val = sum(h_so[m, m] for m in occ_i)
        val += 0.5 * sum(g[m, n, m, n] for m in occ_i for n in occ_i)
        mat[i, i] = val
        for j in range(i + 1, dim):
            diff_i = sets[i] - sets[j]
            if len(diff_i) > 2:
                continue
            diff_j = sets[j] - sets[i]
            if len(diff_i) == 1:
                (p,) = diff_i  # in i only: particle of the i<-j excitation
                (h,) = diff_j
                common = sets[i] & sets[j]
                amp = h_so[p, h] + sum(g[p, n, h, n] for n in common)
                sign = _excitation_phase(dets[i], dets[j], [h], [p])
                mat[i, j] = mat[j, i] = sign * amp
            else:
                p1, p2 = sorted(diff_i)
                h1, h2 = sorted(diff_j)
                amp = g[p1, p2, h1, h2]
                sign = _excitation_phase(dets[i], dets[j], [h1, h2], [p1, p2])
                mat[i, j] = mat[j, i] = sign * amp
    return mat, dets


def casci_energies(active, n_alpha: int, n_beta: int, n_states: int | None = None):
    """Exact eigenvalues of the active-space block, ascending, core included."""
    mat, _ = ci_matrix(active, n_alpha, n_beta)
    evals = np.linalg.eigvalsh(mat) + active.core_energy
    return evals if n_states is None else evals[:n_states]
