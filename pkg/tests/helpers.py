"""Shared test utilities: Jordan-Wigner hopping terms and a spin-free toy model."""
import numpy as np

from sfvqd.pauli import PauliSum


def hopping_ops(p: int, q: int):
    """Pauli content of a^dag_p a_q + a^dag_q a_p for modes p < q (JW).

    Returns [(0.5, {..X..Z..X..}), (0.5, {..Y..Z..Y..})].
    """
    assert p < q
    string = {r: "Z" for r in range(p + 1, q)}
    x_ops = dict(string)
    x_ops[p] = "X"
    x_ops[q] = "X"
    y_ops = dict(string)
    y_ops[p] = "Y"
    y_ops[q] = "Y"
    return [(0.5, x_ops), (0.5, y_ops)]


def spin_free_toy(n_spatial: int, seed: int = 0, hubbard_u: float = 0.7) -> PauliSum:
    """Random one-body + Hubbard-U Hamiltonian; commutes with S_x, S_y, S_z, S^2.

    One-body part sum_pq h_pq E_pq with symmetric h acts identically on both
    spin channels; the on-site n_alpha n_beta repulsion is SU(2) invariant.
    """
    rng = np.random.default_rng(seed)
    h = rng.normal(0.0, 0.5, size=(n_spatial, n_spatial))
    h = (h + h.T) / 2
    n = 2 * n_spatial
    terms = []
    for p in range(n_spatial):
        # h_pp (n_p_alpha + n_p_beta)
        terms.append((h[p, p], ()))
        terms.append((-0.5 * h[p, p], {2 * p: "Z"}))
        terms.append((-0.5 * h[p, p], {2 * p + 1: "Z"}))
        # U n_p_alpha n_p_beta
        terms.append((hubbard_u / 4, ()))
        terms.append((-hubbard_u / 4, {2 * p: "Z"}))
        terms.append((-hubbard_u / 4, {2 * p + 1: "Z"}))
        terms.append((hubbard_u / 4, {2 * p: "Z", 2 * p + 1: "Z"}))
        for q in range(p + 1, n_spatial):
            for sigma in (0, 1):
                for coeff, ops in hopping_ops(2 * p + sigma, 2 * q + sigma):
                    terms.append((h[p, q] * coeff, ops))
    return PauliSum(n, terms)


def random_state(n_qubits: int, rng: np.random.Generator):
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return amps / np.linalg.norm(amps)
