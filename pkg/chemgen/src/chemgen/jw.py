"""Second quantization of the active-space Hamiltonian and Jordan-Wigner mapping.

Spin orbitals are interleaved: qubit 2p carries orbital-p alpha, qubit 2p+1
carries orbital-p beta.  Occupied maps to |1>; ladder operators carry the
usual Z parity strings over lower-indexed modes.
"""
from __future__ import annotations

import numpy as np

COEFF_EPS = 1e-12

# single-qubit products (a, b) -> (phase, letter)
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def _string_product(terms_a: dict, terms_b: dict) -> dict:
    """Product of two {pauli-ops: coeff} maps; ops are tuples of (qubit, letter)."""
    out: dict[tuple, complex] = {}
    for ops_a, ca in terms_a.items():
        dict_a = dict(ops_a)
        for ops_b, cb in terms_b.items():
            phase = ca * cb
            ops = dict(dict_a)
            for q, letter_b in ops_b:
                la = ops.get(q, "I")
                ph, letter = _MUL[(la, letter_b)]
                phase *= ph
                if letter == "I":
                    ops.pop(q, None)
                else:
                    ops[q] = letter
            key = tuple(sorted(ops.items()))
            out[key] = out.get(key, 0.0) + phase
    return out


def ladder_operator(mode: int, creation: bool) -> dict:
    """JW image of a^dag_mode (creation) or a_mode as a {ops: coeff} map."""
    string = tuple((q, "Z") for q in range(mode))
    sign = -0.5j if creation else 0.5j
    return {
        string + ((mode, "X"),): 0.5,
        string + ((mode, "Y"),): sign,
    }


def jordan_wigner_hamiltonian(active) -> dict[str, float]:
    """Qubit Hamiltonian of an ActiveSpace as {pauli word: real coefficient}.

    Includes the core-energy constant on the identity word.
    """
    n_act = active.n_active
    n_modes = 2 * n_act
    eri = active.eri
    h_eff = active.h_eff

    # spin-orbital integrals under the interleaved convention
    def mode(p, sigma):
        return 2 * p + sigma

    acc: dict[tuple, complex] = {(): complex(active.core_energy)}

    ladders = {}

    def get_ladder(m, creation):
        key = (m, creation)
        if key not in ladders:
            ladders[key] = ladder_operator(m, creation)
        return ladders[key]

    def accumulate(opmap: dict, scale: float):
        for ops, coeff in opmap.items():
            val = coeff * scale
            if abs(val) < 1e-15:
                continue
            acc[ops] = acc.get(ops, 0.0) + val

    # one-body: sum_pq h_pq a^dag_{p sigma} a_{q sigma}
    for p in range(n_act):
        for q in range(n_act):
            if abs(h_eff[p, q]) < COEFF_EPS:
                continue
            for sigma in (0, 1):
                prod = _string_product(
                    get_ladder(mode(p, sigma), True),
                    get_ladder(mode(q, sigma), False),
                )
                accumulate(prod, h_eff[p, q])

    # two-body: 1/2 sum_pqrs (pq|rs) a^dag_{p s1} a^dag_{r s2} a_{s s2} a_{q s1}
    for p in range(n_act):
        for q in range(n_act):
            for r in range(n_act):
                for s in range(n_act):
                    g = eri[p, q, r, s]
                    if abs(g) < COEFF_EPS:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            m1, m2 = mode(p, s1), mode(r, s2)
                            m3, m4 = mode(s, s2), mode(q, s1)
                            if m1 == m2 or m3 == m4:
                                continue  # a^dag a^dag or a a on same mode
                            prod = _string_product(
                                get_ladder(m1, True), get_ladder(m2, True)
                            )
                            prod = _string_product(prod, get_ladder(m3, False))
                            prod = _string_product(prod, get_ladder(m4, False))
                            accumulate(prod, 0.5 * g)

    words: dict[str, float] = {}
    for ops, coeff in acc.items():
        if abs(coeff) < COEFF_EPS:
            continue
        if abs(coeff.imag) > 1e-10:
            raise RuntimeError(
                f"non-Hermitian JW residue {coeff.imag:.3e} on {ops}"
            )
        letters = ["I"] * n_modes
        for q, letter in ops:
            letters[q] = letter
        words["".join(letters)] = float(coeff.real)
    return words


def dense_matrix(words: dict[str, float]) -> np.ndarray:
    """Dense matrix of a {word: coeff} map, qubit 0 as the most significant bit."""
    mats = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    n = len(next(iter(words)))
    out = np.zeros((2**n, 2**n), dtype=complex)
    for word, coeff in words.items():
        block = np.array([[coeff]], dtype=complex)
        for ch in word:
            block = np.kron(block, mats[ch])
        out += block
    return out
