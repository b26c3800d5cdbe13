"""Jordan-Wigner spin observables and Wigner-d screening probabilities.

Spin orbitals are interleaved: qubit 2i carries orbital-i alpha, qubit 2i+1
carries orbital-i beta.  Under Jordan-Wigner with this ordering the ladder
operator S+ restricted to one orbital couples adjacent qubits with no parity
string, giving

    S_x = 1/4 sum_i (X_a X_b + Y_a Y_b)
    S_y = 1/4 sum_i (X_a Y_b - Y_a X_b)
    S_z = 1/4 sum_i (Z_b - Z_a)          (a = 2i, b = 2i+1)

which satisfy [S_a, S_b] = i eps_abc S_c.

Wigner little-d values at beta = pi/2 are computed by diagonalizing the
(2S+1)-dimensional spin-y matrix; the closed-form factorial sum is kept as an
independent cross-check route because the two suffer from different failure
modes (spectral vs. cancellation error).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .pauli import PauliSum, multiply


@dataclass(frozen=True)
class SpinSector:
    """Electron counts per spin channel plus the targeted total spin."""

    n_alpha: int
    n_beta: int
    s_target: float

    def __post_init__(self):
        if self.n_alpha < 0 or self.n_beta < 0:
            raise ValueError("electron counts must be nonnegative")
        if (self.n_alpha + self.n_beta) % 2 != 0:
            raise ValueError(
                "only even total electron counts (integer total spin) are supported"
            )
        if abs(2 * self.s_target - round(2 * self.s_target)) > 1e-9:
            raise ValueError(f"s_target must be a half-integer, got {self.s_target}")
        if self.s_target < abs(self.m_z) - 1e-9:
            raise ValueError(
                f"s_target {self.s_target} below |m_z| {abs(self.m_z)}"
            )

    @property
    def n_elec(self) -> int:
        return self.n_alpha + self.n_beta

    @property
    def m_z(self) -> float:
        return (self.n_alpha - self.n_beta) / 2


def build_spin_component(axis: str, n_spatial: int) -> PauliSum:
    """Total spin projection S_axis as a Pauli sum on 2*n_spatial qubits."""
    if n_spatial < 1:
        raise ValueError("n_spatial must be >= 1")
    n = 2 * n_spatial
    terms = []
    for i in range(n_spatial):
        a, b = 2 * i, 2 * i + 1
        if axis == "x":
            terms.append((0.25, {a: "X", b: "X"}))
            terms.append((0.25, {a: "Y", b: "Y"}))
        elif axis == "y":
            terms.append((0.25, {a: "X", b: "Y"}))
            terms.append((-0.25, {a: "Y", b: "X"}))
        elif axis == "z":
            terms.append((0.25, {b: "Z"}))
            terms.append((-0.25, {a: "Z"}))
        else:
            raise ValueError(f"axis must be one of x, y, z: {axis!r}")
    return PauliSum(n, terms)


def build_s_squared(n_spatial: int) -> PauliSum:
    """Total spin squared, S_x^2 + S_y^2 + S_z^2."""
    total = None
    for axis in "xyz":
        comp = build_spin_component(axis, n_spatial)
        sq = multiply(comp, comp)
        total = sq if total is None else total + sq
    return total


def build_number_operators(n_spatial: int) -> tuple[PauliSum, PauliSum]:
    """(N_alpha, N_beta) occupation counters; diagonal in the computational basis."""
    if n_spatial < 1:
        raise ValueError("n_spatial must be >= 1")
    n = 2 * n_spatial
    alpha_terms = [(0.5 * n_spatial, ())]
    beta_terms = [(0.5 * n_spatial, ())]
    for i in range(n_spatial):
        alpha_terms.append((-0.5, {2 * i: "Z"}))
        beta_terms.append((-0.5, {2 * i + 1: "Z"}))
    return PauliSum(n, alpha_terms), PauliSum(n, beta_terms)


# -- Wigner-d at beta = pi/2 -------------------------------------------------


def _check_half_integer(value, name):
    if abs(2 * value - round(2 * value)) > 1e-9:
        raise ValueError(f"{name} must be a half-integer, got {value}")
    return round(2 * value) / 2


@lru_cache(maxsize=None)
def _d_matrix_half_pi(two_s: int) -> np.ndarray:
    """Full d^S(pi/2) matrix, rows/cols ordered m = S, S-1, ..., -S."""
    s = two_s / 2
    dim = two_s + 1
    ms = [s - k for k in range(dim)]
    jp = np.zeros((dim, dim))
    for k in range(1, dim):
        m = ms[k]
        jp[k - 1, k] = np.sqrt(s * (s + 1) - m * (m + 1))
    jy = (jp - jp.T) / 2j
    evals, vecs = np.linalg.eigh(jy)
    d = vecs @ np.diag(np.exp(-1j * (np.pi / 2) * evals)) @ vecs.conj().T
    assert np.max(np.abs(d.imag)) < 1e-12
    return d.real


def wigner_d_half_pi(s: float, m_x: float, m_z: float) -> float:
    """d^S_{m_x, m_z}(pi/2), the z->x frame-rotation matrix element."""
    s = _check_half_integer(s, "S")
    m_x = _check_half_integer(m_x, "m_x")
    m_z = _check_half_integer(m_z, "m_z")
    if abs(m_x) > s + 1e-9 or abs(m_z) > s + 1e-9:
        raise ValueError(f"|m| must not exceed S={s}: m_x={m_x}, m_z={m_z}")
    d = _d_matrix_half_pi(round(2 * s))
    i = round(s - m_x)
    j = round(s - m_z)
    return float(d[i, j])


def wigner_d_half_pi_series(s: float, m_x: float, m_z: float) -> float:
    """Independent factorial-sum route for d^S_{m_x, m_z}(pi/2)."""
    s = _check_half_integer(s, "S")
    m_x = _check_half_integer(m_x, "m_x")
    m_z = _check_half_integer(m_z, "m_z")
    if abs(m_x) > s + 1e-9 or abs(m_z) > s + 1e-9:
        raise ValueError(f"|m| must not exceed S={s}: m_x={m_x}, m_z={m_z}")
    c = s_half = np.sqrt(0.5)  # cos(pi/4) = sin(pi/4)
    kmin = max(0, round(m_z - m_x))
    kmax = min(round(s + m_z), round(s - m_x))
    total = 0.0
    for k in range(kmin, kmax + 1):
        num = np.sqrt(
            factorial(round(s + m_z)) * factorial(round(s - m_z))
            * factorial(round(s + m_x)) * factorial(round(s - m_x))
        )
        den = (
            factorial(round(s + m_z) - k) * factorial(k)
            * factorial(round(s - m_x) - k) * factorial(k - round(m_z - m_x))
        )
        power = c ** (round(2 * s) - 2 * k + round(m_z - m_x)) * s_half ** (
            2 * k - round(m_z - m_x)
        )
        total += (-1) ** (k - round(m_z - m_x)) * num / den * power
    return float(total)


def pass_probability(s: float, m_z: float) -> float:
    """Probability that a screened readout lands in |m_x| <= |m_z|.

    Equals 1 exactly when S = |m_z| and decreases for higher S.
    """
    s = _check_half_integer(s, "S")
    m_z = _check_half_integer(m_z, "m_z")
    if abs(m_z) > s + 1e-9:
        raise ValueError(f"|m_z|={abs(m_z)} exceeds S={s}")
    bound = abs(m_z)
    m = -bound
    total = 0.0
    while m <= bound + 1e-9:
        total += wigner_d_half_pi(s, m, m_z) ** 2
        m += 1.0
    return float(total)
