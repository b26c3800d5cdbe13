"""Particle- and S_z-conserving brickwork circuits.

The two-qubit block A(theta, phi) acts as the identity on |00> and |11> and
rotates the singly-occupied subspace, so a brickwork of A-gates conserves the
total occupation.  Applying the brickwork separately to the alpha and beta
sublattices (SSP) conserves n_alpha and n_beta individually, with diagonal
phase blocks restoring the relative phases between occupation classes that
the split layout loses.

The three-CNOT realization of A returned by `a_gate_decomposition` is exact
up to a global phase.  Its inner rotations carry the Ry(theta +- pi/2)
content of the usual R(theta, phi) = Rz(phi + pi) Ry(theta + pi/2) building
block; the naive five-gate wiring with a bare R / R-dagger pair on one lane
cannot reproduce A (its middle block is forced traceless), so two constant
Clifford dressings are included.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spinops import SpinSector
from .statevector import Circuit, StateVector, init_basis_state

PARAM_INIT_STD = 0.3

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def ry(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz(t: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=np.complex128
    )


def phase1(lam: float) -> np.ndarray:
    """diag(1, e^{i lam}) single-qubit phase."""
    return np.array([[1, 0], [0, np.exp(1j * lam)]], dtype=np.complex128)


def a_gate_matrix(theta: float, phi: float) -> np.ndarray:
    """Occupation-conserving two-qubit rotation block, identity on |00> and |11>."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, c, -np.exp(1j * phi) * s, 0],
            [0, np.exp(-1j * phi) * s, c, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )


def _a_gate_batch(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """(G, 4, 4) stack of A-gate matrices, assembled vectorized."""
    g = thetas.size
    c, s = np.cos(thetas), np.sin(thetas)
    phase = np.exp(1j * phis)
    out = np.zeros((g, 4, 4), dtype=np.complex128)
    out[:, 0, 0] = 1.0
    out[:, 3, 3] = 1.0
    out[:, 1, 1] = c
    out[:, 2, 2] = c
    out[:, 1, 2] = -phase * s
    out[:, 2, 1] = phase.conj() * s
    return out


def _phase_gate_batch(xis: np.ndarray) -> np.ndarray:
    """(G, 4, 4) stack of phase blocks from (G, 3) angle triples."""
    g = xis.shape[0]
    out = np.zeros((g, 4, 4), dtype=np.complex128)
    out[:, 0, 0] = 1.0
    out[:, 1, 1] = np.exp(1j * xis[:, 0])
    out[:, 2, 2] = np.exp(1j * xis[:, 1])
    out[:, 3, 3] = np.exp(1j * xis.sum(axis=1))
    return out


def a_gate_decomposition(theta: float, phi: float) -> Circuit:
    """Three-CNOT circuit equal to a_gate_matrix(theta, phi) up to global phase.

    Qubit 0 is the first (most significant) leg of the 4x4 block.
    """
    beta = phi + np.pi / 2
    circ = Circuit(2)
    circ.add(phase1(-beta), (1,))
    circ.add(rz(-np.pi / 2), (1,))
    circ.add(ry(np.pi), (1,))
    circ.add(_X, (0,), controls=(1,))
    circ.add(ry(theta + np.pi / 2), (1,))
    circ.add(_X, (1,), controls=(0,))
    circ.add(rz(-np.pi / 2), (0,))
    circ.add(ry(theta - np.pi / 2), (1,))
    circ.add(_X, (0,), controls=(1,))
    circ.add(rz(np.pi / 2), (0,))
    circ.add(rz(-np.pi), (1,))
    circ.add(ry(np.pi), (1,))
    circ.add(phase1(beta), (1,))
    return circ


def phase_gate_matrix(xi1: float, xi2: float, xi3: float) -> np.ndarray:
    """diag(1, e^{i xi1}, e^{i xi2}, e^{i(xi1+xi2+xi3)}) on one orbital pair."""
    return np.diag(
        [
            1.0,
            np.exp(1j * xi1),
            np.exp(1j * xi2),
            np.exp(1j * (xi1 + xi2 + xi3)),
        ]
    ).astype(np.complex128)


@dataclass
class AnsatzParams:
    """Flat angle vectors for an SP or SSP circuit of a given depth."""

    kind: str  # "SP" | "SSP"
    layers: int
    theta: np.ndarray
    phi: np.ndarray
    xi: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.phi = np.asarray(self.phi, dtype=float)
        self.xi = np.asarray(self.xi, dtype=float)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.phi, self.xi])

    @classmethod
    def from_vector(cls, kind, n_spatial, layers, vec) -> "AnsatzParams":
        vec = np.asarray(vec, dtype=float)
        shape = _param_shape(kind, n_spatial, layers)
        n_theta, n_phi, n_xi = shape
        if vec.size != n_theta + n_phi + n_xi:
            raise ValueError(
                f"parameter vector has {vec.size} entries, expected "
                f"{n_theta + n_phi + n_xi}"
            )
        return cls(
            kind,
            layers,
            vec[:n_theta],
            vec[n_theta : n_theta + n_phi],
            vec[n_theta + n_phi :],
        )


def _chain_pairs(chain: list[int]) -> list[tuple[int, int]]:
    """Brickwork pairs for one layer: even sublayer then odd sublayer."""
    pairs = [(chain[i], chain[i + 1]) for i in range(0, len(chain) - 1, 2)]
    pairs += [(chain[i], chain[i + 1]) for i in range(1, len(chain) - 1, 2)]
    return pairs


def _param_shape(kind, n_spatial, layers) -> tuple[int, int, int]:
    if kind == "SP":
        n_gates = layers * (2 * n_spatial - 1)
        return n_gates, n_gates, 0
    if kind == "SSP":
        n_gates = layers * 2 * (n_spatial - 1)
        return n_gates, n_gates, layers * 3 * n_spatial
    raise ValueError(f"unknown ansatz kind {kind!r}")


def param_count(kind: str, n_spatial: int, layers: int) -> int:
    """Total angle count: one (theta, phi) per A-gate plus three xi per phase block.

    SP uses 2*n_spatial - 1 A-gates per layer (full-register chain); SSP uses
    n_spatial - 1 per spin sublattice plus one phase block per orbital.
    """
    return sum(_param_shape(kind, n_spatial, layers))


def init_params(
    kind: str, n_spatial: int, layers: int, rng: np.random.Generator
) -> AnsatzParams:
    """All angles drawn from N(0, 0.3^2)."""
    n_theta, n_phi, n_xi = _param_shape(kind, n_spatial, layers)
    draw = rng.normal(0.0, PARAM_INIT_STD, size=n_theta + n_phi + n_xi)
    return AnsatzParams.from_vector(kind, n_spatial, layers, draw)


def build_sp(n_qubits: int, layers: int, params: AnsatzParams) -> Circuit:
    """Particle-number-conserving brickwork over the full qubit chain."""
    if params.kind != "SP":
        raise ValueError(f"params are for {params.kind}, expected SP")
    per_layer = n_qubits - 1
    if params.theta.size != layers * per_layer or params.phi.size != layers * per_layer:
        raise ValueError(
            f"SP on {n_qubits} qubits x {layers} layers needs "
            f"{layers * per_layer} (theta, phi) pairs, got {params.theta.size}"
        )
    circ = Circuit(n_qubits)
    pairs = _chain_pairs(list(range(n_qubits)))
    blocks = _a_gate_batch(params.theta, params.phi)
    g = 0
    for _ in range(layers):
        for qa, qb in pairs:
            circ._append_raw(blocks[g], (qa, qb))
            g += 1
    return circ


def build_ssp(n_spatial: int, layers: int, params: AnsatzParams) -> Circuit:
    """S_z-conserving variant: brickwork per spin sublattice plus phase blocks."""
    if params.kind != "SSP":
        raise ValueError(f"params are for {params.kind}, expected SSP")
    n_theta, n_phi, n_xi = _param_shape("SSP", n_spatial, layers)
    if (params.theta.size, params.phi.size, params.xi.size) != (n_theta, n_phi, n_xi):
        raise ValueError(
            f"SSP n_spatial={n_spatial} x {layers} layers needs sizes "
            f"{(n_theta, n_phi, n_xi)}, got "
            f"{(params.theta.size, params.phi.size, params.xi.size)}"
        )
    n_qubits = 2 * n_spatial
    circ = Circuit(n_qubits)
    alpha_pairs = _chain_pairs([2 * i for i in range(n_spatial)])
    beta_pairs = _chain_pairs([2 * i + 1 for i in range(n_spatial)])
    a_blocks = _a_gate_batch(params.theta, params.phi)
    p_blocks = _phase_gate_batch(params.xi.reshape(-1, 3))
    g = 0
    x = 0
    for _ in range(layers):
        for qa, qb in alpha_pairs + beta_pairs:
            circ._append_raw(a_blocks[g], (qa, qb))
            g += 1
        for i in range(n_spatial):
            circ._append_raw(p_blocks[x], (2 * i, 2 * i + 1))
            x += 1
    return circ


def reference_state(n_spatial: int, sector: SpinSector) -> StateVector:
    """Basis state filling the lowest orbitals of each spin channel."""
    if sector.n_alpha > n_spatial or sector.n_beta > n_spatial:
        raise ValueError(
            f"sector ({sector.n_alpha}, {sector.n_beta}) infeasible in "
            f"{n_spatial} spatial orbitals"
        )
    bits = ["0"] * (2 * n_spatial)
    for i in range(sector.n_alpha):
        bits[2 * i] = "1"
    for i in range(sector.n_beta):
        bits[2 * i + 1] = "1"
    return init_basis_state(2 * n_spatial, "".join(bits))


@dataclass(frozen=True)
class AnsatzSpec:
    """Which circuit family to build, at what width and depth."""

    kind: str
    n_spatial: int
    layers: int

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    def param_count(self) -> int:
        return param_count(self.kind, self.n_spatial, self.layers)

    def build(self, params: AnsatzParams) -> Circuit:
        if self.kind == "SP":
            return build_sp(self.n_qubits, self.layers, params)
        return build_ssp(self.n_spatial, self.layers, params)

    def build_from_vector(self, vec: np.ndarray) -> Circuit:
        return self.build(
            AnsatzParams.from_vector(self.kind, self.n_spatial, self.layers, vec)
        )

    def init_params(self, rng: np.random.Generator) -> AnsatzParams:
        return init_params(self.kind, self.n_spatial, self.layers, rng)
