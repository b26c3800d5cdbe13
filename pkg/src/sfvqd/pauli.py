"""Pauli-string algebra: Hermitian weighted sums, expectations, dense oracles.

Coefficients are real (every operator in scope is Hermitian); complex phases
arising from products of Pauli letters are tracked internally during
multiplication and must cancel by the time a sum is canonicalized.  Terms are
kept in a canonical sorted order so serialized output is bit-stable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .statevector import StateVector

COEFF_EPS = 1e-12
DENSE_QUBIT_GUARD = 14

_LETTERS = ("I", "X", "Y", "Z")

# single-qubit products: (a, b) -> (phase, letter) for a*b
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_DENSE_1Q = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string; `ops` maps qubit -> letter, identity elsewhere."""

    coefficient: float
    ops: tuple[tuple[int, str], ...]  # sorted by qubit, letters in {X,Y,Z}

    def word(self, n_qubits: int) -> str:
        letters = ["I"] * n_qubits
        for q, letter in self.ops:
            letters[q] = letter
        return "".join(letters)


def _normalize_ops(ops) -> tuple[tuple[int, str], ...]:
    if isinstance(ops, dict):
        items = ops.items()
    else:
        items = ops
    out = []
    for q, letter in items:
        if letter == "I":
            continue
        if letter not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli letter {letter!r}")
        out.append((int(q), letter))
    out.sort()
    qubits = [q for q, _ in out]
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubit in operator map: {qubits}")
    return tuple(out)


class PauliSum:
    """Canonicalized Hermitian sum of Pauli strings on a fixed register width."""

    def __init__(self, n_qubits: int, terms):
        self.n_qubits = int(n_qubits)
        self.terms = self._canonicalize(terms)
        self._app_cache = None

    def _canonicalize(self, terms) -> tuple[PauliTerm, ...]:
        acc: dict[tuple, complex] = {}
        for term in terms:
            if isinstance(term, PauliTerm):
                coeff, ops = term.coefficient, term.ops
            else:
                coeff, ops = term
                ops = _normalize_ops(ops)
            for q, _ in ops:
                if q >= self.n_qubits:
                    raise ValueError(
                        f"qubit {q} outside register of width {self.n_qubits}"
                    )
            acc[ops] = acc.get(ops, 0.0) + coeff
        merged = []
        for ops in sorted(acc):
            c = complex(acc[ops])
            if abs(c) < COEFF_EPS:
                continue
            if abs(c.imag) > 1e-10:
                raise ValueError(
                    f"non-Hermitian residue {c.imag:.3e} on term {ops}; "
                    "coefficients must be real after collection"
                )
            merged.append(PauliTerm(float(c.real), ops))
        return tuple(merged)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_ops(cls, n_qubits: int, weighted_ops) -> "PauliSum":
        """From (coefficient, {qubit: letter}) pairs."""
        return cls(n_qubits, weighted_ops)

    @classmethod
    def from_words(cls, n_qubits: int, weighted_words) -> "PauliSum":
        """From (coefficient, word) pairs; words read qubit-0-first."""
        terms = []
        for coeff, word in weighted_words:
            if len(word) != n_qubits:
                raise ValueError(
                    f"word {word!r} has length {len(word)}, expected {n_qubits}"
                )
            terms.append((coeff, {q: ch for q, ch in enumerate(word) if ch != "I"}))
        return cls(n_qubits, terms)

    @classmethod
    def identity(cls, n_qubits: int, coefficient: float = 1.0) -> "PauliSum":
        return cls(n_qubits, [(coefficient, ())])

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("width mismatch in PauliSum addition")
        return PauliSum(self.n_qubits, list(self.terms) + list(other.terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "PauliSum":
        return PauliSum(
            self.n_qubits,
            [(t.coefficient * scalar, t.ops) for t in self.terms],
        )

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self.terms)})"

    # -- numerics -----------------------------------------------------------

    def _applications(self):
        """Stacked (sources, weighted phases) for vectorized matrix-free action.

        Term t maps |b> to phase_t(b) |b ^ mask_t|, so H @ psi gathers each
        term's source amplitudes and adds them with precomputed weights.
        """
        if self._app_cache is None:
            n = self.n_qubits
            dim = 2**n
            idx = np.arange(dim)
            n_terms = len(self.terms)
            sources = np.empty((n_terms, dim), dtype=np.intp)
            weights = np.empty((n_terms, dim), dtype=np.complex128)
            for i, t in enumerate(self.terms):
                mask = 0
                phase = np.ones(dim, dtype=np.complex128)
                for q, letter in t.ops:
                    bit = (idx >> (n - 1 - q)) & 1
                    if letter == "X":
                        mask |= 1 << (n - 1 - q)
                    elif letter == "Y":
                        mask |= 1 << (n - 1 - q)
                        phase *= 1j * (1 - 2 * bit)
                    else:  # Z
                        phase *= 1 - 2 * bit
                src = idx ^ mask
                sources[i] = src
                # phase is evaluated at the source index of each output entry
                weights[i] = t.coefficient * phase[src]
            self._app_cache = (sources, weights)
        return self._app_cache

    def apply_to_array(self, amps: np.ndarray) -> np.ndarray:
        """Matrix-free H @ amps; first axis is the basis index (vector or columns)."""
        dim = 2**self.n_qubits
        if amps.shape[0] != dim:
            raise ValueError(f"leading dimension {amps.shape[0]} != {dim}")
        sources, weights = self._applications()
        if len(self.terms) == 0:
            return np.zeros_like(amps, dtype=np.complex128)
        if amps.ndim == 1:
            return np.einsum("td,td->d", weights, amps[sources])
        return np.einsum("td,tdc->dc", weights, amps[sources, :])


def apply_sum(state: StateVector, op: PauliSum) -> StateVector:
    """op|state> as a new, generally unnormalized, StateVector."""
    if state.n_qubits != op.n_qubits:
        raise ValueError(
            f"width mismatch: state {state.n_qubits}, operator {op.n_qubits}"
        )
    return StateVector(state.n_qubits, op.apply_to_array(state.amplitudes))


def expectation(state: StateVector, op: PauliSum) -> float:
    """<state|op|state>; asserts the imaginary residue is below 1e-9."""
    if state.n_qubits != op.n_qubits:
        raise ValueError(
            f"width mismatch: state {state.n_qubits}, operator {op.n_qubits}"
        )
    val = complex(np.vdot(state.amplitudes, op.apply_to_array(state.amplitudes)))
    assert abs(val.imag) < 1e-9, f"expectation has imaginary residue {val.imag:.3e}"
    return float(val.real)


def one_norm(op: PauliSum) -> float:
    """Sum of |coefficients|; an upper bound on the spectral norm."""
    return float(sum(abs(t.coefficient) for t in op.terms))


def to_dense(op: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n Hermitian matrix; guarded at 14 qubits."""
    if op.n_qubits > DENSE_QUBIT_GUARD:
        raise ResourceLimitError(
            f"dense materialization limited to {DENSE_QUBIT_GUARD} qubits, "
            f"got {op.n_qubits}"
        )
    dim = 2**op.n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for t in op.terms:
        block = np.array([[t.coefficient]], dtype=np.complex128)
        word = t.word(op.n_qubits)
        for letter in word:
            block = np.kron(block, _DENSE_1Q[letter])
        out += block
    return out


def multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    """Operator product a @ b, valid when the result is Hermitian.

    Complex phases from letter products are tracked term by term; if the
    collected coefficients retain an imaginary part (non-Hermitian product)
    canonicalization raises.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError("width mismatch in PauliSum product")
    acc: dict[tuple, complex] = {}
    for ta in a.terms:
        ops_a = dict(ta.ops)
        for tb in b.terms:
            phase = complex(ta.coefficient * tb.coefficient)
            ops = dict(ops_a)
            for q, letter_b in tb.ops:
                letter_a = ops.get(q, "I")
                ph, letter = _MUL[(letter_a, letter_b)]
                phase *= ph
                if letter == "I":
                    ops.pop(q, None)
                else:
                    ops[q] = letter
            key = tuple(sorted(ops.items()))
            acc[key] = acc.get(key, 0.0) + phase
    return PauliSum(a.n_qubits, [(c, ops) for ops, c in acc.items()])
