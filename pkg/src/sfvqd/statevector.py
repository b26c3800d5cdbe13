"""Dense complex statevector representation and gate application kernel.

Bit-order convention: qubit 0 is the most significant bit of the amplitude
index, so a basis bitstring reads left to right in qubit order and
``int(bits, 2)`` is the amplitude index.  Ancilla qubits, when present, are
appended after the system qubits and therefore occupy the least significant
bits.

Gates are applied in place on the amplitude buffer with stride arithmetic;
full 2^n x 2^n matrices are never formed here (the oracle module builds them
independently for cross-checks).  Norm drift fails loudly via assertion and
is never silently renormalized; the only renormalization happens after
measurement collapse, where it is part of the semantics.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

from .errors import InvalidGateError, InvalidStateError

UNITARY_ATOL = 1e-8
NORM_ATOL = 1e-9


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _gate_stream_kernel(  # pragma: no cover - jit-compiled
        amps, mats, mat_offsets, ks, tshifts, tshift_offsets, cmasks
    ):
        """Apply an encoded stream of small controlled gates in one call.

        Gate g has 2^ks[g] x 2^ks[g] matrix flattened at mats[mat_offsets[g]:]
        (row major), target bit shifts at tshifts[tshift_offsets[g]:], and a
        control bit mask cmasks[g].
        """
        dim = amps.shape[0]
        n_gates = ks.shape[0]
        scratch = np.empty(64, np.complex128)  # k <= 6 on this path
        for g in range(n_gates):
            k = ks[g]
            block = 1 << k
            m0 = mat_offsets[g]
            t0 = tshift_offsets[g]
            cmask = cmasks[g]
            tmask = 0
            for j in range(k):
                tmask |= 1 << tshifts[t0 + j]
            for base in range(dim):
                if base & tmask:
                    continue
                if (base & cmask) != cmask:
                    continue
                for r in range(block):
                    idx = base
                    for j in range(k):
                        if (r >> (k - 1 - j)) & 1:
                            idx |= 1 << tshifts[t0 + j]
                    scratch[r] = amps[idx]
                for r in range(block):
                    acc = 0.0 + 0.0j
                    row = m0 + r * block
                    for c in range(block):
                        acc += mats[row + c] * scratch[c]
                    idx = base
                    for j in range(k):
                        if (r >> (k - 1 - j)) & 1:
                            idx |= 1 << tshifts[t0 + j]
                    amps[idx] = acc


@dataclass
class StateVector:
    """Dense amplitudes over 2^n_qubits basis states; single-owner mutable."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def assert_normalized(self, atol: float = NORM_ATOL) -> None:
        drift = abs(self.norm() - 1.0)
        assert drift < atol, f"statevector norm drifted by {drift:.3e}"


@dataclass(frozen=True)
class Gate:
    """One unitary block: 2^k x 2^k matrix on `targets`, gated by `controls`."""

    matrix: np.ndarray
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()


@dataclass
class Circuit:
    """Ordered gate list over a fixed register width."""

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        self._encoded = None

    def add(self, matrix, targets, controls=(), validate: bool = True) -> "Circuit":
        """Append a gate; validate=False trusts algebraically-unitary builders."""
        matrix = np.asarray(matrix, dtype=np.complex128)
        targets = tuple(int(t) for t in targets)
        controls = tuple(int(c) for c in controls)
        if validate:
            _check_gate(matrix, targets, controls, self.n_qubits)
        self.gates.append(Gate(matrix, targets, controls))
        self._encoded = None
        return self

    def _append_raw(self, matrix: np.ndarray, targets: tuple[int, ...]) -> None:
        """Trusted fast append for builder loops; no casts, no validation."""
        self.gates.append(Gate(matrix, targets, ()))
        self._encoded = None

    def extend(self, other: "Circuit", offset: int = 0) -> "Circuit":
        """Append another circuit's gates, shifting qubit indices by `offset`."""
        for g in other.gates:
            self.add(
                g.matrix,
                tuple(t + offset for t in g.targets),
                tuple(c + offset for c in g.controls),
                validate=offset != 0,  # already validated on the source circuit
            )
        return self

    def inverse(self) -> "Circuit":
        inv = Circuit(self.n_qubits)
        for g in reversed(self.gates):
            inv.add(g.matrix.conj().T, g.targets, g.controls, validate=False)
        return inv

    def apply(self, state: StateVector, check_norm: bool = True) -> StateVector:
        """Run all gates in order, mutating `state` in place."""
        if state.n_qubits != self.n_qubits:
            raise ValueError(
                f"circuit is {self.n_qubits}-qubit, state is {state.n_qubits}-qubit"
            )
        if _HAVE_NUMBA:
            self._apply_batched(state)
        else:
            for g in self.gates:
                _apply_gate_unchecked(state, g.matrix, g.targets, g.controls)
        if check_norm:
            state.assert_normalized()
        return state

    _STREAM_MAX_TARGETS = 4  # larger blocks go through the BLAS path

    def _encode(self):
        """Segment the gate list into jit streams and BLAS-path gates (cached)."""
        if self._encoded is not None:
            return self._encoded
        n = self.n_qubits
        segments = []
        mats, ks, tshifts, cmasks = [], [], [], []

        def close_stream():
            if not ks:
                return
            ks_arr = np.array(ks, dtype=np.int64)
            mat_offsets = np.zeros(len(ks), dtype=np.int64)
            np.cumsum([m.size for m in mats[:-1]], out=mat_offsets[1:])
            shift_offsets = np.zeros(len(ks), dtype=np.int64)
            np.cumsum(ks_arr[:-1], out=shift_offsets[1:])
            segments.append((
                "stream",
                (
                    np.concatenate(mats),
                    mat_offsets,
                    ks_arr,
                    np.concatenate(tshifts),
                    shift_offsets,
                    np.array(cmasks, dtype=np.int64),
                ),
            ))
            mats.clear(), ks.clear(), tshifts.clear(), cmasks.clear()

        for g in self.gates:
            if len(g.targets) <= self._STREAM_MAX_TARGETS:
                mats.append(np.ascontiguousarray(g.matrix).reshape(-1))
                ks.append(len(g.targets))
                tshifts.append(
                    np.array([n - 1 - t for t in g.targets], dtype=np.int64)
                )
                cmask = 0
                for c in g.controls:
                    cmask |= 1 << (n - 1 - c)
                cmasks.append(cmask)
            else:
                close_stream()
                segments.append(("gate", g))
        close_stream()
        self._encoded = segments
        return segments

    def _apply_batched(self, state: StateVector) -> None:
        for kind, payload in self._encode():
            if kind == "stream":
                _gate_stream_kernel(state.amplitudes, *payload)
            else:
                _apply_gate_unchecked(
                    state, payload.matrix, payload.targets, payload.controls
                )

    def cnot_count(self) -> int:
        n = 0
        for g in self.gates:
            if g.controls and g.matrix.shape == (2, 2) and np.allclose(g.matrix, PAULI_X):
                n += 1
        return n

    def __len__(self) -> int:
        return len(self.gates)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def _check_gate(matrix, targets, controls, n_qubits):
    k = len(targets)
    if matrix.shape != (2**k, 2**k):
        raise InvalidGateError(
            f"gate on {k} target(s) must be {2**k}x{2**k}, got {matrix.shape}"
        )
    dev = np.max(np.abs(matrix.conj().T @ matrix - np.eye(2**k)))
    if dev > UNITARY_ATOL:
        raise InvalidGateError(f"gate is not unitary (deviation {dev:.3e})")
    touched = targets + controls
    if len(set(touched)) != len(touched):
        raise ValueError(f"target/control indices collide: {targets} / {controls}")
    if any(q < 0 or q >= n_qubits for q in touched):
        raise ValueError(f"qubit index out of range for {n_qubits} qubits: {touched}")


def apply_gate(state: StateVector, matrix, targets, controls=()) -> StateVector:
    """Apply the controlled embedding of `matrix` to `state` in place."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    targets = tuple(int(t) for t in targets)
    controls = tuple(int(c) for c in controls)
    _check_gate(matrix, targets, controls, state.n_qubits)
    return _apply_gate_unchecked(state, matrix, targets, controls)


def _apply_gate_unchecked(state, matrix, targets, controls):
    n = state.n_qubits
    k = len(targets)
    if targets == tuple(range(k)) and all(c >= k for c in controls):
        # leading-qubit block, trailing controls: one dense product on the
        # selected columns (the layout used by the fused screen)
        cols = state.amplitudes.reshape(2**k, 2 ** (n - k))
        if controls:
            sel = [
                u
                for u in range(2 ** (n - k))
                if all((u >> (n - 1 - c)) & 1 for c in controls)
            ]
            cols[:, sel] = matrix @ cols[:, sel]
        else:
            cols[:] = matrix @ cols
        return state
    psi = state.amplitudes.reshape([2] * n)
    if controls:
        index = [slice(None)] * n
        for c in controls:
            index[c] = 1
        view = psi[tuple(index)]
        adj = [t - sum(c < t for c in controls) for t in targets]
    else:
        view = psi
        adj = list(targets)
    nv = view.ndim
    moved = np.moveaxis(view, adj, range(nv - k, nv))
    updated = moved.reshape(-1, 2**k) @ matrix.T
    moved[...] = updated.reshape(moved.shape)
    return state


def init_basis_state(n_qubits: int, occupation: str) -> StateVector:
    """Computational basis state from a bitstring in qubit order."""
    if len(occupation) != n_qubits:
        raise ValueError(
            f"occupation string length {len(occupation)} != n_qubits {n_qubits}"
        )
    if any(ch not in "01" for ch in occupation):
        raise ValueError(f"occupation must be over {{0,1}}: {occupation!r}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[int(occupation, 2)] = 1.0
    return StateVector(n_qubits, amps)


def basis_index(occupation: str) -> int:
    return int(occupation, 2)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with the conjugate on the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"width mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def marginal_probabilities(state: StateVector, qubits) -> np.ndarray:
    """Born probabilities over the listed qubits, indexed MSB-first in list order."""
    qubits = [int(q) for q in qubits]
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubits: {qubits}")
    if any(q < 0 or q >= state.n_qubits for q in qubits):
        raise ValueError(f"qubit out of range: {qubits}")
    n = state.n_qubits
    probs = np.abs(state.amplitudes.reshape([2] * n)) ** 2
    keep = qubits
    drop = tuple(i for i in range(n) if i not in keep)
    marg = probs.sum(axis=drop) if drop else probs
    # reorder the kept axes to the order in which qubits were listed
    order = [sorted(keep).index(q) for q in keep]
    return np.transpose(marg, order).reshape(-1)


def marginal_distribution(state: StateVector, qubits) -> dict[str, float]:
    """Map bitstring (in list order) -> probability; sums to 1 within 1e-10."""
    if not len(qubits):
        raise ValueError("qubit list must be nonempty")
    marg = marginal_probabilities(state, qubits)
    k = len(qubits)
    return {format(i, f"0{k}b"): float(p) for i, p in enumerate(marg)}


def measure_subset(state: StateVector, qubits, rng: np.random.Generator):
    """Measure the listed qubits; returns (outcome bitstring, collapsed copy).

    The outcome is sampled from the marginal Born distribution and the
    returned state is renormalized on the measured subspace.
    """
    if not len(qubits):
        raise ValueError("qubit list must be nonempty")
    nrm = state.norm()
    if nrm < 1e-12:
        raise InvalidStateError("cannot measure a zero-norm state")
    marg = marginal_probabilities(state, qubits)
    marg = marg / marg.sum()
    outcome_idx = int(rng.choice(marg.size, p=marg))
    k = len(qubits)
    outcome = format(outcome_idx, f"0{k}b")
    collapsed = state.copy()
    psi = collapsed.amplitudes.reshape([2] * state.n_qubits)
    index = [slice(None)] * state.n_qubits
    for q, bit in zip(qubits, outcome):
        index[int(q)] = 1 - int(bit)
        psi[tuple(index)] = 0.0
        index[int(q)] = int(bit)
    collapsed.amplitudes /= np.linalg.norm(collapsed.amplitudes)
    return outcome, collapsed
