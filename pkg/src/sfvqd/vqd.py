"""Deflation driver: cost functions, restarts, and orthogonality accounting.

Three methods share the optimizer, restart policy, and instrumentation:

    VQD/SP     full-register occupation-conserving ansatz, plain energy cost
    VQD/SSP    per-spin-channel ansatz, plain energy cost
    sfVQD/SSP  per-spin-channel ansatz, ancilla screen, extended-Hamiltonian
               cost (statevector mode) or shot screening with early abort

Overlap penalties are evaluated on the pre-screen system state by default;
`overlap_on="postscreen"` switches to the reduced overlap of the screened
composite state.  The orthogonality counter increments once per overlap term
per cost evaluation, across all restarts of a state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ansatz import AnsatzSpec, reference_state
from .optimizers import OptResult, OptimizerSpec, minimize_cost
from .pauli import PauliSum, expectation, one_norm
from .screen import (
    ExtendedHamiltonian,
    build_extended_hamiltonian,
    decode_mx,
    required_ancillas,
)
from .spinops import SpinSector, build_s_squared
from .statevector import Circuit, StateVector, inner_product

METHODS = ("VQD/SP", "VQD/SSP", "sfVQD/SSP")


@dataclass
class DeflationStack:
    """Converged lower states and their penalty weights."""

    states: list[StateVector] = field(default_factory=list)
    weights: list[float] = field(default_factory=list)

    def add(self, state: StateVector, weight: float) -> None:
        self.states.append(state)
        self.weights.append(float(weight))

    def __len__(self) -> int:
        return len(self.states)

    def max_cross_overlap(self) -> float:
        """Largest pairwise |<i|j>|; recorded, not enforced."""
        worst = 0.0
        for i in range(len(self.states)):
            for j in range(i + 1, len(self.states)):
                worst = max(
                    worst, abs(inner_product(self.states[i], self.states[j]))
                )
        return worst


@dataclass
class VqdConfig:
    sector: SpinSector
    method: str = "sfVQD/SSP"
    layers: int = 6
    restarts: int = 10
    n_states: int = 1
    mode: str = "statevector"  # or "shot"
    n_shot: int = 1024
    c_penalty: float = 0.0
    optimizer: OptimizerSpec = field(default_factory=OptimizerSpec)
    seed: int = 0
    overlap_on: str = "prescreen"  # or "postscreen"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.layers < 0:
            raise ValueError("layers must be nonnegative")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.mode not in ("statevector", "shot"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "shot" and self.n_shot < 1:
            raise ValueError("n_shot must be >= 1 in shot mode")
        if self.overlap_on not in ("prescreen", "postscreen"):
            raise ValueError(f"unknown overlap_on {self.overlap_on!r}")


@dataclass
class CostCounters:
    cost_evals: int = 0
    overlap_checks: int = 0
    ancilla_measurements: int = 0


@dataclass
class StateResult:
    """One converged deflation entry plus its optimization record."""

    state_index: int
    energy: float  # plain <psi|H|psi> on the system register
    cost: float  # converged cost (screen and penalties included)
    params: np.ndarray
    state: StateVector  # pre-screen system-register state
    s_squared: float
    overlap_checks: int
    restart_costs: list[float]
    restart_index: int
    n_evals: int
    converged: bool


@dataclass
class VqdResult:
    config: VqdConfig
    states: list[StateResult]
    monotonic: bool  # energies nondecreasing with state index (within 1e-6)
    max_stack_overlap: float = 0.0  # recorded, not enforced (tolerance 1e-2)

    @property
    def energies(self) -> list[float]:
        return [s.energy for s in self.states]

    def total_overlap_checks(self, through_state: int | None = None) -> int:
        upto = len(self.states) if through_state is None else through_state + 1
        return sum(s.overlap_checks for s in self.states[:upto])


@lru_cache(maxsize=16)
def _spin_eigensystem(n_spatial: int, axis: str):
    from .pauli import to_dense
    from .spinops import build_spin_component

    dense = to_dense(build_spin_component(axis, n_spatial))
    evals, evecs = np.linalg.eigh(dense)
    return evals, evecs


@lru_cache(maxsize=16)
def _screen_circuit_cached(n_spatial: int, n_anc: int, axis: str):
    """Fused execution plan for the screen: one controlled exp(i theta_b S)
    block per ancilla instead of per-pair rotations.

    Identical action to `build_screen_circuit` (the pair rotations commute and
    multiply to the dense exponential); tests assert the equivalence.
    """
    from .screen import inverse_qft

    n_sys = 2 * n_spatial
    circ = Circuit(n_sys + n_anc)
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    for k in range(n_anc):
        circ.add(hadamard, (n_sys + k,))
    evals, evecs = _spin_eigensystem(n_spatial, axis)
    for k in range(n_anc):
        weight = 2 ** (n_anc - 1 - k)
        theta_b = 2 * np.pi * weight / 2**n_anc
        block = (evecs * np.exp(1j * theta_b * evals)) @ evecs.conj().T
        circ.add(block, tuple(range(n_sys)), controls=(n_sys + k,), validate=False)
    circ.extend(inverse_qft(n_anc), offset=n_sys)
    return circ


def _overlap_penalty_prescreen(psi, stack, counters):
    total = 0.0
    for prev, weight in zip(stack.states, stack.weights):
        counters.overlap_checks += 1
        total += weight * abs(inner_product(prev, psi)) ** 2
    return total


def _overlap_penalty_postscreen(composite, n_anc, stack, counters):
    cols = composite.amplitudes.reshape(-1, 2**n_anc)
    total = 0.0
    for prev, weight in zip(stack.states, stack.weights):
        counters.overlap_checks += 1
        overlaps = prev.amplitudes.conj() @ cols
        total += weight * float(np.sum(np.abs(overlaps) ** 2))
    return total


def cost_statevector(
    params,
    h_ext: ExtendedHamiltonian,
    ansatz_spec: AnsatzSpec,
    sector: SpinSector,
    stack: DeflationStack,
    counters: CostCounters | None = None,
    overlap_on: str = "prescreen",
) -> float:
    """Extended-Hamiltonian expectation of the screened state plus penalties."""
    counters = counters if counters is not None else CostCounters()
    counters.cost_evals += 1
    psi = reference_state(ansatz_spec.n_spatial, sector)
    circuit = (
        ansatz_spec.build_from_vector(np.asarray(params, dtype=float))
        if not hasattr(params, "vector")
        else ansatz_spec.build(params)
    )
    circuit.apply(psi, check_norm=False)
    n_anc = h_ext.n_anc
    cols = np.zeros((psi.dim, 2**n_anc), dtype=np.complex128)
    cols[:, 0] = psi.amplitudes
    composite = StateVector(psi.n_qubits + n_anc, cols.reshape(-1))
    _screen_circuit_cached(ansatz_spec.n_spatial, n_anc, "x").apply(
        composite, check_norm=False
    )
    value = h_ext.expectation(composite)
    if len(stack):
        if overlap_on == "prescreen":
            value += _overlap_penalty_prescreen(psi, stack, counters)
        else:
            value += _overlap_penalty_postscreen(composite, n_anc, stack, counters)
    return value


def cost_plain(
    params,
    hamiltonian: PauliSum,
    ansatz_spec: AnsatzSpec,
    sector: SpinSector,
    stack: DeflationStack,
    counters: CostCounters | None = None,
) -> float:
    """Unscreened deflation cost: <psi|H|psi> plus overlap penalties."""
    counters = counters if counters is not None else CostCounters()
    counters.cost_evals += 1
    psi = reference_state(ansatz_spec.n_spatial, sector)
    circuit = (
        ansatz_spec.build_from_vector(np.asarray(params, dtype=float))
        if not hasattr(params, "vector")
        else ansatz_spec.build(params)
    )
    circuit.apply(psi, check_norm=False)
    value = expectation(psi, hamiltonian)
    value += _overlap_penalty_prescreen(psi, stack, counters)
    return value


def shot_screened_energy(
    system_state: StateVector,
    hamiltonian: PauliSum,
    sector: SpinSector,
    n_shot: int,
    rng: np.random.Generator,
    counters: CostCounters | None = None,
) -> float:
    """Shot-mode screened energy of a prepared system state.

    For each Pauli term, up to n_shot ancilla readouts are drawn from the
    screened composite state; the first out-of-sector readout aborts the
    whole measurement loop and the energy estimate is replaced by the
    one-norm bound.  In-sector shots contribute the term expectation on the
    collapsed state.
    """
    counters = counters if counters is not None else CostCounters()
    n_spatial = hamiltonian.n_qubits // 2
    n_anc = required_ancillas(n_spatial, sector.n_elec)
    cols = np.zeros((system_state.dim, 2**n_anc), dtype=np.complex128)
    cols[:, 0] = system_state.amplitudes
    composite = StateVector(system_state.n_qubits + n_anc, cols.reshape(-1))
    _screen_circuit_cached(n_spatial, n_anc, "x").apply(composite, check_norm=False)

    screened = composite.amplitudes.reshape(-1, 2**n_anc)
    probs = np.linalg.norm(screened, axis=0) ** 2
    probs = probs / probs.sum()
    columns = {}
    for u in range(2**n_anc):
        if probs[u] > 1e-14:
            columns[u] = screened[:, u] / np.sqrt(probs[u])

    term_sums = [PauliSum(hamiltonian.n_qubits, [(1.0, t.ops)]) for t in hamiltonian.terms]
    cached: dict[tuple[int, int], float] = {}

    estimate = 0.0
    aborted = False
    for idx, term in enumerate(hamiltonian.terms):
        for _ in range(n_shot):
            u = int(rng.choice(2**n_anc, p=probs))
            counters.ancilla_measurements += 1
            m_x = decode_mx(format(u, f"0{n_anc}b"), n_anc)
            if abs(m_x) > sector.s_target + 1e-9:
                estimate = one_norm(hamiltonian)
                aborted = True
                break
            key = (idx, u)
            if key not in cached:
                col = StateVector(system_state.n_qubits, columns[u])
                cached[key] = expectation(col, term_sums[idx])
            estimate += term.coefficient * cached[key] / n_shot
        if aborted:
            break
    return estimate


def cost_shot(
    params,
    hamiltonian: PauliSum,
    ansatz_spec: AnsatzSpec,
    sector: SpinSector,
    stack: DeflationStack,
    n_shot: int,
    rng: np.random.Generator,
    counters: CostCounters | None = None,
) -> float:
    """Shot-mode deflation cost with early abort on out-of-sector readouts."""
    counters = counters if counters is not None else CostCounters()
    counters.cost_evals += 1
    psi = reference_state(ansatz_spec.n_spatial, sector)
    circuit = (
        ansatz_spec.build_from_vector(np.asarray(params, dtype=float))
        if not hasattr(params, "vector")
        else ansatz_spec.build(params)
    )
    circuit.apply(psi, check_norm=False)
    value = shot_screened_energy(psi, hamiltonian, sector, n_shot, rng, counters)
    value += _overlap_penalty_prescreen(psi, stack, counters)
    return value


def s_squared_diagnostic(state: StateVector) -> float:
    """Post-hoc <S^2> of a system-register state; never used inside the loop."""
    return expectation(state, build_s_squared(state.n_qubits // 2))


@dataclass
class _Workspace:
    """Everything derivable from (config, H) once per run."""

    hamiltonian: PauliSum
    ansatz_spec: AnsatzSpec
    sector: SpinSector
    h_ext: ExtendedHamiltonian | None
    n_anc: int


def _prepare(config: VqdConfig, hamiltonian: PauliSum) -> _Workspace:
    n_spatial = hamiltonian.n_qubits // 2
    kind = "SP" if config.method == "VQD/SP" else "SSP"
    spec = AnsatzSpec(kind, n_spatial, config.layers)
    if config.method == "sfVQD/SSP":
        n_anc = required_ancillas(n_spatial, config.sector.n_elec)
        h_ext = build_extended_hamiltonian(
            hamiltonian, config.sector, n_anc, config.c_penalty
        )
    else:
        n_anc = 0
        h_ext = None
    return _Workspace(hamiltonian, spec, config.sector, h_ext, n_anc)


def _make_cost(ws: _Workspace, config: VqdConfig, stack, counters, rng):
    if config.method != "sfVQD/SSP":
        return lambda vec: cost_plain(
            vec, ws.hamiltonian, ws.ansatz_spec, ws.sector, stack, counters
        )
    if config.mode == "statevector":
        return lambda vec: cost_statevector(
            vec,
            ws.h_ext,
            ws.ansatz_spec,
            ws.sector,
            stack,
            counters,
            overlap_on=config.overlap_on,
        )
    return lambda vec: cost_shot(
        vec,
        ws.hamiltonian,
        ws.ansatz_spec,
        ws.sector,
        stack,
        config.n_shot,
        rng,
        counters,
    )


def optimize_state(
    state_index: int,
    config: VqdConfig,
    hamiltonian: PauliSum,
    stack: DeflationStack,
) -> StateResult:
    """Run `restarts` independent optimizations and keep the lowest cost."""
    ws = _prepare(config, hamiltonian)
    counters = CostCounters()
    seeds = np.random.SeedSequence(
        entropy=config.seed, spawn_key=(state_index,)
    ).spawn(config.restarts)
    best: OptResult | None = None
    best_restart = -1
    restart_costs = []
    for r in range(config.restarts):
        rng = np.random.default_rng(seeds[r])
        cost_fn = _make_cost(ws, config, stack, counters, rng)
        x0 = ws.ansatz_spec.init_params(rng).vector
        res = minimize_cost(cost_fn, x0, config.optimizer, rng=rng)
        restart_costs.append(res.fun)
        if best is None or res.fun < best.fun:
            best = res
            best_restart = r
    psi = reference_state(ws.ansatz_spec.n_spatial, ws.sector)
    ws.ansatz_spec.build_from_vector(best.x).apply(psi)
    return StateResult(
        state_index=state_index,
        energy=expectation(psi, ws.hamiltonian),
        cost=best.fun,
        params=best.x,
        state=psi,
        s_squared=s_squared_diagnostic(psi),
        overlap_checks=counters.overlap_checks,
        restart_costs=restart_costs,
        restart_index=best_restart,
        n_evals=counters.cost_evals,
        converged=best.converged,
    )


def run_deflation(config: VqdConfig, hamiltonian: PauliSum) -> VqdResult:
    """States converged in order 0..n_states-1, each appended to the stack.

    The overlap penalty weight is |E_0| of this run's converged ground state.
    """
    stack = DeflationStack()
    results = []
    weight = None
    for k in range(config.n_states):
        entry = optimize_state(k, config, hamiltonian, stack)
        results.append(entry)
        if weight is None:
            weight = abs(entry.energy)
        stack.add(entry.state, weight)
    energies = [r.energy for r in results]
    monotonic = all(
        energies[i + 1] >= energies[i] - 1e-6 for i in range(len(energies) - 1)
    )
    return VqdResult(
        config=config,
        states=results,
        monotonic=monotonic,
        max_stack_overlap=stack.max_cross_overlap(),
    )
