"""Hamiltonian fixture ingestion, validation, and persistence.

One JSON document per geometry point, schema-versioned.  Pauli words are
fixed-width strings over {I, X, Y, Z} read qubit-0-first; the constant
(nuclear repulsion plus frozen-core) offset is stored as an explicit
identity-word term so total energies match quantum-chemistry references
without side channels.  Terms are kept sorted by word so files are
bit-stable under round trips.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .pauli import PauliSum, to_dense
from .spinops import (
    SpinSector,
    build_number_operators,
    build_s_squared,
    build_spin_component,
)

SCHEMA_VERSION = 1

_REQUIRED_FIELDS = {
    "schema_version",
    "molecule",
    "basis",
    "geometry",
    "n_spatial",
    "n_alpha",
    "n_beta",
    "core_energy",
    "terms",
}
_GEOMETRY_FIELDS = {"mode", "lambda", "r0_angstrom", "dr_angstrom"}
_KNOWN_OPTIONAL = {"metadata"}
_MODES = {"bond", "sym-stretch", "antisym-stretch"}


@dataclass
class GeometrySpec:
    mode: str
    lam: float
    r0_angstrom: float
    dr_angstrom: float


@dataclass
class HamiltonianRecord:
    """A validated molecular Hamiltonian fixture."""

    molecule: str
    basis: str
    geometry: GeometrySpec
    n_spatial: int
    n_alpha: int
    n_beta: int
    core_energy: float
    terms: list[tuple[str, float]]  # (word, coefficient), sorted by word
    metadata: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)  # unknown fields kept in lenient mode

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def sector(self) -> SpinSector:
        s_target = abs(self.n_alpha - self.n_beta) / 2
        return SpinSector(self.n_alpha, self.n_beta, s_target)

    def to_pauli_sum(self) -> PauliSum:
        return PauliSum.from_words(
            self.n_qubits, [(coeff, word) for word, coeff in self.terms]
        )


def _fail(path: str, message: str):
    raise ParseError(f"{path}: {message}")


def _record_from_document(doc: dict, source: str, strict: bool) -> HamiltonianRecord:
    if not isinstance(doc, dict):
        _fail(source, "top level must be a JSON object")
    missing = _REQUIRED_FIELDS - doc.keys()
    if missing:
        _fail(source, f"missing required fields {sorted(missing)}")
    unknown = doc.keys() - _REQUIRED_FIELDS - _KNOWN_OPTIONAL
    if unknown and strict:
        _fail(source, f"unknown fields {sorted(unknown)} (strict mode)")
    if doc["schema_version"] != SCHEMA_VERSION:
        _fail(
            f"{source}.schema_version",
            f"unsupported version {doc['schema_version']!r}",
        )
    geom = doc["geometry"]
    if not isinstance(geom, dict) or set(geom) != _GEOMETRY_FIELDS:
        _fail(f"{source}.geometry", f"expected exactly fields {sorted(_GEOMETRY_FIELDS)}")
    if geom["mode"] not in _MODES:
        _fail(f"{source}.geometry.mode", f"unknown mode {geom['mode']!r}")
    n_spatial = doc["n_spatial"]
    if not isinstance(n_spatial, int) or n_spatial < 1:
        _fail(f"{source}.n_spatial", f"must be a positive integer, got {n_spatial!r}")
    n_qubits = 2 * n_spatial
    terms = []
    seen_words = set()
    for i, entry in enumerate(doc["terms"]):
        where = f"{source}.terms[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2):
            _fail(where, "each term must be a [word, coefficient] pair")
        word, coeff = entry
        if not isinstance(word, str) or any(ch not in "IXYZ" for ch in word):
            _fail(where, f"word must be a string over IXYZ, got {word!r}")
        if len(word) != n_qubits:
            raise ValidationError(
                f"{where}: word length {len(word)} != 2*n_spatial = {n_qubits}"
            )
        if not isinstance(coeff, (int, float)) or not np.isfinite(coeff):
            _fail(where, f"coefficient must be a finite real, got {coeff!r}")
        if word in seen_words:
            raise ValidationError(f"{where}: duplicate word {word}")
        seen_words.add(word)
        terms.append((word, float(coeff)))
    terms.sort()
    n_alpha, n_beta = doc["n_alpha"], doc["n_beta"]
    for name, val in (("n_alpha", n_alpha), ("n_beta", n_beta)):
        if not isinstance(val, int) or val < 0 or val > n_spatial:
            raise ValidationError(
                f"{source}.{name}: {val!r} infeasible for n_spatial={n_spatial}"
            )
    return HamiltonianRecord(
        molecule=str(doc["molecule"]),
        basis=str(doc["basis"]),
        geometry=GeometrySpec(
            mode=geom["mode"],
            lam=float(geom["lambda"]),
            r0_angstrom=float(geom["r0_angstrom"]),
            dr_angstrom=float(geom["dr_angstrom"]),
        ),
        n_spatial=n_spatial,
        n_alpha=n_alpha,
        n_beta=n_beta,
        core_energy=float(doc["core_energy"]),
        terms=terms,
        metadata=dict(doc.get("metadata", {})),
        extra={k: doc[k] for k in unknown} if not strict else {},
    )


def load(path, strict: bool = True) -> HamiltonianRecord:
    """Parse and validate one fixture file; no partial records on failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: unreadable ({exc})") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return _record_from_document(doc, str(path), strict)


def _document_from_record(record: HamiltonianRecord) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "molecule": record.molecule,
        "basis": record.basis,
        "geometry": {
            "mode": record.geometry.mode,
            "lambda": record.geometry.lam,
            "r0_angstrom": record.geometry.r0_angstrom,
            "dr_angstrom": record.geometry.dr_angstrom,
        },
        "n_spatial": record.n_spatial,
        "n_alpha": record.n_alpha,
        "n_beta": record.n_beta,
        "core_energy": record.core_energy,
        "terms": [[word, coeff] for word, coeff in sorted(record.terms)],
    }
    if record.metadata:
        doc["metadata"] = record.metadata
    doc.update(sorted(record.extra.items()))
    return doc


def save(record: HamiltonianRecord, path) -> None:
    """Write a record; load(save(r)) reproduces it term for term."""
    path = Path(path)
    doc = _document_from_record(record)
    try:
        path.write_text(json.dumps(doc, indent=1) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def fixture_filename(molecule: str, mode: str, lam: float) -> str:
    """Bijective (molecule, mode, lambda) -> file name for scan outputs."""
    return f"{molecule.lower()}_{mode}_lam{lam:+.2f}.json"


@dataclass
class PhysicsReport:
    """Outcome of the spin-free sanity checks; report-only, never raises."""

    violations: list[str]
    suspicious: list[str]

    @property
    def clean(self) -> bool:
        return not self.violations


def validate_physics(record: HamiltonianRecord, atol: float = 1e-8) -> PhysicsReport:
    """Dense checks: Hermiticity and commutation with S_z, S^2, S_x, N.

    A spin-free, particle-conserving Hamiltonian commutes with all of them;
    the x-component check is what licenses inserting exp(i theta S_x) into
    the measurement loop.
    """
    violations = []
    suspicious = []
    if not record.terms:
        suspicious.append("empty term list (vacuously clean)")
        return PhysicsReport(violations, suspicious)
    op = record.to_pauli_sum()
    dense = to_dense(op)
    herm = np.max(np.abs(dense - dense.conj().T))
    if herm > atol:
        violations.append(f"not Hermitian: residual {herm:.3e}")
    n_spatial = record.n_spatial
    na, nb = build_number_operators(n_spatial)
    checks = {
        "S_z": build_spin_component("z", n_spatial),
        "S_x": build_spin_component("x", n_spatial),
        "S^2": build_s_squared(n_spatial),
        "N": na + nb,
    }
    for name, other in checks.items():
        other_d = to_dense(other)
        comm = np.max(np.abs(dense @ other_d - other_d @ dense))
        if comm > atol:
            violations.append(f"[H, {name}] residual {comm:.3e}")
    return PhysicsReport(violations, suspicious)
