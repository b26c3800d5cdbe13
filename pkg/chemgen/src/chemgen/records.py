"""Geometry construction and fixture-record emission.

The emitted JSON matches the consuming simulator's fixture schema exactly
(schema_version 1, words qubit-0-first, terms sorted by word).  Metadata
records the orbital selection for auditability.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .active_space import reduce_to_active_space, select_active_orbitals
from .basis import ANGSTROM_TO_BOHR, build_basis
from .casci import casci_energies
from .integrals import integral_tables
from .jw import jordan_wigner_hamiltonian
from .scf import run_rhf

SCHEMA_VERSION = 1

MOLECULES = {
    # name -> (R0 angstrom, dR angstrom, n_frozen_core, n_active, n_electrons)
    "LiH": {"r0": 1.360, "dr": 1.000, "n_frozen": 1, "n_active": 3, "n_elec": 4},
    "BeH2": {"r0": 1.334, "dr": 0.700, "n_frozen": 1, "n_active": 4, "n_elec": 6},
}

MODE_RANGES = {
    ("LiH", "bond"): (-1.0, 1.0),
    ("BeH2", "sym-stretch"): (-1.0, 1.0),
    ("BeH2", "antisym-stretch"): (0.0, 1.0),
}


def geometry(molecule: str, mode: str, lam: float):
    """Atom list (element, position Bohr) for R(lambda) = R0 + lambda dR."""
    spec = MOLECULES[molecule]
    r0, dr = spec["r0"], spec["dr"]
    if molecule == "LiH":
        if mode != "bond":
            raise ValueError(f"LiH supports only the bond mode, got {mode!r}")
        r = (r0 + lam * dr) * ANGSTROM_TO_BOHR
        return [("Li", np.zeros(3)), ("H", np.array([0.0, 0.0, r]))]
    if molecule == "BeH2":
        r0_b = r0 * ANGSTROM_TO_BOHR
        d_b = dr * ANGSTROM_TO_BOHR * lam
        if mode == "sym-stretch":
            # hydrogens move apart symmetrically
            z = r0_b + d_b
            positions = [-z, z]
        elif mode == "antisym-stretch":
            # both hydrogens shift the same way: one bond shortens
            positions = [-r0_b + d_b, r0_b + d_b]
        else:
            raise ValueError(f"unknown BeH2 mode {mode!r}")
        return [
            ("Be", np.zeros(3)),
            ("H", np.array([0.0, 0.0, positions[0]])),
            ("H", np.array([0.0, 0.0, positions[1]])),
        ]
    raise ValueError(f"unknown molecule {molecule!r}")


@dataclass
class GenerationResult:
    document: dict
    scf_energy: float
    casci_ground: float


def generate_point(molecule: str, mode: str, lam: float, n_casci: int = 6) -> GenerationResult:
    """Full pipeline for one geometry point."""
    spec = MOLECULES[molecule]
    atoms = geometry(molecule, mode, lam)
    basis = build_basis(atoms)
    s_mat, t_mat, v_mat, eri, e_nuc = integral_tables(basis, atoms)
    scf = run_rhf(s_mat, t_mat, v_mat, eri, e_nuc, spec["n_elec"])
    frozen, active_idx = select_active_orbitals(
        basis, scf.mo_coeffs, scf.mo_energies, s_mat,
        spec["n_frozen"], spec["n_active"],
    )
    active = reduce_to_active_space(
        t_mat + v_mat, eri, e_nuc, scf.mo_coeffs,
        frozen, active_idx, scf.mo_energies, spec["n_elec"],
    )
    words = jordan_wigner_hamiltonian(active)
    n_ab = active.n_active_electrons // 2
    casci = casci_energies(active, n_ab, n_ab, n_casci)
    document = {
        "schema_version": SCHEMA_VERSION,
        "molecule": molecule,
        "basis": "STO-3G",
        "geometry": {
            "mode": mode,
            "lambda": lam,
            "r0_angstrom": spec["r0"],
            "dr_angstrom": spec["dr"],
        },
        "n_spatial": active.n_active,
        "n_alpha": n_ab,
        "n_beta": n_ab,
        "core_energy": active.core_energy,
        "terms": [[w, c] for w, c in sorted(words.items())],
        "metadata": {
            "generator": "chemgen",
            "scf_energy": scf.energy,
            "active_mo_indices": active.active_indices,
            "frozen_mo_indices": active.frozen_indices,
            "active_orbital_energies": active.orbital_energies,
            "casci_energies": [float(e) for e in casci],
        },
    }
    return GenerationResult(
        document=document,
        scf_energy=scf.energy,
        casci_ground=float(casci[0]),
    )


def fixture_filename(molecule: str, mode: str, lam: float) -> str:
    return f"{molecule.lower()}_{mode}_lam{lam:+.2f}.json"


def write_point(result: GenerationResult, out_dir) -> Path:
    doc = result.document
    path = Path(out_dir) / fixture_filename(
        doc["molecule"], doc["geometry"]["mode"], doc["geometry"]["lambda"]
    )
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path
