"""End-to-end generation checks and the consuming-simulator interface.

The simulator is exercised only through its public surfaces: the fixture
JSON schema and the `sfvqd` command line.
"""
import json
import shutil
import subprocess

import numpy as np
import pytest

from chemgen.casci import determinants
from chemgen.jw import dense_matrix
from chemgen.records import generate_point, write_point


@pytest.fixture(scope="module")
def lih_point():
    return generate_point("LiH", "bond", 0.0)


@pytest.fixture(scope="module")
def beh2_points():
    return (
        generate_point("BeH2", "sym-stretch", 0.0),
        generate_point("BeH2", "antisym-stretch", 0.0),
    )


class TestDocuments:
    def test_lih_shape(self, lih_point):
        doc = lih_point.document
        assert doc["n_spatial"] == 3
        assert doc["n_alpha"] == doc["n_beta"] == 1
        assert doc["basis"] == "STO-3G"
        assert all(len(w) == 6 for w, _ in doc["terms"])
        words = [w for w, _ in doc["terms"]]
        assert words == sorted(words)

    def test_beh2_shape(self, beh2_points):
        doc = beh2_points[0].document
        assert doc["n_spatial"] == 4
        assert doc["n_alpha"] == doc["n_beta"] == 2

    def test_lambda_zero_modes_coincide(self, beh2_points):
        # same geometry, so everything except the mode tag must match
        sym, antisym = (p.document for p in beh2_points)
        assert sym["terms"] == antisym["terms"]
        assert sym["core_energy"] == antisym["core_energy"]
        assert sym["metadata"]["casci_energies"] == antisym["metadata"]["casci_energies"]
        assert sym["geometry"]["mode"] != antisym["geometry"]["mode"]

    def test_scf_below_zero_and_above_casci(self, lih_point):
        assert lih_point.scf_energy < 0
        assert lih_point.casci_ground < lih_point.scf_energy  # correlation lowers E


class TestCasciAgainstQubitSpectrum:
    def test_lih_sector_block_matches(self, lih_point):
        # the qubit Hamiltonian restricted to (1,1)-occupation basis states
        # must reproduce the determinant-CI energies exactly
        doc = lih_point.document
        words = dict((w, c) for w, c in doc["terms"])
        dense = dense_matrix(words)
        n = 2 * doc["n_spatial"]
        dets = determinants(doc["n_spatial"], 1, 1)
        idx = [sum(1 << (n - 1 - m) for m in det) for det in dets]
        block = dense[np.ix_(idx, idx)]
        evals = np.linalg.eigvalsh(block).real
        casci = doc["metadata"]["casci_energies"]
        assert abs(evals[0] - casci[0]) < 1e-8
        for a, b in zip(sorted(evals)[: len(casci)], casci):
            assert abs(a - b) < 1e-8

    def test_ground_eigenvalue_matches_casci(self, lih_point):
        doc = lih_point.document
        words = dict((w, c) for w, c in doc["terms"])
        dense = dense_matrix(words)
        # global ground of the LiH active Hamiltonian sits in the (1,1) block
        ground = np.linalg.eigvalsh(dense)[0].real
        assert abs(ground - lih_point.casci_ground) < 1e-8


def _sfvqd():
    exe = shutil.which("sfvqd")
    if exe is None:
        pytest.skip("consuming simulator CLI not installed")
    return exe


class TestSimulatorInterface:
    def test_generated_files_validate(self, tmp_path, lih_point, beh2_points):
        exe = _sfvqd()
        paths = [str(write_point(p, tmp_path)) for p in (lih_point, *beh2_points)]
        out = subprocess.run(
            [exe, "validate", *paths], capture_output=True, text=True
        )
        assert out.returncode == 0, out.stdout + out.stderr
        assert out.stdout.count("OK") == 3

    def test_reference_energy_agrees_across_backends(self, tmp_path, lih_point):
        # determinant-CI (this package) vs dense diagonalization (simulator),
        # joined through the fixture file and the reference CSV
        exe = _sfvqd()
        path = write_point(lih_point, tmp_path)
        out = subprocess.run(
            [exe, "reference", str(path), "--states", "1",
             "--out", str(tmp_path)],
            capture_output=True, text=True,
        )
        assert out.returncode == 0, out.stdout + out.stderr
        import csv

        with open(tmp_path / "reference.csv") as fh:
            rows = [
                r for r in csv.DictReader(fh)
                if r["n_alpha"] == "1" and r["state"] == "0"
            ]
        assert len(rows) == 1
        assert abs(float(rows[0]["energy"]) - lih_point.casci_ground) < 1e-8

    def test_probe_passes_on_generated_singlet(self, tmp_path, lih_point):
        exe = _sfvqd()
        path = write_point(lih_point, tmp_path)
        out = subprocess.run(
            [exe, "probe", str(path), "--spin", "0", "--mz", "0"],
            capture_output=True, text=True,
        )
        assert out.returncode == 0, out.stdout + out.stderr

    def test_occupation_convention_round_trip(self, tmp_path, lih_point):
        # declared sector matches the interleaved reference occupation that
        # the simulator uses ("110000" for one alpha and one beta electron)
        doc = lih_point.document
        words = dict((w, c) for w, c in doc["terms"])
        dense = dense_matrix(words)
        n = 2 * doc["n_spatial"]
        ref_idx = int("110000", 2)
        e_ref = dense[ref_idx, ref_idx].real
        # the mean-field determinant's diagonal element equals the SCF energy
        assert abs(e_ref - doc["metadata"]["scf_energy"]) < 1e-8
