"""Minimal quantum-chemistry backend for generating qubit Hamiltonian fixtures.

STO-3G integrals (McMurchie-Davidson), restricted Hartree-Fock with DIIS,
frozen-core active-space reduction, Jordan-Wigner mapping with interleaved
spin orbitals, and determinant-CI reference energies.
"""

__version__ = "0.1.0"
