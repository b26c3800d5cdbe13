"""Spin-filtering variational quantum deflation (sfVQD) on a dense statevector simulator.

Subpackage map:
    statevector  dense amplitudes, gates, measurement
    pauli        Pauli-string sums, expectations, dense materialization
    spinops      Jordan-Wigner spin observables, Wigner-d pass probabilities
    ansatz       particle- and S_z-conserving brickwork circuits
    screen       ancilla-assisted S_x phase-estimation spin filter
    oracle       exact diagonalization and spin-sector labeling
    vqd          deflation driver and cost functions
    hamio        Hamiltonian fixture JSON I/O and physics validation
    cli          batch front-end (run / reference / probe / validate)
"""

__version__ = "0.1.0"
