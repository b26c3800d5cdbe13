"""STO-3G basis data and contracted-shell expansion.

Exponents and contraction coefficients are the standard STO-3G tabulations
(universal 1s/2sp expansions scaled by the usual per-element zeta values).
Coefficients assume normalized primitives; contracted functions are
renormalized numerically on construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

# per element: list of shells, each (angular momentum, exponents, coefficients)
STO3G = {
    "H": [
        (0, [3.42525091, 0.62391373, 0.16885540],
            [0.15432897, 0.53532814, 0.44463454]),
    ],
    "Li": [
        (0, [16.1195750, 2.9362007, 0.7946505],
            [0.15432897, 0.53532814, 0.44463454]),
        (0, [0.6362897, 0.1478601, 0.0480887],
            [-0.09996723, 0.39951283, 0.70011547]),
        (1, [0.6362897, 0.1478601, 0.0480887],
            [0.15591627, 0.60768372, 0.39195739]),
    ],
    "Be": [
        (0, [30.1678710, 5.4951153, 1.4871927],
            [0.15432897, 0.53532814, 0.44463454]),
        (0, [1.3148331, 0.3055389, 0.0993707],
            [-0.09996723, 0.39951283, 0.70011547]),
        (1, [1.3148331, 0.3055389, 0.0993707],
            [0.15591627, 0.60768372, 0.39195739]),
    ],
}

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "Be": 4}


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(alpha: float, lmn) -> float:
    """Normalization of x^l y^m z^n exp(-alpha r^2)."""
    l, m, n = lmn
    total = l + m + n
    num = (2 * alpha / np.pi) ** 0.75 * (4 * alpha) ** (total / 2)
    den = np.sqrt(
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return num / den


@dataclass
class BasisFunction:
    """One contracted Cartesian Gaussian."""

    center: np.ndarray  # Bohr
    lmn: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive norms and contraction norm
    label: str  # e.g. "Li 2px"

    @property
    def is_pi_perpendicular(self) -> bool:
        """p function perpendicular to the z molecular axis."""
        return self.lmn in ((1, 0, 0), (0, 1, 0))


_SHELL_LMNS = {0: [(0, 0, 0)], 1: [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}
_SHELL_TAGS = {0: ["s"], 1: ["px", "py", "pz"]}


def build_basis(atoms: list[tuple[str, np.ndarray]]) -> list[BasisFunction]:
    """Expand the STO-3G shells of each atom into basis functions.

    `atoms` carries (element, position in Bohr).
    """
    from .integrals import overlap_primitive

    functions = []
    for elem, pos in atoms:
        pos = np.asarray(pos, dtype=float)
        for shell_index, (l, exps, coeffs) in enumerate(STO3G[elem]):
            for lmn, tag in zip(_SHELL_LMNS[l], _SHELL_TAGS[l]):
                exps_arr = np.asarray(exps, dtype=float)
                raw = np.asarray(coeffs, dtype=float) * np.array(
                    [primitive_norm(a, lmn) for a in exps]
                )
                # contracted self-overlap normalization
                self_overlap = 0.0
                for ca, aa in zip(raw, exps_arr):
                    for cb, ab in zip(raw, exps_arr):
                        self_overlap += ca * cb * overlap_primitive(
                            aa, lmn, pos, ab, lmn, pos
                        )
                functions.append(
                    BasisFunction(
                        center=pos,
                        lmn=lmn,
                        exponents=exps_arr,
                        coefficients=raw / np.sqrt(self_overlap),
                        label=f"{elem} {shell_index + 1}{tag}",
                    )
                )
    return functions
