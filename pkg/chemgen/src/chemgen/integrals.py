"""McMurchie-Davidson one- and two-electron integrals over Cartesian Gaussians.

Small-basis implementation: plain Python loops over primitives are fine for
a handful of s/p shells.  All distances in Bohr, energies in Hartree.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gammainc, gammaln


def boys(n: int, x: float) -> float:
    """Boys function F_n(x)."""
    if x < 1e-12:
        return 1.0 / (2 * n + 1)
    a = n + 0.5
    # F_n = Gamma(a) P(a, x) / (2 x^a) with P the regularized lower gamma
    return float(
        np.exp(gammaln(a)) * gammainc(a, x) / (2.0 * x**a)
    )


def hermite_coefficients(i: int, j: int, a: float, b: float, qx: float) -> np.ndarray:
    """E_t^{ij} expansion of a 1D Gaussian product onto Hermite Gaussians."""
    p = a + b
    mu = a * b / p
    table = np.zeros((i + 1, j + 1, i + j + 2))
    table[0, 0, 0] = np.exp(-mu * qx * qx)
    xpa = -b * qx / p  # P - A with qx = A - B
    xpb = a * qx / p
    for ii in range(1, i + 1):
        for t in range(ii + 1):
            val = xpa * table[ii - 1, 0, t]
            if t > 0:
                val += table[ii - 1, 0, t - 1] / (2 * p)
            if t + 1 <= ii - 1:
                val += (t + 1) * table[ii - 1, 0, t + 1]
            table[ii, 0, t] = val
    for ii in range(i + 1):
        for jj in range(1, j + 1):
            for t in range(ii + jj + 1):
                val = xpb * table[ii, jj - 1, t]
                if t > 0:
                    val += table[ii, jj - 1, t - 1] / (2 * p)
                if t + 1 <= ii + jj - 1:
                    val += (t + 1) * table[ii, jj - 1, t + 1]
                table[ii, jj, t] = val
    return table[i, j]


def overlap_primitive(a, lmn1, ra, b, lmn2, rb) -> float:
    p = a + b
    value = (np.pi / p) ** 1.5
    for axis in range(3):
        e = hermite_coefficients(
            lmn1[axis], lmn2[axis], a, b, ra[axis] - rb[axis]
        )
        value *= e[0]
    return value


def kinetic_primitive(a, lmn1, ra, b, lmn2, rb) -> float:
    """-1/2 <a|del^2|b> via overlap ladder relations along each axis."""

    def s1d(i, j, axis):
        if i < 0 or j < 0:
            return 0.0
        return hermite_coefficients(i, j, a, b, ra[axis] - rb[axis])[0]

    def k1d(i, j, axis):
        term = b * (2 * j + 1) * s1d(i, j, axis)
        term -= 2 * b * b * s1d(i, j + 2, axis)
        if j >= 2:
            term -= 0.5 * j * (j - 1) * s1d(i, j - 2, axis)
        return term

    p = a + b
    pref = (np.pi / p) ** 1.5
    out = 0.0
    for axis in range(3):
        parts = []
        for other in range(3):
            i, j = lmn1[other], lmn2[other]
            parts.append(
                k1d(i, j, other) if other == axis else s1d(i, j, other)
            )
        out += parts[0] * parts[1] * parts[2]
    return pref * out


def _hermite_coulomb(t, u, v, n, p, pcx, pcy, pcz, r2):
    """R^n_{tuv} recursion for the Hermite Coulomb integrals."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * r2)
    if t > 0:
        val = pcx * _hermite_coulomb(t - 1, u, v, n + 1, p, pcx, pcy, pcz, r2)
        if t > 1:
            val += (t - 1) * _hermite_coulomb(t - 2, u, v, n + 1, p, pcx, pcy, pcz, r2)
        return val
    if u > 0:
        val = pcy * _hermite_coulomb(t, u - 1, v, n + 1, p, pcx, pcy, pcz, r2)
        if u > 1:
            val += (u - 1) * _hermite_coulomb(t, u - 2, v, n + 1, p, pcx, pcy, pcz, r2)
        return val
    val = pcz * _hermite_coulomb(t, u, v - 1, n + 1, p, pcx, pcy, pcz, r2)
    if v > 1:
        val += (v - 1) * _hermite_coulomb(t, u, v - 2, n + 1, p, pcx, pcy, pcz, r2)
    return val


def nuclear_primitive(a, lmn1, ra, b, lmn2, rb, rc) -> float:
    """<a| -1/|r - C| |b> without the nuclear charge factor."""
    p = a + b
    rp = (a * ra + b * rb) / p
    pc = rp - rc
    ex = hermite_coefficients(lmn1[0], lmn2[0], a, b, ra[0] - rb[0])
    ey = hermite_coefficients(lmn1[1], lmn2[1], a, b, ra[1] - rb[1])
    ez = hermite_coefficients(lmn1[2], lmn2[2], a, b, ra[2] - rb[2])
    r2 = float(pc @ pc)
    total = 0.0
    for t in range(len(ex)):
        for u in range(len(ey)):
            for v in range(len(ez)):
                coeff = ex[t] * ey[u] * ez[v]
                if coeff == 0.0:
                    continue
                total += coeff * _hermite_coulomb(
                    t, u, v, 0, p, pc[0], pc[1], pc[2], r2
                )
    return -2.0 * np.pi / p * total


def eri_primitive(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd) -> float:
    """(ab|cd) in chemist notation over primitives."""
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pq = rp - rq
    e1 = [
        hermite_coefficients(lmn1[ax], lmn2[ax], a, b, ra[ax] - rb[ax])
        for ax in range(3)
    ]
    e2 = [
        hermite_coefficients(lmn3[ax], lmn4[ax], c, d, rc[ax] - rd[ax])
        for ax in range(3)
    ]
    r2 = float(pq @ pq)
    total = 0.0
    for t in range(len(e1[0])):
        for u in range(len(e1[1])):
            for v in range(len(e1[2])):
                c1 = e1[0][t] * e1[1][u] * e1[2][v]
                if c1 == 0.0:
                    continue
                for tt in range(len(e2[0])):
                    for uu in range(len(e2[1])):
                        for vv in range(len(e2[2])):
                            c2 = e2[0][tt] * e2[1][uu] * e2[2][vv]
                            if c2 == 0.0:
                                continue
                            sign = (-1.0) ** (tt + uu + vv)
                            total += c1 * c2 * sign * _hermite_coulomb(
                                t + tt, u + uu, v + vv, 0,
                                alpha, pq[0], pq[1], pq[2], r2,
                            )
    return (
        2 * np.pi**2.5 / (p * q * np.sqrt(p + q)) * total
    )


def _contract2(func, fa, fb):
    total = 0.0
    for ca, aa in zip(fa.coefficients, fa.exponents):
        for cb, ab in zip(fb.coefficients, fb.exponents):
            total += ca * cb * func(aa, ab)
    return total


def integral_tables(basis, atoms):
    """(S, T, V, ERI, E_nuc) over the contracted basis.

    `atoms` carries (element, position Bohr); V includes all nuclear charges.
    """
    from .basis import NUCLEAR_CHARGE

    n = len(basis)
    s_mat = np.zeros((n, n))
    t_mat = np.zeros((n, n))
    v_mat = np.zeros((n, n))
    for i, fa in enumerate(basis):
        for j, fb in enumerate(basis):
            if j < i:
                continue
            s_mat[i, j] = _contract2(
                lambda aa, ab: overlap_primitive(
                    aa, fa.lmn, fa.center, ab, fb.lmn, fb.center
                ),
                fa, fb,
            )
            t_mat[i, j] = _contract2(
                lambda aa, ab: kinetic_primitive(
                    aa, fa.lmn, fa.center, ab, fb.lmn, fb.center
                ),
                fa, fb,
            )
            v_val = 0.0
            for elem, pos in atoms:
                v_val += NUCLEAR_CHARGE[elem] * _contract2(
                    lambda aa, ab, rc=np.asarray(pos, dtype=float): nuclear_primitive(
                        aa, fa.lmn, fa.center, ab, fb.lmn, fb.center, rc
                    ),
                    fa, fb,
                )
            v_mat[i, j] = v_val
            s_mat[j, i] = s_mat[i, j]
            t_mat[j, i] = t_mat[i, j]
            v_mat[j, i] = v_mat[i, j]

    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    fa, fb, fc, fd = basis[i], basis[j], basis[k], basis[l]
                    val = 0.0
                    for ca, aa in zip(fa.coefficients, fa.exponents):
                        for cb, ab in zip(fb.coefficients, fb.exponents):
                            for cc, ac in zip(fc.coefficients, fc.exponents):
                                for cd, ad in zip(fd.coefficients, fd.exponents):
                                    val += ca * cb * cc * cd * eri_primitive(
                                        aa, fa.lmn, fa.center,
                                        ab, fb.lmn, fb.center,
                                        ac, fc.lmn, fc.center,
                                        ad, fd.lmn, fd.center,
                                    )
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val

    e_nuc = 0.0
    for x in range(len(atoms)):
        for y in range(x + 1, len(atoms)):
            za = NUCLEAR_CHARGE[atoms[x][0]]
            zb = NUCLEAR_CHARGE[atoms[y][0]]
            dist = np.linalg.norm(
                np.asarray(atoms[x][1], dtype=float)
                - np.asarray(atoms[y][1], dtype=float)
            )
            e_nuc += za * zb / dist
    return s_mat, t_mat, v_mat, eri, e_nuc
