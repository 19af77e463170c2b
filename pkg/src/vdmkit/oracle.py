"""Eigenvalues and multiplicities of the connection Laplacian on 1-forms over round spheres.

These are the golden multiplicity patterns that the discrete spectrum of
D_1^{-1} S_1 on uniform sphere samples should reproduce. Eigenspaces come
from irreducible representations of SO(d+1) with highest weights k L_1 and
k L_1 + L_2 (and k L_1 - L_2 on S^3); multiplicities are Weyl dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DataError

# Leading merged multiplicities, d = 2..6.
KNOWN_MULTIPLICITIES = {
    2: [6, 10, 14],
    3: [4, 6, 9, 16, 16],
    4: [5, 10, 14],
    5: [6, 15, 20],
    6: [7, 21, 27],
}


@dataclass(frozen=True)
class SphereSpectrumTable:
    d: int
    entries: list  # (eigenvalue, multiplicity, weight label), sorted by eigenvalue

    def merged(self) -> list:
        """(eigenvalue, total multiplicity) with equal eigenvalues combined."""
        out = []
        for lam, mult, _ in self.entries:
            if out and out[-1][0] == lam:
                out[-1] = (lam, out[-1][1] + mult)
            else:
                out.append((lam, mult))
        return out

    @property
    def multiplicities(self) -> list:
        return [m for _, m in self.merged()]


def weyl_dimension(N: int, weight) -> int:
    """Dimension of the irreducible SO(N) representation with the given highest weight.

    ``weight`` lists the coefficients of L_1, ..., L_r (r = N // 2), padded
    with zeros if short.
    """
    r = N // 2
    lam = [Fraction(x) for x in weight] + [Fraction(0)] * (r - len(weight))
    if N % 2:
        rho = [Fraction(2 * (r - i) + 1, 2) for i in range(1, r + 1)]
    else:
        rho = [Fraction(r - i) for i in range(1, r + 1)]
    ell = [a + b for a, b in zip(lam, rho)]
    dim = Fraction(1)
    for a, b in combinations(range(r), 2):
        dim *= (ell[a] ** 2 - ell[b] ** 2) / (rho[a] ** 2 - rho[b] ** 2)
    if N % 2:
        for a in range(r):
            dim *= ell[a] / rho[a]
    if dim.denominator != 1:
        raise ArithmeticError(f"non-integer dimension {dim} for SO({N}) weight {weight}")
    return int(dim)


def s2_table(kmax: int) -> SphereSpectrumTable:
    """S^2: eigenvalue k(k+1) with multiplicity 2(2k+1), k = 1..kmax."""
    if kmax < 1:
        raise DataError("kmax must be at least 1")
    return SphereSpectrumTable(2, [(k * (k + 1), 2 * (2 * k + 1), f"{k}L1")
                                   for k in range(1, kmax + 1)])


def s3_table(kmax: int) -> SphereSpectrumTable:
    """S^3: k L1 gives k(k+2) with multiplicity (k+1)^2; k L1 +- L2 give (k+1)^2 with k(k+2) each."""
    if kmax < 1:
        raise DataError("kmax must be at least 1")
    entries = []
    for k in range(1, kmax + 1):
        entries.append((k * (k + 2), (k + 1) ** 2, f"{k}L1"))
        entries.append(((k + 1) ** 2, k * (k + 2), f"{k}L1+L2"))
        entries.append(((k + 1) ** 2, k * (k + 2), f"{k}L1-L2"))
    entries.sort(key=lambda e: (e[0], e[2]))
    return SphereSpectrumTable(3, entries)


def sphere_table(d: int, kmax: int) -> SphereSpectrumTable:
    """Eigenvalue table for S^d, d >= 2, with multiplicities from the Weyl dimension formula."""
    if d == 2:
        return s2_table(kmax)
    if d == 3:
        return s3_table(kmax)
    if d < 2:
        raise DataError("sphere dimension must be at least 2")
    if kmax < 1:
        raise DataError("kmax must be at least 1")
    N = d + 1
    entries = []
    for k in range(1, kmax + 1):
        # Casimir values for k L1 and k L1 + L2 on SO(d+1), shifted to the 1-form spectrum
        entries.append((k * (k + d - 1), weyl_dimension(N, [k]), f"{k}L1"))
        entries.append(((k + 1) * (k + d - 2), weyl_dimension(N, [k, 1]), f"{k}L1+L2"))
    entries.sort(key=lambda e: (e[0], e[2]))
    return SphereSpectrumTable(d, entries)


def predicted_multiplicities(d: int, count: int) -> list:
    """Leading ``count`` multiplicities of the 1-form spectrum on S^d, 2 <= d <= 6."""
    if not 2 <= d <= 6:
        raise DataError(f"sphere dimension {d} outside the supported range 2..6")
    if count < 0:
        raise DataError("count must be nonnegative")
    known = KNOWN_MULTIPLICITIES[d]
    if count <= len(known):
        return list(known[:count])
    kmax = count + 1
    merged = sphere_table(d, kmax).multiplicities
    # entries beyond the families' common range could be incomplete; kmax >= count + 1 covers them
    return merged[:count]
