"""Brute-force oracles used only by the test suite.

These are deliberately independent of the package implementation: Smith
divisors are recovered from gcds of k-by-k minors (determinantal divisors)
with exact Bareiss determinants.
"""

from __future__ import annotations

from itertools import combinations
from math import gcd


def bareiss_det(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinantal_divisors(dense: list[list[int]]) -> list[int]:
    """d_k = gcd of all k-by-k minors, for k = 1..rank (stops at rank)."""
    m = len(dense)
    n = len(dense[0]) if m else 0
    out: list[int] = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rsel in combinations(range(m), k):
            for csel in combinations(range(n), k):
                minor = bareiss_det([[dense[r][c] for c in csel] for r in rsel])
                g = gcd(g, minor)
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out


def snf_divisors_oracle(dense: list[list[int]]) -> list[int]:
    dd = determinantal_divisors(dense)
    out = []
    prev = 1
    for d in dd:
        out.append(d // prev)
        prev = d
    return out


def abelian_invariants_oracle(rel_rows: list[list[int]], n_gens: int) -> tuple[int, list[int]]:
    """(free rank, torsion) of Z^n_gens modulo the row span of rel_rows.

    Used as an independent presentation-based homology oracle.
    """
    if not rel_rows:
        return n_gens, []
    dense = [row[:] for row in rel_rows]
    divs = snf_divisors_oracle(dense)
    betti = n_gens - len(divs)
    torsion = [d for d in divs if d > 1]
    return betti, torsion
