"""Group actions on free Z-modules: coinvariants and bar homology.

Coinvariants M_G = M / span{(g-1)m} only need the relation columns of a
generating set: (s1*s2 - 1)m = (s1 - 1)((s2 - 1)m) + (s1 - 1)m + (s2 - 1)m,
so relations of products already lie in the span of generator relations.
"""

from __future__ import annotations

from typing import Callable, Hashable, Sequence

from .building import StModel, chamber_permutation
from .complexes import ChainComplexZ, HomologyGroup, assemble_complex, homology
from .errors import BudgetExceeded
from .intmat import SparseIntMatrix
from .snf import ZZ, CoefficientRing, cokernel_invariants

DEFAULT_GROUP_BUDGET = 2_000_000


def st_action_matrix(st: StModel, g) -> SparseIntMatrix:
    """Matrix of g on the Steinberg lattice in the kernel basis.

    Solves K * M = P_g * K exactly; the kernel is saturated, so M is the
    unique integer solution. Verified by multiplication before returning.
    """
    perm = chamber_permutation(st, g)
    k = st.kernel
    pk_rows: list[dict[int, int]] = [dict() for _ in range(k.n_rows)]
    for i, row in enumerate(k.rows):
        pk_rows[perm[i]] = dict(row)
    pk = SparseIntMatrix(k.n_rows, k.n_cols, pk_rows)
    cols = []
    for j in range(pk.n_cols):
        x = st.solver.solve(pk.column(j))
        if x is None:
            raise AssertionError("permuted kernel column left the lattice")
        cols.append(x)
    m = SparseIntMatrix.from_columns(k.n_cols, cols)
    if k.mul(m) != pk:
        raise AssertionError("action matrix failed verification")
    return m


def tensor_matrix(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    """Kronecker product acting on e_i (x) e_j at index i*cols(b)+j."""
    out = SparseIntMatrix(a.n_rows * b.n_rows, a.n_cols * b.n_cols)
    for ra, rowa in enumerate(a.rows):
        for rb, rowb in enumerate(b.rows):
            target = out.rows[ra * b.n_rows + rb]
            for ca, va in rowa.items():
                for cb, vb in rowb.items():
                    target[ca * b.n_cols + cb] = va * vb
    return out


def coinvariant_relations(rank: int, generator_matrices: Sequence[SparseIntMatrix]) -> SparseIntMatrix:
    """Columns (M_g - I)e_i over all generators g and basis vectors e_i."""
    cols: list[dict[int, int]] = []
    for m in generator_matrices:
        if m.shape != (rank, rank):
            raise ValueError("generator matrix has wrong shape")
        for i in range(rank):
            col = m.column(i)
            w = col.get(i, 0) - 1
            if w:
                col[i] = w
            elif i in col:
                del col[i]
            if col:
                cols.append(col)
    return SparseIntMatrix.from_columns(rank, cols)


def coinvariants(rank: int, generator_matrices: Sequence[SparseIntMatrix]) -> HomologyGroup:
    """Invariant factors of M_G for the module with the given generator action."""
    rel = coinvariant_relations(rank, generator_matrices)
    betti, torsion = cokernel_invariants(rel)
    return HomologyGroup(betti, torsion)


# -- bar-resolution group homology -------------------------------------------


def group_homology(
    elements: Sequence[Hashable],
    multiply: Callable[[Hashable, Hashable], Hashable],
    action: Callable[[Hashable], SparseIntMatrix],
    rank: int,
    degree: int,
    budget: int = DEFAULT_GROUP_BUDGET,
    ring: CoefficientRing = ZZ,
) -> HomologyGroup:
    """H_degree(G; M) for degree <= 2 via the inhomogeneous bar complex.

    C_k = Z[G^k] (x) M with
    d(g_1,..,g_k (x) m) = (g_2,..,g_k (x) m)
      + sum_i (-1)^i (g_1,..,g_i g_{i+1},..,g_k (x) m)
      + (-1)^k (g_1,..,g_{k-1} (x) g_k m).
    """
    if degree < 0 or degree > 2:
        raise ValueError("group homology implemented for degrees 0..2 only")
    n_g = len(elements)
    top = degree + 1
    total = sum(n_g**k * rank for k in range(top + 1))
    if total > budget:
        raise BudgetExceeded(f"bar complex size {total} exceeds budget {budget}")

    bases: dict[int, list] = {}
    for k in range(top + 1):
        words: list[tuple] = [()]
        for _ in range(k):
            words = [w + (g,) for w in words for g in elements]
        bases[k] = [(w, i) for w in words for i in range(rank)]

    act_cache: dict[Hashable, SparseIntMatrix] = {}

    def act(g: Hashable) -> SparseIntMatrix:
        m = act_cache.get(g)
        if m is None:
            m = action(g)
            act_cache[g] = m
        return m

    def rule(k: int, lab):
        word, i = lab
        if k == 0:
            return []
        out: list[tuple[int, tuple]] = [(1, (word[1:], i))]
        for j in range(1, k):
            merged = word[:j - 1] + (multiply(word[j - 1], word[j]),) + word[j + 1:]
            out.append(((-1) ** j, (merged, i)))
        sign = (-1) ** k
        gk = word[-1]
        for r, v in act(gk).column(i).items():
            out.append((sign * v, (word[:-1], r)))
        return out

    cx = assemble_complex(bases, rule)
    return homology(cx, degree, ring)


def trivial_action(rank: int) -> Callable[[Hashable], SparseIntMatrix]:
    ident = SparseIntMatrix.identity(rank)
    return lambda g: ident
