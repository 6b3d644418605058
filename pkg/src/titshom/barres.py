"""Bar-style resolutions of Steinberg lattices over F_q.

Degree i >= 0 carries one summand St(V_1) (x) ... (x) St(V_{i+2}) per ordered
direct-sum decomposition of F_q^n; degree -1 carries St(F_q^n) itself. Each
St(V) uses its unipotent apartment basis, and the differential merges
adjacent tensor slots by concatenating apartment line tuples, expanding the
resulting apartment class in the basis of the merged subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .actions import coinvariant_relations, st_action_matrix, tensor_matrix
from .building import (
    Matrix,
    StModel,
    Subspace,
    Vector,
    apartment_class_fq,
    bruhat_witness,
    chamber_permutation,
    gl_generators,
    identity_matrix,
    rref,
    steinberg,
    subspaces,
    unipotent_matrices,
)
from .complexes import ChainComplexZ, HomologyGroup, assemble_complex, cycle_space, homology
from .errors import BudgetExceeded, NonComplementary
from .fqfield import FieldTable, field
from .intmat import SparseIntMatrix
from .snf import LatticeSolver, cokernel_invariants, kernel_basis

DEFAULT_BAR_BUDGET = 2_000_000


def lines_to_matrix(vectors: list[Vector]) -> Matrix:
    """Matrix whose j-th column is the j-th line vector."""
    d = len(vectors)
    return tuple(tuple(vectors[j][i] for j in range(d)) for i in range(d))


@dataclass
class DimModel:
    """Steinberg model of F_q^d with its unipotent apartment basis."""

    st: StModel
    units: list[Matrix]
    apartment_matrix: SparseIntMatrix
    solver: LatticeSolver

    def expand(self, chain: dict[int, int]) -> dict[int, int]:
        """Coordinates of a chamber chain in the unipotent apartment basis."""
        x = self.solver.solve(chain)
        if x is None:
            raise NonComplementary("chain not in the Steinberg lattice")
        return x


@lru_cache(maxsize=None)
def dim_model(q: int, d: int) -> DimModel:
    st = steinberg(d, q)
    units = unipotent_matrices(d, q)
    cols = [apartment_class_fq(st, u) for u in units]
    mat = SparseIntMatrix.from_columns(len(st.chambers), cols)
    return DimModel(st, units, mat, LatticeSolver(mat))


def subspace_pivots(sub: Subspace) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in sub]


def coords_in(ft: FieldTable, sub: Subspace, v: Vector) -> Vector:
    """Coordinates of v in the echelon basis of sub (raises if v outside)."""
    coords = tuple(v[p] for p in subspace_pivots(sub))
    add, mul = ft.add, ft.mul
    recon = [0] * len(v)
    for c, row in zip(coords, sub):
        if c:
            for i, x in enumerate(row):
                if x:
                    recon[i] = add[recon[i]][mul[c][x]]
    if tuple(recon) != v:
        raise NonComplementary("vector outside subspace")
    return coords


def unit_lines(ft: FieldTable, sub: Subspace, unit: Matrix) -> list[Vector]:
    """Ambient line vectors of the apartment indexed by a unipotent matrix."""
    d = len(sub)
    add, mul = ft.add, ft.mul
    out = []
    for t in range(d):
        vec = [0] * len(sub[0])
        for s in range(d):
            c = unit[s][t]
            if c:
                row = sub[s]
                for i, x in enumerate(row):
                    if x:
                        vec[i] = add[vec[i]][mul[c][x]]
        out.append(tuple(vec))
    return out


def st_product(
    q: int, left: Subspace, right: Subspace, left_unit: int, right_unit: int
) -> tuple[Subspace, dict[int, int]]:
    """Concatenation product St(V) (x) St(W) -> St(V + W) on basis elements.

    Returns the merged subspace and the product's coordinates in its
    unipotent apartment basis. Raises NonComplementary if V and W overlap.
    """
    ft = field(q)
    if len(rref(ft, list(left) + list(right))) != len(left) + len(right):
        raise NonComplementary("summands overlap")
    merged = rref(ft, list(left) + list(right))
    lines = unit_lines(ft, left, dim_model(q, len(left)).units[left_unit])
    lines += unit_lines(ft, right, dim_model(q, len(right)).units[right_unit])
    coord_lines = [coords_in(ft, merged, v) for v in lines]
    model = dim_model(q, len(merged))
    chain = apartment_class_fq(model.st, lines_to_matrix(coord_lines))
    return merged, model.expand(chain)


def ordered_decompositions(n: int, q: int, parts: int, budget: int) -> list[tuple[Subspace, ...]]:
    """All ordered tuples of subspaces with V_1 + ... + V_parts = F_q^n direct."""
    ft = field(q)
    pools = {d: subspaces(n, q, d) for d in range(1, n + 1)}
    out: list[tuple[Subspace, ...]] = []

    def extend(prefix: tuple[Subspace, ...], stacked: list[Vector], used: int, left: int) -> None:
        if left == 0:
            if used == n:
                out.append(prefix)
                if len(out) > budget:
                    raise BudgetExceeded("decomposition count exceeds budget")
            return
        remaining = n - used
        for d in range(1, remaining - left + 2):
            for cand in pools[d]:
                new_stack = stacked + list(cand)
                if len(rref(ft, new_stack)) == used + d:
                    extend(prefix + (cand,), new_stack, used + d, left - 1)

    extend((), [], 0, parts)
    return out


@dataclass
class BarModel:
    n: int
    q: int
    cx: ChainComplexZ
    top_kernel: SparseIntMatrix

    @property
    def top_degree(self) -> int:
        return self.n - 1


def bar_complex_fq(n: int, q: int, budget: int = DEFAULT_BAR_BUDGET) -> BarModel:
    """Bar resolution with the kernel-realized tensor-square term on top.

    Degrees -1..n-2 are assembled from decompositions; the degree n-1 term
    is the saturated kernel lattice of the top assembled boundary, attached
    with its inclusion as the boundary matrix.
    """
    ft = field(q)
    full = rref(ft, [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)])
    q_units = {d: unipotent_matrices(d, q) for d in range(1, n + 1)}

    bases: dict[int, list] = {}
    bases[-1] = [((full,), (u,)) for u in range(len(q_units[n]))]
    total = len(bases[-1])
    for degree in range(0, n - 1):
        k = degree + 2
        gens: list = []
        for decomp in ordered_decompositions(n, q, k, budget):
            ranges = [range(len(q_units[len(v)])) for v in decomp]
            stack = [()]
            for rng in ranges:
                stack = [s + (u,) for s in stack for u in rng]
            gens.extend((decomp, us) for us in stack)
        total += len(gens)
        if total > budget:
            raise BudgetExceeded(f"bar complex size exceeds budget {budget}")
        bases[degree] = gens

    def rule(degree: int, lab):
        if degree == -1:
            return []
        decomp, units = lab
        k = len(decomp)
        terms = []
        for j in range(k - 1):
            merged, x = st_product(q, decomp[j], decomp[j + 1], units[j], units[j + 1])
            sign = (-1) ** j
            new_decomp = decomp[:j] + (merged,) + decomp[j + 2 :]
            for uidx, coeff in x.items():
                new_units = units[:j] + (uidx,) + units[j + 2 :]
                terms.append((sign * coeff, (new_decomp, new_units)))
        return terms

    cx = assemble_complex(bases, rule)
    kernel = cycle_space(cx, n - 2)
    bases_full = dict(cx.basis)
    bases_full[n - 1] = [("augmentation", i) for i in range(kernel.n_cols)]
    boundary_full = dict(cx.boundary)
    boundary_full[n - 1] = kernel
    full_cx = ChainComplexZ(bases_full, boundary_full)
    return BarModel(n, q, full_cx, kernel)


def verify_bar_exactness(n: int, q: int, budget: int = DEFAULT_BAR_BUDGET) -> dict:
    """Exactness below the top degree plus the tensor-square rank on top."""
    bm = bar_complex_fq(n, q, budget)
    cx = bm.cx
    ranks = {d: cx.dim(d) for d in cx.degrees}
    low = {d: homology(cx, d) for d in range(-1, n - 2)}
    expected_top = q ** (n * (n - 1))
    alt = sum((-1) ** (n - 2 - d) * cx.dim(d) for d in range(-1, n - 1))
    ok = (
        all(h.betti == 0 and not h.torsion for h in low.values())
        and bm.top_kernel.n_cols == expected_top
        and alt == expected_top
    )
    return {
        "n": n,
        "q": q,
        "ranks": ranks,
        "homology_below_top": low,
        "top_kernel_rank": bm.top_kernel.n_cols,
        "expected_top_rank": expected_top,
        "alternating_sum": alt,
        "ok": ok,
    }


# -- rank-2 page of the descent spectral sequence ------------------------------


@dataclass
class Rank2Report:
    q: int
    chambers: int
    st_rank: int
    e110: HomologyGroup
    e120: HomologyGroup
    image_gcd: int
    witness_value: int
    standard_coeff: int
    surjective: bool


def _permutation_matrix_int(perm: list[int]) -> SparseIntMatrix:
    out = SparseIntMatrix(len(perm), len(perm))
    for i, j in enumerate(perm):
        out.rows[j][i] = 1
    return out


def rank2_e1_surjectivity(q: int) -> Rank2Report:
    """First-page surjectivity onto the chamber coinvariants for GL_3(F_q).

    The degree (1,0) entry is (Z[chambers] (x) St)_G; its invariants must be
    (1, ()) so a primitive kernel functional of the relation matrix realizes
    the isomorphism onto Z. The differential from (St (x) St)_G is induced by
    including St into chamber coordinates on the left slot; surjectivity is
    gcd = 1 over the images of the tensor basis, and the identity-apartment
    (x) witness-apartment class must map to a unit.
    """
    st = steinberg(3, q)
    c, s = len(st.chambers), st.rank
    gens = gl_generators(3, q)
    perms = [chamber_permutation(st, g) for g in gens]
    acts = [st_action_matrix(st, g) for g in gens]

    big = [tensor_matrix(_permutation_matrix_int(p), m) for p, m in zip(perms, acts)]
    rel = coinvariant_relations(c * s, big)
    e110 = HomologyGroup(*cokernel_invariants(rel))

    small = [tensor_matrix(m, m) for m in acts]
    rel2 = coinvariant_relations(s * s, small)
    e120 = HomologyGroup(*cokernel_invariants(rel2))

    phi_mat = kernel_basis(rel.transpose())
    if phi_mat.n_cols != 1:
        raise AssertionError("chamber coinvariants are not rank one")
    phi = phi_mat.column(0)

    k = st.kernel
    image_gcd = 0
    for i in range(s):
        ki = k.column(i)
        # phi paired with (column i of K) (x) e_j, for all j
        for j in range(s):
            val = sum(v * phi.get(a * s + j, 0) for a, v in ki.items())
            image_gcd = gcd(image_gcd, val)

    u = bruhat_witness(3, q)
    chain_id = apartment_class_fq(st, identity_matrix(3))
    x_u = st.to_st_coords(apartment_class_fq(st, u))
    witness_value = 0
    for a, va in chain_id.items():
        for j, vj in x_u.items():
            witness_value += va * vj * phi.get(a * s + j, 0)

    # the unipotent apartment chain carries the standard flag once
    std_flag = []
    sofar = []
    for j in range(2):
        sofar.append(tuple(1 if i == j else 0 for i in range(3)))
        std_flag.append(rref(st.ft, sofar))
    std_idx = st.chamber_index[tuple(std_flag)]
    standard_coeff = apartment_class_fq(st, u).get(std_idx, 0)

    return Rank2Report(
        q=q,
        chambers=c,
        st_rank=s,
        e110=e110,
        e120=e120,
        image_gcd=image_gcd,
        witness_value=witness_value,
        standard_coeff=standard_coeff,
        surjective=(e110 == HomologyGroup(1, ()) and image_gcd == 1 and abs(witness_value) == 1),
    )
