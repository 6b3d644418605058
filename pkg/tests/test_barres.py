"""Bar resolution and rank-2 first-page checks."""

import pytest

from titshom.barres import (
    bar_complex_fq,
    ordered_decompositions,
    rank2_e1_surjectivity,
    st_product,
    verify_bar_exactness,
)
from titshom.complexes import HomologyGroup
from titshom.errors import BudgetExceeded, NonComplementary


def test_decomposition_counts():
    # 3 lines of F_2^2, ordered pairs of distinct ones
    assert len(ordered_decompositions(2, 2, 2, 10**6)) == 6
    assert len(ordered_decompositions(2, 3, 2, 10**6)) == 12
    # line (x) plane pairs in both orders: 7 * 4 * 2
    pairs = ordered_decompositions(3, 2, 2, 10**6)
    assert len(pairs) == 56
    # ordered triples of independent lines: 7 * 6 * 4
    assert len(ordered_decompositions(3, 2, 3, 10**6)) == 168


def test_st_product_standard_lines():
    left = ((1, 0),)
    right = ((0, 1),)
    merged, coords = st_product(2, left, right, 0, 0)
    assert merged == ((1, 0), (0, 1))
    # the product of the two standard coordinate lines is the identity
    # apartment class, which is the first unipotent basis vector
    assert coords == {0: 1}


def test_st_product_rejects_overlap():
    line = ((1, 0),)
    with pytest.raises(NonComplementary):
        st_product(2, line, line, 0, 0)


def test_bar_ranks_2_2():
    rep = verify_bar_exactness(2, 2)
    assert rep["ranks"] == {-1: 2, 0: 6, 1: 4}
    assert rep["top_kernel_rank"] == 4
    assert rep["alternating_sum"] == 4
    assert rep["ok"]


def test_bar_ranks_2_3_and_2_5():
    rep = verify_bar_exactness(2, 3)
    assert rep["ranks"][0] == 12
    assert rep["top_kernel_rank"] == 9
    assert rep["ok"]
    rep = verify_bar_exactness(2, 5)
    assert rep["top_kernel_rank"] == 25
    assert rep["ok"]


def test_bar_ranks_3_2():
    rep = verify_bar_exactness(3, 2)
    assert rep["ranks"] == {-1: 8, 0: 112, 1: 168, 2: 64}
    assert rep["alternating_sum"] == 64
    assert rep["top_kernel_rank"] == 64
    assert all(h.betti == 0 and not h.torsion for h in rep["homology_below_top"].values())
    assert rep["ok"]


def test_top_term_is_a_kernel():
    bm = bar_complex_fq(3, 2)
    top = bm.cx.boundary_at(bm.top_degree)
    below = bm.cx.boundary_at(bm.top_degree - 1)
    assert below.mul(top).is_zero()
    assert top is bm.top_kernel


def test_bar_budget_enforced():
    with pytest.raises(BudgetExceeded):
        bar_complex_fq(3, 2, budget=50)


def test_rank2_surjectivity_q2():
    rep = rank2_e1_surjectivity(2)
    assert rep.chambers == 21
    assert rep.st_rank == 8
    assert rep.e110 == HomologyGroup(1, ())
    assert rep.image_gcd == 1
    assert abs(rep.witness_value) == 1
    assert rep.standard_coeff == 1
    assert rep.surjective


def test_rank2_surjectivity_q3():
    rep = rank2_e1_surjectivity(3)
    assert rep.chambers == 52
    assert rep.st_rank == 27
    assert rep.e110 == HomologyGroup(1, ())
    assert rep.image_gcd == 1
    assert abs(rep.witness_value) == 1
    assert rep.surjective
