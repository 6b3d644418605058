"""Finite fields, subspace enumeration, buildings, Steinberg lattices."""

from __future__ import annotations

import os

import pytest

from titshom.building import (
    act_on_subspace,
    apartment_class_fq,
    borel_generators,
    bruhat_witness,
    building_complex,
    chamber_permutation,
    gl_generators,
    group_closure,
    identity_matrix,
    is_upper_triangular,
    mat_mul,
    permutation_matrix,
    rref,
    sl2_generators,
    span_vectors,
    steinberg,
    subspaces,
    unipotent_basis_matrix,
    unipotent_matrices,
)
from titshom.complexes import exactness_report, homology
from titshom.errors import BudgetExceeded, FieldTooLarge, NotSpanning
from titshom.fqfield import field
from titshom.snf import smith_normal_form


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def test_field_tables_small():
    for q in (2, 3, 4, 5, 8, 9):
        ft = field(q)
        assert ft.q == q
        # primitive element has full multiplicative order
        x, order = ft.primitive, 1
        while x != 1:
            x = ft.mul[x][ft.primitive]
            order += 1
        assert order == q - 1
    with pytest.raises(ValueError):
        field(6)
    with pytest.raises(FieldTooLarge):
        field(512)


def test_gf4_is_not_z4():
    ft = field(4)
    # char 2: x + x = 0 for every x
    assert all(ft.add[x][x] == 0 for x in range(4))
    # multiplicative group is cyclic of order 3
    assert ft.mul[2][2] != 1


def test_subspace_counts_frozen():
    assert len(subspaces(2, 2, 1)) == 3
    assert len(subspaces(3, 2, 1)) == 7
    assert len(subspaces(3, 3, 2)) == 13
    assert len(subspaces(4, 2, 2)) == 35
    assert subspaces(3, 2, 0) == [()]


def test_subspace_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("TITSHOM_CACHE_DIR", str(tmp_path))
    first = subspaces(3, 2, 1)
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].name.startswith("titshom-v1-sub")
    second = subspaces(3, 2, 1)
    assert first == second


def test_building_cell_counts():
    cx32 = building_complex(3, 2)
    assert cx32.dim(0) == 14 and cx32.dim(1) == 21
    cx33 = building_complex(3, 3)
    assert cx33.dim(0) == 26 and cx33.dim(1) == 52


def test_building_budget():
    with pytest.raises(BudgetExceeded):
        building_complex(4, 2, budget=10)


def test_solomon_tits_small():
    cx = building_complex(3, 2)
    rep = exactness_report(cx)
    assert rep["homology"][-1].betti == 0 and rep["homology"][0].betti == 0
    top = rep["homology"][1]
    assert top.betti == 8 and top.torsion == ()
    h0 = homology(building_complex(2, 3), 0)
    assert h0.betti == 3 and h0.torsion == ()


def test_steinberg_ranks_frozen():
    assert steinberg(2, 2).rank == 2
    assert steinberg(3, 2).rank == 8
    assert steinberg(2, 3).rank == 3
    assert steinberg(1, 5).rank == 1


def test_apartment_class_is_cycle_in_lattice():
    st = steinberg(3, 2)
    chain = apartment_class_fq(st, identity_matrix(3))
    # 3! chambers with unit coefficients
    assert sorted(abs(v) for v in chain.values()) == [1] * 6
    bd = st.cx.boundary_at(1)
    assert bd.mul_vec(chain) == {}
    assert st.to_st_coords(chain) is not None
    with pytest.raises(NotSpanning):
        apartment_class_fq(st, ((1, 0, 0), (0, 1, 0), (1, 0, 0)))


def test_unipotent_basis_is_z_basis_2_2():
    st = steinberg(2, 2)
    units, x = unipotent_basis_matrix(st)
    assert len(units) == 2 and x.shape == (2, 2)
    assert smith_normal_form(x).divisors == (1, 1)


def test_unipotent_basis_is_z_basis_3_2():
    st = steinberg(3, 2)
    units, x = unipotent_basis_matrix(st)
    assert len(units) == 8
    assert smith_normal_form(x).divisors == (1,) * 8


def test_bruhat_witness_small():
    u = bruhat_witness(2, 3)
    assert u == ((1, 1), (0, 1))
    u3 = bruhat_witness(3, 2)
    assert all(u3[i][j] == 1 for i in range(3) for j in range(i, 3))
    assert is_upper_triangular(u3)


def test_generator_closures_have_right_order():
    ft2, ft3 = field(2), field(3)
    assert len(group_closure(ft2, gl_generators(2, 2))) == gl_order(2, 2) == 6
    assert len(group_closure(ft3, gl_generators(2, 3))) == gl_order(2, 3) == 48
    assert len(group_closure(ft2, gl_generators(3, 2))) == gl_order(3, 2) == 168
    assert len(group_closure(ft3, sl2_generators(3))) == 24
    # Borel of GL_2(F_3): order (q-1)^2 * q = 12
    assert len(group_closure(ft3, borel_generators(2, 3))) == 12
    # Borel of GL_2(F_4): order (q-1)^2 * q = 36, exercises e > 1 root basis
    ft4 = field(4)
    assert len(group_closure(ft4, borel_generators(2, 4))) == 36


def test_chamber_permutation_is_action():
    st = steinberg(3, 2)
    g1, g2 = gl_generators(3, 2)
    p1 = chamber_permutation(st, g1)
    p2 = chamber_permutation(st, g2)
    p12 = chamber_permutation(st, mat_mul(st.ft, g1, g2))
    # action: perm(g1*g2) = perm(g1) o perm(g2)
    assert [p1[i] for i in p2] == p12
    assert sorted(p1) == list(range(len(st.chambers)))


def test_permutation_matrix_and_action():
    ft = field(2)
    w = permutation_matrix((1, 0, 2))
    sub = rref(ft, [(1, 0, 0)])
    moved = act_on_subspace(ft, w, sub)
    assert moved == ((0, 1, 0),)
    assert len(span_vectors(ft, moved)) == 2


def test_unipotent_matrix_enumeration():
    assert len(unipotent_matrices(3, 2)) == 8
    assert len(unipotent_matrices(2, 5)) == 5
    assert all(m[0][0] == 1 and m[1][1] == 1 for m in unipotent_matrices(2, 3))
