"""Block-partition complexes, the localized double complex, and the claims."""

import random
from itertools import product

import pytest

from titshom.complexes import HomologyGroup, homology_profile
from titshom.errors import (
    BudgetExceeded,
    CertificateFailure,
    NotSpanning,
    ShapeUnavailable,
)
from titshom.partsix import (
    block_delta,
    cell_bar_boundary,
    cell_canonical,
    cell_delta,
    kappa_eta_certificate,
    part6_claims,
    random_restriction,
    shape_lines,
    verify_double_identities,
    w_poset_complex,
    x_localized,
    zcomplex,
    zcomplex_homology_profile,
    zcomplex_is_spherical,
    zcomplex_poset_iso,
)
from titshom.zsymbols import random_unimodular_basis

Z = HomologyGroup(1, ())
O = HomologyGroup(0, ())


def test_zcomplex_frozen_examples():
    zc = zcomplex("ab")
    assert zc.d == 2
    assert zcomplex_homology_profile(zc) == {-1: O, 0: Z}

    zc = zcomplex("abc", [{"a", "b"}])
    assert zc.d == 2
    assert zcomplex_homology_profile(zc) == {-1: O, 0: Z}

    zc = zcomplex("abc")
    assert zc.d == 3
    assert zcomplex_homology_profile(zc) == {-1: O, 0: O, 1: Z}


def test_zcomplex_validation():
    with pytest.raises(ValueError):
        zcomplex("aab")
    with pytest.raises(ValueError):
        zcomplex("abc", [{"a", "z"}])
    with pytest.raises(ValueError):
        zcomplex("abcd", [{"a", "b"}, {"b", "c"}])
    with pytest.raises(BudgetExceeded):
        zcomplex(range(9))


def test_w_poset_complex_shape():
    wc = w_poset_complex(3)
    assert {d: wc.dim(d) for d in wc.degrees} == {-1: 1, 0: 6, 1: 6}
    assert homology_profile(wc) == {-1: O, 0: O, 1: Z}


def test_zcomplex_poset_iso():
    for labels, rsets in [
        ("abc", ()),
        ("abcd", ({"a", "b"},)),
        ("abcd", ()),
        ("abcde", ({"a", "b"}, {"c", "d"})),
    ]:
        zc = zcomplex(labels, rsets)
        ranks = zcomplex_poset_iso(zc)
        assert ranks[-1] == 1
        assert zcomplex_is_spherical(zc)


def test_zcomplex_exhaustive_small():
    # every restriction shape on at most four labels, up to relabeling
    for size in range(1, 5):
        for sizes in _size_multisets(size):
            rsets, at = [], 0
            for k in sizes:
                rsets.append(frozenset(range(at, at + k)))
                at += k
            zc = zcomplex(range(size), rsets)
            assert zc.d == size - at + len(sizes)
            assert zcomplex_is_spherical(zc)
            zcomplex_poset_iso(zc)


def _size_multisets(total):
    def parts(remaining, minimum):
        yield ()
        for k in range(minimum, remaining + 1):
            for rest in parts(remaining - k, k):
                yield (k,) + rest

    return sorted(set(parts(total, 1)))


def test_zcomplex_random_instances():
    rng = random.Random(5)
    for size in (5, 6, 7):
        for _ in range(3):
            labels, rsets = random_restriction(size, rng)
            assert any(len(r) >= 2 for r in rsets)
            zc = zcomplex(labels, rsets)
            assert zcomplex_is_spherical(zc)
            zcomplex_poset_iso(zc)


def test_x_localized_frame_matches_zcomplex():
    lines = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    cx = x_localized(lines, 0)
    zc = zcomplex(range(3))
    assert {d: cx.dim(d) for d in cx.degrees} == {-1: 1, 0: 6, 1: 6}
    assert homology_profile(cx) == zcomplex_homology_profile(zc)


def test_x_localized_validation():
    with pytest.raises(NotSpanning):
        x_localized(((1, 0, 0), (0, 1, 0)))
    with pytest.raises(ValueError):
        x_localized(((1, 0), (-1, 0), (0, 1)))  # same line twice
    with pytest.raises(ValueError):
        x_localized(((1, 0), (0, 1)), q=1)
    with pytest.raises(ValueError):
        x_localized(((1, 0), (0, 1), (1, 2)))  # (1,2) is no unit combination


def test_block_delta_frozen():
    block = ((0, 1), (1, 0), (1, 1))
    assert block_delta(block) == {
        ((1, 0), (1, 1)): 1,
        ((0, 1), (1, 1)): -1,
        ((0, 1), (1, 0)): 1,
    }
    # frames have nothing to delete
    assert block_delta(((0, 1), (1, 0))) == {}


def test_cell_ops_frozen():
    key, sign = cell_canonical(((((1, 0)),), ((0, 1),)))
    assert sign == 1
    two = (((0, 1),), ((1, 0),))
    merged = cell_bar_boundary(two)
    assert merged == {(((0, 1), (1, 0)),): 1}
    flipped = cell_bar_boundary((((1, 0),), ((0, 1),)))
    assert flipped == {(((0, 1), (1, 0)),): -1}
    # deletion acts in the second slot with the parity of the first block
    cell = (((1, 0, 0),), ((0, 0, 1), (0, 1, 0), (0, 1, 1)))
    terms = cell_delta(cell)
    assert terms == {
        (((1, 0, 0),), ((0, 1, 0), (0, 1, 1))): -1,
        (((1, 0, 0),), ((0, 0, 1), (0, 1, 1))): 1,
        (((1, 0, 0),), ((0, 0, 1), (0, 1, 0))): -1,
    }


def test_double_complex_identities():
    out = verify_double_identities(samples=60, seed=11)
    assert out["ok"] and out["cells"] == 60 and out["leibniz"] > 0


def test_shape_lines_and_availability():
    lines, groups = shape_lines("x1-i", 3, (1, -1))
    assert lines[3] == (1, -1, 0)
    assert (0, 1, 3) in groups
    with pytest.raises(ShapeUnavailable):
        shape_lines("x2-iv", 5, (1, 1, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        shape_lines("x9", 4, (1, 1))
    with pytest.raises(ValueError):
        shape_lines("x1-i", 4, (1, 1, 1))


def test_part6_claims_rank_four():
    checks = part6_claims(4)
    assert len(checks) == 1 + 4 + 8 + 8 + 16
    assert all(c["ok"] for c in checks)
    bad = [c for c in checks if "badcase" in c]
    assert len(bad) == 8
    for c in bad:
        assert c["badcase"]["homology"] == Z
        assert c["badcase"]["class_generates"]


def test_part6_claims_rank_five_and_six():
    checks = part6_claims(5, shapes=("x2-iii",))
    assert len(checks) == 32 and all(c["ok"] for c in checks)
    checks = part6_claims(6, shapes=("x2-iv",))
    assert len(checks) == 64 and all(c["ok"] for c in checks)
    with pytest.raises(ShapeUnavailable):
        part6_claims(4, shapes=("x2-iii",))


def test_kappa_eta_certificate_all_eps():
    for eps in product((1, -1), repeat=3):
        cert = kappa_eta_certificate(eps=eps)
        assert cert["ok"]
        assert cert["steps"][-1] == "kappa-generates"
        assert cert["badcase"]["homology"] == Z


def test_kappa_eta_certificate_random_bases():
    rng = random.Random(40)
    for _ in range(3):
        basis = random_unimodular_basis(4, rng)
        assert kappa_eta_certificate(basis=basis, eps=(1, -1, 1))["ok"]
    with pytest.raises(ValueError):
        kappa_eta_certificate(basis=((1, 0, 0, 0),) * 4)


def test_kappa_eta_certificate_rejects_corruption():
    # a single two-block cell is not a merge-cycle
    block = ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0))
    cell = (block, ((0, 0, 0, 1),))
    with pytest.raises(CertificateFailure):
        kappa_eta_certificate(eta_comb={cell: 1})
    # a cycle that is not delta of anything closing up to kappa
    with pytest.raises(CertificateFailure):
        kappa_eta_certificate(eta_comb={})
