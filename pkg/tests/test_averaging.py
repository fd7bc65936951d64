import pytest

from conftest import cofactor_det, naive_power
from nielsen.averaging import ExactSeq, bound_check, both_seqs, lefschetz_seq, nielsen_seq, seq_csv
from nielsen.errors import ModelError, UsageError
from nielsen.manifold import MapSpec, catalog, catalog_lookup


def test_torus_order3_lefschetz():
    assert lefschetz_seq(catalog_lookup("torus2_order3").spec, 6).values == (3, 3, 0, 3, 3, 0)


def test_circle_identity_zero():
    spec = catalog_lookup("circle_identity").spec
    assert lefschetz_seq(spec, 10).values == (0,) * 10
    assert nielsen_seq(spec, 10).values == (0,) * 10


def test_klein_r3_sequences():
    spec = catalog_lookup("klein_r3").spec
    assert nielsen_seq(spec, 4).values == (2, 8, 26, 80)
    # the signed average is 1 - 3^k for both holonomy elements
    assert lefschetz_seq(spec, 4).values == (-2, -8, -26, -80)


def test_g2_even_and_doubling():
    assert nielsen_seq(catalog_lookup("g2_even").spec, 3).values == (1, 3, 7)
    assert nielsen_seq(catalog_lookup("circle_doubling").spec, 4).values == (1, 3, 7, 15)


def test_both_seqs_agree_with_single_routes():
    spec = catalog_lookup("g2_rotation").spec
    l, n = both_seqs(spec, 12)
    assert l == lefschetz_seq(spec, 12) and n == nielsen_seq(spec, 12)


def test_bound_check_passes_on_catalog():
    for e in catalog():
        l, n = both_seqs(e.spec, 16)
        assert bound_check(l, n).passed, e.name


def test_bound_check_negative_r():
    l, n = both_seqs(catalog_lookup("klein_rm3").spec, 8)
    assert bound_check(l, n).passed
    assert [abs(x) for x in l.values] == list(n.values)
    assert any(x < 0 for x in l.values) and any(x > 0 for x in l.values)


def test_bound_check_detects_corruption():
    l, n = both_seqs(catalog_lookup("torus2_order3").spec, 6)
    bad = ExactSeq("Nielsen", (3, 3, 0, 2, 3, 0), n.spec_name)
    v = bound_check(l, bad)
    assert not v.passed and v.first_violation == 4


def test_bound_check_mismatch_is_usage_error():
    l, _ = both_seqs(catalog_lookup("torus2_order3").spec, 6)
    _, n = both_seqs(catalog_lookup("circle_doubling").spec, 6)
    with pytest.raises(UsageError):
        bound_check(l, n)
    with pytest.raises(UsageError):
        bound_check(l, l)


def test_non_integral_average_is_model_error():
    # |1 - 1/2| = 1/2 is not an integer
    spec = MapSpec.build("bad", [], [["1/2"]])
    with pytest.raises(ModelError) as info:
        nielsen_seq(spec, 3)
    assert info.value.details.get("k") == 1


def test_torus_equals_abs_det_oracle():
    rows = [[2, 1, 0], [1, 1, 1], [0, -1, 3]]
    n = nielsen_seq(MapSpec.build("t3", [], rows), 6)
    for k in range(1, 7):
        p = naive_power(rows, k)
        eye_minus = [[int(i == j) - p[i][j] for j in range(3)] for i in range(3)]
        assert n[k] == abs(cofactor_det(eye_minus))


def test_iterate_consistency():
    rows = [[0, 1], [-1, 3]]
    base = nielsen_seq(MapSpec.build("b", [], rows), 12)
    sq = nielsen_seq(MapSpec.build("s", [], naive_power(rows, 2)), 6)
    assert all(sq[j] == base[2 * j] for j in range(1, 7))


def test_seq_csv_and_indexing():
    l, n = both_seqs(catalog_lookup("circle_doubling").spec, 3)
    assert seq_csv(l, n) == "k,L,N\n1,-1,1\n2,-3,3\n3,-7,7\n"
    assert n[2] == 3
    with pytest.raises(IndexError):
        n[0]
    with pytest.raises(UsageError):
        nielsen_seq(catalog_lookup("circle_doubling").spec, 0)
