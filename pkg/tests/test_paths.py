import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_ferroelectric
from sixvertexlab.paths import (collection_weight, count_collections_formula,
                                enumerate_F_collections,
                                enumerate_Gc_collections, is_typical,
                                typical_count_lower_bound,
                                typical_vertex_counts)


def strict_signatures(k, max_part):
    for combo in itertools.combinations(range(max_part, -1, -1), k):
        yield tuple(sorted(combo, reverse=True))


def test_single_path_collection():
    cols = enumerate_F_collections((), (4,), 1)
    assert len(cols) == 1
    cols[0].validate()
    assert cols[0].cross_section(1) == (4,)


def test_two_path_example():
    assert len(enumerate_F_collections((), (2, 1), 2)) == 2


def test_figure_example_count():
    cols = enumerate_F_collections((), (6, 3, 1), 3)
    assert len(cols) == 42 == count_collections_formula((6, 3, 1))


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_F_collections((), (2, 1), -1)
    with pytest.raises(ValueError):
        enumerate_F_collections((1,), (2, 1), 2)  # length mismatch
    with pytest.raises(ValueError):
        enumerate_Gc_collections((1, 0), (2,), 1)  # length mismatch


def test_gc_straight_up():
    cols = enumerate_Gc_collections((3, 1), (3, 1), 1)
    assert any(all(v[3] == 0 for v in c.vertex_types()) for c in cols)
    assert len(enumerate_Gc_collections((0,), (5,), 1)) == 1
    # up-right paths cannot move left
    assert enumerate_Gc_collections((4, 2), (3, 1), 2) == []


def test_edge_consistency_everywhere():
    for c in enumerate_F_collections((), (3, 1), 2):
        c.validate()
    for c in enumerate_Gc_collections((2, 0), (4, 1), 2):
        c.validate()


def test_counting_formula_examples():
    assert count_collections_formula((7,)) == 1
    assert count_collections_formula((2, 1)) == 2
    assert count_collections_formula((6, 3, 1)) == 42
    with pytest.raises(ValueError):
        count_collections_formula((3, 3))


def test_counting_formula_matches_enumeration():
    for k in (1, 2, 3):
        for lam in strict_signatures(k, 6):
            n = len(enumerate_F_collections((), lam, k))
            assert n == count_collections_formula(lam), lam


def test_typical_classification():
    cols = enumerate_F_collections((), (6, 3, 1), 3)
    typ = [c for c in cols if is_typical(c)]
    assert len(typ) >= typical_count_lower_bound((6, 3, 1)) == Fraction(3)
    # every typical collection has the exact type census
    k, size = 3, 10
    for c in typ:
        counts = typical_vertex_counts(c)
        assert counts.get((0, 1, 0, 1), 0) == size - k * (k - 1) // 2
        assert counts.get((0, 1, 1, 0), 0) == k * (k + 1) // 2
        assert counts.get((1, 0, 0, 1), 0) == k * (k - 1) // 2


def test_single_path_is_typical():
    c, = enumerate_F_collections((), (5,), 1)
    assert is_typical(c)


def test_pass_through_vertex_is_not_typical():
    # collections where a path runs straight up while another passes carry
    # a (1,0;1,0) or (1,1;1,1) vertex and are excluded
    cols = enumerate_F_collections((), (3, 1), 2)
    flagged = [c for c in cols if any(v == (1, 0, 1, 0) for v in c.vertex_types())]
    assert all(not is_typical(c) for c in flagged)


def test_single_path_weight(params):
    m = 5
    c, = enumerate_F_collections((), (m,), 1)
    u, s, q = params.u, params.s, params.q
    expect = (1 - q) / (1 - s * u) * ((u - s) / (1 - s * u)) ** m
    assert collection_weight(c, (u,), params) == pytest.approx(expect, rel=1e-13)


def test_empty_collection_weight(params):
    c, = enumerate_F_collections((), (), 0)
    assert collection_weight(c, (), params) == 1.0


def test_typical_weight_closed_form():
    rng = random.Random(23)
    for _ in range(5):
        p = random_ferroelectric(rng)
        u, s, q = p.u, p.s, p.q
        for lam in [(3, 1), (4, 2, 0), (5, 3, 1)]:
            k, size = len(lam), sum(lam)
            expect = (((1 - q) / (1 - s * u)) ** (k * (k + 1) // 2)
                      * ((1 - 1 / q) * u / (1 - s * u)) ** (k * (k - 1) // 2)
                      * ((u - s) / (1 - s * u)) ** (size - k * (k - 1) // 2))
            for c in enumerate_F_collections((), lam, k):
                if is_typical(c):
                    got = collection_weight(c, (u,) * k, p)
                    assert got == pytest.approx(expect, rel=1e-12)


def test_weight_bound_constant():
    # |W(pi)| <= C ((u-s)/(su-1))^{|lam|} with one fitted C per parameter point
    rng = random.Random(29)
    p = random_ferroelectric(rng)
    u, s = p.u, p.s
    x = (u - s) / (s * u - 1)
    ratios = []
    for k in (1, 2, 3):
        for lam in strict_signatures(k, 8):
            for c in enumerate_F_collections((), lam, k):
                wgt = abs(collection_weight(c, (u,) * k, p))
                ratios.append(wgt / x ** sum(lam))
    assert max(ratios) < 1e6  # finite fitted constant exists


def test_json_grid_roundtrip():
    c, = enumerate_F_collections((), (3,), 1)
    grid = c.to_json_grid()
    assert grid["vertices"][0][3] == [0, 1, 1, 0]
    assert grid["lam"] == [3]
