import random

import pytest

from conftest import random_ferroelectric
from sixvertexlab.core import VertexType, delta_parameter, q_pochhammer
from sixvertexlab.weights import (SIX_VERTEX_TYPES, WeightKernel,
                                  conjugation_factor, six_vertex_weights,
                                  vertex_weight_raw, w)


def kernel(params, u, conj=False):
    return WeightKernel(params=params, spectral=u, conjugated=conj)


def test_empty_vertex_weight_is_one(params):
    for conj in (False, True):
        assert w((0, 0, 0, 0), kernel(params, 2.0, conj)) == 1.0


def test_turn_weight_matches_table(params):
    q, s, u = params.q, params.s, 2.0
    for g in range(5):
        got = w((g, 1, g + 1, 0), kernel(params, u))
        assert got == pytest.approx((1 - q ** (g + 1)) / (1 - s * u), rel=1e-14)


def test_nonconserving_vertex_is_zero(params):
    assert w((2, 1, 0, 1), kernel(params, 2.0)) == 0.0
    assert w(VertexType(1, 1, 1, 0), kernel(params, 2.0)) == 0.0


def test_blocked_branches_vanish_exactly(params):
    # splitting off a doubly occupied column (plain) and merging onto an
    # occupied column (conjugated) must give identically zero at s = q^{-1/2}
    assert w((2, 0, 1, 1), kernel(params, 2.0)) == 0.0
    assert w((1, 1, 2, 0), kernel(params, 0.25, conj=True)) == 0.0
    # but one level up both are allowed
    assert w((3, 0, 2, 1), kernel(params, 2.0)) != 0.0
    assert w((2, 1, 3, 0), kernel(params, 2.0)) != 0.0


def test_kernel_rejects_poles(params):
    with pytest.raises(ValueError):
        WeightKernel(params=params, spectral=params.s)
    with pytest.raises(ValueError):
        WeightKernel(params=params, spectral=1 / params.s)


def test_occupancy_cap(params):
    with pytest.raises(ValueError):
        vertex_weight_raw(70, 0, 70, 0, params.q, params.s, 2.0, False)


def test_conjugation_ratio_between_tables():
    # w^c (q;q)_{i2} (s^2;q)_{i1} = w (q;q)_{i1} (s^2;q)_{i2}, cross-multiplied
    # so the zero factors of (s^2; q)_n at s^2 q = 1 stay harmless
    rng = random.Random(5)
    for _ in range(20):
        p = random_ferroelectric(rng)
        q, s, u = p.q, p.s, p.u
        s2 = p.s2
        for g in range(9):
            for (i1, j1, i2, j2) in [(g, 0, g, 0), (g, 1, g, 1),
                                     (g, 1, g + 1, 0), (g + 1, 0, g, 1)]:
                plain = vertex_weight_raw(i1, j1, i2, j2, q, s, u, False)
                conj = vertex_weight_raw(i1, j1, i2, j2, q, s, u, True)
                lhs = conj * q_pochhammer(q, q, i2) * q_pochhammer(s2, q, i1)
                rhs = plain * q_pochhammer(q, q, i1) * q_pochhammer(s2, q, i2)
                assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_six_vertex_weights_examples(params):
    ws = six_vertex_weights(params)
    assert ws[0] == 1.0
    assert all(x > 0 for x in ws)
    # componentwise absolute values of the signed table at g = 0 / 1
    signed = [w(t, kernel(params, params.u)) for t in SIX_VERTEX_TYPES]
    for got, signed_val in zip(ws, signed):
        assert abs(signed_val) == pytest.approx(got, rel=1e-13)


def test_six_vertex_ferroelectric_grid():
    rng = random.Random(17)
    for _ in range(20):
        p = random_ferroelectric(rng)
        assert delta_parameter(*six_vertex_weights(p)) > 1.0


def test_conjugation_factor_examples(params):
    assert conjugation_factor((), params) == 1.0
    block = (1 - params.s2) / (1 - params.q)
    assert conjugation_factor((5, 3, 1), params) == pytest.approx(block ** 3)
    assert conjugation_factor((4,), params) == pytest.approx(block)
    # repeated values hit the (s^2; q)_2 zero
    assert conjugation_factor((3, 3, 0), params) == 0.0
