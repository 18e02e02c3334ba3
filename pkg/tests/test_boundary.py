import itertools
import math

import numpy as np
import pytest

from sixvertexlab import symfunc
from sixvertexlab.boundary import (CircleContour, Gc_contour, QuadratureError,
                                   default_radius, f_contour, f_direct,
                                   f_direct_batch)
from sixvertexlab.core import q_pochhammer


def f_literal(lam, v, M, p):
    """Term-by-term boundary sum with the skew transfer as oracle."""
    k = len(lam)
    tot = 0.0
    for nu in itertools.combinations(range(lam[0], 0, -1), k):
        g = symfunc.Gc_eval(lam, nu, (v,) * M, p)
        tot += (-p.s) ** sum(nu) * complex(g).real
    return (-1) ** k * q_pochhammer(p.q, p.q, k) * tot


def test_f_zero_cases(params):
    assert f_direct((3, 0), 0.25, 4, params) == 0.0
    assert f_direct((4, 4), 0.25, 4, params) == 0.0
    assert f_contour((4, 4, 1), 0.25, 4, params) == 0.0  # c(lam) vanishes


def test_f_direct_matches_literal_sum(params):
    for lam, M in [((2,), 1), ((2,), 2), ((4, 2), 3), ((5, 3), 5),
                   ((4, 3, 1), 2)]:
        assert f_direct(lam, params.v, M, params) == pytest.approx(
            f_literal(lam, params.v, M, params), rel=1e-11)


def test_f_contour_matches_direct(params):
    for lam, M in [((2,), 2), ((5,), 7), ((3, 1), 4), ((6, 2), 10)]:
        fc = f_contour(lam, params.v, M, params, tol=1e-10)
        fd = f_direct(lam, params.v, M, params)
        assert fc == pytest.approx(fd, rel=1e-8)


def test_f_contour_radius_independence(params):
    lam, M = (4, 2), 6
    s, v = params.s, params.v
    lo_r = s + 0.25 * (1 / v - s)
    hi_r = s + 0.75 * (1 / v - s)
    a = f_contour(lam, v, M, params, CircleContour(lo_r), tol=1e-10)
    b = f_contour(lam, v, M, params, CircleContour(hi_r), tol=1e-10)
    assert a == pytest.approx(b, rel=1e-9)


def test_f_sign_pattern_and_weight_positivity(params):
    # Raw f alternates as (-1)^{|lam| + k}; the full path weight
    # F_lam([u]^k) f(lam) is what is nonnegative.
    for lam in [(1,), (2,), (3,), (3, 1), (4, 1), (4, 3, 1)]:
        k, size = len(lam), sum(lam)
        f_val = f_direct(lam, params.v, 3, params)
        assert f_val != 0.0
        assert math.copysign(1.0, f_val) == (-1.0) ** (size + k)
        F_val = complex(symfunc.F_eval(lam, (), (params.u,) * k, params)).real
        assert F_val * f_val > 0.0


def test_Gc_contour_matches_transfer(params):
    for m in (1, 3, 6):
        ct = Gc_contour((m,), (params.v,), params, tol=1e-10)
        dp = symfunc.Gc_eval((m,), (0,), (params.v,), params)
        assert complex(ct) == pytest.approx(complex(dp), rel=1e-8)
    ct = Gc_contour((2, 1), (0.25, 0.2), params, tol=1e-10)
    dp = symfunc.Gc_eval((2, 1), (0, 0), (0.25, 0.2), params)
    assert complex(ct) == pytest.approx(complex(dp), rel=1e-7)


def test_Gc_contour_rejects_zero_part(params):
    with pytest.raises(ValueError):
        Gc_contour((2, 0), (0.25, 0.2), params)


def test_contour_result_is_real(params):
    val = f_contour((3, 1), params.v, 5, params, tol=1e-10)
    assert isinstance(val, float)


def test_default_radius_band(params):
    r = default_radius(params, (params.v,))
    assert params.s < r < 1 / params.v
    with pytest.raises(ValueError):
        f_contour((2,), params.v, 2, params, CircleContour(params.s * 0.9))


def test_quadrature_failure_diagnostics(params):
    with pytest.raises(QuadratureError) as exc:
        f_contour((6, 2), params.v, 10, params, CircleContour(default_radius(
            params, (params.v,)), nodes=8), tol=1e-14, max_nodes=16)
    assert "nodes" in exc.value.diagnostics


def test_spectral_convergence_of_nodes(params):
    # periodic-trapezoid error on the circle falls geometrically in node count
    import numpy as np

    from sixvertexlab.boundary import _tensor_circle_integral
    from sixvertexlab.core import q_pochhammer
    from sixvertexlab.weights import conjugation_factor

    lam, M = (3, 1), 4
    s, q, v = params.s, params.q, params.v
    R = default_radius(params, (v,))
    exact = f_direct(lam, v, M, params)
    pref = conjugation_factor(lam, params) * q_pochhammer(q, q, len(lam))

    def phi(z):
        col = ((1.0 - q * z * v) / (1.0 - z * v)) ** M
        ratio = (1.0 - s * z) / (z - s)
        base = col / (-s * (1.0 - s * z))
        return np.stack([base * ratio ** p for p in lam])

    errs = []
    for n in (16, 32, 64, 128):
        z = R * np.exp(2j * np.pi * np.arange(n) / n)
        val = complex(_tensor_circle_integral(phi(z), R, q)) * pref
        errs.append(abs(val - exact) / abs(exact))
    assert errs[0] > errs[1] > errs[2] > errs[3]
    # geometric: each doubling should gain more than a constant factor
    assert errs[3] < 1e-12 and errs[1] < 1e-2


def test_f_direct_batch_agrees_pointwise(params):
    tab = f_direct_batch(2, 7, params.v, 3, params)
    for lam, val in tab.items():
        assert val == pytest.approx(f_direct(lam, params.v, 3, params),
                                    rel=1e-11, abs=1e-13)
