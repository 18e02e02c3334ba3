import math

import numpy as np
import pytest

from sixvertexlab.core import ModelParams
from sixvertexlab.gue import (CornersSample, EmpiricalDistribution,
                              compare_corners_limit, corners_batch,
                              hermite_density, hermite_marginal_cdfs,
                              ks_distance, ks_two_sample, normal_cdf,
                              sample_gue_corners)


def accept_params():
    # acceptance parameter point: u = 1.5 s, u v = 0.7 (well inside the
    # admissible region, where desk-scale M already sits close to the limit)
    u = 1.5 * 2 ** 0.5
    return ModelParams(q=0.5, u=u, v=0.7 / u)


def test_corners_sample_structure():
    s = sample_gue_corners(4, seed=0)
    assert s.k == 4
    with pytest.raises(ValueError):
        CornersSample(levels=((1.0,), (0.0, 0.5)))  # 1.0 not inside [0, 0.5]


def test_gue_k1_is_standard_normal():
    rng = np.random.default_rng(21)
    vals = corners_batch(1, 100_000, rng)[0][:, 0]
    assert abs(np.var(vals) - 1.0) < 0.02
    assert abs(np.mean(vals)) < 0.02


def test_interlacing_zero_violations_k4():
    rng = np.random.default_rng(22)
    levels = corners_batch(4, 100_000, rng)
    for r in range(3):
        low, up = levels[r], levels[r + 1]
        ok = (up[:, : r + 1] <= low) & (low <= up[:, 1: r + 2])
        assert np.all(ok)


def test_hermite_density_examples():
    assert hermite_density((0.3,), 1) == pytest.approx(
        math.exp(-0.045) / math.sqrt(2 * math.pi))
    assert hermite_density((1.0, -1.0), 2) == 0.0  # out of order
    t = np.linspace(-8, 8, 1201)
    h = t[1] - t[0]
    total = sum(hermite_density((x,), 1) for x in t) * h
    assert total == pytest.approx(1.0, abs=1e-6)
    x1 = t[:, None]
    x2 = t[None, :]
    joint = np.where(x1 < x2, (x1 - x2) ** 2
                     * np.exp(-(x1 ** 2 + x2 ** 2) / 2), 0.0) / (2 * math.pi)
    assert joint.sum() * h * h == pytest.approx(1.0, abs=1e-6)


def test_top_density_matches_sampler_k2():
    rng = np.random.default_rng(23)
    levels = corners_batch(2, 100_000, rng)
    t, cdfs = hermite_marginal_cdfs(2)
    for coord in (0, 1):
        emp = EmpiricalDistribution.from_samples(levels[1][:, coord])
        ks = ks_distance(emp, lambda x, c=cdfs[coord]: np.interp(x, t, c))
        assert ks < 0.01


def test_ks_distance_self_consistency():
    rng = np.random.default_rng(29)
    passes = 0
    trials = 60
    n = 2000
    for _ in range(trials):
        emp = EmpiricalDistribution.from_samples(rng.normal(size=n))
        if ks_distance(emp, normal_cdf) < 3 * 1.36 / math.sqrt(n):
            passes += 1
    assert passes / trials >= 0.99


def test_ks_point_mass_closed_form():
    emp = EmpiricalDistribution.from_atoms([0.7], [1.0])
    got = ks_distance(emp, normal_cdf)
    assert got == pytest.approx(max(normal_cdf(0.7), 1 - normal_cdf(0.7)),
                                rel=1e-12)


def test_ks_glivenko_cantelli_trend():
    rng = np.random.default_rng(31)
    dists = []
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        emp = EmpiricalDistribution.from_samples(rng.normal(size=n))
        dists.append(ks_distance(emp, normal_cdf))
    assert dists[0] > dists[1] > dists[2]


def test_ks_rejects_small_samples():
    with pytest.raises(ValueError):
        ks_distance(EmpiricalDistribution.from_samples([1.0, 2.0]), normal_cdf)


def test_ks_two_sample_identical():
    a = np.arange(1000) / 1000
    assert ks_two_sample(a, a) == 0.0


def test_compare_k1_trend():
    p = accept_params()
    rep = compare_corners_limit(1, (50, 100, 200, 400), p, 0, seed=101)
    ks_by_m = {r["M"]: r["ks"] for r in rep["rows"]}
    assert ks_by_m[50] > ks_by_m[100] > ks_by_m[200] > ks_by_m[400]
    assert ks_by_m[400] < 0.05
    assert rep["monotone_in_M"]


def test_compare_k2_coordinates():
    p = accept_params()
    rep = compare_corners_limit(2, (100, 400), p, 50_000, seed=102)
    final = {r["coordinate"]: r["ks"] for r in rep["rows"] if r["M"] == 400}
    assert final["Y[2,1]"] < 0.08
    assert final["Y[2,2]"] < 0.08
    assert final["Y[1,1]"] < 0.08
    assert rep["interlace_violations"] == 0
    assert rep["monotone_in_M"]


def test_compare_k3_smoke():
    # all six coordinates present, lower rows Gibbs-sampled, zero violations
    p = ModelParams(q=0.5, u=2.0, v=0.25)
    rep = compare_corners_limit(3, (10,), p, 3000, seed=103)
    coords = {r["coordinate"] for r in rep["rows"]}
    assert coords == {"Y[1,1]", "Y[2,1]", "Y[2,2]", "Y[3,1]", "Y[3,2]",
                      "Y[3,3]", "trace[3]"}
    assert rep["interlace_violations"] == 0
