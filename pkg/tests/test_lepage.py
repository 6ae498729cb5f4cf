import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from zonoids.laws import (
    DiscreteLaw,
    GaussianLaw,
    LognormalLaw,
    gbm_process,
    rademacher_law,
    scale_law,
)
from zonoids.lepage import (
    CFReport,
    LePageConfig,
    cf_check,
    simulate_lepage,
    stationarity_cross_check,
)
from zonoids.rng import as_rng

POINT_MASS_1D = DiscreteLaw([[1.0]], [1.0])


def test_single_term_base_case():
    cfg = LePageConfig(rademacher_law(), "sum", n_terms=1, paths=500, seed=0)
    res = simulate_lepage(cfg)
    # a single term is the mark over one exponential arrival: check the magnitudes
    assert np.all(np.abs(res.values[:, 0]) == res.tail_start)
    assert np.all(res.terms_used == 1)


def test_max_mode_unit_frechet_marginal():
    cfg = LePageConfig(POINT_MASS_1D, "max", n_terms=400, paths=30_000, seed=1, driver_bound=1.0)
    res = simulate_lepage(cfg)
    p = float((res.values[:, 0] <= 1.0).mean())
    target = math.exp(-1.0)
    se = math.sqrt(target * (1.0 - target) / cfg.paths)
    assert abs(p - target) < 3.0 * se


def test_max_mode_frechet_linearity():
    # -1 / log P(Y <= y) should be linear in y with slope 1/E xi
    cfg = LePageConfig(POINT_MASS_1D, "max", n_terms=400, paths=50_000, seed=2, driver_bound=1.0)
    res = simulate_lepage(cfg)
    ys = np.array([0.5, 1.0, 2.0, 4.0])
    probs = np.array([(res.values[:, 0] <= y).mean() for y in ys])
    transformed = -1.0 / np.log(probs)
    ratio = transformed / ys
    assert np.abs(ratio - 1.0).max() < 0.05


def test_early_exit_with_declared_bound():
    cfg = LePageConfig(POINT_MASS_1D, "max", n_terms=100_000, paths=50, seed=3, driver_bound=1.0)
    res = simulate_lepage(cfg)
    assert res.terms_used.max() <= 256  # the point mass stabilizes within a couple of blocks
    unbounded = LePageConfig(POINT_MASS_1D, "max", n_terms=1_000, paths=50, seed=3)
    assert simulate_lepage(unbounded).terms_used.min() == 1_000


def test_max_mode_monotone_in_truncation_depth():
    driver = LognormalLaw(GaussianLaw([-0.5], [[1.0]]))
    shallow = simulate_lepage(LePageConfig(driver, "max", n_terms=64, paths=100, seed=4))
    deep = simulate_lepage(LePageConfig(driver, "max", n_terms=512, paths=100, seed=4))
    assert np.all(deep.values >= shallow.values - 1e-15)


def test_sum_mode_scaling_is_exact():
    driver = rademacher_law()
    base = simulate_lepage(LePageConfig(driver, "sum", n_terms=500, paths=200, seed=5))
    # power-of-two factors scale bitwise exactly; general factors only up to
    # the non-associativity of float multiplication
    doubled = simulate_lepage(LePageConfig(scale_law(driver, 2.0), "sum", n_terms=500, paths=200, seed=5))
    assert np.array_equal(doubled.values, 2.0 * base.values)
    scaled = simulate_lepage(LePageConfig(scale_law(driver, 2.5), "sum", n_terms=500, paths=200, seed=5))
    assert np.allclose(scaled.values, 2.5 * base.values, rtol=1e-12, atol=0.0)


def test_sum_mode_rejects_asymmetric_drivers():
    with pytest.raises(ValueError):
        simulate_lepage(LePageConfig(DiscreteLaw([[1.0]], [1.0]), "sum", 10, 10, seed=6))
    with pytest.raises(ValueError):
        simulate_lepage(LePageConfig(GaussianLaw([0.5], [[1.0]]), "sum", 10, 10, seed=6))
    with pytest.raises(ValueError):
        simulate_lepage(LePageConfig(LognormalLaw(GaussianLaw([0.0], [[1.0]])), "sum", 10, 10, seed=6))


def test_max_mode_rejects_signed_drivers():
    with pytest.raises(ValueError):
        simulate_lepage(LePageConfig(rademacher_law(), "max", 10, 10, seed=7))


def test_workers_do_not_change_results():
    driver = rademacher_law()
    cfg = LePageConfig(driver, "sum", n_terms=200, paths=64, seed=8)
    a = simulate_lepage(cfg, workers=1)
    b = simulate_lepage(cfg, workers=4)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.tail_start, b.tail_start)


def test_cf_identity_rademacher_grid():
    cfg = LePageConfig(rademacher_law(), "sum", n_terms=2_000, paths=40_000, seed=9)
    rep = cf_check(cfg, [[0.5], [1.0], [2.0]])
    assert isinstance(rep, CFReport)
    predicted = [math.exp(-math.pi / 4.0), math.exp(-math.pi / 2.0), math.exp(-math.pi)]
    assert np.allclose(rep.predicted, predicted, atol=1e-12)
    assert rep.sup_discrepancy < 0.02
    assert np.all(np.abs(rep.empirical) <= 1.0 + 1e-12)
    assert np.all((rep.predicted > 0.0) & (rep.predicted <= 1.0))


def test_cf_identity_u_zero_is_exactly_one():
    cfg = LePageConfig(rademacher_law(), "sum", n_terms=100, paths=2_000, seed=10)
    rep = cf_check(cfg, [[0.0]])
    assert rep.empirical[0] == pytest.approx(1.0 + 0.0j)
    assert rep.predicted[0] == 1.0


def test_cf_identity_degenerate_direction():
    driver = DiscreteLaw([[1.0, 1.0], [-1.0, -1.0]], [0.5, 0.5])
    cfg = LePageConfig(driver, "sum", n_terms=300, paths=3_000, seed=11)
    rep = cf_check(cfg, [[1.0, -1.0]])
    # <u, xi> vanishes identically, so both sides are exactly one
    assert rep.predicted[0] == 1.0
    assert rep.empirical[0] == pytest.approx(1.0 + 0.0j)


def test_zonoid_equivalent_drivers_give_same_stable_law():
    driver_a = LognormalLaw(GaussianLaw([-0.5, -0.5], np.eye(2)))
    driver_b = LognormalLaw(GaussianLaw([-1.0, -1.0], [[2.0, 1.0], [1.0, 2.0]]))
    a = simulate_lepage(LePageConfig(driver_a, "max", 300, 8_000, seed=12))
    b = simulate_lepage(LePageConfig(driver_b, "max", 300, 8_000, seed=13))
    rng = as_rng(14)
    dirs = np.vstack([np.eye(2), rng.standard_normal((4, 2))])
    pvals = [ks_2samp(a.values @ v, b.values @ v).pvalue for v in dirs]
    assert min(pvals) >= 0.01 / len(dirs)


def test_stationarity_cross_check_agrees_both_ways():
    good = stationarity_cross_check(gbm_process(True), (0.0, 1.0), (2.0,),
                                    mode="max", n_terms=200, paths=4_000,
                                    budget=150_000, tau=3.0, seed=15)
    assert good.zonoid_pass and good.simulation_pass and good.consistent
    bad = stationarity_cross_check(gbm_process(False), (0.0, 1.0), (2.0,),
                                   mode="max", n_terms=200, paths=4_000,
                                   budget=150_000, tau=3.0, seed=16)
    assert not bad.zonoid_pass and not bad.simulation_pass and bad.consistent


def test_constant_driver_trivially_stationary():
    from zonoids.laws import SamplerProcess

    proc = SamplerProcess(lambda times, rng, n: np.exp(
        rng.standard_normal((n, 1)) - 0.5) @ np.ones((1, len(times))), positive=True)
    rep = stationarity_cross_check(proc, (0.0, 1.0), (1.0,), mode="max",
                                   n_terms=200, paths=3_000, budget=50_000, tau=3.0, seed=17)
    assert rep.zonoid_pass and rep.simulation_pass
