"""Acceptance suite: one test per criterion, each printing a PASS line.

Statistical criteria run at fixed seeds; thresholds and budgets are stated in
each test and never loosened at runtime.
"""
import math

import numpy as np
import pytest

from zonoids.ergodic import l1_diagnostic, limit_formula_check, model_average_moments, run_averages
from zonoids.invariance import (
    test_relations_theorem,
    test_swap_invariance,
    test_zonoid_equiv,
    test_zonoid_stationarity,
)
from zonoids.laws import (
    DacunhaCastelleModel,
    DiscreteLaw,
    GaussianLaw,
    LognormalLaw,
    LognormalSwapModel,
    ScalarBase,
    SupportFlags,
    dacunha_prefix_law,
    gbm_process,
    permute_law,
)
from zonoids.lepage import LePageConfig, cf_check, simulate_lepage
from zonoids.levy import (
    LevyTriplet,
    check_log_id_equiv,
    check_lognormal_equiv,
    log_id_sampler_law,
    lognormal_to_triplet,
    recover_location_scale,
)
from zonoids.errors import BoundedSupportError
from zonoids.rng import as_rng
from zonoids.zonoid import DirectionGrid, mean_width_check, support_centred


def report(num: int, name: str) -> None:
    print(f"[{num:2d}] PASS {name}")


def test_01_dacunha_exact_swap_invariance():
    rng = as_rng(1001)
    checked = 0
    for n in (2, 5, 10):
        law = dacunha_prefix_law(n)
        assert test_swap_invariance(law, "all" if n <= 6 else 20, seed=0).verdict
        for _ in range(34):
            u = rng.uniform(-3.0, 3.0, size=n)
            assert abs(support_centred(law, u).value - np.abs(u).sum()) <= 1e-12
            checked += 1
    assert checked >= 100
    report(1, "exact swap-invariance of the sparse unit-mean law (100 random directions, 1e-12)")


def test_02_gaussian_closed_form_vs_mc():
    rng = as_rng(1002)
    b = rng.uniform(-1.0, 1.0, size=(2, 2))
    law = GaussianLaw(rng.uniform(-0.5, 0.5, size=2), b @ b.T + 0.2 * np.eye(2))
    samples = law.sample(10**6, as_rng(7))
    grid = DirectionGrid.circle(64)
    for u in grid.directions:
        exact = support_centred(law, u).value
        vals = np.abs(samples @ u)
        se = vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(exact - vals.mean()) <= 4.0 * se
    report(2, "Gaussian folded-normal closed form within 4 SE of Monte Carlo (64 directions, 1e6)")


def _random_lognormal_pair(rng, make_passing: bool, flavor: int):
    a11, a22 = rng.uniform(0.3, 1.2, size=2)
    rho = rng.uniform(-0.6, 0.6)
    a12 = rho * math.sqrt(a11 * a22)
    cov = np.array([[a11, a12], [a12, a22]])
    mu = rng.uniform(-1.0, 0.5, size=2)
    l1 = LognormalLaw(GaussianLaw(mu, cov))
    if make_passing:
        c = rng.uniform(0.1, 0.8)
        l2 = LognormalLaw(GaussianLaw(mu - 0.5 * c, cov + c))
    elif flavor % 2 == 0:
        delta = rng.choice([-1.0, 1.0]) * rng.uniform(0.25, 0.45)
        mu2 = mu.copy()
        mu2[0] += delta
        l2 = LognormalLaw(GaussianLaw(mu2, cov))
    else:
        delta = rng.choice([-1.0, 1.0]) * 0.3 * math.sqrt(a11 * a22)
        a12_new = np.clip(a12 + delta, -0.9 * math.sqrt(a11 * a22), 0.9 * math.sqrt(a11 * a22))
        cov2 = np.array([[a11, a12_new], [a12_new, a22]])
        l2 = LognormalLaw(GaussianLaw(mu, cov2))
    return l1, l2


def test_03_corollary_checker_vs_statistics():
    rng = as_rng(1003)
    matches = 0
    failing_margins = []
    for i in range(50):
        passing = i % 2 == 0
        l1, l2 = _random_lognormal_pair(rng, passing, i // 2)
        analytic = check_lognormal_equiv(l1, l2).verdict
        assert analytic == passing  # construction self-check
        stat = test_zonoid_equiv(l1, l2, budget=10**6, tau=4.0, seed=2000 + i)
        if not analytic:
            failing_margins.append(stat.max_standardized)
        matches += analytic == stat.verdict
    assert min(failing_margins) > 5.0  # failures are far outside noise
    assert matches == 50
    report(3, "analytic lognormal verdicts match tau=4 statistics in 50/50 constructed pairs")


def test_04_kernel_atom_shares_lognormal_zonoid():
    mass = 0.1
    mu = np.array([-0.5, -0.5])
    pure = LognormalLaw(GaussianLaw(mu, np.eye(2)))
    rebalanced_drift = mu - mass * (math.e - 1.0)
    triplet = LevyTriplet(np.eye(2), [[1.0, 1.0]], [mass], rebalanced_drift)
    analytic = check_log_id_equiv(triplet, lognormal_to_triplet(pure))
    assert analytic.verdict
    stat = test_zonoid_equiv(log_id_sampler_law(triplet), pure, budget=10**6, tau=3.0, seed=1004)
    assert stat.verdict, f"max standardized {stat.max_standardized}"
    report(4, "kernel jump atom with rebalanced drift is zonoid-equivalent to the pure lognormal")


def test_05_one_stable_cf_identity():
    from zonoids.laws import rademacher_law

    cfg = LePageConfig(rademacher_law(), "sum", n_terms=10**4, paths=10**5, seed=1005)
    rep = cf_check(cfg, [[0.5], [1.0], [2.0]])
    predicted = np.exp(-0.5 * math.pi * np.array([0.5, 1.0, 2.0]))
    assert np.allclose(rep.predicted, predicted, atol=1e-12)
    assert rep.sup_discrepancy <= 0.01
    report(5, f"1-stable CF identity: sup discrepancy {rep.sup_discrepancy:.4f} <= 0.01 at 1e5 paths")


def test_06_max_stable_unit_frechet():
    driver = DiscreteLaw([[1.0, 1.0, 1.0]], [1.0])
    cfg = LePageConfig(driver, "max", n_terms=10**4, paths=10**5, seed=1006, driver_bound=1.0)
    res = simulate_lepage(cfg)
    target = math.exp(-1.0)
    se = math.sqrt(target * (1.0 - target) / cfg.paths)
    for j in range(3):
        p = float((res.values[:, j] <= 1.0).mean())
        assert abs(p - target) <= 3.0 * se
    report(6, "max-stable marginals: P(Y <= 1) within 3 SE of exp(-1) over 1e5 paths")


def test_07_brown_resnick_stationarity():
    good = test_zonoid_stationarity(gbm_process(True), (0.0, 1.0), 2.0,
                                    budget=10**6, tau=3.0, seed=1007)
    assert good.verdict, f"max standardized {good.max_standardized}"
    bad = test_zonoid_stationarity(gbm_process(False), (0.0, 1.0), 2.0,
                                   budget=10**6, tau=3.0, seed=1007)
    assert not bad.verdict
    report(7, "geometric Brownian driver: drift-corrected passes, uncorrected fails (tau=3, 1e6)")


def test_08_ergodic_limits():
    swap = LognormalSwapModel([0.5])
    run = run_averages(swap, (100, 10_000), paths=50, seed=1010)
    rel = np.abs(run.averages - run.oracles[:, None])
    med_x = float(np.median(run.oracles))
    assert float(np.median(rel[:, 1])) <= 0.05 * med_x
    assert float(np.median(rel[:, 1])) < float(np.median(rel[:, 0]))

    dac = run_averages(DacunhaCastelleModel(), (100, 1_000, 10_000, 100_000), paths=50, seed=1010)
    assert float(np.median(dac.averages[:, -1])) <= 1e-3
    diag = l1_diagnostic(dac)
    for k, n in enumerate(dac.checkpoints):
        _, sd = model_average_moments(DacunhaCastelleModel(), n)
        se = sd / math.sqrt(50)
        assert abs(diag.cross_path_mean[k] - 1.0) <= 4.0 * se
    report(8, "ergodic limits: coupled-lognormal averages reach the oracle; sparse law converges a.s. but not in L1")


def test_09_limit_formula_identity():
    rng = as_rng(1009)
    for trial in range(100):
        k = int(rng.integers(1, 6))
        b = rng.uniform(-1.0, 1.0, size=k)
        norm2 = float(b @ b)
        if norm2 > 1.0:
            b *= math.sqrt(rng.uniform(0.2, 1.0) / norm2)
        rep = limit_formula_check(LognormalSwapModel(b), paths=5, n=20, seed=int(rng.integers(1 << 31)))
        assert rep.max_identity_error <= 1e-12
    report(9, "ratio-form limit equals the closed-form lognormal functional to 1e-12 (100 random b)")


def test_10_relations_theorem_consistency():
    rng = as_rng(1010)
    consistent = 0
    for trial in range(100):
        m = int(rng.integers(2, 5))
        atoms = rng.uniform(0.2, 3.0, size=(m, 3))
        w = rng.uniform(0.1, 1.0, size=m)
        w = w / w.sum()
        law = DiscreteLaw(atoms, w)
        if trial % 2 == 0:
            # symmetrize into the permutation orbit
            perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
            orbit = np.vstack([atoms[:, p] for p in perms])
            law = DiscreteLaw(orbit, np.tile(w / 6.0, 6))
        rep = test_relations_theorem(law)
        assert rep.consistent
        if trial % 2 == 0:
            assert rep.swap_invariant
        consistent += 1
    assert consistent == 100
    report(10, "ratio-measure characterisations agree on 100/100 exact d=3 laws")


def test_11_mean_width_identity_d2():
    rng = as_rng(1011)
    for _ in range(10):
        m = int(rng.integers(1, 7))
        atoms = rng.uniform(-2.0, 2.0, size=(m, 2))
        w = rng.uniform(0.1, 1.0, size=m)
        law = DiscreteLaw(atoms, w / w.sum())
        rep = mean_width_check(law, nodes=10_000)
        assert rep.abs_difference <= 1e-6
    report(11, "mean-width identity holds to 1e-6 with a 1e4-node circular rule (exact discrete laws)")


def test_12_location_scale_recovery():
    base = ScalarBase(lambda rng, n: rng.standard_normal(n), SupportFlags(False, False))

    def pos_mean(mu, sigma):
        z = mu / sigma
        return sigma * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi) \
            + mu * 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))

    rng = as_rng(1012)
    for trial in range(20):
        mu = float(rng.uniform(-2.0, 2.0))
        sigma = float(rng.uniform(0.5, 3.0))
        rec = recover_location_scale(base, mu, pos_mean(mu, sigma),
                                     budget=10**6, seed=3000 + trial)
        assert rec.location == mu
        assert abs(rec.scale - sigma) / sigma <= 0.02, (mu, sigma, rec.scale)

    bounded = ScalarBase(lambda rng2, n: rng2.uniform(-1.0, 1.0, n), SupportFlags(True, True))
    with pytest.raises(BoundedSupportError):
        recover_location_scale(bounded, 1.0, 1.02, budget=10_000, seed=0)
    report(12, "location-scale recovery within 2% for 20 random targets; bounded bases refused")


def test_13_property_suites_on_500_random_exact_inputs():
    rng = as_rng(1013)
    for trial in range(500):
        d = int(rng.integers(2, 5))
        if trial % 2 == 0:
            m = int(rng.integers(1, 6))
            atoms = rng.uniform(-2.0, 2.0, size=(m, d))
            w = rng.uniform(0.1, 1.0, size=m)
            law = DiscreteLaw(atoms, w / w.sum())
        else:
            b = rng.uniform(-1.0, 1.0, size=(d, d))
            law = GaussianLaw(rng.uniform(-1.0, 1.0, size=d), b @ b.T + 0.1 * np.eye(d))
        u = rng.uniform(-1.0, 1.0, size=d)
        v = rng.uniform(-1.0, 1.0, size=d)
        h = lambda w_: support_centred(law, w_).value
        for c in (0.5, 2.0, 7.0):
            assert abs(h(c * u) - c * h(u)) <= 1e-12
        assert h(u + v) <= h(u) + h(v) + 1e-12
        assert abs(h(u) - h(-u)) <= 1e-12
        perm = rng.permutation(d)
        inv = np.empty(d, dtype=int)
        inv[perm] = np.arange(d)
        assert abs(support_centred(permute_law(law, perm), u).value - h(u[inv])) <= 1e-12
    report(13, "support-function and permutation identities hold on 500 randomized exact inputs")
