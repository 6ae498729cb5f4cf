"""LePage series: 1-stable sums and max-stable maxima driven by i.i.d. marks.

Each path draws arrival times Gamma_k as cumulative sums of unit exponentials
and combines the marks xi^(k) either as sum_k xi^(k) / Gamma_k (symmetric
marks; the sum converges conditionally and is taken in arrival order) or as
the coordinatewise max (positive marks, unit Frechet marginals when the mark
means are one).  Paths use independent spawned RNG streams, so results are
reproducible and independent of worker count, and max-mode values are
non-decreasing in the truncation depth for a fixed seed.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ks_2samp

from .invariance import test_zonoid_stationarity
from .laws import DiscreteLaw, GaussianLaw, law_is_positive
from .rng import as_rng, spawn_rngs
from .zonoid import DEFAULT_BUDGET, DirectionGrid, support_centred

_BLOCK = 128  # draw granularity in max mode; fixed so prefixes agree across depths


@dataclass(frozen=True)
class LePageConfig:
    driver: object
    mode: str  # "sum" | "max"
    n_terms: int
    paths: int
    seed: int
    driver_bound: float | None = None  # upper bound on mark coordinates (enables early exit)

    def __post_init__(self):
        if self.mode not in ("sum", "max"):
            raise ValueError("mode must be 'sum' or 'max'")
        if self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if self.paths < 1:
            raise ValueError("paths must be >= 1")


@dataclass(frozen=True)
class LePageResult:
    values: np.ndarray      # (paths, d)
    tail_start: np.ndarray  # (paths,) 1/Gamma at the last consumed term
    terms_used: np.ndarray  # (paths,)


def _check_symmetric(driver, rng) -> None:
    """Refuse sum mode for drivers that are visibly not symmetric.

    Exact for discrete (atom set must be sign-symmetric with equal weights)
    and Gaussian (zero mean); otherwise a pilot-sample check that sign-odd
    functionals have mean zero within four standard errors.
    """
    if isinstance(driver, DiscreteLaw):
        from .invariance import discrete_equal_in_distribution

        negated = DiscreteLaw(-driver.atoms, driver.weights)
        if not discrete_equal_in_distribution(driver, negated):
            raise ValueError("sum mode needs a symmetric driver; the atom set is not sign-symmetric")
        return
    if isinstance(driver, GaussianLaw):
        if np.abs(driver.mean_vec).max() > 1e-12:
            raise ValueError("sum mode needs a symmetric driver; the Gaussian mean is nonzero")
        return
    declared = getattr(driver, "symmetric", None)
    if declared is False:
        raise ValueError("driver declares itself non-symmetric")
    pilot = driver.sample(4096, rng)
    n = pilot.shape[0]
    probe = as_rng(1).standard_normal((3, driver.dim))
    for v in probe:
        for vals in (pilot @ v, np.sign(pilot @ v) * np.linalg.norm(pilot, axis=1)):
            se = vals.std(ddof=1) / math.sqrt(n)
            if abs(vals.mean()) > 4.0 * se + 1e-12:
                raise ValueError("sum mode needs a symmetric driver; a sign-odd functional has nonzero mean")


def _check_positive(driver, rng) -> None:
    known = law_is_positive(driver)
    if known is False:
        raise ValueError("max mode needs a positive driver")
    if known is None:
        pilot = driver.sample(4096, rng)
        if pilot.min() <= 0.0:
            raise ValueError("max mode needs a positive driver; pilot sample hit non-positive values")


def _sum_path(driver, n_terms: int, rng) -> tuple[np.ndarray, float, int]:
    exps = rng.standard_exponential(n_terms)
    gamma = np.cumsum(exps)
    marks = driver.sample(n_terms, rng)
    value = (1.0 / gamma) @ marks
    return value, 1.0 / gamma[-1], n_terms


def _max_path(driver, n_terms: int, rng, bound: float | None) -> tuple[np.ndarray, float, int]:
    value = np.full(driver.dim, -np.inf)
    total = 0.0
    used = 0
    consumed = 0
    while used < n_terms:
        take = min(_BLOCK, n_terms - used)
        # full blocks keep the stream layout identical across truncation depths
        exps = rng.standard_exponential(_BLOCK)
        marks = driver.sample(_BLOCK, rng)
        gamma = total + np.cumsum(exps[:take])
        total = float(total + exps.sum())
        consumed += _BLOCK
        np.maximum(value, (marks[:take] / gamma[:, None]).max(axis=0), out=value)
        used += take
        if bound is not None and bound / gamma[-1] < value.min():
            break
    return value, 1.0 / gamma[take - 1] if take else 0.0, used


def simulate_lepage(cfg: LePageConfig, workers: int = 1) -> LePageResult:
    """Simulate all paths of the configured series.

    Returns the path values together with the tail-start magnitude
    1/Gamma_last per path, a direct diagnostic for how much of the series the
    truncation discarded.
    """
    check_rng = np.random.default_rng((cfg.seed, 0x5EED))
    if cfg.mode == "sum":
        _check_symmetric(cfg.driver, check_rng)
    else:
        _check_positive(cfg.driver, check_rng)

    d = cfg.driver.dim
    values = np.empty((cfg.paths, d))
    tail = np.empty(cfg.paths)
    used = np.empty(cfg.paths, dtype=int)
    streams = spawn_rngs(cfg.seed, cfg.paths)

    def run(block: range) -> None:
        for i in block:
            if cfg.mode == "sum":
                v, t, u = _sum_path(cfg.driver, cfg.n_terms, streams[i])
            else:
                v, t, u = _max_path(cfg.driver, cfg.n_terms, streams[i], cfg.driver_bound)
            values[i] = v
            tail[i] = t
            used[i] = u

    if workers <= 1 or cfg.paths < 2 * workers:
        run(range(cfg.paths))
    else:
        chunks = np.array_split(np.arange(cfg.paths), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda c: run(c.tolist()), chunks))
    return LePageResult(values, tail, used)


# ---------------------------------------------------------------------------
# characteristic-function identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CFReport:
    us: np.ndarray
    empirical: np.ndarray   # complex
    predicted: np.ndarray   # real, exp(-pi/2 * h(u))
    discrepancy: np.ndarray
    bootstrap_se: np.ndarray
    sup_discrepancy: float
    extras: dict = field(default_factory=dict)


def cf_check(cfg: LePageConfig, u_grid, budget: int = DEFAULT_BUDGET,
             n_boot: int = 200, workers: int = 1) -> CFReport:
    """Empirical CF of the simulated 1-stable sum against exp(-pi/2 E|<u, xi>|)."""
    if cfg.mode != "sum":
        raise ValueError("the CF identity applies to sum mode")
    us = np.atleast_2d(np.asarray(u_grid, dtype=float))
    if us.shape[1] != cfg.driver.dim:
        raise ValueError("u grid dimension does not match the driver")
    result = simulate_lepage(cfg, workers)
    x = result.values
    proj = x @ us.T  # (paths, m)
    phases = np.exp(1j * proj)
    empirical = phases.mean(axis=0)

    support_seed = np.random.default_rng((cfg.seed, 0xCF))
    predicted = np.array([
        math.exp(-0.5 * math.pi * support_centred(cfg.driver, u, budget, support_seed).value)
        for u in us
    ])
    disc = np.abs(empirical - predicted)

    boot_rng = np.random.default_rng((cfg.seed, 0xB007))
    n = phases.shape[0]
    boots = np.empty((n_boot, us.shape[0]))
    for b in range(n_boot):
        idx = boot_rng.integers(0, n, n)
        boots[b] = np.abs(phases[idx].mean(axis=0) - predicted)
    se = boots.std(axis=0, ddof=1)
    return CFReport(us, empirical, predicted, disc, se, float(disc.max()),
                    {"paths": cfg.paths, "n_terms": cfg.n_terms, "tail_start_mean": float(result.tail_start.mean())})


# ---------------------------------------------------------------------------
# stationarity cross-check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StationarityCrossCheck:
    zonoid_pass: bool
    simulation_pass: bool
    per_shift_zonoid: tuple
    per_shift_min_p: tuple
    alpha: float

    @property
    def consistent(self) -> bool:
        return self.zonoid_pass == self.simulation_pass


def stationarity_cross_check(
    process,
    times,
    shifts,
    *,
    mode: str = "max",
    n_terms: int = 200,
    paths: int = 4000,
    grid: DirectionGrid | None = None,
    budget: int = DEFAULT_BUDGET,
    tau: float = 3.0,
    seed: int = 0,
    n_projections: int = 6,
    alpha: float = 0.01,
    workers: int = 1,
) -> StationarityCrossCheck:
    """Two routes to the same stationarity question, which must agree.

    Route one tests zonoid stationarity of the driving process.  Route two
    simulates the induced stable (sum) or max-stable (max) vectors before and
    after the shift and compares their empirical distributions with
    two-sample KS tests on random projections (Bonferroni across projections).
    """
    times = [float(t) for t in times]
    shifts = [float(s) for s in shifts]
    zonoid_verdicts = []
    min_ps = []
    rng = as_rng(seed)
    for k, s in enumerate(shifts):
        rep = test_zonoid_stationarity(process, times, s, grid, budget, tau, rng)
        zonoid_verdicts.append(rep.verdict)

        law_a = process.law_at(times)
        law_b = process.law_at([t + s for t in times])
        sim_a = simulate_lepage(LePageConfig(law_a, mode, n_terms, paths, seed * 1000 + 2 * k), workers)
        sim_b = simulate_lepage(LePageConfig(law_b, mode, n_terms, paths, seed * 1000 + 2 * k + 1), workers)
        d = law_a.dim
        dirs = as_rng((seed, k)).standard_normal((n_projections, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        dirs = np.vstack([np.eye(d), dirs])
        pvals = [
            ks_2samp(sim_a.values @ v, sim_b.values @ v).pvalue
            for v in dirs
        ]
        min_ps.append(float(min(pvals)))
    zonoid_pass = all(zonoid_verdicts)
    sim_pass = all(p >= alpha / (n_projections + len(times)) for p in min_ps)
    return StationarityCrossCheck(zonoid_pass, sim_pass, tuple(zonoid_verdicts), tuple(min_ps), alpha)
