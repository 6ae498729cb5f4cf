"""Support functions of centred, non-centred, lift and max zonoids.

Values are exact for discrete laws (enumeration over atoms) and for Gaussian
laws (folded-normal moments); for every other law they are Monte Carlo
estimates with a standard error.  One sample matrix can be reused across all
directions of a grid, which is what the equivalence testers rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagnosticError
from .laws import DiscreteLaw, GaussianLaw, LognormalLaw, law_is_positive
from .rng import as_rng

DEFAULT_BUDGET = 100_000
EXACT_TOL = 1e-10
_COLLINEAR_TOL = 1e-10  # radians


@dataclass(frozen=True)
class SupportEstimate:
    """A support-function value: exact (std_error 0) or Monte Carlo."""

    value: float
    std_error: float
    n: int
    exact: bool

    def __post_init__(self):
        if self.exact and self.std_error != 0.0:
            raise ValueError("exact estimates must carry zero standard error")


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Finite set of unit directions used to compare support functions."""

    directions: np.ndarray
    construction: str = "user-supplied"

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim != 2 or dirs.shape[0] < 1:
            raise ValueError("directions must be a non-empty (m, d) array")
        norms = np.linalg.norm(dirs, axis=1)
        if np.abs(norms - 1.0).max() > 1e-12:
            raise ValueError("all grid directions must have unit norm within 1e-12")
        dirs = dirs.copy()
        dirs.flags.writeable = False
        object.__setattr__(self, "directions", dirs)

    def __len__(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @classmethod
    def circle(cls, m: int) -> "DirectionGrid":
        """m equally spaced directions on the unit circle."""
        theta = 2.0 * np.pi * np.arange(m) / m
        return cls(np.column_stack([np.cos(theta), np.sin(theta)]), f"circle:{m}")

    @classmethod
    def uniform_sphere(cls, d: int, m: int, seed) -> "DirectionGrid":
        """m directions drawn uniformly on the unit sphere in R^d."""
        z = as_rng(seed).standard_normal((m, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        return cls(z, f"uniform-sphere:{m}")

    @classmethod
    def fibonacci_sphere(cls, m: int) -> "DirectionGrid":
        """Fibonacci lattice on the 2-sphere (d = 3)."""
        i = np.arange(m)
        z = 1.0 - (2.0 * i + 1.0) / m
        phi = np.pi * (3.0 - np.sqrt(5.0)) * i
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return cls(pts, f"fibonacci:{m}")

    @classmethod
    def axes_and_diagonals(cls, d: int, max_diagonals: int = 64, seed=0) -> "DirectionGrid":
        """All +-e_i plus normalized sign diagonals (subsampled past 2^d > max)."""
        axes = np.vstack([np.eye(d), -np.eye(d)])
        if 2 ** d <= max_diagonals:
            signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * d)).T.reshape(-1, d)
        else:
            signs = as_rng(seed).choice([-1.0, 1.0], size=(max_diagonals, d))
        diag = signs / math.sqrt(d)
        return cls(np.vstack([axes, diag]), "axis-and-diagonals")

    @classmethod
    def default(cls, d: int, seed=0) -> "DirectionGrid":
        """House grid: dense smooth cover plus axes and diagonals.

        The coordinate-aligned part is always appended because violations of
        permutation symmetry tend to show up there first.
        """
        if d == 1:
            return cls(np.array([[1.0], [-1.0]]), "axes:1d")
        extra = cls.axes_and_diagonals(d).directions
        if d == 2:
            smooth = cls.circle(64).directions
        elif d == 3:
            smooth = cls.fibonacci_sphere(256).directions
        else:
            smooth = cls.uniform_sphere(d, 128, seed).directions
        return cls(np.vstack([smooth, extra]), f"default:{d}d")


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def gaussian_abs_moment(m: float, s: float) -> float:
    """E|m + s Z| for standard normal Z (folded-normal mean)."""
    if s == 0.0:
        return abs(m)
    return s * math.sqrt(2.0 / math.pi) * math.exp(-m * m / (2.0 * s * s)) + m * math.erf(
        m / (s * math.sqrt(2.0))
    )


def _gaussian_dir_moments(law: GaussianLaw, u: np.ndarray) -> tuple[float, float]:
    m = float(law.mean_vec @ u)
    var = float(u @ law.cov @ u)
    return m, math.sqrt(max(var, 0.0))


def _integrability_guard(values: np.ndarray) -> None:
    """Reject samples whose running mean is visibly diverging.

    Heuristic with two signatures of a non-integrable stream: the median block
    mean keeps growing with the block size, or a single draw carries a
    macroscopic share of the whole sum.  Thresholds are set so integrable
    heavy-tailed laws (finite mean, infinite variance) do not false-fire.
    """
    n = values.shape[0]
    if n < 4096:
        return
    small = values[: n - n % 64].reshape(64, -1).mean(axis=1)
    big = values[: n - n % 4].reshape(4, -1).mean(axis=1)
    med_small = float(np.median(small))
    total = float(values.sum())
    growth = float(np.median(big)) / med_small if med_small > 0 else 1.0
    dominance = float(values.max()) / total if total > 0 else 0.0
    if growth > 1.25 or dominance > 0.2:
        raise DiagnosticError(
            "running mean diverges across sample blocks; the law looks non-integrable "
            f"(median block growth {growth:.3f}, max-term share {dominance:.3f})"
        )


def _mc_estimate(values: np.ndarray) -> SupportEstimate:
    _integrability_guard(values)
    n = values.shape[0]
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return SupportEstimate(float(values.mean()), sd / math.sqrt(n), n, False)


def _sample_for(law, budget: int, rng) -> np.ndarray:
    if rng is None:
        raise ValueError("a seed or generator is required for Monte Carlo support evaluation")
    return law.sample(int(budget), rng)


# ---------------------------------------------------------------------------
# support-function evaluators
# ---------------------------------------------------------------------------

def support_centred(law, u, budget: int = DEFAULT_BUDGET, seed=None, *, samples=None) -> SupportEstimate:
    """Support of the centred zonoid: E|<u, xi>|.

    ``samples`` lets a caller reuse one sample matrix across many directions.
    """
    u = np.asarray(u, dtype=float).ravel()
    if isinstance(law, DiscreteLaw):
        return SupportEstimate(float(law.weights @ np.abs(law.atoms @ u)), 0.0, 0, True)
    if isinstance(law, GaussianLaw):
        m, s = _gaussian_dir_moments(law, u)
        return SupportEstimate(gaussian_abs_moment(m, s), 0.0, 0, True)
    if samples is None:
        samples = _sample_for(law, budget, as_rng(seed) if seed is not None else None)
    return _mc_estimate(np.abs(samples @ u))


def support_noncentred(law, u, budget: int = DEFAULT_BUDGET, seed=None, *, samples=None) -> SupportEstimate:
    """Support of the (non-centred) zonoid: E<u, xi>_+.

    Exact paths are built as (E|<u,xi>| + <E xi, u>) / 2 so the decomposition
    identity holds to machine precision.
    """
    u = np.asarray(u, dtype=float).ravel()
    if isinstance(law, DiscreteLaw):
        return SupportEstimate(float(law.weights @ np.maximum(law.atoms @ u, 0.0)), 0.0, 0, True)
    if isinstance(law, GaussianLaw):
        m, s = _gaussian_dir_moments(law, u)
        return SupportEstimate(0.5 * (gaussian_abs_moment(m, s) + m), 0.0, 0, True)
    if samples is None:
        samples = _sample_for(law, budget, as_rng(seed) if seed is not None else None)
    return _mc_estimate(np.maximum(samples @ u, 0.0))


def support_lift(law, k: float, u, budget: int = DEFAULT_BUDGET, seed=None, *, samples=None) -> SupportEstimate:
    """Lift-zonoid support h(k, u) = E(k + <u, xi>)_+."""
    u = np.asarray(u, dtype=float).ravel()
    k = float(k)
    if isinstance(law, DiscreteLaw):
        return SupportEstimate(float(law.weights @ np.maximum(k + law.atoms @ u, 0.0)), 0.0, 0, True)
    if isinstance(law, GaussianLaw):
        m, s = _gaussian_dir_moments(law, u)
        return SupportEstimate(0.5 * (gaussian_abs_moment(m + k, s) + m + k), 0.0, 0, True)
    if samples is None:
        samples = _sample_for(law, budget, as_rng(seed) if seed is not None else None)
    return _mc_estimate(np.maximum(k + samples @ u, 0.0))


def support_max(law, u, budget: int = DEFAULT_BUDGET, seed=None, *, samples=None) -> SupportEstimate:
    """Max-zonoid support E max(0, u_1 eta_1, ..., u_d eta_d) for positive laws."""
    u = np.asarray(u, dtype=float).ravel()
    if isinstance(law, GaussianLaw) and np.abs(law.cov).max() == 0.0:
        law = DiscreteLaw(law.mean_vec[None, :], np.array([1.0]))  # degenerate point mass
    if isinstance(law, DiscreteLaw):
        if not law.is_positive():
            raise ValueError("max-zonoid support requires a law with positive atoms")
        scaled = law.atoms * u
        vals = np.maximum(scaled.max(axis=1), 0.0)
        return SupportEstimate(float(law.weights @ vals), 0.0, 0, True)
    if law_is_positive(law) is False:
        raise ValueError("max-zonoid support requires a positive law")
    if samples is None:
        samples = _sample_for(law, budget, as_rng(seed) if seed is not None else None)
    if samples.min() < -1e-12:
        raise DiagnosticError("sampled negativity beyond tolerance in a max-zonoid evaluation")
    return _mc_estimate(np.maximum((samples * u).max(axis=1), 0.0))


_KINDS = {
    "centred": lambda law, u, budget, samples: support_centred(law, u, budget, samples=samples),
    "noncentred": lambda law, u, budget, samples: support_noncentred(law, u, budget, samples=samples),
    "max": lambda law, u, budget, samples: support_max(law, u, budget, samples=samples),
}


def is_exact_law(law) -> bool:
    """Whether support functions of this law are evaluated in closed form."""
    return isinstance(law, (DiscreteLaw, GaussianLaw))


def grid_support(law, grid: DirectionGrid, kind: str = "centred", budget: int = DEFAULT_BUDGET,
                 seed=None, *, samples=None) -> list[SupportEstimate]:
    """Evaluate one support kind over a whole grid, sampling at most once."""
    if kind not in _KINDS:
        raise ValueError(f"unknown support kind {kind!r}")
    if not is_exact_law(law) and samples is None:
        samples = _sample_for(law, budget, as_rng(seed) if seed is not None else None)
    fn = _KINDS[kind]
    return [fn(law, u, budget, samples) for u in grid.directions]


# ---------------------------------------------------------------------------
# zonotope geometry (d = 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Zonotope2D:
    """Centred zonogon: Minkowski sum of segments [-g_i, g_i].

    ``generators`` holds the merged generator vectors g_i oriented into the
    upper half-plane; ``vertices`` walks the boundary counterclockwise.
    """

    generators: np.ndarray
    vertices: np.ndarray

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float).ravel()
        return float((self.vertices @ u).max())


def zonotope_2d(law: DiscreteLaw) -> Zonotope2D:
    """Vertices of the centred zonoid of a discrete planar law.

    Generators p_i x_i are oriented into the upper half-plane, merged when
    collinear, sorted by angle, and the boundary is emitted by cumulative
    sums (the standard zonogon sweep).
    """
    if not isinstance(law, DiscreteLaw):
        raise TypeError("zonotope_2d needs a discrete law")
    if law.dim != 2:
        raise ValueError("zonotope_2d is defined for d = 2 only")
    gens = law.weights[:, None] * law.atoms
    keep = np.linalg.norm(gens, axis=1) > 0.0
    gens = gens[keep]
    if gens.shape[0] == 0:
        origin = np.zeros((1, 2))
        return Zonotope2D(np.zeros((0, 2)), origin)
    # orient into [0, pi): flip anything below the x-axis (or on the negative x-axis)
    flip = (gens[:, 1] < 0) | ((gens[:, 1] == 0) & (gens[:, 0] < 0))
    gens = np.where(flip[:, None], -gens, gens)
    angles = np.arctan2(gens[:, 1], gens[:, 0])
    order = np.argsort(angles, kind="stable")
    gens, angles = gens[order], angles[order]
    merged = [gens[0].copy()]
    last_angle = angles[0]
    for g, a in zip(gens[1:], angles[1:]):
        if a - last_angle <= _COLLINEAR_TOL:
            merged[-1] += g
        else:
            merged.append(g.copy())
            last_angle = a
    gens = np.array(merged)
    if gens.shape[0] == 1:
        g = gens[0]
        return Zonotope2D(gens, np.array([-g, g]))
    start = -gens.sum(axis=0)
    chain = start + 2.0 * np.vstack([np.zeros(2), np.cumsum(gens, axis=0)])
    vertices = np.vstack([chain[:-1], -chain[:-1]])  # chain end equals -start
    _check_zonotope(law, vertices)
    return Zonotope2D(gens, vertices)


def _check_zonotope(law: DiscreteLaw, vertices: np.ndarray) -> None:
    grid = DirectionGrid.circle(64)
    for u in grid.directions:
        poly = float((vertices @ u).max())
        exact = float(law.weights @ np.abs(law.atoms @ u))
        if abs(poly - exact) > 1e-10:
            raise DiagnosticError(
                f"zonogon support mismatch at direction {u}: {poly!r} vs {exact!r}"
            )


# ---------------------------------------------------------------------------
# mean width
# ---------------------------------------------------------------------------

def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def sphere_quadrature(d: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature (points, weights) for integrals over the unit sphere.

    d = 2 uses the trapezoid rule on the angle (spectrally accurate for smooth
    integrands, O(n^-2) across the kinks of |cos|); d = 3 uses a Fibonacci
    lattice with equal weights.
    """
    if d == 2:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
        w = np.full(nodes, 2.0 * np.pi / nodes)
        return pts, w
    if d == 3:
        pts = DirectionGrid.fibonacci_sphere(nodes).directions
        w = np.full(nodes, 4.0 * np.pi / nodes)
        return pts, w
    raise ValueError("sphere quadrature is provided for d in {2, 3} only")


@dataclass(frozen=True)
class MeanWidthReport:
    expected_norm: float
    identity_value: float
    abs_difference: float
    expected_norm_se: float
    nodes: int


def mean_width_check(law, nodes: int = 10_000, budget: int = DEFAULT_BUDGET, seed=None) -> MeanWidthReport:
    """Compare E||xi|| against the mean-width functional of the centred zonoid.

    The second quantity is b(Z) d kappa_d / (4 kappa_{d-1}) where the mean
    width b comes from integrating the support function over the sphere with
    the stated quadrature; the identity reduces to (integral) / (2 kappa_{d-1}).
    """
    d = law.dim
    pts, w = sphere_quadrature(d, nodes)
    rng = as_rng(seed) if seed is not None else None
    if isinstance(law, DiscreteLaw):
        enorm = float(law.weights @ np.linalg.norm(law.atoms, axis=1))
        enorm_se = 0.0
        integral = float(w @ np.abs(pts @ law.atoms.T) @ law.weights)
    elif isinstance(law, GaussianLaw):
        samples = _sample_for(law, budget, rng)
        norms = np.linalg.norm(samples, axis=1)
        enorm = float(norms.mean())
        enorm_se = float(norms.std(ddof=1)) / math.sqrt(len(norms))
        hvals = np.array([support_centred(law, u).value for u in pts])
        integral = float(w @ hvals)
    else:
        samples = _sample_for(law, budget, rng)
        norms = np.linalg.norm(samples, axis=1)
        enorm = float(norms.mean())
        enorm_se = float(norms.std(ddof=1)) / math.sqrt(len(norms))
        integral = float(w @ np.abs(pts @ samples.T).mean(axis=1))
    identity = integral / (2.0 * unit_ball_volume(d - 1))
    return MeanWidthReport(enorm, identity, abs(enorm - identity), enorm_se, nodes)
