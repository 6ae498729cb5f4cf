"""Random-vector law models: validation, sampling, closed-form moments, JSON I/O.

Every law is an immutable value object with a ``dim`` property and a
``sample(n, rng)`` method returning an ``(n, dim)`` array.  Laws driven by a
standard source (normal or uniform) additionally expose ``driver_kind`` and
``sample_with_driver`` so that two laws of the same family can be compared
under common random numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SchemaError
from .rng import as_rng

WEIGHT_TOL = 1e-12
SYM_TOL = 1e-12
EIG_FLOOR = -1e-10


def _as_array(x, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _freeze(obj, **fields) -> None:
    for k, v in fields.items():
        object.__setattr__(obj, k, v)


def symmetrized_psd_factor(cov: np.ndarray) -> np.ndarray:
    """Factor L with L L^T = cov, clipping eigenvalues in [EIG_FLOOR, 0) to zero.

    Rejects matrices whose smallest eigenvalue is below the floor.
    """
    w, v = np.linalg.eigh(cov)
    if w.min() < EIG_FLOOR:
        raise ValueError(f"covariance is not positive semidefinite (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


# ---------------------------------------------------------------------------
# vector laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteLaw:
    """Finitely supported law: ``atoms`` is (m, d), ``weights`` sums to one."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        if atoms.ndim != 2 or atoms.shape[0] < 1 or atoms.shape[1] < 1:
            raise ValueError(f"atoms must be a non-empty (m, d) array, got shape {atoms.shape}")
        weights = np.asarray(self.weights, dtype=float).ravel()
        if weights.shape[0] != atoms.shape[0]:
            raise ValueError("one weight per atom required")
        if weights.min() < -1e-15:
            raise ValueError("weights must be non-negative")
        weights = np.clip(weights, 0.0, None)
        total = weights.sum()
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1 within {WEIGHT_TOL}, got {total!r}")
        if total == 0.0:
            raise ValueError("weights sum to zero")
        atoms = atoms.copy()
        atoms.flags.writeable = False
        weights = weights.copy()
        weights.flags.writeable = False
        _freeze(self, atoms=atoms, weights=weights)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    driver_kind = "uniform"

    def sample(self, n: int, rng) -> np.ndarray:
        return self.sample_with_driver(as_rng(rng).random(n))

    def sample_with_driver(self, u: np.ndarray) -> np.ndarray:
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0  # guard roundoff so u close to 1 stays in range
        idx = np.searchsorted(cum, u, side="left")
        return self.atoms[idx]

    def mean(self) -> np.ndarray:
        return self.weights @ self.atoms

    def is_positive(self, tol: float = 0.0) -> bool:
        live = self.weights > 1e-15
        return bool(np.all(self.atoms[live] > tol))

    def __eq__(self, other):
        return (
            isinstance(other, DiscreteLaw)
            and np.array_equal(self.atoms, other.atoms)
            and np.array_equal(self.weights, other.weights)
        )


@dataclass(frozen=True, eq=False)
class GaussianLaw:
    """Normal law N(mean, cov); cov symmetric PSD up to small float noise."""

    mean_vec: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _as_array(self.mean_vec, "mean", 1)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise ValueError(f"cov must be ({mean.shape[0]}, {mean.shape[0]}), got {cov.shape}")
        if np.abs(cov - cov.T).max() > SYM_TOL:
            raise ValueError("cov must be symmetric within 1e-12")
        cov = 0.5 * (cov + cov.T)
        # fail fast on indefinite input; the factor itself is recomputed lazily
        symmetrized_psd_factor(cov)
        cov = cov.copy()
        cov.flags.writeable = False
        _freeze(self, mean_vec=mean, cov=cov)

    @property
    def dim(self) -> int:
        return self.mean_vec.shape[0]

    driver_kind = "normal"

    def sample(self, n: int, rng) -> np.ndarray:
        return self.sample_with_driver(as_rng(rng).standard_normal((n, self.dim)))

    def sample_with_driver(self, z: np.ndarray) -> np.ndarray:
        return self.mean_vec + z @ symmetrized_psd_factor(self.cov).T

    def mean(self) -> np.ndarray:
        return self.mean_vec

    def __eq__(self, other):
        return (
            isinstance(other, GaussianLaw)
            and np.array_equal(self.mean_vec, other.mean_vec)
            and np.array_equal(self.cov, other.cov)
        )


@dataclass(frozen=True, eq=False)
class LognormalLaw:
    """Componentwise exponential of a Gaussian vector; strictly positive."""

    gaussian: GaussianLaw

    @property
    def dim(self) -> int:
        return self.gaussian.dim

    driver_kind = "normal"

    def sample(self, n: int, rng) -> np.ndarray:
        return np.exp(self.gaussian.sample(n, rng))

    def sample_with_driver(self, z: np.ndarray) -> np.ndarray:
        return np.exp(self.gaussian.sample_with_driver(z))

    def mean(self) -> np.ndarray:
        g = self.gaussian
        return np.exp(g.mean_vec + 0.5 * np.diag(g.cov))

    def is_positive(self, tol: float = 0.0) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, LognormalLaw) and self.gaussian == other.gaussian


@dataclass(frozen=True, eq=False)
class EllipticalLaw:
    """Scale mixture R * (A U) with U uniform on the unit sphere, R > 0.

    ``radial_mean`` is E R and must be finite and positive.  ``radial_spec``
    keeps the JSON description when the law was built from one, so reports can
    round-trip; laws built from a bare callable are not serializable.
    """

    radial_mean: float
    radial_sampler: Callable[[np.random.Generator, int], np.ndarray]
    matrix: np.ndarray
    radial_spec: dict | None = None

    def __post_init__(self):
        if not (math.isfinite(self.radial_mean) and self.radial_mean > 0):
            raise ValueError("radial_mean must be finite and > 0")
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square (d, d)")
        mat = mat.copy()
        mat.flags.writeable = False
        _freeze(self, matrix=mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    driver_kind = None

    def sample(self, n: int, rng) -> np.ndarray:
        rng = as_rng(rng)
        z = rng.standard_normal((n, self.dim))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        r = np.asarray(self.radial_sampler(rng, n), dtype=float)
        return r[:, None] * (z @ self.matrix.T)

    def mean(self) -> np.ndarray:
        return np.zeros(self.dim)

    def __eq__(self, other):
        return (
            isinstance(other, EllipticalLaw)
            and self.radial_mean == other.radial_mean
            and np.array_equal(self.matrix, other.matrix)
            and self.radial_spec == other.radial_spec
        )


@dataclass(frozen=True)
class SupportFlags:
    """Declared finiteness of the essential infimum / supremum of a scalar law."""

    inf_finite: bool
    sup_finite: bool

    @property
    def bounded(self) -> bool:
        return self.inf_finite or self.sup_finite


@dataclass(frozen=True, eq=False)
class ScalarBase:
    """Centred scalar base X (E X = 0) for a location-scale family."""

    sampler: Callable[[np.random.Generator, int], np.ndarray]
    support: SupportFlags
    spec: dict | None = None

    def sample(self, n: int, rng) -> np.ndarray:
        return np.asarray(self.sampler(as_rng(rng), n), dtype=float).ravel()

    def __eq__(self, other):
        return (
            isinstance(other, ScalarBase)
            and self.support == other.support
            and self.spec == other.spec
            and (self.spec is not None or self.sampler is other.sampler)
        )


@dataclass(frozen=True, eq=False)
class LocationScaleLaw:
    """Scalar law location + scale * X for a centred base X."""

    base: ScalarBase
    location: float
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be > 0")

    @property
    def dim(self) -> int:
        return 1

    driver_kind = None

    def sample(self, n: int, rng) -> np.ndarray:
        x = self.base.sample(n, rng)
        return (self.location + self.scale * x)[:, None]

    def mean(self) -> np.ndarray:
        return np.array([self.location])

    def __eq__(self, other):
        return (
            isinstance(other, LocationScaleLaw)
            and self.base == other.base
            and self.location == other.location
            and self.scale == other.scale
        )


@dataclass(frozen=True, eq=False)
class SamplerLaw:
    """Law known only through a sampling callable.

    ``symmetric``/``positive``/``mean_vec`` are optional declarations used by
    routines that would otherwise have to spot-check those properties.
    """

    dim: int
    sampler: Callable[[np.random.Generator, int], np.ndarray]
    name: str = "custom"
    symmetric: bool | None = None
    positive: bool | None = None
    mean_vec: np.ndarray | None = None

    driver_kind = None

    def sample(self, n: int, rng) -> np.ndarray:
        out = np.asarray(self.sampler(as_rng(rng), n), dtype=float)
        if out.ndim == 1:
            out = out[:, None]
        if out.shape != (n, self.dim):
            raise ValueError(f"sampler for {self.name!r} returned shape {out.shape}, expected ({n}, {self.dim})")
        return out

    def mean(self):
        return self.mean_vec


LawModel = (DiscreteLaw, GaussianLaw, LognormalLaw, EllipticalLaw, LocationScaleLaw, SamplerLaw)


def sample(law, n: int, seed) -> np.ndarray:
    """Draw ``n`` rows from ``law``; reproducible for a fixed seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return law.sample(n, as_rng(seed))


def law_mean(law) -> np.ndarray | None:
    """Exact mean vector where the family provides one, else None."""
    m = law.mean() if hasattr(law, "mean") else None
    return None if m is None else np.asarray(m, dtype=float)


def law_is_positive(law) -> bool | None:
    """Exact positivity where decidable: True/False, or None when unknown."""
    if isinstance(law, (DiscreteLaw, LognormalLaw)):
        return law.is_positive()
    if isinstance(law, GaussianLaw):
        # positive only when degenerate at a positive point
        return bool(np.all(law.mean_vec > 0)) if np.abs(law.cov).max() == 0.0 else False
    if isinstance(law, SamplerLaw):
        return law.positive
    return None


def permute_law(law, perm):
    """Law of the coordinate-permuted vector: component i becomes component perm[i]."""
    perm = np.asarray(perm, dtype=int)
    d = law.dim
    if sorted(perm.tolist()) != list(range(d)):
        raise ValueError(f"invalid permutation of {d} coordinates: {perm.tolist()}")
    if isinstance(law, DiscreteLaw):
        return DiscreteLaw(law.atoms[:, perm], law.weights)
    if isinstance(law, GaussianLaw):
        return GaussianLaw(law.mean_vec[perm], law.cov[np.ix_(perm, perm)])
    if isinstance(law, LognormalLaw):
        return LognormalLaw(permute_law(law.gaussian, perm))
    if isinstance(law, EllipticalLaw):
        return EllipticalLaw(law.radial_mean, law.radial_sampler, law.matrix[perm, :], law.radial_spec)
    if isinstance(law, SamplerLaw):
        base = law
        return SamplerLaw(
            base.dim,
            lambda rng, n: base.sample(n, rng)[:, perm],
            name=f"{base.name}[permuted]",
            symmetric=base.symmetric,
            positive=base.positive,
            mean_vec=None if base.mean_vec is None else base.mean_vec[perm],
        )
    raise TypeError(f"cannot permute law of type {type(law).__name__}")


def transform_law(law, matrix):
    """Law of M xi for a deterministic matrix M."""
    m = np.asarray(matrix, dtype=float)
    if isinstance(law, DiscreteLaw):
        return DiscreteLaw(law.atoms @ m.T, law.weights)
    if isinstance(law, GaussianLaw):
        return GaussianLaw(m @ law.mean_vec, m @ law.cov @ m.T)
    base = law
    return SamplerLaw(m.shape[0], lambda rng, n: base.sample(n, rng) @ m.T, name="transformed")


def lift_law(law):
    """Law of the lifted vector (1, xi) in one more dimension."""
    if isinstance(law, DiscreteLaw):
        ones = np.ones((law.atoms.shape[0], 1))
        return DiscreteLaw(np.hstack([ones, law.atoms]), law.weights)
    if isinstance(law, GaussianLaw):
        d = law.dim
        mean = np.concatenate([[1.0], law.mean_vec])
        cov = np.zeros((d + 1, d + 1))
        cov[1:, 1:] = law.cov
        return GaussianLaw(mean, cov)
    if isinstance(law, LognormalLaw):
        g = law.gaussian
        d = g.dim
        mean = np.concatenate([[0.0], g.mean_vec])
        cov = np.zeros((d + 1, d + 1))
        cov[1:, 1:] = g.cov
        return LognormalLaw(GaussianLaw(mean, cov))
    base = law
    return SamplerLaw(
        base.dim + 1,
        lambda rng, n: np.hstack([np.ones((n, 1)), base.sample(n, rng)]),
        name="lifted",
        positive=law_is_positive(base),
        mean_vec=None,
    )


def scale_law(law, c: float):
    """Law of c * xi, sampled pathwise as c times the base samples."""
    if c <= 0:
        raise ValueError("c must be > 0")
    base = law
    return SamplerLaw(
        base.dim,
        lambda rng, n: c * base.sample(n, rng),
        name="scaled",
        symmetric=getattr(base, "symmetric", None),
        positive=law_is_positive(base),
        mean_vec=None if law_mean(base) is None else c * law_mean(base),
    )


def rademacher_law() -> DiscreteLaw:
    """Scalar +-1 with equal probability."""
    return DiscreteLaw(np.array([[-1.0], [1.0]]), np.array([0.5, 0.5]))


# ---------------------------------------------------------------------------
# sequence models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DacunhaCastelleModel:
    """Sparse sequence xi_n = n(n+1) on the event omega in (1/(n+1), 1/n].

    At most one entry of any path is nonzero; every entry has unit mean.
    """


@dataclass(frozen=True, eq=False)
class LognormalSwapModel:
    """Positive sequence eta_i = exp(Z_i + sum_k b_k Z_k + mu_i).

    The coupling coefficients ``b`` are taken as the exact (finite) model; the
    mean corrections mu_i use the same finite sum so that E eta_i = 1 holds
    exactly for every i.
    """

    b: np.ndarray

    def __post_init__(self):
        b = _as_array(self.b, "b", 1)
        if b.shape[0] < 1:
            raise ValueError("b must have at least one coefficient")
        _freeze(self, b=b)

    @property
    def coupling_mass(self) -> float:
        """Sum of squared coefficients actually used by the model."""
        return float(self.b @ self.b)

    def mu(self, i: int) -> float:
        """Mean correction for component i (1-based); -Var(xi_i)/2."""
        b_i = self.b[i - 1] if i <= self.b.shape[0] else 0.0
        return -0.5 * (1.0 + self.coupling_mass + 2.0 * b_i)

    def __eq__(self, other):
        return isinstance(other, LognormalSwapModel) and np.array_equal(self.b, other.b)


@dataclass(frozen=True, eq=False)
class IidExchangeableModel:
    """I.i.d. draws from a scalar base law."""

    base: object

    def __post_init__(self):
        if self.base.dim != 1:
            raise ValueError("iid-exchangeable base must be a scalar law")

    def __eq__(self, other):
        return isinstance(other, IidExchangeableModel) and self.base == other.base


def sequence_prefix(model, n: int, seed, *, omega: float | None = None):
    """One path (xi_1, ..., xi_n) plus the auxiliary state driving it.

    For the sparse model the auxiliary state carries omega and the active
    index; for the lognormal coupling model it carries the shared normal
    drivers, so closed-form limits can be computed from it exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_rng(seed)
    if isinstance(model, DacunhaCastelleModel):
        if omega is None:
            omega = 1.0 - rng.random()  # uniform on (0, 1]
        if not 0.0 < omega <= 1.0:
            raise ValueError("omega must lie in (0, 1]")
        k = int(math.floor(1.0 / omega))
        while omega > 1.0 / k:
            k -= 1
        while omega <= 1.0 / (k + 1):
            k += 1
        path = np.zeros(n)
        if k <= n:
            path[k - 1] = k * (k + 1)
        return path, {"omega": omega, "k": k}
    if omega is not None:
        raise ValueError("omega injection is only supported for the Dacunha-Castelle model")
    if isinstance(model, LognormalSwapModel):
        b = model.b
        kk = b.shape[0]
        z = rng.standard_normal(max(n, kk))
        coupling = float(b @ z[:kk])
        mus = np.array([model.mu(i) for i in range(1, n + 1)])
        path = np.exp(z[:n] + coupling + mus)
        return path, {"z": z[:kk].copy(), "coupling": coupling}
    if isinstance(model, IidExchangeableModel):
        path = model.base.sample(n, rng).ravel()
        return path, {}
    raise TypeError(f"unknown sequence model {type(model).__name__}")


def dacunha_prefix_law(n: int) -> DiscreteLaw:
    """Exact joint law of the first n sparse-sequence coordinates.

    Atom k (k = 1..n) is k(k+1) e_k with probability 1/(k(k+1)); the
    remaining mass 1/(n+1) sits at the origin.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    atoms = np.zeros((n + 1, n))
    weights = np.empty(n + 1)
    for k in range(1, n + 1):
        atoms[k - 1, k - 1] = k * (k + 1)
        weights[k - 1] = 1.0 / (k * (k + 1))
    weights[n] = 1.0 / (n + 1)
    weights = weights / weights.sum()  # exact up to one rounding of the unit total
    return DiscreteLaw(atoms, weights)


def lognormal_swap_law(b, d: int) -> LognormalLaw:
    """Joint law of the first d coordinates of the lognormal coupling model.

    The log-vector is Gaussian with cov_ij = delta_ij + b_i + b_j + sum b^2
    and the mean corrections of the model, so the law sits in the exact
    lognormal family.
    """
    model = LognormalSwapModel(np.asarray(b, dtype=float))
    if d < 1:
        raise ValueError("d must be >= 1")
    bfull = np.zeros(d)
    kk = min(d, model.b.shape[0])
    bfull[:kk] = model.b[:kk]
    s2 = model.coupling_mass
    cov = np.add.outer(bfull, bfull) + s2 + np.eye(d)
    mean = np.array([model.mu(i) for i in range(1, d + 1)])
    return LognormalLaw(GaussianLaw(mean, cov))


# ---------------------------------------------------------------------------
# processes (families of laws indexed by time)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianProcess:
    """Gaussian process given by mean and covariance functions of time."""

    mean_fn: Callable[[float], float]
    cov_fn: Callable[[float, float], float]

    def law_at(self, times) -> GaussianLaw:
        times = [float(t) for t in times]
        mean = np.array([self.mean_fn(t) for t in times])
        cov = np.array([[self.cov_fn(s, t) for t in times] for s in times])
        return GaussianLaw(mean, cov)


@dataclass(frozen=True)
class ExpGaussianProcess:
    """Positive process exp(xi_t) for a Gaussian xi; joint laws are lognormal."""

    base: GaussianProcess
    spec: dict | None = None

    def law_at(self, times) -> LognormalLaw:
        return LognormalLaw(self.base.law_at(times))


@dataclass(frozen=True)
class SamplerProcess:
    """Process known only through a joint sampler over finite time sets."""

    sample_at: Callable[[tuple, np.random.Generator, int], np.ndarray]
    name: str = "custom"
    positive: bool | None = None

    def law_at(self, times) -> SamplerLaw:
        times = tuple(float(t) for t in times)
        return SamplerLaw(
            len(times),
            lambda rng, n: self.sample_at(times, rng, n),
            name=f"{self.name}@{times}",
            positive=self.positive,
        )


def brownian_cov(s: float, t: float) -> float:
    """Covariance of double-sided Brownian motion pinned at zero."""
    return 0.5 * (abs(s) + abs(t) - abs(t - s))


def gbm_process(drift_correction: bool = True) -> ExpGaussianProcess:
    """exp(W_t - |t|/2) for double-sided Brownian W (or exp(W_t) without the drift)."""
    mean_fn = (lambda t: -0.5 * abs(t)) if drift_correction else (lambda t: 0.0)
    spec = {"schema": 1, "type": "gbm", "drift_correction": bool(drift_correction)}
    return ExpGaussianProcess(GaussianProcess(mean_fn, brownian_cov), spec)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

_RADIAL_KINDS = ("constant", "chi", "exponential", "uniform")
_BASE_KINDS = ("normal", "laplace", "student-t", "uniform")


def _check_fields(doc: dict, required: set[str], what: str, optional: set[str] = frozenset()) -> None:
    if not isinstance(doc, dict):
        raise SchemaError(f"{what}: expected a JSON object")
    if "schema" in doc and doc["schema"] != 1:
        raise SchemaError(f"{what}: unsupported schema version {doc['schema']!r}")
    unknown = set(doc) - set(required) - set(optional) - {"schema"}
    if unknown:
        raise SchemaError(f"{what}: unknown fields {sorted(unknown)}")
    missing = set(required) - set(doc)
    if missing:
        raise SchemaError(f"{what}: missing fields {sorted(missing)}")


def _radial_from_spec(spec: dict):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("radial spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "constant":
        _check_fields(spec, {"kind", "value"}, "radial")
        value = float(spec["value"])
        if value <= 0:
            raise SchemaError("radial constant must be > 0")
        return value, lambda rng, n: np.full(n, value)
    if kind == "chi":
        _check_fields(spec, {"kind", "dof"}, "radial")
        dof = int(spec["dof"])
        mean = math.sqrt(2.0) * math.gamma((dof + 1) / 2) / math.gamma(dof / 2)
        return mean, lambda rng, n: np.sqrt(rng.chisquare(dof, n))
    if kind == "exponential":
        _check_fields(spec, {"kind", "rate"}, "radial")
        rate = float(spec["rate"])
        return 1.0 / rate, lambda rng, n: rng.exponential(1.0 / rate, n)
    if kind == "uniform":
        _check_fields(spec, {"kind", "low", "high"}, "radial")
        low, high = float(spec["low"]), float(spec["high"])
        if not 0 < low < high:
            raise SchemaError("radial uniform requires 0 < low < high")
        return 0.5 * (low + high), lambda rng, n: rng.uniform(low, high, n)
    raise SchemaError(f"unknown radial kind {kind!r}; expected one of {_RADIAL_KINDS}")


def _scalar_base_from_spec(spec: dict) -> ScalarBase:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("base spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "normal":
        _check_fields(spec, {"kind"}, "base")
        return ScalarBase(lambda rng, n: rng.standard_normal(n), SupportFlags(False, False), dict(spec))
    if kind == "laplace":
        _check_fields(spec, {"kind"}, "base")
        return ScalarBase(lambda rng, n: rng.laplace(0.0, 1.0, n), SupportFlags(False, False), dict(spec))
    if kind == "student-t":
        _check_fields(spec, {"kind", "dof"}, "base")
        dof = float(spec["dof"])
        if dof <= 1:
            raise SchemaError("student-t base needs dof > 1 to be integrable")
        return ScalarBase(lambda rng, n: rng.standard_t(dof, n), SupportFlags(False, False), dict(spec))
    if kind == "uniform":
        _check_fields(spec, {"kind", "halfwidth"}, "base")
        h = float(spec["halfwidth"])
        if h <= 0:
            raise SchemaError("uniform base needs halfwidth > 0")
        return ScalarBase(lambda rng, n: rng.uniform(-h, h, n), SupportFlags(True, True), dict(spec))
    raise SchemaError(f"unknown base kind {kind!r}; expected one of {_BASE_KINDS}")


def scalar_base_from_json(spec: dict) -> ScalarBase:
    """Parse a scalar base spec ({"kind": "normal"} and friends)."""
    return _scalar_base_from_spec(spec)


def law_from_json(doc: dict):
    """Parse a law document; unknown fields are rejected."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("law document must be an object with a 'type' field")
    t = doc["type"]
    if t == "discrete":
        _check_fields(doc, {"type", "atoms", "weights"}, "discrete law")
        return DiscreteLaw(np.asarray(doc["atoms"], dtype=float), np.asarray(doc["weights"], dtype=float))
    if t == "gaussian":
        _check_fields(doc, {"type", "mean", "cov"}, "gaussian law")
        return GaussianLaw(np.asarray(doc["mean"], dtype=float), np.asarray(doc["cov"], dtype=float))
    if t == "lognormal":
        _check_fields(doc, {"type", "mean", "cov"}, "lognormal law")
        return LognormalLaw(GaussianLaw(np.asarray(doc["mean"], dtype=float), np.asarray(doc["cov"], dtype=float)))
    if t == "elliptical":
        _check_fields(doc, {"type", "radial", "matrix"}, "elliptical law")
        mean, sampler = _radial_from_spec(doc["radial"])
        return EllipticalLaw(mean, sampler, np.asarray(doc["matrix"], dtype=float), dict(doc["radial"]))
    if t == "location-scale":
        _check_fields(doc, {"type", "base", "location", "scale"}, "location-scale law")
        return LocationScaleLaw(_scalar_base_from_spec(doc["base"]), float(doc["location"]), float(doc["scale"]))
    raise SchemaError(f"unknown law type {t!r}")


def law_to_json(law) -> dict:
    if isinstance(law, DiscreteLaw):
        return {"schema": 1, "type": "discrete", "atoms": law.atoms.tolist(), "weights": law.weights.tolist()}
    if isinstance(law, GaussianLaw):
        return {"schema": 1, "type": "gaussian", "mean": law.mean_vec.tolist(), "cov": law.cov.tolist()}
    if isinstance(law, LognormalLaw):
        g = law.gaussian
        return {"schema": 1, "type": "lognormal", "mean": g.mean_vec.tolist(), "cov": g.cov.tolist()}
    if isinstance(law, EllipticalLaw):
        if law.radial_spec is None:
            raise SchemaError("elliptical law with a bare radial callable is not serializable")
        return {"schema": 1, "type": "elliptical", "radial": dict(law.radial_spec), "matrix": law.matrix.tolist()}
    if isinstance(law, LocationScaleLaw):
        if law.base.spec is None:
            raise SchemaError("location-scale law with a bare base callable is not serializable")
        return {
            "schema": 1,
            "type": "location-scale",
            "base": dict(law.base.spec),
            "location": law.location,
            "scale": law.scale,
        }
    raise SchemaError(f"law of type {type(law).__name__} is not serializable")


def sequence_model_from_json(doc: dict):
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("sequence model document must be an object with a 'type' field")
    t = doc["type"]
    if t == "dacunha-castelle":
        _check_fields(doc, {"type"}, "dacunha-castelle model")
        return DacunhaCastelleModel()
    if t == "lognormal-swap":
        _check_fields(doc, {"type", "b"}, "lognormal-swap model")
        return LognormalSwapModel(np.asarray(doc["b"], dtype=float))
    if t == "iid-exchangeable":
        _check_fields(doc, {"type", "base"}, "iid-exchangeable model")
        return IidExchangeableModel(law_from_json(doc["base"]))
    raise SchemaError(f"unknown sequence model type {t!r}")


def sequence_model_to_json(model) -> dict:
    if isinstance(model, DacunhaCastelleModel):
        return {"schema": 1, "type": "dacunha-castelle"}
    if isinstance(model, LognormalSwapModel):
        return {"schema": 1, "type": "lognormal-swap", "b": model.b.tolist()}
    if isinstance(model, IidExchangeableModel):
        return {"schema": 1, "type": "iid-exchangeable", "base": law_to_json(model.base)}
    raise SchemaError(f"sequence model of type {type(model).__name__} is not serializable")


def process_from_json(doc: dict):
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("process document must be an object with a 'type' field")
    if doc["type"] == "gbm":
        _check_fields(doc, {"type"}, "gbm process", optional={"drift_correction"})
        return gbm_process(bool(doc.get("drift_correction", True)))
    raise SchemaError(f"unknown process type {doc['type']!r}")


def process_to_json(process) -> dict:
    spec = getattr(process, "spec", None)
    if spec is None:
        raise SchemaError(f"process of type {type(process).__name__} is not serializable")
    return dict(spec)
