import math

import numpy as np
import pytest
from scipy.stats import chisquare

from zonoids.errors import SchemaError
from zonoids.laws import (
    DacunhaCastelleModel,
    DiscreteLaw,
    GaussianLaw,
    IidExchangeableModel,
    LognormalLaw,
    LognormalSwapModel,
    dacunha_prefix_law,
    law_from_json,
    law_to_json,
    lognormal_swap_law,
    permute_law,
    rademacher_law,
    sample,
    sequence_model_from_json,
    sequence_model_to_json,
    sequence_prefix,
)
from zonoids.rng import as_rng, spawn_rngs


def test_point_mass_sampling():
    law = DiscreteLaw([[1.0, 0.0]], [1.0])
    out = sample(law, 3, seed=0)
    assert out.shape == (3, 2)
    assert np.array_equal(out, np.tile([1.0, 0.0], (3, 1)))


def test_gaussian_sample_mean_clt_bound():
    law = GaussianLaw([0.0, 0.0], np.eye(2))
    out = sample(law, 10**6, seed=1)
    bound = 4.0 / math.sqrt(10**6)
    assert np.abs(out.mean(axis=0)).max() < bound


def test_gaussian_sample_covariance_within_4se():
    cov = np.array([[1.5, 0.4], [0.4, 0.8]])
    law = GaussianLaw([0.2, -0.3], cov)
    n = 200_000
    out = sample(law, n, seed=2)
    emp = np.cov(out.T, ddof=1)
    for i in range(2):
        for j in range(2):
            se = math.sqrt((cov[i, i] * cov[j, j] + cov[i, j] ** 2) / n)
            assert abs(emp[i, j] - cov[i, j]) < 4.0 * se


def test_lognormal_swap_unit_means():
    # every component of the coupled lognormal model has mean exactly one
    law = lognormal_swap_law([0.5], d=3)
    n = 200_000
    out = sample(law, n, seed=3)
    means = out.mean(axis=0)
    ses = out.std(axis=0, ddof=1) / math.sqrt(n)
    assert np.all(np.abs(means - 1.0) < 4.0 * ses)
    assert np.allclose(law.mean(), 1.0, atol=1e-12)


def test_lognormal_swap_unit_means_random_b():
    rng = as_rng(10)
    for _ in range(5):
        b = rng.uniform(-0.5, 0.5, size=rng.integers(1, 4))
        law = lognormal_swap_law(b, d=4)
        assert np.allclose(law.mean(), 1.0, atol=1e-12)


def test_discrete_frequencies_chisquare():
    weights = np.array([0.1, 0.25, 0.65])
    law = DiscreteLaw([[0.0], [1.0], [2.0]], weights)
    n = 100_000
    out = sample(law, n, seed=4).ravel()
    counts = np.array([(out == v).sum() for v in (0.0, 1.0, 2.0)])
    assert chisquare(counts, n * weights).pvalue >= 0.01


def test_discrete_rejects_bad_weights():
    with pytest.raises(ValueError):
        DiscreteLaw([[0.0], [1.0]], [0.6, 0.6])
    with pytest.raises(ValueError):
        DiscreteLaw([[0.0], [1.0]], [-0.2, 1.2])


def test_gaussian_rejects_non_psd():
    with pytest.raises(ValueError):
        GaussianLaw([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ValueError):
        GaussianLaw([0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]])


def test_gaussian_accepts_eigenvalue_noise():
    # slightly negative eigenvalues from float noise are clipped, not rejected
    cov = np.array([[1.0, 1.0], [1.0, 1.0 - 1e-12]])
    law = GaussianLaw([0.0, 0.0], cov)
    out = sample(law, 10, seed=0)
    assert out.shape == (10, 2)


def test_dacunha_path_injection():
    model = DacunhaCastelleModel()
    path, aux = sequence_prefix(model, 5, seed=0, omega=0.3)
    assert path.tolist() == [0.0, 0.0, 12.0, 0.0, 0.0]
    assert aux["k"] == 3
    path, aux = sequence_prefix(model, 5, seed=0, omega=0.9)
    assert path.tolist() == [2.0, 0.0, 0.0, 0.0, 0.0]
    # boundary omega = 1/4 belongs to the k = 4 bin
    path, _ = sequence_prefix(model, 5, seed=0, omega=0.25)
    assert path[3] == 20.0


def test_dacunha_single_nonzero_entry():
    model = DacunhaCastelleModel()
    for s in range(64):
        path, aux = sequence_prefix(model, 50, seed=s)
        nonzero = np.flatnonzero(path)
        k = aux["k"]
        if k <= 50:
            assert nonzero.tolist() == [k - 1]
            assert path[k - 1] == k * (k + 1)
        else:
            assert nonzero.size == 0


def test_lognormal_swap_b_zero_is_iid_lognormal():
    law = lognormal_swap_law([0.0], d=2)
    g = law.gaussian
    assert np.allclose(g.mean_vec, [-0.5, -0.5])
    assert np.allclose(g.cov, np.eye(2))
    path, aux = sequence_prefix(LognormalSwapModel([0.0]), 4, seed=5)
    assert aux["coupling"] == 0.0
    assert np.all(path > 0)


def test_dacunha_prefix_law_support_values():
    law = dacunha_prefix_law(4)
    assert law.atoms.shape == (5, 4)
    assert np.isclose(law.weights.sum(), 1.0)
    # atom k has value k(k+1) at coordinate k and weight 1/(k(k+1))
    for k in range(1, 5):
        assert law.atoms[k - 1, k - 1] == k * (k + 1)
        assert math.isclose(law.weights[k - 1], 1.0 / (k * (k + 1)), rel_tol=1e-12)


def test_reproducibility_and_stream_independence():
    law = GaussianLaw([0.0], [[1.0]])
    a = sample(law, 1000, seed=42)
    b = sample(law, 1000, seed=42)
    assert np.array_equal(a, b)
    r1, r2 = spawn_rngs(42, 2)
    x1, x2 = law.sample(1000, r1), law.sample(1000, r2)
    assert not np.array_equal(x1, x2)


def test_permute_law_families():
    perm = [1, 0]
    d = DiscreteLaw([[1.0, 2.0]], [1.0])
    assert permute_law(d, perm).atoms.tolist() == [[2.0, 1.0]]
    g = GaussianLaw([1.0, 2.0], [[1.0, 0.3], [0.3, 2.0]])
    pg = permute_law(g, perm)
    assert pg.mean_vec.tolist() == [2.0, 1.0]
    assert pg.cov[0, 0] == 2.0
    ln = LognormalLaw(g)
    assert permute_law(ln, perm).gaussian == pg


JSON_DOCS = [
    {"schema": 1, "type": "discrete", "atoms": [[1.0, 0.0], [0.0, 1.0]], "weights": [0.5, 0.5]},
    {"schema": 1, "type": "gaussian", "mean": [0.0, 1.0], "cov": [[1.0, 0.0], [0.0, 2.0]]},
    {"schema": 1, "type": "lognormal", "mean": [-0.5], "cov": [[1.0]]},
    {"schema": 1, "type": "elliptical", "radial": {"kind": "chi", "dof": 2},
     "matrix": [[1.0, 0.0], [0.0, 1.0]]},
    {"schema": 1, "type": "location-scale", "base": {"kind": "normal"}, "location": 1.0, "scale": 2.0},
]


@pytest.mark.parametrize("doc", JSON_DOCS, ids=[d["type"] for d in JSON_DOCS])
def test_law_json_round_trip(doc):
    law = law_from_json(doc)
    again = law_from_json(law_to_json(law))
    assert again == law
    out = sample(law, 16, seed=0)
    assert out.shape == (16, law.dim)


def test_law_json_rejects_unknown_fields():
    with pytest.raises(SchemaError):
        law_from_json({"schema": 1, "type": "gaussian", "mean": [0.0], "cov": [[1.0]], "spurious": 1})
    with pytest.raises(SchemaError):
        law_from_json({"schema": 2, "type": "gaussian", "mean": [0.0], "cov": [[1.0]]})
    with pytest.raises(SchemaError):
        law_from_json({"schema": 1, "type": "gaussian", "mean": [0.0]})


def test_sequence_model_json_round_trip():
    for doc in (
        {"schema": 1, "type": "dacunha-castelle"},
        {"schema": 1, "type": "lognormal-swap", "b": [0.5, -0.1]},
        {"schema": 1, "type": "iid-exchangeable",
         "base": {"type": "gaussian", "mean": [1.0], "cov": [[1.0]]}},
    ):
        model = sequence_model_from_json(doc)
        assert sequence_model_from_json(sequence_model_to_json(model)) == model


def test_rademacher_is_symmetric_unit():
    law = rademacher_law()
    out = sample(law, 1000, seed=9).ravel()
    assert set(np.unique(out)) == {-1.0, 1.0}


def test_iid_model_needs_scalar_base():
    with pytest.raises(ValueError):
        IidExchangeableModel(GaussianLaw([0.0, 0.0], np.eye(2)))
