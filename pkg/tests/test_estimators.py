import warnings

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from quasiquot.catalog import dihedral
from quasiquot.estimators import OrbitMapTransformer, resolve_group


def test_params_and_clone():
    est = OrbitMapTransformer(group="rot4", tol=1e-9, seed=3)
    assert est.get_params()["group"] == "rot4"
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_resolve_group_variants(corpus_dir):
    assert resolve_group("rot3").order == 3
    assert resolve_group("rot3.json").order == 3
    assert resolve_group(corpus_dir / "d8.json").order == 8
    D = dihedral(5)
    assert resolve_group(D) is D
    with pytest.raises(ValueError, match="unknown group"):
        resolve_group("rot99")
    with pytest.raises(TypeError):
        resolve_group(42)


def test_transform_shapes_and_values():
    X = np.random.default_rng(0).standard_normal((7, 2))
    est = OrbitMapTransformer(group="rot2").fit(X)
    Z = est.transform(X)
    assert Z.shape == (7, 3) and Z.dtype == np.float64
    x, y = X[:, 0], X[:, 1]
    assert np.allclose(Z, np.c_[x**2 + y**2, x**2 - y**2, 2 * x * y])
    assert est.n_features_in_ == 2 and est.n_components_ == 3 and est.degrees_ == (2, 2, 2)


def test_round_trip_real_group():
    X = np.random.default_rng(1).standard_normal((10, 2))
    est = OrbitMapTransformer(group="rot3").fit(X)
    Z = est.transform(X)
    back = est.inverse_transform(Z)
    assert np.allclose(est.transform(back), Z, atol=1e-8)


def test_inverse_transform_marks_missing_real_preimage():
    est = OrbitMapTransformer(group="rot2").fit()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = est.inverse_transform([[-1.0, -1.0, 0.0], [2.0, 0.0, 2.0]])
    assert np.isnan(out[0]).all()
    assert np.allclose(out[1] @ out[1], 2.0)
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_complex_group_round_trip():
    X = np.array([[1 + 1j], [0.5 - 2j]])
    est = OrbitMapTransformer(group="cz3").fit(X)
    Z = est.transform(X)
    assert np.allclose(Z[:, 0], X[:, 0] ** 3)
    back = est.inverse_transform(Z)
    assert np.allclose(back[:, 0] ** 3, Z[:, 0], atol=1e-8)


def test_validation_errors():
    est = OrbitMapTransformer(group="rot2")
    with pytest.raises(NotFittedError):
        est.transform([[1.0, 2.0]])
    est.fit()
    with pytest.raises(ValueError):
        est.transform([[1.0, 2.0, 3.0]])
    with pytest.raises(ValueError):
        est.transform([[np.nan, 1.0]])
    with pytest.raises(ValueError):
        est.inverse_transform([[1.0, 2.0]])
