"""scikit-learn style wrapper around the orbit map.

``OrbitMapTransformer`` sends points of ``V`` to their invariant coordinates
and ``inverse_transform`` picks a point of the fiber back in ``V``.
"""
from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .cli import corpus_specs, load_spec, parse_spec
from .group import Representation
from .invariants import generators, relations
from .lifting import NoSolution, fiber
from .strata import real_membership

__all__ = ["OrbitMapTransformer", "resolve_group"]


def resolve_group(group) -> Representation:
    """Accept a Representation, a spec dict, a spec path, or a shipped corpus name."""
    if isinstance(group, Representation):
        return group
    if isinstance(group, dict):
        return parse_spec(group)
    if isinstance(group, (str, Path)):
        if Path(group).is_file():
            return load_spec(group)
        shipped = dict(corpus_specs())
        key = str(group) if str(group).endswith(".json") else str(group) + ".json"
        if key in shipped:
            return parse_spec(shipped[key], source=key)
        raise ValueError("unknown group %r: not a file or a shipped spec (%s)"
                         % (group, ", ".join(sorted(shipped))))
    raise TypeError("group must be a Representation, spec dict or path, got %s" % type(group).__name__)


class OrbitMapTransformer(TransformerMixin, BaseEstimator):
    """Invariant coordinates ``(p_1(v), ..., p_m(v))`` of a finite linear group.

    Parameters
    ----------
    group : Representation, dict, str or Path
        The action; strings name a spec file or a shipped corpus entry
        such as ``"rot3"``.
    max_degree : int or None
        Degree cap for generators (default the group order).
    relation_cap : int or None
        Weighted-degree cap for the relations stored in ``relations_``.
    tol : float
        Residual tolerance for ``inverse_transform``.
    seed : int
        Seed for the multi-start fiber solver.
    """

    def __init__(self, group="rot3", max_degree=None, relation_cap=None, tol=1e-8, seed=0):
        self.group = group
        self.max_degree = max_degree
        self.relation_cap = relation_cap
        self.tol = tol
        self.seed = seed

    def _validate(self, X, n_features: int | None):
        if self.representation_.is_real:
            X = check_array(X, dtype=np.float64)
        else:
            X = np.asarray(X, dtype=complex)
            if X.ndim != 2:
                raise ValueError("expected a 2D array, got %dD" % X.ndim)
            if not np.all(np.isfinite(X)):
                raise ValueError("input contains NaN or infinity")
        if n_features is not None and X.shape[1] != n_features:
            raise ValueError("X has %d features, expected %d" % (X.shape[1], n_features))
        return X

    def fit(self, X=None, y=None):
        self.representation_ = resolve_group(self.group)
        self.basis_ = generators(self.representation_, self.max_degree)
        self.relations_ = relations(self.basis_, self.relation_cap)
        self.degrees_ = tuple(self.basis_.degrees)
        self.n_features_in_ = self.representation_.dim
        self.n_components_ = self.basis_.m
        if X is not None:
            self._validate(X, self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        X = self._validate(X, self.n_features_in_)
        Z = self.basis_.numeric()(X.astype(complex))
        return Z.real if self.representation_.is_real else Z

    def inverse_transform(self, Z):
        """One fiber point per row; for real actions rows with no real preimage become NaN."""
        check_is_fitted(self, "basis_")
        real = self.representation_.is_real
        Z = check_array(Z, dtype=np.float64) if real else np.asarray(Z, dtype=complex)
        if Z.ndim != 2 or Z.shape[1] != self.n_components_:
            raise ValueError("expected shape (n, %d), got %s" % (self.n_components_, Z.shape))
        out = np.full((Z.shape[0], self.n_features_in_), np.nan,
                      dtype=np.float64 if real else complex)
        missing = 0
        for i, z in enumerate(Z):
            if real:
                cert = real_membership(self.basis_, z, tol=self.tol, rel=self.relations_,
                                       seed=self.seed).certificate
                if cert is not None and cert.h == self.representation_.identity_index:
                    out[i] = np.real(cert.witness)
                else:
                    missing += 1
            else:
                try:
                    pts = fiber(self.basis_, z, tol=self.tol, seed=self.seed)
                except NoSolution:
                    missing += 1
                    continue
                out[i] = min(pts, key=lambda p: tuple(np.round(np.c_[p.real, p.imag].ravel(), 9)))
        if missing:
            warnings.warn("%d of %d rows have no preimage in V; returned NaN" % (missing, len(Z)),
                          RuntimeWarning, stacklevel=2)
        return out

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = True
        return tags

    def to_json(self) -> str:
        check_is_fitted(self, "basis_")
        return json.dumps({"degrees": list(self.degrees_),
                           "generators": [g.to_json() for g in self.basis_.gens]}, sort_keys=True)
