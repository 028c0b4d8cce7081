"""Isotropy stratification of the quotient and certificates for its real points."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .exact import CycloScalar, ExactMatrix, kernel
from .group import (
    IsotropyClass,
    center_involutions,
    is_pseudoreflection,
    isotropy,
    isotropy_classes,
)
from .invariants import InvariantBasis, RelationSet, relations
from .poly import NumericPolyMap, Poly, compose

__all__ = [
    "Stratum",
    "CodimOneComponent",
    "Stratification",
    "TwistedChart",
    "RealPointCertificate",
    "RealMembership",
    "stratify",
    "is_principal",
    "stratum_of",
    "twisted_chart",
    "real_membership",
    "sample_real_points",
    "gauss_newton",
]


@dataclass(frozen=True)
class Stratum:
    class_index: int
    order: int
    fixed_dim: int
    codim: int

    @property
    def principal(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class CodimOneComponent:
    """Closure of a codimension-one stratum, with its pseudoreflection and order."""

    index: int
    class_index: int
    pseudoreflection: int
    order: int


@dataclass(frozen=True)
class Stratification:
    basis: InvariantBasis
    classes: tuple[IsotropyClass, ...]
    strata: tuple[Stratum, ...]
    codim_one: tuple[CodimOneComponent, ...]
    reflection_locus: tuple[tuple[tuple[CycloScalar, ...], ...], ...]
    deep_locus: tuple[tuple[tuple[CycloScalar, ...], ...], ...]

    @property
    def principal(self) -> Stratum:
        return next(s for s in self.strata if s.principal)


def stratify(basis: InvariantBasis) -> Stratification:
    """One stratum per conjugacy class of isotropy groups."""
    rep = basis.rep
    classes = tuple(isotropy_classes(rep))
    strata = []
    codim_one = []
    v1, v2 = [], []
    for ci, cls in enumerate(classes):
        codim = rep.dim - cls.fixed_dim
        strata.append(Stratum(ci, cls.order, cls.fixed_dim, codim))
        if codim == 1:
            K = cls.representative.element_indices
            best = None
            for i in K:
                ok, r = is_pseudoreflection(rep.elements[i])
                if ok and r == cls.order:
                    best = i
                    break
            if best is None:
                raise RuntimeError("codimension-one isotropy group %r is not cyclic" % (K,))
            codim_one.append(CodimOneComponent(len(codim_one), ci, best, cls.order))
            v1.extend(m.fixed_space for m in cls.members)
        elif codim >= 2:
            v2.extend(m.fixed_space for m in cls.members)
    return Stratification(basis, classes, tuple(strata), tuple(codim_one), tuple(v1), tuple(v2))


def _as_exact(rep, v):
    n = rep.conductor
    return tuple(x if isinstance(x, CycloScalar) else CycloScalar.rational(x, n) for x in v)


def is_principal(basis: InvariantBasis, v: Sequence) -> bool:
    """True iff the isotropy group of ``v`` is trivial."""
    return isotropy(basis.rep, _as_exact(basis.rep, v)).order == 1


def stratum_of(strat: Stratification, v: Sequence) -> int:
    """Index of the stratum containing the image of ``v``."""
    rep = strat.basis.rep
    K = isotropy(rep, _as_exact(rep, v)).element_indices
    for ci, cls in enumerate(strat.classes):
        if any(m.element_indices == K for m in cls.members):
            return ci
    raise RuntimeError("isotropy group %r missing from the isotropy classes" % (K,))


# ---------------------------------------------------------------------------
# twisted real forms W_h = W_{h+} + i W_{h-}
# ---------------------------------------------------------------------------


def eigenbasis(h: ExactMatrix, value: int) -> list[tuple[CycloScalar, ...]]:
    ident = ExactMatrix.identity(h.nrows, h.n)
    return [tuple(v) for v in kernel((h - ident.scale(value)).rows, h.ncols, h.n)]


@dataclass
class TwistedChart:
    """Real coordinates on ``W_h``: ``w = sum a_k u_k + i sum b_j v_j``.

    ``polys`` are the generators restricted to ``W_h`` as polynomials in the
    real parameters ``(a, b)``; their coefficients are real.
    """

    h: int
    plus: list
    minus: list
    conductor: int
    embedding: ExactMatrix
    polys: tuple[Poly, ...]

    @cached_property
    def numeric(self) -> NumericPolyMap:
        return NumericPolyMap(self.polys, real=True)

    @cached_property
    def embedding_numeric(self) -> np.ndarray:
        return self.embedding.numeric()

    def point(self, params: np.ndarray) -> np.ndarray:
        return self.embedding_numeric @ np.asarray(params, dtype=complex)


def twisted_chart(basis: InvariantBasis, h: int) -> TwistedChart:
    rep = basis.rep
    cache = rep.meta.setdefault("twisted_charts", {})
    key = (id(basis), h)
    if key in cache:
        return cache[key][1]
    n = rep.conductor
    N = n * 4 // math.gcd(n, 4)
    hm = rep.elements[h]
    plus = eigenbasis(hm, 1)
    minus = eigenbasis(hm, -1)
    if len(plus) + len(minus) != rep.dim:
        raise ValueError("element %d is not an involution" % h)
    i_unit = CycloScalar.zeta(N, N // 4)
    cols = [tuple(x.lift(N) for x in u) for u in plus]
    cols += [tuple(x.lift(N) * i_unit for x in v) for v in minus]
    emb = ExactMatrix.from_columns(cols, N) if cols else ExactMatrix.zeros(rep.dim, 0, N)
    forms = [Poly.linear_form(row, N) for row in emb.rows]
    polys = tuple(compose(p.lift(N), forms) for p in basis.gens)
    for p in polys:
        if not p.is_real():
            raise RuntimeError("generator restricted to W_h has non-real coefficients")
    chart = TwistedChart(h, plus, minus, N, emb, polys)
    cache[key] = (basis, chart)
    return chart


def gauss_newton(fmap: NumericPolyMap, target: np.ndarray, starts: np.ndarray,
                 max_iter: int = 40, tol: float = 1e-10):
    """Batched damped Gauss-Newton (Levenberg-Marquardt) for ``fmap(x) = target``.

    Works for real or complex unknowns; returns ``(best_x, best_residual)``
    with one row per start.
    """
    X = np.array(starts, copy=True)
    target = np.asarray(target)
    lam = np.full(X.shape[0], 1e-3)
    res = np.linalg.norm(fmap(X) - target, axis=1)
    p = X.shape[1]
    eye = np.eye(p)
    for _ in range(max_iter):
        active = res > tol
        if not active.any():
            break
        Xa = X[active]
        r = fmap(Xa) - target
        J = fmap.jacobian(Xa)
        JH = np.conj(np.transpose(J, (0, 2, 1)))
        A = JH @ J
        g = (JH @ r[:, :, None])[:, :, 0]
        la = lam[active]
        diag = np.einsum("sii->si", A).real
        A = A + (la[:, None] * (diag + 1e-12))[:, :, None] * eye[None]
        try:
            step = np.linalg.solve(A, -g[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            step = -np.array([np.linalg.lstsq(a, gg, rcond=None)[0] for a, gg in zip(A, g)])
        Xn = Xa + step
        rn = np.linalg.norm(fmap(Xn) - target, axis=1)
        better = rn < res[active]
        idx = np.flatnonzero(active)
        X[idx[better]] = Xn[better]
        res[idx[better]] = rn[better]
        lam[idx[better]] = np.maximum(lam[idx[better]] / 3.0, 1e-12)
        lam[idx[~better]] = lam[idx[~better]] * 4.0
    return X, res


@dataclass(frozen=True)
class RealPointCertificate:
    point: tuple[float, ...]
    h: int
    params: tuple[float, ...]
    witness: tuple[complex, ...]
    residual: float


@dataclass(frozen=True)
class RealMembership:
    status: str  # "certified" | "not-on-Y" | "no-certificate"
    certificate: RealPointCertificate | None = None
    relation_residual: float = 0.0
    best_residual: float = math.inf


def default_relations(basis: InvariantBasis) -> RelationSet:
    """Relations at the default weighted-degree cap, cached per basis."""
    cached = basis.__dict__.get("_default_relations")
    if cached is None:
        cached = relations(basis)
        object.__setattr__(basis, "_default_relations", cached)
    return cached


def _relation_residual(rel: RelationSet, z: np.ndarray) -> float:
    if not rel.relations:
        return 0.0
    vals = NumericPolyMap(rel.relations)(z.astype(complex))
    return float(np.max(np.abs(vals)))


def real_membership(basis: InvariantBasis, point: Sequence[float], tol: float = 1e-8,
                    rel: RelationSet | None = None, seed: int = 0, starts: int = 16,
                    max_iter: int = 40, residual_tol: float = 1e-10) -> RealMembership:
    """Find ``h`` (identity or a central involution) with ``point`` in ``p(W_h)``."""
    z = np.asarray(point, dtype=float)
    if z.shape != (basis.m,):
        raise ValueError("point has shape %s, expected (%d,)" % (z.shape, basis.m))
    rel = default_relations(basis) if rel is None else rel
    rres = _relation_residual(rel, z)
    if rres > tol:
        return RealMembership("not-on-Y", relation_residual=rres)
    rep = basis.rep
    candidates = [rep.identity_index] + center_involutions(rep)
    # homogeneity: p(s u) = s . p(u), so solve at unit scale and map back
    scale = max((abs(zj) ** (1.0 / d) for zj, d in zip(z, basis.degrees)), default=0.0)
    scale = scale if scale > 0 else 1.0
    weights = scale ** np.asarray(basis.degrees, dtype=float)
    zs = z / weights
    rng = np.random.default_rng(seed)
    best = math.inf
    target_tol = residual_tol * max(1.0, float(np.linalg.norm(z)))
    for h in candidates:
        chart = twisted_chart(basis, h)
        p = rep.dim
        X0 = rng.standard_normal((starts, p)) / math.sqrt(p)
        X0[0] = 0.0
        X, _ = gauss_newton(chart.numeric, zs, X0, max_iter=max_iter,
                            tol=target_tol / float(weights.max()))
        res = np.linalg.norm((chart.numeric(X) - zs) * weights, axis=1)
        k = int(np.argmin(res))
        best = min(best, float(res[k]))
        if res[k] <= target_tol:
            params = X[k] * scale
            cert = RealPointCertificate(
                tuple(float(x) for x in z), h, tuple(float(x) for x in params),
                tuple(complex(x) for x in chart.point(params)), float(res[k]),
            )
            return RealMembership("certified", cert, rres, float(res[k]))
    return RealMembership("no-certificate", None, rres, best)


def sample_real_points(basis: InvariantBasis, count: int, seed: int = 0,
                       twists: Sequence[int] | None = None, radius: float = 1.0):
    """Real points of the quotient variety: images of ``W_h`` for the given ``h``.

    Returns a list of ``(point, h)`` pairs; ``h`` cycles through ``twists``
    (identity plus all central involutions by default).
    """
    rep = basis.rep
    if twists is None:
        twists = [rep.identity_index] + center_involutions(rep)
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        h = twists[k % len(twists)]
        chart = twisted_chart(basis, h)
        params = rng.uniform(-radius, radius, size=rep.dim)
        out.append((chart.numeric(params), h))
    return out
