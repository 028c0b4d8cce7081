"""The weighted scaling action on quotient coordinates and quasilinearization.

Maps between quotient varieties are carried as polynomial maps ``R^m -> R^n``:
only the weighted Taylor data up to the largest target weight matters for the
limit ``f_0 = lim_{t->0} t^-1 . f(t . y)``, so a polynomial truncation of a
smooth germ loses nothing here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import CycloScalar
from .invariants import InvariantBasis, RelationSet, ideal_membership
from .poly import NumericPolyMap, Poly, WeightSystem, compose, weighted_component
from .strata import Stratification, gauss_newton, sample_real_points

__all__ = [
    "QuotientMap",
    "LowOrderObstruction",
    "MapVerdict",
    "ConvergenceTable",
    "CodimOneMatching",
    "scale",
    "scaled_family",
    "quasilinear_part",
    "is_quasilinear",
    "drop_low_terms",
    "maps_Y_to_Z",
    "convergence_table",
    "codim_one_matching",
]


class LowOrderObstruction(ValueError):
    """Sub-weight terms of a component do not vanish on the source variety."""

    def __init__(self, offending: list[tuple[int, tuple[int, ...]]]):
        self.offending = offending
        desc = ", ".join("component %d (degrees %s)" % (i, list(d)) for i, d in offending)
        super().__init__("low-order obstruction: " + desc)


@dataclass(frozen=True)
class QuotientMap:
    """Polynomial map from weighted ``R^m`` to weighted ``R^n``."""

    source_weights: WeightSystem
    target_weights: WeightSystem
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != len(self.target_weights):
            raise ValueError("%d components for %d target weights"
                             % (len(self.components), len(self.target_weights)))
        for i, c in enumerate(self.components):
            if c.nvars != len(self.source_weights):
                raise ValueError("component %d has %d variables, expected %d"
                                 % (i, c.nvars, len(self.source_weights)))
        if len({c.n for c in self.components}) > 1:
            raise ValueError("components over different conductors")

    @classmethod
    def between(cls, source: InvariantBasis, target: InvariantBasis,
                components: Sequence[Poly]) -> "QuotientMap":
        return cls(source.weight_system, target.weight_system, tuple(components))

    @classmethod
    def identity(cls, w: WeightSystem, n: int = 1) -> "QuotientMap":
        m = len(w)
        return cls(w, w, tuple(Poly.var(i, m, n) for i in range(m)))

    @property
    def conductor(self) -> int:
        return self.components[0].n

    def lift(self, N: int) -> "QuotientMap":
        return QuotientMap(self.source_weights, self.target_weights,
                           tuple(c.lift(N) for c in self.components))

    def numeric(self) -> NumericPolyMap:
        return NumericPolyMap(self.components)

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "source_weights": list(self.source_weights.weights),
            "target_weights": list(self.target_weights.weights),
            "components": [c.to_json() for c in self.components],
        }

    def __eq__(self, other):
        if not isinstance(other, QuotientMap):
            return NotImplemented
        return (self.source_weights == other.source_weights
                and self.target_weights == other.target_weights
                and self.components == other.components)

    def __hash__(self):
        return hash((self.source_weights, self.target_weights, self.components))


def scale(t, y: Sequence, w: WeightSystem) -> tuple:
    """The weighted action ``t . y = (t^d_1 y_1, ..., t^d_m y_m)``."""
    if len(y) != len(w):
        raise ValueError("point of length %d for %d weights" % (len(y), len(w)))
    return tuple(t ** d * yi for d, yi in zip(w.weights, y))


def _as_rational(t) -> Fraction:
    if isinstance(t, CycloScalar):
        t = t.to_fraction()
    return Fraction(t)


def scaled_family(f: QuotientMap, t) -> QuotientMap:
    """``f_t(y) = t^-1 . f(t . y)``: coefficient ``c_alpha t^(|alpha| - e_i)``."""
    t = _as_rational(t)
    if t == 0:
        raise ValueError("t = 0 is the limit; use quasilinear_part")
    d = f.source_weights
    comps = []
    for c, e in zip(f.components, f.target_weights.weights):
        terms = {a: coef * (t ** (d.degree(a) - e)) for a, coef in c.terms.items()}
        comps.append(Poly(c.nvars, terms, c.n))
    return QuotientMap(f.source_weights, f.target_weights, tuple(comps))


def quasilinear_part(f: QuotientMap) -> QuotientMap:
    """Keep exactly the terms with ``|alpha| = e_i`` in component ``i``."""
    comps = tuple(
        weighted_component(c, f.source_weights, e)
        for c, e in zip(f.components, f.target_weights.weights)
    )
    return QuotientMap(f.source_weights, f.target_weights, comps)


def is_quasilinear(f: QuotientMap) -> bool:
    d = f.source_weights
    return all(
        all(d.degree(a) == e for a in c.terms)
        for c, e in zip(f.components, f.target_weights.weights)
    )


def drop_low_terms(f: QuotientMap, rel_Y: RelationSet) -> QuotientMap:
    """Remove sub-weight terms after certifying that they vanish on Y.

    The part of component ``i`` of weighted degree below ``e_i`` must lie in
    the (degree-truncated) ideal of Y; otherwise ``LowOrderObstruction``.
    """
    d = f.source_weights
    if d != rel_Y.basis.weight_system:
        raise ValueError("map source weights %s differ from Y's %s"
                         % (d.weights, rel_Y.basis.weight_system.weights))
    offending = []
    comps = []
    for i, (c, e) in enumerate(zip(f.components, f.target_weights.weights)):
        low = Poly(c.nvars, {a: v for a, v in c.terms.items() if d.degree(a) < e}, c.n)
        if low:
            verdict = ideal_membership(rel_Y, low)
            if verdict.member is not True:
                bad = sorted({d.degree(a) for a in low.terms}) if verdict.member is None \
                    else list(verdict.failing_degrees)
                offending.append((i, tuple(bad)))
                continue
        comps.append(c - low)
    if offending:
        raise LowOrderObstruction(offending)
    return QuotientMap(f.source_weights, f.target_weights, tuple(comps))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MapVerdict:
    passes: bool
    max_residual: float
    samples: int
    certified: bool | None
    certified_degree: int

    @property
    def status(self) -> str:
        if not self.passes or self.certified is False:
            return "fails"
        if self.certified:
            return "certified to degree %d" % self.certified_degree
        return "passes numerically"


def _relation_residuals(rel: RelationSet, Z: np.ndarray) -> np.ndarray:
    if not rel.relations:
        return np.zeros(Z.shape[0])
    rmap = NumericPolyMap(rel.relations)
    absmap = NumericPolyMap(rel.relations)
    absmap.coef = np.abs(absmap.coef)
    vals = np.abs(rmap(Z.astype(complex)))
    scale_ = absmap(np.abs(Z).astype(complex)).real
    return np.max(vals / np.maximum(scale_, 1.0), axis=1)


def maps_Y_to_Z(f: QuotientMap, rel_Y: RelationSet, rel_Z: RelationSet, samples: int = 50,
                tol: float = 1e-8, seed: int = 0) -> MapVerdict:
    """Check that ``f`` sends Y into Z: numerically on samples, and exactly
    by pulling back Z's relations into Y's truncated ideal."""
    pts = sample_real_points(rel_Y.basis, samples, seed=seed)
    Y = np.array([p for p, _ in pts], dtype=complex)
    Z = f.numeric()(Y)
    res = _relation_residuals(rel_Z, Z)
    max_res = float(res.max()) if len(res) else 0.0
    certified: bool | None = True
    cert_deg = rel_Y.weighted_degree_bound
    N = math.lcm(f.conductor, rel_Z.basis.rep.conductor, rel_Y.basis.rep.conductor)
    comps = [c.lift(N) for c in f.components]
    for r in rel_Z.relations:
        pulled = compose(r.lift(N), comps)
        verdict = ideal_membership(rel_Y, pulled)
        if verdict.member is False:
            certified = False
            break
        if verdict.member is None:
            certified = None
        cert_deg = min(cert_deg, verdict.certified_degree) if verdict.member else cert_deg
    return MapVerdict(max_res <= tol, max_res, samples, certified, cert_deg)


@dataclass(frozen=True)
class ConvergenceTable:
    ts: tuple[float, ...]
    deviations: tuple[float, ...]
    slope: float

    @property
    def monotone(self) -> bool:
        return all(a > b for a, b in zip(self.deviations, self.deviations[1:]))


def convergence_table(f: QuotientMap, basis_Y: InvariantBasis,
                      ts: Sequence = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)),
                      samples: int = 50, seed: int = 0, radius: float = 1.0) -> ConvergenceTable:
    """Max deviation ``|f_t - f_0|`` over sampled points of Y, and its log-log slope."""
    f0 = quasilinear_part(f).numeric()
    pts = sample_real_points(basis_Y, samples, seed=seed, radius=radius)
    Y = np.array([p for p, _ in pts], dtype=complex)
    base = f0(Y)
    devs = []
    for t in ts:
        ft = scaled_family(f, t).numeric()
        devs.append(float(np.max(np.abs(ft(Y) - base))))
    lt = np.log([float(t) for t in ts])
    ld = np.log(np.maximum(devs, 1e-300))
    slope = float(np.polyfit(lt, ld, 1)[0])
    return ConvergenceTable(tuple(float(t) for t in ts), tuple(devs), slope)


@dataclass(frozen=True)
class CodimOneMatching:
    """Which closure ``D_j`` each ``C_i`` lands in, with orders ``(r_i, s_j)``."""

    pairs: tuple[tuple[int, int | None, int, int | None], ...]

    @property
    def ok(self) -> bool:
        targets = [j for _, j, _, _ in self.pairs]
        if any(j is None for j in targets) or len(set(targets)) != len(targets):
            return False
        return all(r == s for _, _, r, s in self.pairs)


def _fixed_chart(strat: Stratification, comp) -> tuple[np.ndarray, NumericPolyMap]:
    rep = strat.basis.rep
    member = strat.classes[comp.class_index].representative
    basis = np.array([[complex(x) for x in v] for v in member.fixed_space], dtype=complex)
    basis = basis.reshape(len(member.fixed_space), rep.dim)
    return basis, strat.basis.numeric()


def codim_one_matching(f: QuotientMap, strat_Y: Stratification, strat_Z: Stratification,
                       samples: int = 6, tol: float = 1e-8, seed: int = 0) -> CodimOneMatching:
    """Sample each closure ``C_i`` and find the closure ``D_j`` containing its image."""
    rng = np.random.default_rng(seed)
    fnum = f.numeric()
    pairs = []
    for ci in strat_Y.codim_one:
        Vb, pY = _fixed_chart(strat_Y, ci)
        k = Vb.shape[0]
        coeffs = (rng.standard_normal((samples, k)) + 1j * rng.standard_normal((samples, k))) / 2
        pts = coeffs @ Vb if k else np.zeros((samples, strat_Y.basis.rep.dim), dtype=complex)
        images = fnum(pY(pts))
        hit = None
        for dj in strat_Z.codim_one:
            Wb, qZ = _fixed_chart(strat_Z, dj)
            kk = Wb.shape[0]
            ok = True
            for z in images:
                scl = max(1.0, float(np.linalg.norm(z)))
                if kk == 0:
                    ok = float(np.linalg.norm(z)) <= tol * scl
                else:
                    chart = _LinearChart(qZ, Wb)
                    X0 = (rng.standard_normal((8, kk)) + 1j * rng.standard_normal((8, kk)))
                    _, res = gauss_newton(chart, z, X0, max_iter=80, tol=tol * 1e-2 * scl)
                    ok = float(res.min()) <= tol * scl
                if not ok:
                    break
            if ok:
                hit = dj
                break
        pairs.append((ci.index, None if hit is None else hit.index, ci.order,
                      None if hit is None else hit.order))
    return CodimOneMatching(tuple(pairs))


class _LinearChart:
    """``u -> q(u @ basis)`` with the chain-rule Jacobian."""

    def __init__(self, q: NumericPolyMap, basis: np.ndarray):
        self.q, self.basis = q, basis

    def __call__(self, U):
        return self.q(np.asarray(U) @ self.basis)

    def jacobian(self, U):
        J = self.q.jacobian(np.asarray(U) @ self.basis)
        return J @ self.basis.T
