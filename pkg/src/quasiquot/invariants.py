"""Invariant rings of finite linear groups: Reynolds operator, Molien series,
homogeneous generators, the orbit map and degree-bounded relations."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import CycloScalar, ExactMatrix, kernel, rref
from .group import Representation
from .poly import (
    MonomialEvaluator,
    NumericPolyMap,
    Poly,
    WeightSystem,
    act_linear,
    evaluate,
    fischer_product,
    monomials_of_degree,
    monomials_of_weighted_degree,
    weighted_component,
)

logger = logging.getLogger(__name__)

__all__ = [
    "InvariantBasis",
    "RelationSet",
    "Membership",
    "Separation",
    "reynolds",
    "reynolds_dimension",
    "molien",
    "invariant_space",
    "generators",
    "orbit_map",
    "relations",
    "ideal_membership",
    "separates",
]


class MolienError(ArithmeticError):
    """The Molien series produced a non-integer coefficient."""


@dataclass(frozen=True)
class InvariantBasis:
    """Homogeneous generators ``p_1, ..., p_m`` of the invariant ring."""

    rep: Representation
    gens: tuple[Poly, ...]
    degrees: tuple[int, ...]
    molien: tuple[int, ...] = ()
    degree_cap: int = 0

    @property
    def weight_system(self) -> WeightSystem:
        return WeightSystem(self.degrees)

    @property
    def m(self) -> int:
        return len(self.gens)

    @property
    def complete(self) -> bool:
        # Noether's bound: generators live in degrees <= |G|
        return self.degree_cap >= self.rep.order

    def numeric(self) -> NumericPolyMap:
        return NumericPolyMap(self.gens)


@dataclass(frozen=True)
class RelationSet:
    basis: InvariantBasis
    relations: tuple[Poly, ...]
    weighted_degree_bound: int
    relation_degrees: tuple[int, ...] = ()


# ---------------------------------------------------------------------------
# averaging and the Molien series
# ---------------------------------------------------------------------------


def reynolds(rep: Representation, f: Poly) -> Poly:
    """Group average ``(1/|G|) sum_g f o g``."""
    if f.nvars != rep.dim:
        raise ValueError("poly in %d variables for a dim-%d representation" % (f.nvars, rep.dim))
    f = f.lift(rep.conductor) if f.n != rep.conductor else f
    acc = Poly.zero(rep.dim, rep.conductor)
    for g in rep.elements:
        acc = acc + act_linear(g, f)
    return acc * Fraction(1, rep.order)


def reynolds_dimension(rep: Representation, degree: int) -> int:
    """Rank of the group averages of all degree-``degree`` monomials."""
    monos = monomials_of_degree(rep.dim, degree)
    rows = [reynolds(rep, Poly.monomial(e, rep.conductor)).vector(monos) for e in monos]
    return len(rref(rows, len(monos))[0])


def _char_coeffs(A: ExactMatrix) -> list[CycloScalar]:
    """Coefficients of ``det(I - tA)`` in ascending powers of t (Faddeev-LeVerrier)."""
    k, n = A.nrows, A.n
    ident = ExactMatrix.identity(k, n)
    # det(lambda I - A) = sum_j c_j lambda^j, c_k = 1
    c = [CycloScalar.zero(n)] * (k + 1)
    c[k] = CycloScalar.one(n)
    M = ExactMatrix.zeros(k, k, n)
    for i in range(1, k + 1):
        M = A @ M + ident.scale(c[k - i + 1])
        AM = A @ M
        tr = CycloScalar.zero(n)
        for j in range(k):
            tr = tr + AM[j, j]
        c[k - i] = -tr * Fraction(1, i)
    # det(I - tA) = t^k det(t^-1 I - A) = sum_i c_{k-i} t^i
    return [c[k - i] for i in range(k + 1)]


def molien(rep: Representation, max_degree: int) -> list[int]:
    """Dimensions of the invariant spaces in degrees ``0..max_degree``."""
    cache = rep.meta.setdefault("molien_factors", {})
    n = rep.conductor
    total = [CycloScalar.zero(n)] * (max_degree + 1)
    for i, g in enumerate(rep.elements):
        if i not in cache:
            cache[i] = _char_coeffs(g)
        P = cache[i]
        inv = [CycloScalar.zero(n)] * (max_degree + 1)
        inv[0] = CycloScalar.one(n)
        for j in range(1, max_degree + 1):
            acc = CycloScalar.zero(n)
            for s in range(1, min(j, len(P) - 1) + 1):
                if P[s]:
                    acc = acc - P[s] * inv[j - s]
            inv[j] = acc
        total = [a + b for a, b in zip(total, inv)]
    out = []
    for d, c in enumerate(total):
        c = c * Fraction(1, rep.order)
        if not c.is_rational() or c.to_fraction().denominator != 1:
            raise MolienError("Molien coefficient in degree %d is %s, not an integer" % (d, c))
        out.append(int(c.to_fraction()))
    return out


# ---------------------------------------------------------------------------
# invariant spaces and generators
# ---------------------------------------------------------------------------


def _action_rows(g: ExactMatrix, monos: Sequence[tuple[int, ...]]) -> list[list[CycloScalar]]:
    """Matrix (rows indexed by monos) of ``f -> f o g - f`` on a degree slice."""
    forms = [Poly.linear_form(row, g.n) for row in g.rows]
    ev = MonomialEvaluator(forms)
    cols = []
    for e in monos:
        img = ev(e) - Poly.monomial(e, g.n)
        cols.append(img.vector(monos))
    return [list(r) for r in zip(*cols)]


def invariant_space(rep: Representation, degree: int) -> list[Poly]:
    """Reduced-echelon basis of the degree-``degree`` invariants.

    Computed as the common kernel of ``f -> f o g - f`` over the group's
    generators, which cuts out the same space as the image of the Reynolds
    operator.
    """
    cache = rep.meta.setdefault("invariant_space", {})
    if degree in cache:
        return cache[degree]
    n = rep.conductor
    monos = monomials_of_degree(rep.dim, degree)
    rows = []
    for g in rep.generators:
        rows.extend(_action_rows(g, monos))
    vecs = kernel(rows, len(monos), n) if rows else []
    red, _ = rref(vecs, len(monos))
    out = [Poly.from_vector(v, monos, rep.dim, n) for v in red]
    cache[degree] = out
    return out


def _span_rref(polys: Sequence[Poly], monos: Sequence[tuple[int, ...]]):
    if not polys:
        return [], []
    return rref([p.vector(monos) for p in polys], len(monos))


def _in_span(red, pivots, vec) -> bool:
    vec = list(vec)
    for row, pc in zip(red, pivots):
        if vec[pc]:
            f = vec[pc]
            vec = [a - f * b for a, b in zip(vec, row)]
    return not any(vec)


def _invariant_quadratic_form(rep: Representation) -> Poly:
    n = rep.conductor
    acc = Poly.zero(rep.dim, n)
    for g in rep.elements:
        for row in g.rows:
            lf = Poly.linear_form(row, n)
            acc = acc + lf * lf
    return acc.monic()


def _rational_sqrt(x: CycloScalar) -> Fraction | None:
    if not x.is_rational():
        return None
    q = x.to_fraction()
    if q <= 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _complement(inv_basis: list[Poly], span: list[Poly], monos) -> list[Poly]:
    """Fischer-orthogonal complement of ``span`` inside ``span(inv_basis)``."""
    n = inv_basis[0].n
    if not span:
        cands = inv_basis
    else:
        red, piv = _span_rref(span, monos)
        span_basis = [Poly.from_vector(r, monos, inv_basis[0].nvars, n) for r in red]
        gram = [[fischer_product(b, s) for b in inv_basis] for s in span_basis]
        coeffs = kernel(gram, len(inv_basis), n)
        cands = []
        for c in coeffs:
            acc = Poly.zero(inv_basis[0].nvars, n)
            for ci, b in zip(c, inv_basis):
                if ci:
                    acc = acc + b * ci
            cands.append(acc)
    if not cands:
        return []
    red, _ = _span_rref(cands, monos)
    out = [Poly.from_vector(r, monos, inv_basis[0].nvars, n) for r in red]
    # equal Fischer norms within a degree when the ratio is a rational square
    if len(out) > 1:
        ref = fischer_product(out[0], out[0])
        for i in range(1, len(out)):
            s = _rational_sqrt(ref / fischer_product(out[i], out[i]))
            if s is not None:
                out[i] = out[i] * s
    return out


def generators(rep: Representation, degree_cap: int | None = None) -> InvariantBasis:
    """Homogeneous generators of the invariant ring, degrees ascending.

    In each degree the new generators span the Fischer-orthogonal complement
    of the products of lower-degree generators.  For real actions the
    invariant quadratic form is taken as the first quadratic generator.
    """
    cap = rep.order if degree_cap is None else degree_cap
    if cap < rep.order:
        logger.warning("degree cap %d is below |G| = %d; generators may be incomplete", cap, rep.order)
    series = molien(rep, cap)
    gens: list[Poly] = []
    degs: list[int] = []
    for d in range(1, cap + 1):
        inv = invariant_space(rep, d)
        if len(inv) != series[d]:
            raise RuntimeError(
                "degree %d: %d invariants found but Molien series predicts %d"
                % (d, len(inv), series[d])
            )
        if not inv:
            continue
        monos = monomials_of_degree(rep.dim, d)
        products: list[Poly] = []
        if gens:
            ev = MonomialEvaluator(gens)
            for e in monomials_of_weighted_degree(WeightSystem(degs), d):
                products.append(ev(e))
        red, piv = _span_rref(products, monos)
        if len(red) == len(inv):
            continue
        new: list[Poly] = []
        if rep.is_real and d == 2:
            q = _invariant_quadratic_form(rep)
            if not _in_span(red, piv, q.vector(monos)):
                new.append(q)
                products.append(q)
        new.extend(_complement(inv, products, monos))
        gens.extend(new)
        degs.extend([d] * len(new))
    return InvariantBasis(rep, tuple(gens), tuple(degs), tuple(series), cap)


def subalgebra_dimension(basis: InvariantBasis, degree: int) -> int:
    """Dimension of the degree slice of the algebra generated by ``basis.gens``."""
    if degree == 0:
        return 1
    if not basis.gens:
        return 0
    ev = MonomialEvaluator(list(basis.gens))
    monos = monomials_of_degree(basis.rep.dim, degree)
    prods = [ev(e) for e in monomials_of_weighted_degree(basis.weight_system, degree)]
    return len(_span_rref(prods, monos)[0])


# ---------------------------------------------------------------------------
# orbit map
# ---------------------------------------------------------------------------


def orbit_map(basis: InvariantBasis, v: Sequence, numeric: bool = False):
    """``(p_1(v), ..., p_m(v))``, exactly or in double precision."""
    if len(v) != basis.rep.dim:
        raise ValueError("point has %d coordinates, expected %d" % (len(v), basis.rep.dim))
    if numeric:
        return basis.numeric()(np.asarray(v, dtype=complex))
    return tuple(evaluate(p, v) for p in basis.gens)


@dataclass(frozen=True)
class Separation:
    same_orbit: bool
    orbit_map_equal: bool
    witness: int | None = None

    @property
    def verdict(self) -> str:
        return "same-orbit" if self.same_orbit else "different-orbit"


def separates(basis: InvariantBasis, v: Sequence, w: Sequence, tol: float = 1e-9) -> Separation:
    """Decide whether ``v`` and ``w`` lie in one orbit, cross-checked by the orbit map."""
    rep = basis.rep
    exact = all(isinstance(x, (int, Fraction, CycloScalar)) for x in list(v) + list(w))
    if exact:
        n = rep.conductor
        v = tuple(x if isinstance(x, CycloScalar) else CycloScalar.rational(x, n) for x in v)
        w = tuple(x if isinstance(x, CycloScalar) else CycloScalar.rational(x, n) for x in w)
        hit = next((i for i, g in enumerate(rep.elements) if g.apply(v) == w), None)
        same_map = orbit_map(basis, v) == orbit_map(basis, w)
    else:
        vv, ww = np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)
        hit = next(
            (i for i, g in enumerate(rep.elements) if np.linalg.norm(g.numeric() @ vv - ww) <= tol),
            None,
        )
        pm = basis.numeric()
        same_map = bool(np.linalg.norm(pm(vv) - pm(ww)) <= tol * max(1.0, np.linalg.norm(pm(vv))))
    out = Separation(hit is not None, same_map, hit)
    if out.same_orbit != out.orbit_map_equal:
        raise RuntimeError("orbit map disagrees with the orbit test; generators incomplete?")
    return out


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


class _IdealSpans:
    """Truncated ideal spans ``{sum m_j r_j}`` per weighted degree."""

    def __init__(self, w: WeightSystem, nvars: int, n: int):
        self.w, self.nvars, self.n = w, nvars, n
        self.rels: list[tuple[Poly, int]] = []
        self._cache: dict[int, tuple[list, list, list]] = {}

    def add(self, r: Poly, deg: int) -> None:
        self.rels.append((r, deg))
        self._cache.clear()

    def span(self, D: int):
        if D not in self._cache:
            monos = monomials_of_weighted_degree(self.w, D)
            rows = []
            for r, dr in self.rels:
                if dr > D:
                    continue
                for b in monomials_of_weighted_degree(self.w, D - dr):
                    rows.append((r * Poly.monomial(b, self.n)).vector(monos))
            red, piv = rref(rows, len(monos)) if rows else ([], [])
            self._cache[D] = (monos, red, piv)
        return self._cache[D]

    def reduce(self, D: int, vec):
        _, red, piv = self.span(D)
        vec = list(vec)
        for row, pc in zip(red, piv):
            if vec[pc]:
                f = vec[pc]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec


def relations(basis: InvariantBasis, weighted_degree_cap: int | None = None) -> RelationSet:
    """Weighted-homogeneous relations among the generators up to a weighted degree."""
    m = basis.m
    cap = weighted_degree_cap
    if cap is None:
        cap = 2 * max(basis.degrees, default=1) * max(m, 1)
    n = basis.rep.conductor
    if m == 0:
        return RelationSet(basis, (), cap, ())
    w = basis.weight_system
    ev = MonomialEvaluator(list(basis.gens))
    spans = _IdealSpans(w, m, n)
    rels: list[Poly] = []
    rdegs: list[int] = []
    for D in range(1, cap + 1):
        ymonos = monomials_of_weighted_degree(w, D)
        if len(ymonos) < 2:
            continue
        xmonos = monomials_of_degree(basis.rep.dim, D)
        cols = [ev(e).vector(xmonos) for e in ymonos]
        rows = [list(r) for r in zip(*cols)]
        ker = kernel(rows, len(ymonos), n)
        if not ker:
            continue
        reduced = [spans.reduce(D, v) for v in ker]
        red, _ = rref([v for v in reduced if any(v)], len(ymonos)) if any(
            any(v) for v in reduced) else ([], [])
        for row in red:
            r = Poly.from_vector(row, ymonos, m, n)
            rels.append(r)
            rdegs.append(D)
            spans.add(r, D)
    return RelationSet(basis, tuple(rels), cap, tuple(rdegs))


@dataclass(frozen=True)
class Membership:
    """Outcome of a degree-truncated ideal membership test.

    ``member`` is True when every weighted component lies in the truncated
    ideal span, False when some component of degree within the bound does
    not, and None when the only failures lie beyond the bound.
    """

    member: bool | None
    certified_degree: int
    failing_degrees: tuple[int, ...] = ()


def ideal_membership(rel: RelationSet, f: Poly) -> Membership:
    """Test ``f`` against the ideal generated by ``rel.relations`` degree by degree."""
    w = rel.basis.weight_system
    n = rel.basis.rep.conductor
    if f.nvars != len(w):
        raise ValueError("poly in %d variables, relation set has %d" % (f.nvars, len(w)))
    spans = rel.__dict__.get("_spans")
    if spans is None:
        spans = _IdealSpans(w, len(w), n)
        for r, d in zip(rel.relations, rel.relation_degrees):
            spans.add(r, d)
        object.__setattr__(rel, "_spans", spans)
    failing, beyond = [], []
    top = 0
    for D in sorted(f.weighted_degrees(w)):
        comp = weighted_component(f, w, D)
        top = max(top, D)
        monos = monomials_of_weighted_degree(w, D)
        if any(spans.reduce(D, comp.vector(monos))):
            (failing if D <= rel.weighted_degree_bound else beyond).append(D)
    if failing:
        return Membership(False, rel.weighted_degree_bound, tuple(failing))
    if beyond:
        return Membership(None, rel.weighted_degree_bound, tuple(beyond))
    return Membership(True, top)
