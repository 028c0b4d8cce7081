"""Deciding when two linear actions have the same orbits.

Two representations are orbit-equivalent through a linear ``L`` exactly when
``L`` conjugates one group onto the other, so the search runs over abstract
isomorphisms ``phi: G -> H`` and, for each, over the space of intertwiners
``L g = phi(g) L``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .exact import CycloScalar, ExactMatrix, kernel, solve_linear
from .group import Representation, close
from .invariants import InvariantBasis
from .poly import MonomialEvaluator, Poly, compose, monomials_of_degree, monomials_of_weighted_degree
from .quasilinear import QuotientMap
from .strata import eigenbasis

__all__ = [
    "GroupIso",
    "QuasiIso",
    "QuasiIsoSearch",
    "Verification",
    "RealForm",
    "GradedAutomorphism",
    "generating_tuple",
    "enumerate_isomorphisms",
    "intertwiners",
    "find_quasi_isomorphism",
    "verify_quasi_isomorphism",
    "real_form",
    "graded_automorphism",
]


@dataclass(frozen=True)
class GroupIso:
    """``image_of[i]`` is the index in ``target`` of the image of ``source.elements[i]``."""

    source: Representation
    target: Representation
    image_of: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.image_of[i]

    def is_valid(self) -> bool:
        G, H = self.source, self.target
        if sorted(self.image_of) != list(range(H.order)) or G.order != H.order:
            return False
        tg, th = G.table, H.table
        img = self.image_of
        return all(
            img[tg[a][b]] == th[img[a]][img[b]]
            for a in range(G.order) for b in range(G.order)
        )


@dataclass(frozen=True)
class QuasiIso:
    """Invertible ``L: V -> W`` with ``L g = iso(g) L``; entries over the common conductor."""

    L: ExactMatrix
    iso: GroupIso

    @property
    def conductor(self) -> int:
        return self.L.n


@dataclass(frozen=True)
class QuasiIsoSearch:
    """Result of ``find_quasi_isomorphism``.

    ``status`` is ``"found"``, ``"none"`` or ``"dimension-mismatch"``; for
    ``"none"`` the ``certificates`` list one line per isomorphism tried.
    """

    status: str
    witness: QuasiIso | None = None
    certificates: tuple[str, ...] = ()
    isomorphisms: int = 0


# ---------------------------------------------------------------------------
# abstract isomorphisms
# ---------------------------------------------------------------------------


def _closure(rep: Representation, seeds: Sequence[int]) -> set[int]:
    tab = rep.table
    out = {rep.identity_index}
    frontier = [rep.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = tab[s][x]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def generating_tuple(rep: Representation) -> tuple[int, ...]:
    """Greedy generating set: scan elements by descending order, keep those that enlarge the closure."""
    orders = rep.orders
    scan = sorted(range(rep.order), key=lambda i: (-orders[i], i))
    chosen: list[int] = []
    span = {rep.identity_index}
    for i in scan:
        if len(span) == rep.order:
            break
        if i not in span:
            chosen.append(i)
            span = _closure(rep, chosen)
    return tuple(chosen)


def _extend(G: Representation, H: Representation, gens: Sequence[int],
            images: Sequence[int]) -> tuple[int, ...] | None:
    """Extend ``gens[k] -> images[k]`` to a homomorphism, or None if inconsistent."""
    tg, th = G.table, H.table
    img = {G.identity_index: H.identity_index}
    frontier = [G.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(gens, images):
                y = tg[s][x]
                val = th[t][img[x]]
                if y in img:
                    if img[y] != val:
                        return None
                else:
                    img[y] = val
                    nxt.append(y)
        frontier = nxt
    out = tuple(img[i] for i in range(G.order))
    if len(set(out)) != G.order:
        return None
    return out


def enumerate_isomorphisms(G: Representation, H: Representation) -> list[GroupIso]:
    """All group isomorphisms ``G -> H``, in a deterministic order."""
    if G.order != H.order or sorted(G.orders) != sorted(H.orders):
        return []
    gens = generating_tuple(G)
    pools = [[j for j in range(H.order) if H.orders[j] == G.orders[g]] for g in gens]
    out = []
    for images in product(*pools):
        img = _extend(G, H, gens, images)
        if img is None:
            continue
        iso = GroupIso(G, H, img)
        if iso.is_valid():
            out.append(iso)
    return out


# ---------------------------------------------------------------------------
# intertwiners and the witness search
# ---------------------------------------------------------------------------


def _common(G: Representation, H: Representation) -> tuple[Representation, Representation, int]:
    N = math.lcm(G.conductor, H.conductor)
    return G.lifted(N), H.lifted(N), N


def intertwiners(G: Representation, H: Representation, iso: GroupIso) -> list[ExactMatrix]:
    """Basis of ``{L : L g = iso(g) L for every generator g of G}``, over the common conductor."""
    Gl, Hl, N = _common(G, H)
    p, q = H.dim, G.dim
    nvar = p * q
    zero = CycloScalar.zero(N)
    rows = []
    for gi in Gl.generator_indices:
        g = Gl.elements[gi]
        h = Hl.elements[iso(gi)]
        # (L g)_ij - (h L)_ij, with L_ab at index a*q + b
        for i in range(p):
            for j in range(q):
                row = [zero] * nvar
                for k in range(q):
                    if g[k, j]:
                        row[i * q + k] = row[i * q + k] + g[k, j]
                for k in range(p):
                    if h[i, k]:
                        row[k * q + j] = row[k * q + j] - h[i, k]
                rows.append(row)
    vecs = kernel(rows, nvar, N)
    return [ExactMatrix([v[i * q:(i + 1) * q] for i in range(p)], N) for v in vecs]


def _combine(basis: Sequence[ExactMatrix], coeffs: Sequence[int]) -> ExactMatrix:
    acc = basis[0].scale(coeffs[0])
    for c, B in zip(coeffs[1:], basis[1:]):
        if c:
            acc = acc + B.scale(c)
    return acc


def symbolic_determinant(basis: Sequence[ExactMatrix]) -> Poly:
    """``det(sum_k c_k B_k)`` as a polynomial in the ``c_k`` (Laplace expansion, memoized)."""
    k = len(basis)
    size, N = basis[0].nrows, basis[0].n
    entries = [
        [sum((Poly.var(t, k, N) * B[i, j] for t, B in enumerate(basis) if B[i, j]),
             Poly.zero(k, N)) for j in range(size)]
        for i in range(size)
    ]
    memo: dict[tuple[int, frozenset[int]], Poly] = {}

    def minor(row: int, cols: frozenset[int]) -> Poly:
        if row == size:
            return Poly.constant(1, k, N)
        key = (row, cols)
        if key not in memo:
            acc = Poly.zero(k, N)
            for pos, c in enumerate(sorted(cols)):
                e = entries[row][c]
                if e:
                    term = e * minor(row + 1, cols - {c})
                    acc = acc + term if pos % 2 == 0 else acc - term
            memo[key] = acc
        return memo[key]

    return minor(0, frozenset(range(size)))


def _invertible_intertwiner(basis: Sequence[ExactMatrix], rng: np.random.Generator,
                            trials: int) -> tuple[ExactMatrix | None, str]:
    if not basis:
        return None, "intertwiner space is zero"
    if basis[0].nrows != basis[0].ncols:
        return None, "intertwiners are not square"
    for B in basis:
        if B.is_invertible():
            return B, "basis element"
    for _ in range(trials):
        coeffs = [int(c) for c in rng.integers(-9, 10, size=len(basis))]
        if not any(coeffs):
            continue
        L = _combine(basis, coeffs)
        if L.is_invertible():
            return L, "random combination"
    det = symbolic_determinant(basis)
    if not det:
        return None, "determinant of the generic intertwiner (%d-dim space) is identically zero" % len(basis)
    # a nonzero polynomial has a nonzero value on a large enough grid
    bound = det.degree() + 1
    for coeffs in product(range(bound + 1), repeat=len(basis)):
        L = _combine(basis, coeffs) if any(coeffs) else None
        if L is not None and L.is_invertible():
            return L, "grid point of the determinant polynomial"
    raise RuntimeError("nonzero determinant polynomial without a nonvanishing grid point")


def find_quasi_isomorphism(G: Representation, H: Representation, seed: int = 0,
                           trials: int = 20) -> QuasiIsoSearch:
    """Search for ``L`` with ``L G L^-1 = H``, certifying a negative answer per isomorphism."""
    if G.dim != H.dim:
        return QuasiIsoSearch("dimension-mismatch",
                              certificates=("dimensions %d and %d differ" % (G.dim, H.dim),))
    isos = enumerate_isomorphisms(G, H)
    if not isos:
        return QuasiIsoSearch("none", certificates=("groups are not isomorphic",))
    rng = np.random.default_rng(seed)
    certs = []
    for idx, iso in enumerate(isos):
        L, how = _invertible_intertwiner(intertwiners(G, H, iso), rng, trials)
        if L is not None:
            return QuasiIsoSearch("found", QuasiIso(L, iso), (), len(isos))
        certs.append("isomorphism %d: %s" % (idx, how))
    return QuasiIsoSearch("none", None, tuple(certs), len(isos))


@dataclass(frozen=True)
class Verification:
    conjugation_ok: bool
    orbit_ok: bool
    offending: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.conjugation_ok and self.orbit_ok


def verify_quasi_isomorphism(q: QuasiIso, samples: int = 4, seed: int = 0) -> Verification:
    """Exact checks: ``L G L^-1 = H`` as sets and ``L(G v) = H (L v)`` on sample points."""
    G, H = q.iso.source, q.iso.target
    N = math.lcm(G.conductor, H.conductor, q.L.n)
    L = q.L.lift(N)
    offending = []
    if not L.is_invertible():
        return Verification(False, False, ("L is singular",))
    Linv = L.inverse()
    Gl, Hl = G.lifted(N), H.lifted(N)
    targets = set(Hl.elements)
    image = set()
    for i, g in enumerate(Gl.elements):
        c = L @ g @ Linv
        image.add(c)
        if c not in targets:
            offending.append("L g L^-1 not in H for element %d" % i)
        elif c != Hl.elements[q.iso(i)]:
            offending.append("L g L^-1 differs from the induced image for element %d" % i)
    conj_ok = not offending and image == targets
    if not conj_ok and image != targets and not offending:
        offending.append("L G L^-1 is a proper subset of H")
    rng = np.random.default_rng(seed)
    orbit_ok = True
    for s in range(samples):
        v = tuple(CycloScalar.rational(int(x), N) for x in rng.integers(-7, 8, size=G.dim))
        lhs = {L.apply(g.apply(v)) for g in Gl.elements}
        Lv = L.apply(v)
        rhs = {h.apply(Lv) for h in Hl.elements}
        if lhs != rhs:
            orbit_ok = False
            offending.append("orbit mismatch at sample %d" % s)
    return Verification(conj_ok, orbit_ok, tuple(offending))


# ---------------------------------------------------------------------------
# twisted real forms and the induced graded automorphism
# ---------------------------------------------------------------------------


def _check_central_involution(rep: Representation, h: int) -> None:
    tab = rep.table
    if tab[h][h] != rep.identity_index:
        raise ValueError("element %d is not an involution" % h)
    if any(tab[h][g] != tab[g][h] for g in range(rep.order)):
        raise ValueError("element %d is not central" % h)


@dataclass(frozen=True)
class RealForm:
    """``W_h = W_{h+} + i W_{h-}`` with the group acting in the basis ``(plus, i minus)``."""

    h: int
    plus_basis: tuple[tuple[CycloScalar, ...], ...]
    minus_basis: tuple[tuple[CycloScalar, ...], ...]
    conductor: int
    frame: ExactMatrix
    induced_action: tuple[ExactMatrix, ...]

    @cached_property
    def representation(self) -> Representation:
        return close(self.induced_action, field="complex", name="real form")


def real_form(rep: Representation, h: int) -> RealForm:
    _check_central_involution(rep, h)
    N = math.lcm(rep.conductor, 4)
    hm = rep.elements[h]
    plus, minus = eigenbasis(hm, 1), eigenbasis(hm, -1)
    i_unit = CycloScalar.zeta(N, N // 4)
    cols = [tuple(x.lift(N) for x in u) for u in plus]
    cols += [tuple(x.lift(N) * i_unit for x in v) for v in minus]
    frame = ExactMatrix.from_columns(cols, N)
    finv = frame.inverse()
    action = tuple(finv @ g.lift(N) @ frame for g in rep.elements)
    form = RealForm(h, tuple(plus), tuple(minus), N, frame, action)
    closed = form.representation
    if closed.order != rep.order:
        raise RuntimeError("induced action generates %d elements, expected %d" % (closed.order, rep.order))
    return form


@dataclass(frozen=True)
class GradedAutomorphism:
    """The substitution ``w_+ + w_- -> w_+ + i w_-`` read on quotient coordinates.

    ``signs[j]`` is +1 or -1 when generator ``j`` is simply rescaled, else None.
    """

    h: int
    map: QuotientMap
    signs: tuple[int | None, ...]


def _descend_poly(p: Poly, m: int) -> Poly:
    terms = {}
    for e, c in p.terms.items():
        d = c.descend(m)
        if d is None:
            return p
        terms[e] = d
    return Poly(p.nvars, terms, m)


def graded_automorphism(basis: InvariantBasis, h: int) -> GradedAutomorphism:
    rep = basis.rep
    _check_central_involution(rep, h)
    n = rep.conductor
    N = math.lcm(n, 4)
    hm = rep.elements[h].lift(N)
    ident = ExactMatrix.identity(rep.dim, N)
    i_unit = CycloScalar.zeta(N, N // 4)
    half = Fraction(1, 2)
    subst = (ident + hm).scale(half) + (ident - hm).scale(half * i_unit)
    forms = [Poly.linear_form(row, N) for row in subst.rows]
    w = basis.weight_system
    ev = MonomialEvaluator([g.lift(N) for g in basis.gens])
    comps = []
    signs = []
    for j, g in enumerate(basis.gens):
        img = compose(g.lift(N), forms)
        d = basis.degrees[j]
        ymonos = monomials_of_weighted_degree(w, d)
        xmonos = monomials_of_degree(rep.dim, d)
        cols = [ev(e).vector(xmonos) for e in ymonos]
        A = ExactMatrix([list(r) for r in zip(*cols)], N)
        b = ExactMatrix([[x] for x in img.vector(xmonos)], N)
        sol = solve_linear(A, b)
        if not sol.consistent:
            raise RuntimeError("substituted generator %d is not in the invariant ring" % j)
        coeffs = [sol.particular[k, 0] for k in range(len(ymonos))]
        y = Poly(basis.m, {e: c for e, c in zip(ymonos, coeffs) if c}, N)
        y = _descend_poly(y, n)
        comps.append(y)
        own = Poly.var(j, basis.m, y.n)
        signs.append(1 if y == own else (-1 if y == -own else None))
    if len({c.n for c in comps}) > 1:
        comps = [c.lift(N) for c in comps]
    qmap = QuotientMap(w, w, tuple(comps))
    return GradedAutomorphism(h, qmap, tuple(signs))
