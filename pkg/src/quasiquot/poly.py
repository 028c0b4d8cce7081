"""Sparse multivariate polynomials over Q(zeta_n) with weighted gradings."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .exact import ConductorMismatch, CycloScalar, ExactMatrix, embed_numeric

__all__ = [
    "WeightSystem",
    "Poly",
    "NumericPolyMap",
    "evaluate",
    "compose",
    "weighted_component",
    "act_linear",
    "monomials_of_degree",
    "monomials_of_weighted_degree",
    "grlex_key",
    "fischer_product",
]

Exps = tuple[int, ...]


def grlex_key(exps: Exps):
    return (sum(exps), exps)


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive, got %r" % (self.weights,))

    def __len__(self):
        return len(self.weights)

    def degree(self, exps: Exps) -> int:
        return sum(w * a for w, a in zip(self.weights, exps))

    @classmethod
    def standard(cls, nvars: int) -> "WeightSystem":
        return cls((1,) * nvars)


def monomials_of_degree(nvars: int, deg: int) -> list[Exps]:
    """All exponent vectors of total degree ``deg``, grlex-descending."""
    return monomials_of_weighted_degree(WeightSystem.standard(nvars), deg)


def monomials_of_weighted_degree(w: WeightSystem, deg: int) -> list[Exps]:
    """Exponent vectors with ``|alpha| = deg`` for weights ``w``, grlex-descending."""
    weights = w.weights
    m = len(weights)
    out: list[Exps] = []

    def rec(i: int, remaining: int, acc: list[int]) -> None:
        if i == m - 1:
            if remaining % weights[i] == 0:
                out.append(tuple(acc + [remaining // weights[i]]))
            return
        for a in range(remaining // weights[i], -1, -1):
            rec(i + 1, remaining - a * weights[i], acc + [a])

    if m == 0:
        return [()] if deg == 0 else []
    if deg < 0:
        return []
    rec(0, deg, [])
    out.sort(key=grlex_key, reverse=True)
    return out


class Poly:
    """Polynomial in ``nvars`` variables with coefficients in Q(zeta_n).

    Zero coefficients are never stored.  Terms iterate in graded-lex
    descending order.
    """

    __slots__ = ("nvars", "n", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None, n: int = 1):
        self.nvars = nvars
        self.n = n
        clean: dict[Exps, CycloScalar] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != nvars:
                raise ValueError("exponent %r has wrong arity for %d variables" % (e, nvars))
            if not isinstance(c, CycloScalar):
                c = CycloScalar.rational(c, n)
            elif c.n != n:
                raise ConductorMismatch("coefficient in Q(zeta_%d) for a conductor-%d poly" % (c.n, n))
            if c:
                clean[e] = clean[e] + c if e in clean else c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, n: int) -> "Poly":
        obj = cls.__new__(cls)
        obj.nvars, obj.n, obj.terms, obj._hash = nvars, n, terms, None
        return obj

    @classmethod
    def zero(cls, nvars: int, n: int = 1) -> "Poly":
        return cls._raw(nvars, {}, n)

    @classmethod
    def constant(cls, c, nvars: int, n: int = 1) -> "Poly":
        return cls(nvars, {(0,) * nvars: c}, n)

    @classmethod
    def var(cls, i: int, nvars: int, n: int = 1) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): CycloScalar.one(n)}, n)

    @classmethod
    def monomial(cls, exps: Exps, n: int = 1, coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff}, n)

    @classmethod
    def linear_form(cls, coeffs: Sequence[CycloScalar], n: int) -> "Poly":
        nv = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * nv
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(nv, terms, n)

    # JSON ---------------------------------------------------------------

    @classmethod
    def from_json(cls, data: list, nvars: int, n: int) -> "Poly":
        terms: dict[Exps, CycloScalar] = {}
        for k, t in enumerate(data):
            if not isinstance(t, dict) or "coeff" not in t or "exps" not in t:
                raise ValueError("term %d: expected {\"coeff\", \"exps\"}" % k)
            e = tuple(int(a) for a in t["exps"])
            if len(e) != nvars or any(a < 0 for a in e):
                raise ValueError("term %d: exps %r invalid for %d variables" % (k, e, nvars))
            c = CycloScalar.from_literal(t["coeff"], n)
            terms[e] = terms[e] + c if e in terms else c
        return cls(nvars, terms, n)

    def to_json(self) -> list:
        return [{"coeff": c.to_literal(), "exps": list(e)} for e, c in self.items()]

    # inspection ---------------------------------------------------------

    def items(self) -> list[tuple[Exps, CycloScalar]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, w: WeightSystem) -> set[int]:
        return {w.degree(e) for e in self.terms}

    def is_homogeneous(self, w: WeightSystem | None = None) -> bool:
        w = w or WeightSystem.standard(self.nvars)
        return len(self.weighted_degrees(w)) <= 1

    def leading(self) -> tuple[Exps, CycloScalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def coeff(self, exps: Exps) -> CycloScalar:
        return self.terms.get(tuple(exps), CycloScalar.zero(self.n))

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def lift(self, m: int) -> "Poly":
        if m == self.n:
            return self
        return Poly._raw(self.nvars, {e: c.lift(m) for e, c in self.terms.items()}, m)

    def monic(self) -> "Poly":
        _, c = self.leading()
        return self * (1 / c)

    # arithmetic ---------------------------------------------------------

    def _like(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("arity mismatch %d vs %d" % (self.nvars, other.nvars))
            if other.n != self.n:
                raise ConductorMismatch("polys over Q(zeta_%d) and Q(zeta_%d)" % (self.n, other.n))
            return other
        if isinstance(other, (int, Fraction, CycloScalar)):
            return Poly.constant(other, self.nvars, self.n)
        return NotImplemented

    def __add__(self, other):
        o = self._like(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for e, c in o.terms.items():
            if e in terms:
                s = terms[e] + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
            else:
                terms[e] = c
        return Poly._raw(self.nvars, terms, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        o = self._like(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._like(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            if isinstance(other, CycloScalar) and other.n != self.n:
                raise ConductorMismatch("scalar over Q(zeta_%d)" % other.n)
            if not other:
                return Poly.zero(self.nvars, self.n)
            return Poly._raw(self.nvars, {e: c * other for e, c in self.terms.items()}, self.n)
        o = self._like(other)
        if o is NotImplemented:
            return o
        terms: dict[Exps, CycloScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + p
                else:
                    terms[e] = p
        return Poly._raw(self.nvars, {e: c for e, c in terms.items() if c}, self.n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1, self.nvars, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self == Poly.constant(other, self.nvars, self.n)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.n, frozenset(self.terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = ["x%d" % (i + 1) for i in range(self.nvars)]
        parts = []
        for e, c in self.items():
            mono = "*".join(
                names[i] if a == 1 else "%s^%d" % (names[i], a) for i, a in enumerate(e) if a
            )
            cs = str(c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(cs + "*" + mono)
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "Poly(%s)" % self.to_str()

    __str__ = to_str

    def vector(self, basis: Sequence[Exps]) -> list[CycloScalar]:
        """Coefficients on a monomial list; raises if terms fall outside it."""
        index = set(basis)
        extra = [e for e in self.terms if e not in index]
        if extra:
            raise ValueError("terms %r outside the given monomial basis" % (extra[:3],))
        zero = CycloScalar.zero(self.n)
        return [self.terms.get(e, zero) for e in basis]

    @classmethod
    def from_vector(cls, vec: Sequence[CycloScalar], basis: Sequence[Exps], nvars: int, n: int) -> "Poly":
        return cls._raw(nvars, {e: c for e, c in zip(basis, vec) if c}, n)

    def derivative(self, i: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        return Poly._raw(self.nvars, terms, self.n)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def evaluate(f: Poly, point: Sequence[CycloScalar]) -> CycloScalar:
    """Exact value of ``f`` at ``point``."""
    if len(point) != f.nvars:
        raise ValueError("point has %d coordinates, poly has %d variables" % (len(point), f.nvars))
    pts = [p if isinstance(p, CycloScalar) else CycloScalar.rational(p, f.n) for p in point]
    powers: dict[tuple[int, int], CycloScalar] = {}

    def pw(i: int, a: int) -> CycloScalar:
        key = (i, a)
        if key not in powers:
            powers[key] = pts[i] ** a
        return powers[key]

    acc = CycloScalar.zero(f.n)
    for e, c in f.terms.items():
        term = c
        for i, a in enumerate(e):
            if a:
                term = term * pw(i, a)
        acc = acc + term
    return acc


class _PowerCache:
    def __init__(self, gens: Sequence[Poly]):
        self.gens = list(gens)
        self.cache: dict[tuple[int, int], Poly] = {}

    def power(self, i: int, a: int) -> Poly:
        key = (i, a)
        if key not in self.cache:
            if a == 0:
                g = self.gens[i]
                self.cache[key] = Poly.constant(1, g.nvars, g.n)
            elif a == 1:
                self.cache[key] = self.gens[i]
            else:
                half = self.power(i, a // 2)
                val = half * half
                if a % 2:
                    val = val * self.gens[i]
                self.cache[key] = val
        return self.cache[key]


class MonomialEvaluator:
    """Memoized products ``g^alpha`` for a fixed tuple of polynomials."""

    def __init__(self, gens: Sequence[Poly]):
        if not gens:
            raise ValueError("need at least one polynomial")
        self.gens = list(gens)
        self.nvars = gens[0].nvars
        self.n = gens[0].n
        self._pows = _PowerCache(gens)
        self._memo: dict[Exps, Poly] = {}

    def __call__(self, exps: Exps) -> Poly:
        exps = tuple(exps)
        if exps in self._memo:
            return self._memo[exps]
        nz = [i for i, a in enumerate(exps) if a]
        if not nz:
            val = Poly.constant(1, self.nvars, self.n)
        elif len(nz) == 1:
            val = self._pows.power(nz[0], exps[nz[0]])
        else:
            last = nz[-1]
            rest = list(exps)
            rest[last] = 0
            val = self(tuple(rest)) * self._pows.power(last, exps[last])
        self._memo[exps] = val
        return val


def compose(f: Poly, g: Sequence[Poly]) -> Poly:
    """Substitute ``y_i -> g_i`` into ``f``."""
    if len(g) != f.nvars:
        raise ValueError("compose: f has %d variables but %d substitutions given" % (f.nvars, len(g)))
    if f.nvars == 0:
        raise ValueError("compose: f has no variables")
    k = g[0].nvars
    for gi in g:
        if gi.nvars != k:
            raise ValueError("compose: substitutions have differing arities")
        if gi.n != f.n:
            raise ConductorMismatch("compose: conductor %d vs %d" % (gi.n, f.n))
    ev = MonomialEvaluator(g)
    acc = Poly.zero(k, f.n)
    for e, c in f.terms.items():
        acc = acc + ev(e) * c
    return acc


def weighted_component(f: Poly, w: WeightSystem, deg: int) -> Poly:
    """The terms of ``f`` of weighted degree exactly ``deg``."""
    if len(w) != f.nvars:
        raise ValueError("weight system of length %d for %d variables" % (len(w), f.nvars))
    return Poly._raw(f.nvars, {e: c for e, c in f.terms.items() if w.degree(e) == deg}, f.n)


def act_linear(g: ExactMatrix, f: Poly) -> Poly:
    """Precompose ``f`` with the linear map ``g``: returns ``x -> f(g x)``."""
    if g.nrows != g.ncols or g.nrows != f.nvars:
        raise ValueError("act_linear: %s matrix on a %d-variable poly" % (g.shape, f.nvars))
    if g.n != f.n:
        raise ConductorMismatch("act_linear: matrix over Q(zeta_%d), poly over Q(zeta_%d)" % (g.n, f.n))
    if f.degree() <= 0:
        return f
    forms = [Poly.linear_form(row, g.n) for row in g.rows]
    return compose(f, forms)


def fischer_product(f: Poly, g: Poly) -> CycloScalar:
    """Hermitian Fischer product ``sum alpha! f_alpha conj(g_alpha)``."""
    acc = CycloScalar.zero(f.n)
    small, big = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for e in small.terms:
        if e in big.terms:
            w = math.prod(math.factorial(a) for a in e)
            acc = acc + f.terms[e] * g.terms[e].conj() * w
    return acc


# ---------------------------------------------------------------------------
# numerics
# ---------------------------------------------------------------------------


class NumericPolyMap:
    """Vectorized double-precision evaluation of a tuple of polynomials."""

    def __init__(self, polys: Sequence[Poly], real: bool = False):
        if not polys:
            raise ValueError("empty polynomial map")
        self.nvars = polys[0].nvars
        monos = sorted({e for p in polys for e in p.terms}, key=grlex_key, reverse=True)
        if not monos:
            monos = [(0,) * self.nvars]
        index = {e: k for k, e in enumerate(monos)}
        self.exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.nvars)
        dtype = float if real else complex
        coef = np.zeros((len(polys), len(monos)), dtype=complex)
        for i, p in enumerate(polys):
            for e, c in p.terms.items():
                coef[i, index[e]] = embed_numeric(c)
        if real:
            coef = coef.real
        self.coef = coef.astype(dtype)
        self.nout = len(polys)

    def _monomials(self, X: np.ndarray, exps: np.ndarray) -> np.ndarray:
        # X: (S, nvars) -> (S, T)
        out = np.ones((X.shape[0], exps.shape[0]), dtype=np.result_type(X, self.coef))
        for j in range(self.nvars):
            col = exps[:, j]
            if col.any():
                out = out * X[:, j:j + 1] ** col[None, :]
        return out

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X)
        single = X.ndim == 1
        X2 = X.reshape(1, -1) if single else X
        vals = self._monomials(X2, self.exps) @ self.coef.T
        return vals[0] if single else vals

    def jacobian(self, X) -> np.ndarray:
        """Holomorphic Jacobian, shape (S, nout, nvars) (or (nout, nvars))."""
        X = np.asarray(X)
        single = X.ndim == 1
        X2 = X.reshape(1, -1) if single else X
        S = X2.shape[0]
        jac = np.zeros((S, self.nout, self.nvars), dtype=np.result_type(X2, self.coef))
        for j in range(self.nvars):
            col = self.exps[:, j]
            if not col.any():
                continue
            dexps = self.exps.copy()
            dexps[:, j] = np.maximum(col - 1, 0)
            mon = self._monomials(X2, dexps) * col[None, :]
            jac[:, :, j] = mon @ self.coef.T
        return jac[0] if single else jac
