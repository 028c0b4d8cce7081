"""Exact arithmetic in cyclotomic fields Q(zeta_n) and dense linear algebra.

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(n)-1)``
reduced modulo the n-th cyclotomic polynomial, as integer numerators over one
common positive denominator.  The representation is canonical, so equality
and hashing are structural.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "ConductorMismatch",
    "CycloScalar",
    "ExactMatrix",
    "LinearSolution",
    "cyclotomic_polynomial",
    "euler_phi",
    "reduce",
    "invert",
    "embed_numeric",
    "rref",
    "kernel",
    "rank",
    "solve_linear",
]


class ConductorMismatch(ValueError):
    """Raised when operands live in different cyclotomic fields."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are low-degree first; den is monic
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


@dataclass(frozen=True)
class _Field:
    n: int
    phi: int
    # reduction[k] = coordinates of zeta^k for 0 <= k < n
    power_table: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    if n < 1:
        raise ValueError("conductor must be a positive integer, got %r" % (n,))
    cyc = cyclotomic_polynomial(n)
    phi = len(cyc) - 1
    table = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        table.append(tuple(cur))
        # multiply by zeta: shift, then replace zeta^phi using Phi_n
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for j in range(phi):
                nxt[j] -= top * cyc[j]
        cur = nxt
    return _Field(n, phi, tuple(table))


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-a for a in nums]
        den = -den
    g = math.gcd(den, *nums)
    if g == 0:
        return tuple(0 for _ in nums), 1
    if g != 1:
        nums = [a // g for a in nums]
        den //= g
    if not any(nums):
        den = 1
    return tuple(nums), den


def _fold(raw: Sequence[int], n: int) -> list[int]:
    f = _field(n)
    out = [0] * f.phi
    for k, c in enumerate(raw):
        if c:
            vec = f.power_table[k % n]
            for j, v in enumerate(vec):
                if v:
                    out[j] += c * v
    return out


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


class CycloScalar:
    """An element of Q(zeta_n) in canonical power-basis form."""

    __slots__ = ("n", "nums", "den", "_hash")

    def __init__(self, coeffs: Iterable, n: int = 1):
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for c in fracs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        raw = [int(c * den) for c in fracs]
        nums, den = _normalize(_fold(raw, n), den)
        self._set(n, nums, den)

    def _set(self, n: int, nums: tuple[int, ...], den: int) -> None:
        self.n = n
        self.nums = nums
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, n: int, nums: tuple[int, ...], den: int) -> "CycloScalar":
        obj = cls.__new__(cls)
        obj._set(n, nums, den)
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def rational(cls, value, n: int = 1) -> "CycloScalar":
        q = Fraction(value)
        phi = _field(n).phi
        return cls._raw(n, (q.numerator,) + (0,) * (phi - 1), q.denominator)

    @classmethod
    def zero(cls, n: int = 1) -> "CycloScalar":
        return cls._raw(n, (0,) * _field(n).phi, 1)

    @classmethod
    def one(cls, n: int = 1) -> "CycloScalar":
        return cls.rational(1, n)

    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "CycloScalar":
        return cls._raw(n, _field(n).power_table[power % n], 1)

    @classmethod
    def from_literal(cls, literal, n: int) -> "CycloScalar":
        """Parse the JSON scalar literal: a list of "a/b" strings, or a bare number."""
        if isinstance(literal, (int, str)):
            literal = [literal]
        if not isinstance(literal, list):
            raise ValueError("scalar literal must be a list of strings, got %r" % (literal,))
        phi = _field(n).phi
        if len(literal) > phi:
            raise ValueError(
                "scalar literal has %d entries but phi(%d) = %d" % (len(literal), n, phi)
            )
        try:
            fracs = [Fraction(str(x)) for x in literal]
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("bad scalar literal %r: %s" % (literal, exc)) from None
        fracs += [Fraction(0)] * (phi - len(fracs))
        return cls(fracs, n)

    def to_literal(self) -> list[str]:
        out = [str(Fraction(a, self.den)) for a in self.nums]
        while len(out) > 1 and out[-1] == "0":
            out.pop()
        return out

    # inspection -----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("%r is not rational" % (self,))
        return Fraction(self.nums[0], self.den)

    def conj(self) -> "CycloScalar":
        """Complex conjugate, i.e. the automorphism zeta -> zeta^-1."""
        n = self.n
        raw = [0] * n
        for k, a in enumerate(self.nums):
            if a:
                raw[(-k) % n] += a
        nums, den = _normalize(_fold(raw, n), self.den)
        return CycloScalar._raw(n, nums, den)

    def is_real(self) -> bool:
        return self.conj() == self

    def lift(self, m: int) -> "CycloScalar":
        """Explicit embedding Q(zeta_n) -> Q(zeta_m); requires n | m."""
        if m % self.n:
            raise ConductorMismatch("cannot embed Q(zeta_%d) into Q(zeta_%d)" % (self.n, m))
        if m == self.n:
            return self
        step = m // self.n
        raw = [0] * m
        for k, a in enumerate(self.nums):
            raw[k * step] = a
        nums, den = _normalize(_fold(raw, m), self.den)
        return CycloScalar._raw(m, nums, den)

    def descend(self, m: int) -> "CycloScalar | None":
        """The element of Q(zeta_m) lifting to ``self``, or None if there is none."""
        if self.n % m:
            raise ConductorMismatch("Q(zeta_%d) is not a subfield of Q(zeta_%d)" % (m, self.n))
        if m == self.n:
            return self
        if self.is_rational():
            return CycloScalar.rational(self.to_fraction(), m)
        phi = euler_phi(m)
        cols = [CycloScalar.zeta(m, j).lift(self.n).coeffs for j in range(phi)]
        target = self.coeffs
        rows = [[CycloScalar.rational(c[i]) for c in cols] + [CycloScalar.rational(target[i])]
                for i in range(len(target))]
        red, piv = rref(rows, phi + 1)
        if phi in piv:
            return None
        sol = [Fraction(0)] * phi
        for row, pc in zip(red, piv):
            sol[pc] = row[phi].to_fraction()
        return CycloScalar(sol, m)

    def __complex__(self) -> complex:
        return embed_numeric(self)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "CycloScalar":
        if isinstance(other, CycloScalar):
            if other.n != self.n:
                raise ConductorMismatch(
                    "mixed conductors %d and %d (embed explicitly with .lift)" % (self.n, other.n)
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.rational(other, self.n)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            nums, den = _normalize([a + b for a, b in zip(self.nums, o.nums)], self.den)
        else:
            nums, den = _normalize(
                [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)], self.den * o.den
            )
        return CycloScalar._raw(self.n, nums, den)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar._raw(self.n, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not any(self.nums) or not any(o.nums):
            return CycloScalar.zero(self.n)
        a, b = self.nums, o.nums
        if len(a) == 1:
            nums, den = _normalize([a[0] * b[0]], self.den * o.den)
            return CycloScalar._raw(self.n, nums, den)
        if not any(a[1:]):
            nums, den = _normalize([a[0] * x for x in b], self.den * o.den)
            return CycloScalar._raw(self.n, nums, den)
        if not any(b[1:]):
            nums, den = _normalize([b[0] * x for x in a], self.den * o.den)
            return CycloScalar._raw(self.n, nums, den)
        raw = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        nums, den = _normalize(_fold(raw, self.n), self.den * o.den)
        return CycloScalar._raw(self.n, nums, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * invert(self)

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = CycloScalar.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.n == other.n and self.den == other.den and self.nums == other.nums
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return (
                self.nums[0] == q.numerator
                and self.den == q.denominator
                and not any(self.nums[1:])
            )
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.n, self.nums, self.den))
        return self._hash

    def __repr__(self):
        if self.is_rational():
            return "CycloScalar(%s)" % Fraction(self.nums[0], self.den)
        return "CycloScalar(%s, n=%d)" % (self.to_literal(), self.n)

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self.nums[0], self.den))
        parts = []
        for k, a in enumerate(self.nums):
            if not a:
                continue
            c = Fraction(a, self.den)
            mono = "" if k == 0 else ("z" if k == 1 else "z^%d" % k)
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(str(c) + ("*" + mono if mono else ""))
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"


def reduce(raw_coeffs: Sequence, n: int) -> CycloScalar:
    """Canonical element of Q(zeta_n) for the polynomial ``sum raw[k] zeta^k``."""
    if n < 1:
        raise ValueError("conductor must be >= 1, got %r" % (n,))
    return CycloScalar(raw_coeffs, n)


def invert(a: CycloScalar) -> CycloScalar:
    """Multiplicative inverse, via the rational multiplication matrix of ``a``."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % a.n)
    n = a.n
    phi = len(a.nums)
    if a.is_rational():
        return CycloScalar.rational(Fraction(a.den, a.nums[0]), n)
    # column j of M is a * zeta^j
    cols = []
    for j in range(phi):
        raw = [0] * (phi + j)
        for k, x in enumerate(a.nums):
            raw[k + j] = x
        cols.append(_fold(raw, n))
    aug = [[Fraction(cols[j][i]) for j in range(phi)] + [Fraction(1 if i == 0 else 0)]
           for i in range(phi)]
    for c in range(phi):
        piv = next(r for r in range(c, phi) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(phi):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    sol = [aug[i][phi] for i in range(phi)]
    return CycloScalar(sol, n) * CycloScalar.rational(a.den, n)


def embed_numeric(a: CycloScalar) -> complex:
    """Numeric value at zeta = exp(2 pi i / n)."""
    n = a.n
    if a.is_rational():
        return complex(a.nums[0] / a.den)
    total = 0j
    for k, x in enumerate(a.nums):
        if x:
            total += x * cmath.exp(2j * math.pi * k / n)
    return total / a.den


# ---------------------------------------------------------------------------
# linear algebra on lists of rows
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence[CycloScalar]], ncols: int | None = None,
         n: int | None = None) -> tuple[list[list[CycloScalar]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = invert(mat[r][c])
        row = [x * inv if x else x for x in mat[r]]
        mat[r] = row
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                other = mat[i]
                for j in nz:
                    other[j] = other[j] - f * row[j]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[CycloScalar]]) -> int:
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence[CycloScalar]], ncols: int, n: int) -> list[list[CycloScalar]]:
    """Basis of the right kernel ``{x : A x = 0}`` (standard free-variable basis)."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    zero, one = CycloScalar.zero(n), CycloScalar.one(n)
    basis = []
    for fcol in free:
        vec = [zero] * ncols
        vec[fcol] = one
        for row, pc in zip(red, pivots):
            if row[fcol]:
                vec[pc] = -row[fcol]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Immutable dense matrix over Q(zeta_n)."""

    __slots__ = ("rows", "nrows", "ncols", "n", "_hash")

    def __init__(self, rows: Sequence[Sequence], n: int = 1):
        conv = []
        for r in rows:
            conv.append(tuple(
                x if isinstance(x, CycloScalar) else CycloScalar.rational(x, n) for x in r
            ))
        widths = {len(r) for r in conv}
        if len(widths) > 1:
            raise ValueError("ragged matrix rows: lengths %s" % sorted(widths))
        for r in conv:
            for x in r:
                if x.n != n:
                    raise ConductorMismatch("entry in Q(zeta_%d) inside a conductor-%d matrix" % (x.n, n))
        self.rows = tuple(conv)
        self.nrows = len(conv)
        self.ncols = len(conv[0]) if conv else 0
        self.n = n
        self._hash = None

    @classmethod
    def identity(cls, size: int, n: int = 1) -> "ExactMatrix":
        one, zero = CycloScalar.one(n), CycloScalar.zero(n)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, n: int = 1) -> "ExactMatrix":
        zero = CycloScalar.zero(n)
        return cls([[zero] * ncols for _ in range(nrows)], n)

    @classmethod
    def diag(cls, entries: Sequence, n: int = 1) -> "ExactMatrix":
        zero = CycloScalar.zero(n)
        entries = [e if isinstance(e, CycloScalar) else CycloScalar.rational(e, n) for e in entries]
        k = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(k)] for i in range(k)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[CycloScalar]], n: int) -> "ExactMatrix":
        return cls([list(r) for r in zip(*cols)], n)

    @classmethod
    def from_literal(cls, literal, n: int, name: str = "matrix") -> "ExactMatrix":
        if not isinstance(literal, list) or not literal:
            raise ValueError("%s: expected a non-empty list of rows" % name)
        width = None
        rows = []
        for i, row in enumerate(literal):
            if not isinstance(row, list):
                raise ValueError("%s: row %d is not a list" % (name, i))
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError(
                    "%s: row %d has length %d, expected %d" % (name, i, len(row), width)
                )
            rows.append([CycloScalar.from_literal(x, n) for x in row])
        return cls(rows, n)

    def to_literal(self) -> list:
        return [[x.to_literal() for x in r] for r in self.rows]

    # structure ------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> tuple[CycloScalar, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)], self.n)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conj(self) -> "ExactMatrix":
        return ExactMatrix([[x.conj() for x in r] for r in self.rows], self.n)

    def lift(self, m: int) -> "ExactMatrix":
        if m == self.n:
            return self
        return ExactMatrix([[x.lift(m) for x in r] for r in self.rows], m)

    def is_real(self) -> bool:
        return all(x.is_real() for r in self.rows for x in r)

    def numeric(self):
        import numpy as np

        return np.array([[embed_numeric(x) for x in r] for r in self.rows], dtype=complex)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "ExactMatrix") -> None:
        if other.n != self.n:
            raise ConductorMismatch("matrices over Q(zeta_%d) and Q(zeta_%d)" % (self.n, other.n))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return ExactMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return ExactMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self.rows], self.n)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[a * c for a in r] for r in self.rows], self.n)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            self._check(other)
            if self.ncols != other.nrows:
                raise ValueError("cannot multiply %s by %s" % (self.shape, other.shape))
            cols = list(zip(*other.rows))
            zero = CycloScalar.zero(self.n)
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = zero
                    for a, b in zip(r, c):
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return ExactMatrix(out, self.n)
        return self.apply(other)

    def apply(self, vec: Sequence[CycloScalar]) -> tuple[CycloScalar, ...]:
        if len(vec) != self.ncols:
            raise ValueError("vector of length %d for a %s matrix" % (len(vec), self.shape))
        zero = CycloScalar.zero(self.n)
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def rank(self) -> int:
        return rank(self.rows)

    def kernel(self) -> list[tuple[CycloScalar, ...]]:
        return [tuple(v) for v in kernel(self.rows, self.ncols, self.n)]

    def det(self) -> CycloScalar:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        mat = [list(r) for r in self.rows]
        size = self.nrows
        det = CycloScalar.one(self.n)
        for c in range(size):
            piv = next((i for i in range(c, size) if mat[i][c]), None)
            if piv is None:
                return CycloScalar.zero(self.n)
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                det = -det
            det = det * mat[c][c]
            inv = invert(mat[c][c])
            for i in range(c + 1, size):
                if mat[i][c]:
                    f = mat[i][c] * inv
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
        return det

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        size = self.nrows
        eye = ExactMatrix.identity(size, self.n)
        aug = [list(r) + list(e) for r, e in zip(self.rows, eye.rows)]
        red, pivots = rref(aug, 2 * size)
        if pivots[:size] != list(range(size)) or len(red) < size:
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix([r[size:] for r in red], self.n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return "ExactMatrix([%s], n=%d)" % (body, self.n)


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of ``A X = B``: particular solution plus kernel basis."""

    consistent: bool
    particular: ExactMatrix | None
    kernel: tuple[tuple[CycloScalar, ...], ...]
    rank: int


def solve_linear(A: ExactMatrix, B: ExactMatrix) -> LinearSolution:
    """Solve ``A X = B`` exactly by reduced row echelon form."""
    if A.nrows != B.nrows:
        raise ValueError("dimension mismatch: A has %d rows, B has %d" % (A.nrows, B.nrows))
    if A.n != B.n:
        raise ConductorMismatch("A over Q(zeta_%d), B over Q(zeta_%d)" % (A.n, B.n))
    n, m, k = A.n, A.ncols, B.ncols
    aug = [list(a) + list(b) for a, b in zip(A.rows, B.rows)]
    red, pivots = rref(aug, m + k)
    rk = sum(1 for p in pivots if p < m)
    ker = tuple(tuple(v) for v in kernel(A.rows, m, n))
    if any(p >= m for p in pivots):
        return LinearSolution(False, None, ker, rk)
    zero = CycloScalar.zero(n)
    sol = [[zero] * k for _ in range(m)]
    for row, pc in zip(red, pivots):
        sol[pc] = list(row[m:])
    return LinearSolution(True, ExactMatrix(sol, n), ker, rk)
