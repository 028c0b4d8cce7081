"""Finite matrix groups over Q(zeta_n): closure, pseudoreflections, isotropy."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exact import ConductorMismatch, CycloScalar, ExactMatrix, kernel

__all__ = [
    "ClosureCapExceeded",
    "Representation",
    "SubgroupRecord",
    "IsotropyClass",
    "close",
    "element_order",
    "is_pseudoreflection",
    "isotropy",
    "fixed_space",
    "subgroups",
    "isotropy_classes",
    "center_involutions",
]

DEFAULT_CAP = 1024


class ClosureCapExceeded(RuntimeError):
    """The generated group is infinite or larger than the closure cap."""


Vector = tuple[CycloScalar, ...]


@dataclass(frozen=True)
class SubgroupRecord:
    element_indices: tuple[int, ...]
    fixed_space: tuple[Vector, ...]

    @property
    def order(self) -> int:
        return len(self.element_indices)

    @property
    def fixed_dim(self) -> int:
        return len(self.fixed_space)


@dataclass(frozen=True)
class IsotropyClass:
    """A conjugacy class of isotropy subgroups."""

    members: tuple[SubgroupRecord, ...]

    @property
    def representative(self) -> SubgroupRecord:
        return self.members[0]

    @property
    def order(self) -> int:
        return self.members[0].order

    @property
    def fixed_dim(self) -> int:
        return self.members[0].fixed_dim


@dataclass(eq=False)
class Representation:
    """A finite subgroup of GL(dim) over Q(zeta_conductor), with all elements listed.

    ``field`` records whether the action is read on a real vector space
    (matrices numerically real) or a complex one.
    """

    dim: int
    conductor: int
    field: str
    generators: tuple[ExactMatrix, ...]
    elements: tuple[ExactMatrix, ...]
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_real(self) -> bool:
        return self.field == "real"

    @cached_property
    def index(self) -> dict[ExactMatrix, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def identity_index(self) -> int:
        return self.index[ExactMatrix.identity(self.dim, self.conductor)]

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        """``table[i][j]`` is the index of ``elements[i] @ elements[j]``."""
        idx = self.index
        return tuple(
            tuple(idx[a @ b] for b in self.elements) for a in self.elements
        )

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity_index
        tab = self.table
        return tuple(row.index(e) for row in tab)

    @cached_property
    def orders(self) -> tuple[int, ...]:
        e = self.identity_index
        out = []
        for i in range(self.order):
            k, cur = 1, i
            while cur != e:
                cur = self.table[cur][i]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index[g] for g in self.generators)

    def conjugate_indices(self, indices: Sequence[int], by: int) -> tuple[int, ...]:
        tab, inv = self.table, self.inverses
        return tuple(sorted(tab[tab[by][i]][inv[by]] for i in indices))

    def act(self, g: int | ExactMatrix, v: Sequence[CycloScalar]) -> Vector:
        mat = self.elements[g] if isinstance(g, int) else g
        return mat.apply(v)

    def lifted(self, m: int) -> "Representation":
        """Same group with entries embedded in Q(zeta_m)."""
        if m == self.conductor:
            return self
        return Representation(
            self.dim, m, self.field,
            tuple(g.lift(m) for g in self.generators),
            tuple(g.lift(m) for g in self.elements),
            self.name,
        )

    def __repr__(self):
        return "Representation(%r, dim=%d, n=%d, %s, order=%d)" % (
            self.name, self.dim, self.conductor, self.field, self.order)


def close(generators: Sequence[ExactMatrix], cap: int = DEFAULT_CAP, field: str = "complex",
          name: str = "") -> Representation:
    """Enumerate the group generated by ``generators`` breadth-first from the identity."""
    gens = tuple(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    if cap < 1:
        raise ValueError("closure cap must be >= 1")
    if field not in ("real", "complex"):
        raise ValueError("field must be 'real' or 'complex', got %r" % (field,))
    dim, n = gens[0].nrows, gens[0].n
    for k, g in enumerate(gens):
        if g.nrows != g.ncols or g.nrows != dim:
            raise ValueError("generator %d has shape %s, expected (%d, %d)" % (k, g.shape, dim, dim))
        if g.n != n:
            raise ConductorMismatch("generator %d has conductor %d, expected %d" % (k, g.n, n))
        if not g.is_invertible():
            raise ValueError("generator %d is not invertible" % k)
        if field == "real" and not g.is_real():
            raise ValueError("generator %d has non-real entries but field is 'real'" % k)
    ident = ExactMatrix.identity(dim, n)
    seen = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g @ x
            if y not in seen:
                if len(elements) >= cap:
                    raise ClosureCapExceeded(
                        "not closed within cap %d (group infinite or too large)" % cap
                    )
                seen[y] = len(elements)
                elements.append(y)
                queue.append(y)
    return Representation(dim, n, field, gens, tuple(elements), name)


def element_order(g: ExactMatrix, cap: int = DEFAULT_CAP) -> int:
    ident = ExactMatrix.identity(g.nrows, g.n)
    cur, k = g, 1
    while cur != ident:
        cur = cur @ g
        k += 1
        if k > cap:
            raise ClosureCapExceeded("element order exceeds %d" % cap)
    return k


def is_pseudoreflection(g: ExactMatrix) -> tuple[bool, int | None]:
    """``(True, r)`` if ``g - I`` has rank one and ``g`` has finite order ``r >= 2``."""
    ident = ExactMatrix.identity(g.nrows, g.n)
    if (g - ident).rank() != 1:
        return False, None
    try:
        r = element_order(g)
    except ClosureCapExceeded:
        return False, None
    return True, r


def fixed_space(rep: Representation, indices: Sequence[int]) -> tuple[Vector, ...]:
    """Basis of the common fixed subspace of the listed elements."""
    ident = ExactMatrix.identity(rep.dim, rep.conductor)
    rows = []
    for i in indices:
        rows.extend((rep.elements[i] - ident).rows)
    if not rows:
        rows = [[CycloScalar.zero(rep.conductor)] * rep.dim]
    return tuple(tuple(v) for v in kernel(rows, rep.dim, rep.conductor))


def isotropy(rep: Representation, v: Sequence[CycloScalar]) -> SubgroupRecord:
    """The subgroup of elements fixing ``v``."""
    if len(v) != rep.dim:
        raise ValueError("point has %d coordinates, representation has dim %d" % (len(v), rep.dim))
    v = tuple(x if isinstance(x, CycloScalar) else CycloScalar.rational(x, rep.conductor) for x in v)
    idx = tuple(i for i, g in enumerate(rep.elements) if g.apply(v) == v)
    return SubgroupRecord(idx, fixed_space(rep, idx))


def _close_indices(rep: Representation, seeds: Sequence[int]) -> frozenset[int]:
    tab = rep.table
    out = {rep.identity_index}
    frontier = [rep.identity_index]
    seeds = list(seeds)
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = tab[s][x]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def _subgroups_upto(rep: Representation, gen_size: int) -> set[frozenset[int]]:
    found = {frozenset([rep.identity_index])}
    level = set(found)
    for _ in range(gen_size):
        nxt = set()
        for K in level:
            for g in range(rep.order):
                if g not in K:
                    H = _close_indices(rep, list(K) + [g])
                    if H not in found:
                        nxt.add(H)
        found |= nxt
        level = nxt
        if not level:
            break
    return found


def subgroups(rep: Representation, gen_size: int = 2, verify: bool = True) -> list[frozenset[int]]:
    """All subgroups generated by at most ``gen_size`` elements.

    With ``verify`` the enumeration is repeated with one more generator and
    a mismatch raises, signalling that ``gen_size`` is too small.
    """
    key = ("subgroups", gen_size)
    if key not in rep.meta:
        found = _subgroups_upto(rep, gen_size)
        if verify:
            bigger = _subgroups_upto(rep, gen_size + 1)
            if len(bigger) != len(found):
                raise RuntimeError(
                    "subgroup count changes from %d to %d when raising the generating-set "
                    "size to %d; increase gen_size" % (len(found), len(bigger), gen_size + 1)
                )
        rep.meta[key] = sorted(found, key=lambda K: (len(K), sorted(K)))
    return rep.meta[key]


def _stabilizer_of_space(rep: Representation, basis: Sequence[Vector]) -> frozenset[int]:
    return frozenset(
        i for i, g in enumerate(rep.elements) if all(g.apply(v) == v for v in basis)
    )


def isotropy_classes(rep: Representation, gen_size: int = 2) -> list[IsotropyClass]:
    """Conjugacy classes of isotropy subgroups, ordered by (order, fixed dim)."""
    key = ("isotropy_classes", gen_size)
    if key in rep.meta:
        return rep.meta[key]
    isotropic = []
    for K in subgroups(rep, gen_size):
        idx = tuple(sorted(K))
        fs = fixed_space(rep, idx)
        if _stabilizer_of_space(rep, fs) == K:
            isotropic.append(SubgroupRecord(idx, fs))
    classes: list[list[SubgroupRecord]] = []
    assigned: dict[tuple[int, ...], int] = {}
    for rec in isotropic:
        if rec.element_indices in assigned:
            continue
        cls_idx = len(classes)
        members = []
        conj_sets = sorted({rep.conjugate_indices(rec.element_indices, g) for g in range(rep.order)})
        by_idx = {r.element_indices: r for r in isotropic}
        for s in conj_sets:
            assigned[s] = cls_idx
            members.append(by_idx[s])
        classes.append(members)
    out = [IsotropyClass(tuple(m)) for m in classes]
    out.sort(key=lambda c: (c.order, c.fixed_dim, c.representative.element_indices))
    rep.meta[key] = out
    return out


def center_involutions(rep: Representation) -> list[int]:
    """Indices of central elements ``h != I`` with ``h^2 = I``."""
    e = rep.identity_index
    tab = rep.table
    out = []
    for h in range(rep.order):
        if h == e or tab[h][h] != e:
            continue
        if all(tab[h][g] == tab[g][h] for g in range(rep.order)):
            out.append(h)
    return out
