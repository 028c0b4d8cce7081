import itertools
import random

import pytest

from quasiquot.catalog import complex_cyclic, cyclic_rotations, dihedral, rotation, sign_line
from quasiquot.exact import CycloScalar, ExactMatrix
from quasiquot.group import (
    ClosureCapExceeded,
    center_involutions,
    close,
    isotropy,
    isotropy_classes,
    is_pseudoreflection,
    subgroups,
)


def brute_closure(gens):
    """Products of words until nothing new appears; independent of the BFS."""
    seen = {ExactMatrix.identity(gens[0].nrows, gens[0].n)}
    while True:
        new = {a @ b for a in seen for b in gens} | seen
        if new == seen:
            return seen
        seen = new


def test_close_examples():
    assert sign_line().order == 2
    assert cyclic_rotations(4).order == 4
    D8 = close([ExactMatrix.diag([1, -1]), rotation(4)], field="real")
    assert D8.order == 8
    assert set(D8.elements) == brute_closure([ExactMatrix.diag([1, -1]), rotation(4)])


@pytest.mark.parametrize("k", [3, 5, 6, 8])
def test_rotation_orders(k):
    assert cyclic_rotations(k).order == k
    assert dihedral(k).order == 2 * k


def test_cap_exceeded_for_infinite_group():
    with pytest.raises(ClosureCapExceeded):
        close([ExactMatrix([[1, 1], [0, 1]])], cap=50)


def test_close_rejects_bad_input():
    with pytest.raises(ValueError):
        close([])
    with pytest.raises(ValueError):
        close([ExactMatrix([[1, 0], [0, 0]])])
    with pytest.raises(ValueError):
        close([ExactMatrix.diag([CycloScalar.zeta(3)], 3)], field="real")


def test_closure_independent_of_generator_order():
    gens = [ExactMatrix.diag([1, -1]), rotation(4), ExactMatrix.diag([-1, -1])]
    ref = set(close(gens).elements)
    for perm in itertools.permutations(gens):
        assert set(close(list(perm)).elements) == ref


def test_pseudoreflection_examples():
    assert is_pseudoreflection(ExactMatrix.diag([1, -1])) == (True, 2)
    assert is_pseudoreflection(ExactMatrix.diag([-1, -1])) == (False, None)
    w = CycloScalar.zeta(3)
    assert is_pseudoreflection(ExactMatrix.diag([CycloScalar.one(3), w], 3)) == (True, 3)


def test_isotropy_examples():
    Z2 = sign_line()
    assert isotropy(Z2, [0]).order == 2
    assert isotropy(Z2, [1]).order == 1
    D8 = dihedral(4)
    rec = isotropy(D8, [1, 0])
    assert rec.order == 2
    others = [D8.elements[i] for i in rec.element_indices if i != D8.identity_index]
    assert others == [ExactMatrix.diag([1, -1])]


def test_isotropy_class_examples():
    Z2 = sign_line()
    assert [(c.order, c.fixed_dim) for c in isotropy_classes(Z2)] == [(1, 1), (2, 0)]
    for k in (2, 3, 4, 6):
        assert [(c.order, c.fixed_dim) for c in isotropy_classes(cyclic_rotations(k))] == [(1, 2), (k, 0)]
    classes = isotropy_classes(dihedral(4))
    assert [(c.order, c.fixed_dim, len(c.members)) for c in classes] == [
        (1, 2, 1), (2, 1, 2), (2, 1, 2), (8, 0, 1)]


def test_center_involution_examples():
    Z4 = cyclic_rotations(4)
    assert [Z4.elements[h] for h in center_involutions(Z4)] == [ExactMatrix.diag([-1, -1])]
    D8 = dihedral(4)
    assert [D8.elements[h] for h in center_involutions(D8)] == [ExactMatrix.diag([-1, -1])]
    trivial = close([ExactMatrix.identity(2)])
    assert center_involutions(trivial) == []


def brute_subgroups(rep):
    """Subsets closed under the product, found by trying every subset containing e."""
    tab = rep.table
    others = [i for i in range(rep.order) if i != rep.identity_index]
    out = 0
    for r in range(len(others) + 1):
        for sub in itertools.combinations(others, r):
            S = set(sub) | {rep.identity_index}
            if all(tab[a][b] in S for a in S for b in S):
                out += 1
    return out


@pytest.mark.parametrize("rep,count", [(dihedral(4), 10), (dihedral(3), 6), (cyclic_rotations(6), 4)])
def test_subgroup_counts(rep, count):
    assert len(subgroups(rep)) == count
    assert brute_subgroups(rep) == count


@pytest.mark.parametrize("rep", [dihedral(4), dihedral(3), cyclic_rotations(6), complex_cyclic(4)])
def test_lagrange_and_table(rep):
    for K in subgroups(rep):
        assert rep.order % len(K) == 0
    tab = rep.table
    rnd = random.Random(1)
    for _ in range(30):
        a, b = rnd.randrange(rep.order), rnd.randrange(rep.order)
        assert rep.elements[tab[a][b]] == rep.elements[a] @ rep.elements[b]
    for g, gi in enumerate(rep.inverses):
        assert tab[g][gi] == rep.identity_index
    for g, o in enumerate(rep.orders):
        assert o in {len(K) for K in subgroups(rep)}
