import itertools

import numpy as np
import pytest

from quasiquot.catalog import complex_cyclic, cyclic_rotations, dihedral
from quasiquot.cli import conjugate_rep
from quasiquot.exact import CycloScalar, ExactMatrix
from quasiquot.group import center_involutions, close
from quasiquot.invariants import generators
from quasiquot.poly import Poly, compose
from quasiquot.quasiiso import (
    GroupIso,
    QuasiIso,
    enumerate_isomorphisms,
    find_quasi_isomorphism,
    graded_automorphism,
    intertwiners,
    real_form,
    symbolic_determinant,
    verify_quasi_isomorphism,
)

NEG_I = close([ExactMatrix.diag([-1, -1])], field="real", name="negI")
REFL_X = close([ExactMatrix.diag([1, -1])], field="real", name="reflX")
REFL_Y = close([ExactMatrix.diag([-1, 1])], field="real", name="reflY")
KLEIN = close([ExactMatrix.diag([1, -1]), ExactMatrix.diag([-1, 1])], field="real", name="klein4")


def index_of(rep, M):
    return rep.elements.index(M)


def test_enumerate_isomorphisms_examples():
    assert len(enumerate_isomorphisms(REFL_X, REFL_Y)) == 1
    Z4 = cyclic_rotations(4)
    isos = enumerate_isomorphisms(Z4, Z4)
    assert len(isos) == 2 and all(i.is_valid() for i in isos)
    assert enumerate_isomorphisms(Z4, KLEIN) == []


def test_isomorphism_counts_match_brute_force():
    # brute force over all bijections fixing the identity
    G = dihedral(3)
    e = G.identity_index
    rest = [i for i in range(G.order) if i != e]
    count = 0
    for perm in itertools.permutations(rest):
        img = [0] * G.order
        img[e] = e
        for a, b in zip(rest, perm):
            img[a] = b
        if GroupIso(G, G, tuple(img)).is_valid():
            count += 1
    assert len(enumerate_isomorphisms(G, G)) == count == 6


def test_intertwiner_examples():
    iso = enumerate_isomorphisms(REFL_X, REFL_X)[0]
    basis = intertwiners(REFL_X, REFL_X, iso)
    assert len(basis) == 2
    assert all(b[0, 1].is_zero() and b[1, 0].is_zero() for b in basis)

    iso = enumerate_isomorphisms(NEG_I, REFL_X)[0]
    for L in intertwiners(NEG_I, REFL_X, iso):
        assert L[0, 0].is_zero() and L[0, 1].is_zero()

    iso = enumerate_isomorphisms(REFL_X, REFL_Y)[0]
    basis = intertwiners(REFL_X, REFL_Y, iso)
    assert all(b[0, 0].is_zero() and b[1, 1].is_zero() for b in basis)


def test_none_is_certified():
    res = find_quasi_isomorphism(NEG_I, REFL_X)
    assert res.status == "none" and res.witness is None
    assert len(res.certificates) == res.isomorphisms == 1
    iso = enumerate_isomorphisms(NEG_I, REFL_X)[0]
    assert symbolic_determinant(intertwiners(NEG_I, REFL_X, iso)).is_zero()


def test_dimension_mismatch_is_distinct():
    res = find_quasi_isomorphism(complex_cyclic(2), NEG_I)
    assert res.status == "dimension-mismatch"


def test_reflection_swap_witness():
    res = find_quasi_isomorphism(REFL_X, REFL_Y)
    assert res.status == "found"
    assert verify_quasi_isomorphism(res.witness).ok


def test_dihedral_conjugate_and_corrupted_witness():
    G = dihedral(4)
    A = ExactMatrix([[1, 1], [0, 1]], G.conductor)
    H = conjugate_rep(G, A)
    res = find_quasi_isomorphism(G, H)
    assert res.status == "found"
    q = res.witness
    ver = verify_quasi_isomorphism(q)
    assert ver.ok and ver.offending == ()
    # independent check of L G L^-1 = H as sets
    L = q.L
    assert {L @ g @ L.inverse() for g in G.elements} == set(H.elements)
    rows = [list(r) for r in L.rows]
    rows[0][0] = rows[0][0] + CycloScalar.rational(1, L.n)
    bad = QuasiIso(ExactMatrix(rows, L.n), q.iso)
    ver = verify_quasi_isomorphism(bad)
    assert not ver.ok and ver.offending


def test_identity_witness_for_same_group():
    G = cyclic_rotations(3)
    res = find_quasi_isomorphism(G, G)
    assert res.status == "found" and verify_quasi_isomorphism(res.witness).ok


@pytest.mark.parametrize("pair", [(NEG_I, REFL_X), (REFL_X, REFL_Y), (cyclic_rotations(4), KLEIN),
                                  (dihedral(4), conjugate_rep(dihedral(4), ExactMatrix([[2, 1], [1, 1]])))],
                         ids=["negI-reflX", "reflX-reflY", "Z4-klein", "D8-conj"])
def test_symmetry(pair):
    G, H = pair
    assert (find_quasi_isomorphism(G, H).status == "found") == (find_quasi_isomorphism(H, G).status == "found")


def test_real_form_examples():
    h = index_of(NEG_I, ExactMatrix.diag([-1, -1]))
    rf = real_form(NEG_I, h)
    assert rf.plus_basis == () and len(rf.minus_basis) == 2
    N = rf.conductor
    assert rf.induced_action[h] == ExactMatrix.diag([-1, -1], N)

    Z4 = cyclic_rotations(4)
    rf = real_form(Z4, Z4.identity_index)
    assert tuple(rf.induced_action) == tuple(g.lift(rf.conductor) for g in Z4.elements)

    hpi = center_involutions(Z4)[0]
    rf = real_form(Z4, hpi)
    assert tuple(rf.induced_action) == tuple(g.lift(rf.conductor) for g in Z4.elements)
    res = find_quasi_isomorphism(Z4.lifted(rf.conductor), rf.representation)
    assert res.status == "found"


def test_real_form_rejects_noncentral():
    D8 = dihedral(4)
    refl = index_of(D8, ExactMatrix.diag([1, -1]))
    with pytest.raises(ValueError):
        real_form(D8, refl)
    Z4 = cyclic_rotations(4)
    quarter = next(i for i, o in enumerate(Z4.orders) if o == 4)
    with pytest.raises(ValueError):
        real_form(Z4, quarter)


def apply_map(qmap, point):
    return qmap.numeric()(np.asarray(point, dtype=complex))


@pytest.mark.parametrize("rep,signs", [(NEG_I, (-1, -1, -1)), (cyclic_rotations(2), (-1, -1, -1)),
                                       (cyclic_rotations(4), (-1, 1, 1))], ids=["negI", "rot2", "rot4"])
def test_graded_automorphism_signs(rep, signs):
    b = generators(rep)
    h = center_involutions(rep)[0]
    ga = graded_automorphism(b, h)
    assert ga.signs == signs
    ident = graded_automorphism(b, rep.identity_index)
    assert ident.signs == (1,) * b.m


@pytest.mark.parametrize("rep", [NEG_I, cyclic_rotations(4), cyclic_rotations(6), dihedral(4)],
                         ids=lambda r: r.name)
def test_graded_automorphism_is_an_involution(rep):
    b = generators(rep)
    for h in center_involutions(rep):
        comps = graded_automorphism(b, h).map.components
        twice = [compose(c, list(comps)) for c in comps]
        assert twice == [Poly.var(j, b.m, comps[0].n) for j in range(b.m)]


def test_graded_automorphism_matches_twisted_values():
    """q(w+ + i w-) equals the induced map applied to q(w+ + w-)."""
    rep = cyclic_rotations(4)
    b = generators(rep)
    h = center_involutions(rep)[0]
    ga = graded_automorphism(b, h)
    rng = np.random.default_rng(0)
    for _ in range(5):
        v = rng.standard_normal(2)
        # h = -I, so w- = v and the substitution is v -> i v
        lhs = b.numeric()(1j * v.astype(complex))
        rhs = apply_map(ga.map, b.numeric()(v.astype(complex)))
        assert np.allclose(lhs, rhs, atol=1e-12)
