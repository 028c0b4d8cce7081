import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiquot.catalog import rotation
from quasiquot.exact import ConductorMismatch, CycloScalar, ExactMatrix, embed_numeric
from quasiquot.poly import (
    NumericPolyMap,
    Poly,
    WeightSystem,
    act_linear,
    compose,
    evaluate,
    monomials_of_weighted_degree,
    weighted_component,
)


def var(i, k=2, n=1):
    return Poly.var(i, k, n)


x, y = var(0), var(1)


def Q(a, n=1):
    return CycloScalar.rational(a, n)


def test_evaluate_examples():
    f = x**2 + y**2
    assert evaluate(f, [Q(1), Q(2)]) == Q(5)
    i = CycloScalar.zeta(4)
    assert evaluate(f.lift(4), [i, Q(1, 4)]).is_zero()
    assert evaluate(Poly.constant(7, 2), [Q(11), Q(-3)]) == Q(7)


def test_compose_examples():
    y1 = Poly.var(0, 1)
    X = Poly.var(0, 1)
    assert compose(y1**2, [X + 1]) == X**2 + 2 * X + 1
    Y1, Y2, Y3 = (Poly.var(i, 3) for i in range(3))
    rel = Y2**2 + Y3**2 - Y1**2
    assert compose(rel, [x**2 + y**2, x**2 - y**2, 2 * x * y]).is_zero()
    h = x**3 - y
    assert compose(y1, [h]) == h


def test_compose_conductor_mismatch():
    with pytest.raises(ConductorMismatch):
        compose(Poly.var(0, 1, 3), [Poly.var(0, 1, 4)])


def test_weighted_component_examples():
    Y1 = Poly.var(0, 1)
    w = WeightSystem((2,))
    f = Y1 + Y1**2
    assert weighted_component(f, w, 2) == Y1
    assert weighted_component(f, w, 4) == Y1**2
    Y1, Y2 = Poly.var(0, 2), Poly.var(1, 2)
    assert weighted_component(Y1 * Y2, WeightSystem((2, 3)), 4).is_zero()
    with pytest.raises(ValueError):
        weighted_component(Y1, WeightSystem((2,)), 2)


def test_weighted_monomial_enumeration():
    w = WeightSystem((2, 3))
    got = set(monomials_of_weighted_degree(w, 12))
    brute = {(a, b) for a in range(7) for b in range(5) if 2 * a + 3 * b == 12}
    assert got == brute


def test_act_linear_examples():
    minus = ExactMatrix.diag([-1, -1])
    assert act_linear(minus, x) == -x
    assert act_linear(rotation(4), x**2) == y**2
    g = ExactMatrix([[2, 1], [5, 3]])
    assert act_linear(g, Poly.constant(3, 2)) == Poly.constant(3, 2)


def small_matrices():
    ent = st.integers(-3, 3)
    return st.lists(ent, min_size=4, max_size=4).map(lambda e: ExactMatrix([e[:2], e[2:]]))


def small_polys():
    term = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5))
    return st.lists(term, max_size=5).map(lambda ts: Poly(2, {(a, b): c for a, b, c in ts}))


@settings(max_examples=60, deadline=None)
@given(small_matrices(), small_matrices(), small_polys())
def test_act_linear_composes_as_right_action(g, h, f):
    # (f o g) o h = f o (g h)
    assert act_linear(h, act_linear(g, f)) == act_linear(g @ h, f)


@settings(max_examples=60, deadline=None)
@given(small_polys(), st.integers(-4, 4), st.integers(-4, 4))
def test_numeric_eval_matches_exact(f, a, b):
    exact = evaluate(f, [Q(a), Q(b)])
    num = NumericPolyMap([f])(np.array([a, b], dtype=complex))[0]
    assert abs(num - embed_numeric(exact)) <= 1e-9 * (1 + abs(num))


def test_homogeneity_scaling():
    w = WeightSystem((2, 4, 4))
    Y = [Poly.var(i, 3) for i in range(3)]
    f = Y[1] ** 2 + Y[2] ** 2 - Y[0] ** 4
    assert f.is_homogeneous(w) and f.weighted_degrees(w) == {8}
    t = Q(3)
    pt = [Q(2), Q(-1), Q(5)]
    scaled = [t ** d * c for d, c in zip(w.weights, pt)]
    assert evaluate(f, scaled) == t**8 * evaluate(f, pt)


def test_json_roundtrip():
    f = x**2 + 3 * x * y - 7
    g = Poly(2, {(1, 2): CycloScalar.zeta(5, 2)}, 5)
    for p, n in ((f, 1), (g, 5)):
        assert Poly.from_json(p.to_json(), 2, n) == p


def test_jacobian_matches_finite_differences():
    polys = [x**3 + 2 * x * y, y**2 - x]
    fm = NumericPolyMap(polys)
    p = np.array([0.7 + 0.2j, -0.4 + 0.1j])
    J = fm.jacobian(p)
    eps = 1e-6
    for j in range(2):
        d = np.zeros(2, dtype=complex)
        d[j] = eps
        fd = (fm(p + d) - fm(p - d)) / (2 * eps)
        assert np.allclose(J[:, j], fd, atol=1e-8)


def test_coefficients_must_share_conductor():
    with pytest.raises(ConductorMismatch):
        Poly(1, {(1,): CycloScalar.zeta(3)}, 4)
    with pytest.raises(ValueError):
        Poly(2, {(1,): 1})
