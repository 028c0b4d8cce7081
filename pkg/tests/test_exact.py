import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiquot.exact import (
    ConductorMismatch,
    CycloScalar,
    ExactMatrix,
    cyclotomic_polynomial,
    embed_numeric,
    euler_phi,
    invert,
    reduce,
    solve_linear,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12]


def Z(n, k=1):
    return CycloScalar.zeta(n, k)


def Q(x, n=1):
    return CycloScalar.rational(x, n)


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]
    assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)


def test_reduce_examples():
    assert reduce([0, 0, 1], 4) == Q(-1, 4)
    assert reduce([0, 1, 1], 3) == Q(-1, 3)
    assert reduce([0, 0, 1], 1) == Q(1, 1)
    assert reduce([0, 0, 0, 0, 0, 0, 1], 6) == Q(1, 6)
    with pytest.raises(ValueError):
        reduce([1], 0)


def test_invert_examples():
    assert invert(Z(3)) == Z(3, 2)
    assert invert(Q(2)) == Q(Fraction(1, 2))
    assert invert(1 + Z(4)) == (1 - Z(4)) / 2
    with pytest.raises(ZeroDivisionError):
        invert(CycloScalar.zero(5))


def test_embed_examples():
    assert abs(embed_numeric(Z(4)) - 1j) <= 1e-12
    assert abs(embed_numeric(Z(3) + Z(3, 2)) - (-1)) <= 1e-12
    val = embed_numeric((Z(8) + Z(8, 7)) / 2)
    assert abs(val - math.cos(math.pi / 4)) <= 1e-12


def test_mixed_conductor_is_an_error():
    with pytest.raises(ConductorMismatch):
        Z(3) + Z(4)
    assert Z(3).lift(12) == Z(12, 4)
    assert Z(12, 4).descend(3) == Z(3)
    assert Z(12).descend(3) is None


def test_literal_roundtrip_and_padding():
    a = CycloScalar.from_literal(["1/2", "-3"], 5)
    assert a.to_literal() == ["1/2", "-3"]
    assert CycloScalar.from_literal(["7"], 8) == Q(7, 8)
    with pytest.raises(ValueError):
        CycloScalar.from_literal(["1", "2", "3"], 4)


def test_conj_and_reality():
    assert Z(5).conj() == Z(5, 4)
    assert (Z(8) + Z(8, 7)).is_real()
    assert not Z(8).is_real()


def scalars(n):
    phi = euler_phi(n)
    frac = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.lists(frac, min_size=phi, max_size=phi).map(lambda c: CycloScalar(c, n))


@st.composite
def triples(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    s = scalars(n)
    return draw(s), draw(s), draw(s)


@settings(max_examples=150, deadline=None)
@given(triples())
def test_field_axioms(abc):
    a, b, c = abc
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CycloScalar.zero(a.n)
    if not a.is_zero():
        assert a * invert(a) == CycloScalar.one(a.n)


@settings(max_examples=100, deadline=None)
@given(triples())
def test_embedding_is_a_ring_homomorphism(abc):
    a, b, c = abc
    ea, eb, ec = (embed_numeric(x) for x in abc)
    assert abs(embed_numeric(a * b + c) - (ea * eb + ec)) <= 1e-10 * (1 + abs(ea * eb) + abs(ec))
    assert abs(embed_numeric(a.conj()) - ea.conjugate()) <= 1e-10 * (1 + abs(ea))


@settings(max_examples=60, deadline=None)
@given(triples(), st.sampled_from([2, 3, 4]))
def test_lift_is_a_homomorphism(abc, factor):
    a, b, _ = abc
    m = a.n * factor
    assert (a * b).lift(m) == a.lift(m) * b.lift(m)
    assert (a + b).lift(m) == a.lift(m) + b.lift(m)
    assert abs(embed_numeric(a.lift(m)) - embed_numeric(a)) <= 1e-9 * (1 + abs(embed_numeric(a)))


def test_zeta_powers_cycle():
    for n in CONDUCTORS:
        assert Z(n) ** n == CycloScalar.one(n)
        assert abs(embed_numeric(Z(n)) - cmath.exp(2j * math.pi / n)) <= 1e-12


# -- matrices -----------------------------------------------------------------


def check_solution(A, B, sol):
    zero = ExactMatrix.zeros(A.nrows, 1, A.n)
    if sol.consistent:
        assert A @ sol.particular == B
    for k in sol.kernel:
        assert A @ ExactMatrix([[x] for x in k], A.n) == zero


def test_solve_linear_examples():
    A = ExactMatrix.identity(2)
    B = ExactMatrix([[1], [2]])
    sol = solve_linear(A, B)
    assert sol.consistent and sol.rank == 2 and not sol.kernel
    assert sol.particular == B

    sol = solve_linear(ExactMatrix.zeros(2, 2), ExactMatrix.zeros(2, 1))
    assert sol.rank == 0 and len(sol.kernel) == 2

    A = ExactMatrix([[1, 1], [1, 1]])
    sol = solve_linear(A, ExactMatrix([[1], [1]]))
    assert sol.consistent and sol.rank == 1 and len(sol.kernel) == 1
    assert sol.particular == ExactMatrix([[1], [0]])
    k = sol.kernel[0]
    assert k[0] == -k[1] and not k[0].is_zero()
    check_solution(A, ExactMatrix([[1], [1]]), sol)


def test_solve_linear_inconsistent_and_mismatch():
    sol = solve_linear(ExactMatrix([[1, 1], [1, 1]]), ExactMatrix([[1], [2]]))
    assert not sol.consistent and sol.particular is None
    with pytest.raises(ValueError):
        solve_linear(ExactMatrix.identity(2), ExactMatrix([[1], [2], [3]]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 3, 4, 8]), st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_linear_random(n, rows, cols, data):
    s = scalars(n)
    A = ExactMatrix([[data.draw(s) for _ in range(cols)] for _ in range(rows)], n)
    B = ExactMatrix([[data.draw(s)] for _ in range(rows)], n)
    check_solution(A, B, solve_linear(A, B))


def test_matrix_inverse_det_and_literals():
    A = ExactMatrix([[Z(3), 1], [0, 2]], 3)
    assert A @ A.inverse() == ExactMatrix.identity(2, 3)
    assert A.det() == Z(3) * 2
    lit = A.to_literal()
    assert ExactMatrix.from_literal(lit, 3) == A
    with pytest.raises(ValueError, match="row 1"):
        ExactMatrix.from_literal([[["1"], ["0"]], [["1"]]], 1)
