"""Exact polynomial arithmetic: ring axioms, calculus, linear algebra,
serialization."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lie2check.exactpoly import (
    Polynomial, PolyMatrix, PolyTensor, format_rational, rational,
)

BASE = 2

coeffs = st.builds(Fraction,
                   st.integers(min_value=-6, max_value=6),
                   st.integers(min_value=1, max_value=4))
exponents = st.tuples(st.integers(min_value=0, max_value=3),
                      st.integers(min_value=0, max_value=3))
polynomials = st.dictionaries(exponents, coeffs, max_size=4).map(
    lambda terms: Polynomial(BASE, terms))


@given(polynomials, polynomials, polynomials)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(f, g, h):
    assert (f + g) == (g + f)
    assert (f * g) == (g * f)
    assert ((f + g) + h) == (f + (g + h))
    assert ((f * g) * h) == (f * (g * h))
    assert (f * (g + h)) == (f * g + f * h)
    zero = Polynomial.zero(BASE)
    one = Polynomial.const(BASE, 1)
    assert (f + zero) == f
    assert (f * one) == f
    assert (f - f).is_zero()
    assert (f * zero).is_zero()


@given(polynomials, polynomials)
@settings(max_examples=60, deadline=None)
def test_derivative_is_a_derivation(f, g):
    for k in range(BASE):
        lhs = (f * g).diff(k)
        rhs = f.diff(k) * g + f * g.diff(k)
        assert lhs == rhs


@given(polynomials)
@settings(max_examples=60, deadline=None)
def test_mixed_partials_commute(f):
    assert f.diff(0).diff(1) == f.diff(1).diff(0)


@given(polynomials)
@settings(max_examples=60, deadline=None)
def test_json_round_trip(f):
    assert Polynomial.from_json(BASE, f.to_json()) == f


def test_polynomial_evaluation_oracle():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    f = x * x + Polynomial.const(2, 3) * y
    assert f.diff(0) == Polynomial.const(2, 2) * x
    assert f.diff(1) == Polynomial.const(2, 3)
    assert f.degree() == 2
    assert f.render(["x", "y"]) == "3*y + x^2"


def test_rational_parsing():
    assert rational("3/4") == Fraction(3, 4)
    assert rational("-2") == Fraction(-2)
    assert format_rational(Fraction(7, 2)) == "7/2"
    assert format_rational(Fraction(5)) == "5"


def test_from_json_rejects_bad_terms():
    with pytest.raises(ValueError):
        Polynomial.from_json(1, [{"coeff": "1"}])
    with pytest.raises(ValueError):
        Polynomial.from_json(
            1, [{"coeff": "1", "exps": [1]}, {"coeff": "2", "exps": [1]}])


def test_matrix_inverse_oracle():
    m = PolyMatrix.from_rationals(1, [[2, 1], [1, 1]])
    inv = m.inverse_constant()
    assert m.matmul(inv) == PolyMatrix.identity(1, 2)
    assert inv.matmul(m) == PolyMatrix.identity(1, 2)
    assert inv == PolyMatrix.from_rationals(1, [[1, -1], [-1, 2]])


def test_matrix_determinant_oracle():
    m = PolyMatrix.from_rationals(1, [[1, 2, 3], [0, 1, 4], [5, 6, 0]])
    assert m.determinant() == Polynomial.const(1, 1)


def test_singular_matrix_rejected():
    m = PolyMatrix.from_rationals(1, [[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        m.inverse_constant()


def test_matrix_json_round_trip():
    m = PolyMatrix(2, 2, 3)
    m[0, 1] = Polynomial.variable(2, 0)
    m[1, 2] = Polynomial.const(2, Fraction(1, 3))
    back = PolyMatrix.from_json(2, 2, 3, m.to_json())
    assert back == m
    with pytest.raises(ValueError):
        PolyMatrix.from_json(2, 3, 3, m.to_json())


def test_tensor_antisymmetry():
    t = PolyTensor(1, [(3, 2, True), (2, 1, False)])
    one = Polynomial.const(1, 1)
    t.set((1, 0, 1), one)
    assert t.get(0, 1, 1) == -one
    assert t.get(1, 1, 0).is_zero()
    with pytest.raises(ValueError):
        t.set((2, 2, 0), one)


def test_tensor_json_round_trip():
    groups = [(3, 2, True), (2, 1, False)]
    t = PolyTensor(1, groups)
    t.set((0, 2, 1), Polynomial.variable(1, 0))
    back = PolyTensor.from_json(1, groups, t.to_json())
    assert back == t
