from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from braidlie.cyclotomic import (
    CycScalar,
    cyclotomic_polynomial,
    divisors,
    field_op,
    format_scalar,
    is_primitive_nth_root,
    multiplicative_order,
    parse_scalar,
    reciprocal,
    root_of_unity,
)
from braidlie.errors import DivisionByZero, ParseError


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_small_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


@pytest.mark.parametrize("m", range(1, 65))
def test_product_over_divisors_is_x_to_the_m_minus_one(m):
    prod = [1]
    for d in divisors(m):
        prod = _mul(prod, list(cyclotomic_polynomial(d)))
    assert prod == [-1] + [0] * (m - 1) + [1]


@pytest.mark.parametrize("m", [1, 2, 7, 12, 15, 30, 36, 60, 64])
def test_cyclotomic_matches_sympy(m):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(m)) == [int(c) for c in expected]


def test_root_of_unity_defining_properties():
    i = root_of_unity(4, 1)
    assert i * i == CycScalar.rational(-1)
    assert root_of_unity(6, 3) == CycScalar.rational(-1)


def test_field_op_examples():
    a = root_of_unity(5, 2) + CycScalar.rational(Fraction(3, 4))
    assert field_op(a, CycScalar.rational(0), "add") == a
    z3 = root_of_unity(3, 1)
    assert field_op(z3, z3 * z3, "mul") == CycScalar.rational(1)
    u = CycScalar.rational(1) + root_of_unity(5, 1)
    assert field_op(u, u, "div") == CycScalar.rational(1)
    assert u * u.inverse() == CycScalar.rational(1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_op(root_of_unity(3, 1), CycScalar.rational(0, 3), "div")
    with pytest.raises(DivisionByZero):
        reciprocal(0)


def test_orders():
    assert multiplicative_order(CycScalar.rational(1)) == 1
    assert multiplicative_order(root_of_unity(6, 2)) == 3
    assert multiplicative_order(-root_of_unity(3, 1)) == 6
    assert multiplicative_order(CycScalar.rational(2)) is None


@pytest.mark.parametrize("m", range(1, 37))
def test_order_law(m):
    for k in range(m):
        assert multiplicative_order(root_of_unity(m, k)) == m // gcd(m, k)


def test_primitivity():
    assert is_primitive_nth_root(CycScalar.rational(1), 1)
    assert not is_primitive_nth_root(root_of_unity(4, 2), 4)
    assert is_primitive_nth_root(root_of_unity(12, 5), 12)


def test_coefficients_stay_exact():
    u = (CycScalar.rational(1) + root_of_unity(7, 3)).inverse()
    assert all(isinstance(c, (int, Fraction)) for c in u.coeffs)


def test_format_examples():
    assert format_scalar(-root_of_unity(3, 1)) == "-1*z^1 @ 3"
    assert format_scalar(CycScalar.rational(Fraction(-3, 2))) == "-3/2 @ 1"
    assert format_scalar(CycScalar.rational(0, 5)) == "0 @ 1"
    assert format_scalar(root_of_unity(4, 1)) == "1*z^1 @ 4"


def test_parse_variants():
    z3 = root_of_unity(3, 1)
    assert parse_scalar("z^1@3") == z3
    assert parse_scalar("z@3") == z3
    assert parse_scalar("(1 - 1*z^1 @ 3)") == CycScalar.rational(1) - z3
    assert parse_scalar("-1") == CycScalar.rational(-1)
    assert parse_scalar("5/7") == CycScalar.rational(Fraction(5, 7))
    with pytest.raises(ParseError):
        parse_scalar("z^2")
    with pytest.raises(ParseError):
        parse_scalar("1 + + z @ 3")


levels = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15])


@st.composite
def scalars(draw, level=None):
    m = draw(levels) if level is None else level
    n = draw(st.integers(1, 4))
    coeffs = [Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))) for _ in range(n)]
    exps = [draw(st.integers(0, m - 1)) for _ in range(n)]
    out = CycScalar.rational(0, m)
    for c, e in zip(coeffs, exps):
        out = out + root_of_unity(m, e) * c
    return out


@given(scalars())
def test_print_parse_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a
    assert format_scalar(parse_scalar(format_scalar(a))) == format_scalar(a)


@given(scalars(level=6), scalars(level=4), st.sampled_from(["add", "sub", "mul"]))
def test_embedding_commutes_with_operations(a, b, op):
    direct = field_op(a, b, op)
    lifted = field_op(a.embed(24), b.embed(24), op)
    assert direct == lifted
    assert format_scalar(direct) == format_scalar(lifted)


@given(scalars(), scalars())
def test_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b) / b == a


@given(scalars())
def test_equal_scalars_hash_equal(a):
    b = a.embed(a.level * 2)
    assert a == b and hash(a) == hash(b)
