import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cfentropy.qsqrt5 import LAMBDA, LAMBDA_INV, QSqrt5, golden_eigenvector

small = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20))
elements = st.builds(QSqrt5, small, small)
SQRT5 = sympy.sqrt(5)


def to_sympy(x: QSqrt5):
    return sympy.Rational(x.r.numerator, x.r.denominator) + sympy.Rational(x.s.numerator, x.s.denominator) * SQRT5


def test_golden_ratio_identities():
    assert LAMBDA * LAMBDA == LAMBDA + 1
    assert LAMBDA * LAMBDA_INV == 1
    assert LAMBDA.norm() == -1
    assert float(LAMBDA) == pytest.approx(1.6180339887498949)


def test_eigenvector_sums_to_one():
    v = golden_eigenvector()
    assert sum(v, QSqrt5(0)) == 1
    assert v[0] == v[7] and v[2] == v[5]


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QSqrt5(1) / QSqrt5(0)


def test_negative_power():
    assert LAMBDA ** -3 == LAMBDA_INV ** 3


@given(elements, elements)
def test_arithmetic_matches_sympy(x, y):
    assert sympy.simplify(to_sympy(x + y) - (to_sympy(x) + to_sympy(y))) == 0
    assert sympy.simplify(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0
    assert sympy.simplify(to_sympy(x - y) - (to_sympy(x) - to_sympy(y))) == 0
    if y:
        assert sympy.simplify(to_sympy(x / y) - to_sympy(x) / to_sympy(y)) == 0


@given(elements)
def test_sign_matches_sympy(x):
    expected = sympy.sign(to_sympy(x))
    assert x.sign() == int(expected)


@given(elements, elements)
def test_order_is_total_and_exact(x, y):
    assert (x < y) == bool(to_sympy(x) < to_sympy(y))
    assert (x == y) == (to_sympy(x) == to_sympy(y))
    assert (x <= y) or (y <= x)


@given(elements, st.integers(0, 8))
def test_power(x, k):
    out = QSqrt5(1)
    for _ in range(k):
        out = out * x
    assert x ** k == out


big = st.builds(Fraction, st.integers(-10**7, 10**7), st.integers(1, 10**3))


@given(big, big)
def test_float_conversion_is_accurate(r, s):
    x = QSqrt5(r, s)
    exact = sympy.N(to_sympy(x), 40)
    assert abs(float(x) - float(exact)) <= 4 * math.ulp(float(exact)) + 1e-300
