from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from basecrypt import numeric
from basecrypt.errors import BudgetExceeded, DivisionByZero, ZeroToNegativePower

from oracles import repeated_power

rationals = st.fractions(max_denominator=10**6).filter(lambda f: abs(f.numerator) < 10**12)
nonzero = rationals.filter(lambda f: f != 0)


def test_pow_matches_repeated_multiplication():
    expected = repeated_power(Fraction(43, 10), 6)
    assert expected == Fraction(6321363049, 1000000)
    assert numeric.pow_int(Fraction(43, 10), 6) == expected


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        numeric.div(Fraction(1), Fraction(0))
    with pytest.raises(DivisionByZero):
        numeric.invert_value(Fraction(0))
    with pytest.raises(ZeroToNegativePower):
        numeric.pow_int(Fraction(0), -1)


@pytest.mark.parametrize("n, r, expected", [(15, 10, (1, 5)), (0, 7, (0, 0)), (111, 36, (3, 3))])
def test_divmod_int(n, r, expected):
    assert numeric.divmod_int(n, r) == expected
    q, d = expected
    assert q * r + d == n


def test_budget():
    with numeric.budget(50):
        with pytest.raises(BudgetExceeded):
            numeric.pow_int(Fraction(10), 60)
        with pytest.raises(BudgetExceeded):
            numeric.mul(Fraction(10**40), Fraction(10**40))
    assert numeric.pow_int(Fraction(10), 60) == 10**60


def test_budget_guards_huge_power_before_computing():
    with pytest.raises(BudgetExceeded):
        numeric.pow_int(Fraction(3, 7), 10**9)


def test_compare():
    assert numeric.compare(Fraction(1, 3), Fraction(1, 2)) == -1
    assert numeric.compare(Fraction(2, 4), Fraction(1, 2)) == 0
    assert numeric.compare(Fraction(1), Fraction(-1)) == 1


@pytest.mark.parametrize("n, k, root", [(0, 3, 0), (1, 5, 1), (27, 3, 3), (2**300, 100, 8), (26, 3, None), (10**40 + 1, 2, None)])
def test_integer_root(n, k, root):
    assert numeric.integer_root(n, k) == root


def _canonical(f):
    from math import gcd
    return f.denominator > 0 and gcd(abs(f.numerator), f.denominator) == 1


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert numeric.add(a, b) == numeric.add(b, a)
    assert numeric.mul(a, b) == numeric.mul(b, a)
    assert numeric.add(numeric.add(a, b), c) == numeric.add(a, numeric.add(b, c))
    assert numeric.mul(numeric.mul(a, b), c) == numeric.mul(a, numeric.mul(b, c))
    assert numeric.mul(a, numeric.add(b, c)) == numeric.add(numeric.mul(a, b), numeric.mul(a, c))
    assert numeric.add(a, numeric.neg(a)) == 0
    for v in (numeric.add(a, b), numeric.sub(a, b), numeric.mul(a, c)):
        assert _canonical(v)


@given(nonzero)
def test_inverse(a):
    assert numeric.mul(a, numeric.invert_value(a)) == 1
    assert numeric.invert_value(numeric.invert_value(a)) == a
    assert _canonical(numeric.invert_value(a))


@given(nonzero, st.integers(-6, 6), st.integers(-6, 6))
def test_power_law(a, j, k):
    assert numeric.pow_int(a, j + k) == numeric.mul(numeric.pow_int(a, j), numeric.pow_int(a, k))
