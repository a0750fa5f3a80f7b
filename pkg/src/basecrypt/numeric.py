"""Exact rational arithmetic with a digit budget.

Values are :class:`fractions.Fraction` instances, which already keep the
canonical form (positive denominator, lowest terms, zero as 0/1).  The
functions here add the error taxonomy and a guard on operand size so a long
``^`` chain fails cleanly instead of exhausting memory.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from fractions import Fraction

from .errors import BudgetExceeded, DivisionByZero, ZeroToNegativePower

Rational = Fraction

DEFAULT_DIGIT_BUDGET = 1_000_000
_LOG10_2 = math.log10(2)

_budget = contextvars.ContextVar("digit_budget", default=DEFAULT_DIGIT_BUDGET)


def digit_budget() -> int:
    """Maximum decimal digits allowed in a numerator or denominator."""
    return _budget.get()


@contextlib.contextmanager
def budget(digits: int):
    """Temporarily change the digit budget for the current context."""
    if digits < 1:
        raise ValueError("digit budget must be positive")
    token = _budget.set(digits)
    try:
        yield
    finally:
        _budget.reset(token)


def _digits(n: int) -> int:
    # upper bound on decimal digits without converting to str
    return int(abs(n).bit_length() * _LOG10_2) + 1


def _checked(v: Fraction) -> Fraction:
    limit = _budget.get()
    if _digits(v.numerator) > limit or _digits(v.denominator) > limit:
        raise BudgetExceeded(f"result exceeds the {limit}-digit budget")
    return v


def rational(value, denominator=None) -> Fraction:
    if denominator is not None:
        if denominator == 0:
            raise DivisionByZero("zero denominator")
        return _checked(Fraction(value, denominator))
    return _checked(Fraction(value))


def add(a: Fraction, b: Fraction) -> Fraction:
    return _checked(a + b)


def sub(a: Fraction, b: Fraction) -> Fraction:
    return _checked(a - b)


def mul(a: Fraction, b: Fraction) -> Fraction:
    return _checked(a * b)


def div(a: Fraction, b: Fraction) -> Fraction:
    if b == 0:
        raise DivisionByZero(f"division of {a} by zero")
    return _checked(a / b)


def neg(a: Fraction) -> Fraction:
    return -a


def invert_value(a: Fraction) -> Fraction:
    if a == 0:
        raise DivisionByZero("zero has no inverse")
    return Fraction(a.denominator, a.numerator)


def pow_int(a: Fraction, k: int) -> Fraction:
    if int(k) != k:
        raise TypeError("exponent must be an integer")
    k = int(k)
    if a == 0 and k < 0:
        raise ZeroToNegativePower(f"0 ^ {k}")
    if k < 0:
        a, k = invert_value(a), -k
    limit = _budget.get()
    # estimate before multiplying: digits grow linearly with k
    if a != 0 and max(abs(a.numerator), a.denominator) > 1:
        est = (max(abs(a.numerator), a.denominator).bit_length() - 1) * k * _LOG10_2
        if est > limit:
            raise BudgetExceeded(f"^{k} would exceed the {limit}-digit budget")
    return _checked(a**k)


def compare(a: Fraction, b: Fraction) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return (a > b) - (a < b)


def divmod_int(n: int, radix: int) -> tuple[int, int]:
    """Whole-number quotient and digit remainder of ``n`` by ``radix``."""
    if radix < 2:
        raise ValueError(f"radix must be >= 2, got {radix}")
    if n < 0:
        raise ValueError("divmod_int takes a non-negative integer")
    return divmod(n, radix)


def integer_root(n: int, k: int) -> int | None:
    """Exact ``k``-th root of a non-negative integer, or None if inexact."""
    if n < 0 or k < 1:
        raise ValueError("integer_root needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    # Newton iteration on integers, starting above the root
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None
