"""Calculator-style expressions over one variable ``X``.

Evaluation is a strict left-to-right fold with no operator precedence, the
way a button calculator works: ``X+2*3`` is ``(X+2)*3``.  Literals are
numerals in the expression's own alphabet, so ``33`` means 111 when the
alphabet is base 36.

Grammar (whitespace is ignored)::

    expr    := [operand] (op operand)*      a leading op implies head X
    op      := + | - | * | / | ^
    operand := X | numeral
    numeral := [-] glyph+ [. glyph+]

An operand consisting of the single glyph ``X`` is always the variable.  In
an alphabet that has ``X`` as a digit, write that digit value as ``0X``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import baseconv, numeric
from .alphabet import OPERATORS, SIGN, Alphabet
from .errors import (
    AlphabetMismatch,
    BaseCryptError,
    ExprSyntaxError,
    MalformedNumeral,
    NonIntegerExponent,
    NotAutoInvertible,
)

VARIABLE_NAME = "X"
INVERSE_OP = {"+": "-", "-": "+", "*": "/", "/": "*"}


class _Var:
    __slots__ = ()

    def __repr__(self):
        return VARIABLE_NAME

    def __reduce__(self):
        return (_var, ())


def _var():
    return X


X = _Var()


@dataclass(frozen=True)
class Literal:
    text: str
    value: Fraction = field(compare=False)

    def __repr__(self):
        return self.text


@dataclass(frozen=True)
class Expr:
    alphabet: Alphabet
    head: object
    tail: tuple = ()

    def __str__(self):
        return format_expr(self)

    @property
    def uses_variable(self) -> int:
        return (self.head is X) + sum(operand is X for _, operand in self.tail)


def _operand_text(o) -> str:
    return VARIABLE_NAME if o is X else o.text


def format_expr(e: Expr, implicit_head: bool = False) -> str:
    """Canonical text; ``implicit_head`` drops a leading ``X`` before an operator."""
    head = _operand_text(e.head)
    if implicit_head and e.head is X and e.tail:
        head = ""
    return head + "".join(op + _operand_text(o) for op, o in e.tail)


def literal_text(value: Fraction, a: Alphabet) -> str:
    """Numeral for ``value`` usable as an operand (must terminate in ``a``)."""
    text, info = baseconv.render(value, a, baseconv.classify_expansion(value, a.radix).preperiod)
    if not info.exact:
        raise MalformedNumeral(f"{value} has no finite numeral in base {a.radix}")
    if text == VARIABLE_NAME:
        text = a.zero + text
    return text


def _read_operand(text: str, pos: int, a: Alphabet):
    start = pos
    if pos < len(text) and text[pos] == SIGN:
        pos += 1
    end = pos
    while end < len(text) and text[end] not in OPERATORS:
        end += 1
    run = text[pos:end]
    if not run:
        raise ExprSyntaxError(f"expected an operand at position {start} in {text!r}")
    if run == VARIABLE_NAME:
        if pos != start:
            raise ExprSyntaxError(f"cannot negate {VARIABLE_NAME} at position {start}")
        return X, end
    numeral = text[start:end]
    try:
        return Literal(numeral, baseconv.parse(numeral, a)), end
    except MalformedNumeral as exc:
        raise ExprSyntaxError(f"bad numeral {numeral!r}: {exc}") from None


def parse_expr(text: str, a: Alphabet) -> Expr:
    text = "".join(ch for ch in text if not ch.isspace())
    if not text:
        raise ExprSyntaxError("empty expression")
    if text[0] in OPERATORS:
        head, pos = X, 0
    else:
        head, pos = _read_operand(text, 0, a)
    tail = []
    while pos < len(text):
        op = text[pos]
        if op not in OPERATORS:
            raise ExprSyntaxError(f"expected an operator at position {pos} in {text!r}")
        operand, pos = _read_operand(text, pos + 1, a)
        if op == "^" and (operand is X or operand.value.denominator != 1):
            raise NonIntegerExponent(f"exponent {_operand_text(operand)!r} is not an integer literal")
        tail.append((op, operand))
    return Expr(a, head, tuple(tail))


def apply_op(acc: Fraction, op: str, value: Fraction) -> Fraction:
    if op == "+":
        return numeric.add(acc, value)
    if op == "-":
        return numeric.sub(acc, value)
    if op == "*":
        return numeric.mul(acc, value)
    if op == "/":
        return numeric.div(acc, value)
    if op == "^":
        return numeric.pow_int(acc, int(value))
    raise ExprSyntaxError(f"unknown operator {op!r}")


def evaluate(e: Expr, x: Fraction) -> Fraction:
    """Fold the operator chain left to right starting from the head value."""
    def val(o):
        return x if o is X else o.value

    acc = val(e.head)
    for op, operand in e.tail:
        acc = apply_op(acc, op, val(operand))
    return acc


def invert_expr(e: Expr) -> Expr:
    """Inverse chain for ``X`` followed by ``+ - * /`` literals, or ``c/X``."""
    if e.head is X:
        for op, operand in e.tail:
            if operand is X:
                raise NotAutoInvertible(f"{e}: {VARIABLE_NAME} is used more than once")
            if op not in INVERSE_OP:
                raise NotAutoInvertible(f"{e}: operator {op!r} cannot be inverted automatically")
            if op in "*/" and operand.value == 0:
                raise NotAutoInvertible(f"{e}: {op}0 destroys the value")
        tail = tuple((INVERSE_OP[op], operand) for op, operand in reversed(e.tail))
        return Expr(e.alphabet, X, tail)
    if len(e.tail) == 1 and e.tail[0] == ("/", X) and e.head.value != 0:
        # c/X undoes itself
        return e
    raise NotAutoInvertible(f"{e}: {VARIABLE_NAME} is not in an invertible position")


def random_rational(rng: random.Random, max_num: int = 10**6, max_den: int = 10**4) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


@dataclass
class InverseCheck:
    passed: bool
    trials: int
    counterexample: Fraction | None = None
    result: Fraction | None = None
    error: str | None = None

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return f"pass ({self.trials} trials)"
        if self.error:
            return f"fail at x={self.counterexample}: {self.error}"
        return f"fail: x={self.counterexample} maps to {self.result}"


def verify_inverse(e1: Expr, e2: Expr, trials: int = 100, seed: int = 0, nonzero: bool = False) -> InverseCheck:
    """Check ``e2(e1(x)) == x`` on deterministic samples, starting with 0."""
    if e1.alphabet != e2.alphabet:
        raise AlphabetMismatch(f"expressions use {e1.alphabet.label} and {e2.alphabet.label}")
    rng = random.Random(seed)
    done = 0
    x = Fraction(0)
    while done < trials:
        if nonzero and x == 0:
            x = random_rational(rng)
            continue
        try:
            y = evaluate(e2, evaluate(e1, x))
        except BaseCryptError as exc:
            return InverseCheck(False, done + 1, x, error=f"{type(exc).__name__}: {exc}")
        done += 1
        if y != x:
            return InverseCheck(False, done, x, y)
        x = random_rational(rng)
    return InverseCheck(True, done)
