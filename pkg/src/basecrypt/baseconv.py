"""Numerical base conversion between arbitrary alphabets.

A message is read as one positional number (the whole text, never chunked),
carried as an exact rational, and rendered back out digit by digit.  The
fractional part of a render is produced by long division with remainder
cycle detection, so the caller learns whether the digits terminate, repeat,
or were cut at the precision limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import numeric
from .alphabet import RADIX_POINT, SIGN, Alphabet, SymbolSet
from .errors import BudgetExceeded, EmptyInput, MalformedNumeral, SurjectiveParse

DEFAULT_PRECISION = 64
DEFAULT_CYCLE_BUDGET = 1_000_000

TERMINATING = "terminating"
REPEATING = "repeating"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class ExpansionInfo:
    """How a value's fractional digits behave in some radix.

    ``preperiod`` counts the non-repeating fractional digits (for a
    terminating expansion, all of them).  ``repetend`` holds digit values,
    not glyphs; use :meth:`repetend_text` to render it.
    """

    kind: str
    preperiod: int = 0
    period: int = 0
    repetend: tuple = ()

    @property
    def exact(self) -> bool:
        return self.kind == TERMINATING

    def repetend_text(self, a: SymbolSet) -> str:
        return "".join(a.symbol_of(d) for d in self.repetend)

    def __str__(self):
        if self.kind == REPEATING:
            return f"{self.kind} preperiod={self.preperiod} period={self.period}"
        return self.kind


def _split(text: str):
    if not text:
        raise EmptyInput("empty numeral")
    negative = text.startswith(SIGN)
    body = text[1:] if negative else text
    if not body:
        raise MalformedNumeral(f"{text!r}: sign without digits")
    if SIGN in body:
        raise MalformedNumeral(f"{text!r}: stray sign")
    parts = body.split(RADIX_POINT)
    if len(parts) > 2:
        raise MalformedNumeral(f"{text!r}: more than one radix point")
    whole = parts[0]
    frac = parts[1] if len(parts) == 2 else ""
    if not whole or (len(parts) == 2 and not frac):
        raise MalformedNumeral(f"{text!r}: radix point needs digits on both sides")
    return negative, whole, frac


def _digits_to_int(digits: str, a: Alphabet) -> int:
    r = a.radix
    n = 0
    for g in digits:
        n = n * r + a.value_of(g)
    return n


def parse(text: str, a: SymbolSet) -> Fraction:
    """Exact value of a numeral written in ``a``."""
    if a.kind != "injective":
        raise SurjectiveParse(f"cannot parse through render-only map {a.label}")
    negative, whole, frac = _split(text)
    value = Fraction(_digits_to_int(whole, a))
    if frac:
        value += Fraction(_digits_to_int(frac, a), a.radix ** len(frac))
    return numeric.rational(-value if negative else value)


def _integer_digits(n: int, radix: int) -> list:
    if n == 0:
        return [0]
    out = []
    while n:
        n, d = numeric.divmod_int(n, radix)
        out.append(d)
    out.reverse()
    return out


def render(v: Fraction, a: SymbolSet, precision: int = DEFAULT_PRECISION):
    """Render ``v`` in ``a`` with at most ``precision`` fractional digits.

    Returns ``(text, ExpansionInfo)``.  Extra digits are cut, never rounded.
    """
    if precision < 0:
        raise ValueError("precision must be non-negative")
    if precision > numeric.digit_budget():
        raise BudgetExceeded(f"precision {precision} exceeds the digit budget")
    v = Fraction(v)
    r = a.radix
    negative = v < 0
    num, den = abs(v.numerator), v.denominator
    whole, rem = divmod(num, den)

    frac = []
    seen = {}
    info = None
    while len(frac) < precision:
        if rem == 0:
            info = ExpansionInfo(TERMINATING, len(frac))
            break
        if rem in seen:
            start = seen[rem]
            info = ExpansionInfo(REPEATING, start, len(frac) - start, tuple(frac[start:]))
            break
        seen[rem] = len(frac)
        d, rem = divmod(rem * r, den)
        frac.append(d)
    if info is None:
        if rem == 0:
            info = ExpansionInfo(TERMINATING, len(frac))
        elif rem in seen:
            start = seen[rem]
            info = ExpansionInfo(REPEATING, start, len(frac) - start, tuple(frac[start:]))
        else:
            info = ExpansionInfo(TRUNCATED)
    if info.kind == REPEATING:
        # the cycle was found early; keep emitting it up to the precision
        pre, period = info.preperiod, info.period
        while len(frac) < precision:
            frac.append(frac[pre + (len(frac) - pre) % period])
    while frac and frac[-1] == 0:
        frac.pop()

    text = "".join(a.symbol_of(d) for d in _integer_digits(whole, r))
    if frac:
        text += RADIX_POINT + "".join(a.symbol_of(d) for d in frac)
    if negative and (whole or frac):
        text = SIGN + text
    return text, info


def classify_expansion(v: Fraction, radix: int, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> ExpansionInfo:
    """Classify the radix-``radix`` expansion of ``v`` by number theory.

    The expansion terminates iff the reduced denominator has no prime
    factor outside the radix.  Otherwise the preperiod comes from the
    radix-sharing part of the denominator and the period is the
    multiplicative order of the radix modulo the coprime part.  A period
    longer than ``cycle_budget`` yields a ``truncated`` classification.
    """
    if radix < 2:
        raise ValueError("radix must be >= 2")
    v = abs(Fraction(v))
    den = v.denominator

    coprime = den
    while (g := math.gcd(coprime, radix)) > 1:
        while coprime % g == 0:
            coprime //= g
    shared = den // coprime
    pre = 0
    while shared > 1:
        shared //= math.gcd(shared, radix)
        pre += 1

    if coprime == 1:
        return ExpansionInfo(TERMINATING, pre)

    period, x = 1, radix % coprime
    while x != 1:
        x = x * radix % coprime
        period += 1
        if period > cycle_budget:
            return ExpansionInfo(TRUNCATED)

    rem = v.numerator % den * pow(radix, pre, den) % den
    digits = []
    for _ in range(period):
        d, rem = divmod(rem * radix, den)
        digits.append(d)
    return ExpansionInfo(REPEATING, pre, period, tuple(digits))


@dataclass(frozen=True)
class Message:
    """A numeral together with the alphabet it is written in."""

    text: str
    alphabet: Alphabet
    value: Fraction = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", parse(self.text, self.alphabet))

    def __str__(self):
        return self.text

    @property
    def glyph_count(self) -> int:
        return len(self.text)


def canonical(m: Message) -> Message:
    """Strip superfluous zero-value glyphs and a negative sign on zero."""
    _, _, frac = _split(m.text)
    text, _ = render(m.value, m.alphabet, len(frac))
    return Message(text, m.alphabet)


def from_value(v: Fraction, a: Alphabet, precision: int = DEFAULT_PRECISION):
    """Render a value straight into a :class:`Message`; returns ``(Message, info)``."""
    text, info = render(v, a, precision)
    return Message(text, a), info


def convert(m: Message, to: Alphabet, precision: int = DEFAULT_PRECISION):
    """Re-express ``m`` in another alphabet by value, never glyph by glyph."""
    return from_value(m.value, to, precision)


def read_messages(text: str, a: Alphabet) -> list:
    """Parse a message file: one numeral per line, blank lines skipped."""
    return [Message(line.strip("\r"), a) for line in text.split("\n") if line.strip("\r")]


def write_messages(messages) -> str:
    return "".join(f"{m.text}\n" for m in messages)
