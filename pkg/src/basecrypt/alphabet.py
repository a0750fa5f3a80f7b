"""Symbol sets ("bases"): ordered glyph rosters that define a radix.

An :class:`Alphabet` assigns value ``i`` to its ``i``-th glyph and is
injective, so text written in it can be parsed.  A :class:`SurjectiveMap`
lets several values share a glyph; it can render but never parse.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .errors import (
    DuplicateGlyph,
    RadixOutOfRange,
    RadixTooSmall,
    ReservedGlyph,
    SurjectiveParse,
    UnknownGlyph,
    ValueOutOfRange,
)

RADIX_POINT = "."
SIGN = "-"
OPERATORS = "+-*/^"
RESERVED = frozenset(RADIX_POINT + SIGN + OPERATORS)

# printable ASCII punctuation minus the reserved set (26 glyphs), then six
# Latin-1 glyphs so the roster reaches 94
_PUNCT_TAIL = "!#$%&()[]{}<>?@,;:_=|~`'\"\\"
_LATIN1_TAIL = "¡¢£¤¥¦"
BUILTIN_ROSTER = (
    string.digits + string.ascii_lowercase + string.ascii_uppercase + _PUNCT_TAIL + _LATIN1_TAIL
)
MAX_BUILTIN_RADIX = 94
assert len(BUILTIN_ROSTER) == MAX_BUILTIN_RADIX


def is_reserved(glyph: str) -> bool:
    return glyph in RESERVED or glyph.isspace()


def _check_glyphs(glyphs: Sequence[str]) -> None:
    if len(glyphs) < 2:
        raise RadixTooSmall(f"an alphabet needs at least 2 glyphs, got {len(glyphs)}")
    for g in glyphs:
        if len(g) != 1:
            raise ValueError(f"glyph {g!r} is not a single code point")
        if is_reserved(g):
            raise ReservedGlyph(f"glyph {g!r} is reserved")


@dataclass(frozen=True)
class Alphabet:
    """Injective ordered symbol set; ``radix == len(glyphs)``."""

    glyphs: str
    name: str | None = field(default=None, compare=False)
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    kind = "injective"

    def __post_init__(self):
        _check_glyphs(self.glyphs)
        index = {}
        for i, g in enumerate(self.glyphs):
            if g in index:
                raise DuplicateGlyph(f"glyph {g!r} appears at positions {index[g]} and {i}")
            index[g] = i
        object.__setattr__(self, "_index", index)

    @property
    def radix(self) -> int:
        return len(self.glyphs)

    @property
    def zero(self) -> str:
        return self.glyphs[0]

    @property
    def label(self) -> str:
        """Name used in envelopes and one-line pipeline summaries."""
        if self.name:
            return self.name
        if self.glyphs == BUILTIN_ROSTER[: self.radix]:
            return f"b{self.radix}"
        return f"r{self.radix}"

    def __contains__(self, glyph: str) -> bool:
        return glyph in self._index

    def value_of(self, glyph: str) -> int:
        try:
            return self._index[glyph]
        except KeyError:
            raise UnknownGlyph(f"glyph {glyph!r} is not in the base-{self.radix} alphabet") from None

    def symbol_of(self, value: int) -> str:
        if not 0 <= value < self.radix:
            raise ValueOutOfRange(f"digit value {value} outside [0, {self.radix})")
        return self.glyphs[value]

    def renamed(self, name: str | None) -> Alphabet:
        return Alphabet(self.glyphs, name)

    def __str__(self):
        return self.glyphs


@dataclass(frozen=True)
class SurjectiveMap:
    """Render-only symbol set where distinct values may share a glyph."""

    entries: tuple
    name: str | None = field(default=None, compare=False)

    kind = "surjective"

    def __post_init__(self):
        _check_glyphs(self.entries)

    @property
    def radix(self) -> int:
        return len(self.entries)

    @property
    def label(self) -> str:
        return self.name or f"s{self.radix}"

    def value_of(self, glyph: str) -> int:
        raise SurjectiveParse(
            f"cannot parse {glyph!r}: the base-{self.radix} map has duplicate glyphs and is render-only"
        )

    def symbol_of(self, value: int) -> str:
        if not 0 <= value < self.radix:
            raise ValueOutOfRange(f"digit value {value} outside [0, {self.radix})")
        return self.entries[value]


SymbolSet = Union[Alphabet, SurjectiveMap]


def make_alphabet(glyphs: Sequence[str], name: str | None = None) -> Alphabet:
    """Build an injective alphabet; value ``i`` is the ``i``-th glyph."""
    return Alphabet("".join(glyphs), name)


def make_surjective(entries: Sequence[str] | Mapping[int, str], name: str | None = None) -> SurjectiveMap:
    """Build a render-only map from a glyph list or a ``{value: glyph}`` dict.

    A dict must cover every value in ``[0, radix)`` where radix is
    ``max(keys) + 1``.
    """
    if isinstance(entries, Mapping):
        radix = max(entries) + 1 if entries else 0
        missing = [v for v in range(radix) if v not in entries]
        if missing or min(entries, default=0) < 0:
            raise ValueOutOfRange(f"surjective map does not cover values {missing[:5]}")
        entries = [entries[v] for v in range(radix)]
    return SurjectiveMap(tuple(entries), name)


def builtin_alphabet(radix: int) -> Alphabet:
    """Prefix of the canonical roster: digits, lowercase, uppercase, punctuation."""
    if not 2 <= radix <= MAX_BUILTIN_RADIX:
        raise RadixOutOfRange(f"built-in radix must be in [2, {MAX_BUILTIN_RADIX}], got {radix}")
    return Alphabet(BUILTIN_ROSTER[:radix])


def value_of(a: SymbolSet, glyph: str) -> int:
    return a.value_of(glyph)


def symbol_of(a: SymbolSet, value: int) -> str:
    return a.symbol_of(value)
