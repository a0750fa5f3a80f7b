"""Symbol remapping: substitute each digit glyph by the glyph holding the
same value in another same-radix arrangement."""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import RADIX_POINT, SIGN, Alphabet
from .baseconv import Message
from .errors import RadixMismatch

_STRUCTURAL = (RADIX_POINT, SIGN)


@dataclass(frozen=True)
class Remapping:
    source: Alphabet
    target: Alphabet

    def __post_init__(self):
        if self.source.radix != self.target.radix:
            raise RadixMismatch(
                f"cannot remap base {self.source.radix} onto base {self.target.radix}"
            )

    @classmethod
    def rotation(cls, a: Alphabet, k: int) -> Remapping:
        return cls(a, rotate_arrangement(a, k))

    @property
    def is_permutation(self) -> bool:
        return set(self.source.glyphs) == set(self.target.glyphs)

    @property
    def rotation_offset(self):
        """Offset ``k`` with ``target == rotate_arrangement(source, k)``, else None."""
        n = self.source.radix
        if not self.is_permutation:
            return None
        k = self.target.value_of(self.source.glyphs[0]) % n
        return k if rotate_arrangement(self.source, k) == self.target else None

    def inverse(self) -> Remapping:
        return Remapping(self.target, self.source)


def rotate_arrangement(a: Alphabet, k: int, name: str | None = None) -> Alphabet:
    """Cyclically shift the roster; positive ``k`` moves glyph ``i`` to ``i + k``."""
    k %= a.radix
    return Alphabet(a.glyphs[-k:] + a.glyphs[:-k] if k else a.glyphs, name)


def remap_text(text: str, r: Remapping) -> str:
    src, tgt = r.source, r.target
    return "".join(g if g in _STRUCTURAL else tgt.symbol_of(src.value_of(g)) for g in text)


def apply_remap(m: Message, r: Remapping) -> Message:
    if m.alphabet.radix != r.source.radix:
        raise RadixMismatch(f"message is base {m.alphabet.radix}, remapping expects base {r.source.radix}")
    return Message(remap_text(m.text, r), r.target)
