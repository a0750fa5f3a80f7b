"""The encryption engine: ordered Convert / Remap / Eval steps.

A pipeline threads one exact rational through its value-level steps
(Convert and Eval) and only renders digits where it has to: at a Remap,
which substitutes glyphs, and at the end.  ``mode="rendered"`` instead
renders after every step; it is the reference semantics the exact mode must
agree with, and it refuses any intermediate render that is not exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import baseconv, numeric
from .alphabet import RADIX_POINT, SIGN, Alphabet
from .baseconv import DEFAULT_PRECISION, ExpansionInfo, Message
from .errors import (
    AlphabetMismatch,
    BaseCryptError,
    ExternalStepNotExecutable,
    FormatError,
    InexactRoot,
    NonTerminatingAtDigitStep,
    NotAutoInvertible,
    NotInvertible,
    PrecisionMismatch,
    SegmentLengthMismatch,
)
from .exprlang import X, Expr, evaluate, invert_expr, verify_inverse
from .remap import Remapping, remap_text

EXACT = "exact"
RENDERED = "rendered"


@dataclass(frozen=True)
class Convert:
    source: Alphabet
    target: Alphabet

    def __str__(self):
        return f"->{self.target.label}"


@dataclass(frozen=True)
class Remap:
    remapping: Remapping

    @property
    def source(self):
        return self.remapping.source

    @property
    def target(self):
        return self.remapping.target

    def __str__(self):
        k = self.remapping.rotation_offset
        return f"rot {k}" if k is not None else f"remap->{self.target.label}"


@dataclass(frozen=True)
class Eval:
    """Apply an expression to the value.

    ``manual_inverse`` overrides automatic inversion; ``root_inverse``
    asks for an inverse that undoes ``^k`` with an exact k-th root.
    """

    expr: Expr
    manual_inverse: Optional[Expr] = None
    root_inverse: bool = False

    @property
    def source(self):
        return self.expr.alphabet

    target = source

    def __str__(self):
        return str(self.expr)


@dataclass(frozen=True)
class EvalRoots:
    """Undo an expression by running it backwards with exact roots for ``^``."""

    expr: Expr

    @property
    def source(self):
        return self.expr.alphabet

    target = source

    def __str__(self):
        return f"undo({self.expr})"


@dataclass(frozen=True)
class External:
    """Placeholder for an external cipher; validates but never runs."""

    name: str
    source = None
    target = None

    def __str__(self):
        return f"external:{self.name}"


Step = Union[Convert, Remap, Eval, EvalRoots, External]


def _check_backwards_form(expr: Expr):
    if expr.head is not X or any(o is X for _, o in expr.tail):
        raise NotAutoInvertible(f"{expr}: root inversion needs X once, at the head")


@dataclass(frozen=True)
class Pipeline:
    input_alphabet: Alphabet
    steps: tuple = ()
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.precision < 0:
            raise ValueError("precision must be non-negative")
        current = self.input_alphabet
        for i, step in enumerate(self.steps):
            if isinstance(step, External):
                continue
            if step.source != current:
                raise AlphabetMismatch(
                    f"step {i} ({step}) expects {step.source.label} but the message is in {current.label}"
                ).with_step(i)
            if isinstance(step, Eval):
                if step.manual_inverse is not None:
                    if step.manual_inverse.alphabet != step.expr.alphabet:
                        raise AlphabetMismatch(f"step {i}: inverse uses a different alphabet").with_step(i)
                    check = verify_inverse(step.expr, step.manual_inverse, nonzero=True)
                    if not check:
                        raise NotInvertible(f"step {i}: manual inverse is wrong: {check}").with_step(i)
                elif step.root_inverse:
                    _check_backwards_form(step.expr)
            elif isinstance(step, EvalRoots):
                _check_backwards_form(step.expr)
            current = step.target

    @property
    def output_alphabet(self) -> Alphabet:
        current = self.input_alphabet
        for step in self.steps:
            if not isinstance(step, External):
                current = step.target
        return current

    @property
    def runnable(self) -> bool:
        return not any(isinstance(s, External) for s in self.steps)

    def one_liner(self) -> str:
        body = " | ".join(str(s) for s in self.steps) or "identity"
        return f"[{self.input_alphabet.label}] {body}"


def _kth_root(v: Fraction, k: int) -> Fraction:
    if k == 0:
        raise NotInvertible("^0 cannot be undone")
    if k < 0:
        v, k = numeric.invert_value(v), -k
    negative = v < 0
    if negative and k % 2 == 0:
        raise InexactRoot(f"{v} has no real {k}-th root")
    num = numeric.integer_root(abs(v.numerator), k)
    den = numeric.integer_root(v.denominator, k)
    if num is None or den is None:
        raise InexactRoot(f"{v} is not a perfect {k}-th power")
    return Fraction(-num if negative else num, den)


def evaluate_backwards(expr: Expr, y: Fraction) -> Fraction:
    _check_backwards_form(expr)
    for op, operand in reversed(expr.tail):
        c = operand.value
        if op == "+":
            y = numeric.sub(y, c)
        elif op == "-":
            y = numeric.add(y, c)
        elif op == "*":
            if c == 0:
                raise NotInvertible("*0 cannot be undone")
            y = numeric.div(y, c)
        elif op == "/":
            y = numeric.mul(y, c)
        else:
            y = _kth_root(y, int(c))
    return y


def _apply_value_step(step, value: Fraction) -> Fraction:
    if isinstance(step, Eval):
        return evaluate(step.expr, value)
    if isinstance(step, EvalRoots):
        return evaluate_backwards(step.expr, value)
    return value  # Convert: the value is unchanged, only the alphabet moves


def _render_exact(value, alphabet, precision, i, why):
    text, info = baseconv.render(value, alphabet, precision)
    if not info.exact:
        raise NonTerminatingAtDigitStep(
            f"step {i}: value is {info} in base {alphabet.radix} at precision {precision}; {why}"
        ).with_step(i)
    return text


def run_forward_ex(p: Pipeline, m: Message, mode: str = EXACT):
    """Run the pipeline; returns ``(Message, ExpansionInfo)`` of the output."""
    if m.alphabet != p.input_alphabet:
        raise AlphabetMismatch(f"message is in {m.alphabet.label}, pipeline expects {p.input_alphabet.label}")
    for i, step in enumerate(p.steps):
        if isinstance(step, External):
            raise ExternalStepNotExecutable(f"step {i}: external step {step.name!r} cannot run").with_step(i)
    if mode == EXACT:
        return _run_exact(p, m)
    if mode == RENDERED:
        return _run_rendered(p, m)
    raise ValueError(f"unknown mode {mode!r}")


def _run_exact(p, m):
    value, current = m.value, p.input_alphabet
    for i, step in enumerate(p.steps):
        try:
            if isinstance(step, Remap):
                text = _render_exact(value, current, p.precision, i, "remapping needs exact digits")
                value = baseconv.parse(remap_text(text, step.remapping), step.target)
            else:
                value = _apply_value_step(step, value)
        except BaseCryptError as exc:
            if exc.step is None:
                exc.with_step(i)
            raise
        current = step.target
    return baseconv.from_value(value, current, p.precision)


def _run_rendered(p, m):
    text, info = baseconv.render(m.value, m.alphabet, p.precision)
    current = p.input_alphabet
    for i, step in enumerate(p.steps):
        if not info.exact:
            raise NonTerminatingAtDigitStep(f"step {i}: input to the step was cut ({info})").with_step(i)
        try:
            if isinstance(step, Remap):
                text = remap_text(text, step.remapping)
            else:
                value = _apply_value_step(step, baseconv.parse(text, current))
                text, info = baseconv.render(value, step.target, p.precision)
        except BaseCryptError as exc:
            if exc.step is None:
                exc.with_step(i)
            raise
        current = step.target
    return Message(text, current), info


def run_forward(p: Pipeline, m: Message, mode: str = EXACT, strict: bool = False) -> Message:
    """Run the pipeline; ``strict`` refuses an output whose digits were cut."""
    out, info = run_forward_ex(p, m, mode)
    if strict and not info.exact:
        raise NonTerminatingAtDigitStep(
            f"output is {info} in base {out.alphabet.radix} at precision {p.precision}"
        ).with_step(len(p.steps))
    return out


def invert_step(step: Step, index: int = 0) -> Step:
    if isinstance(step, Convert):
        return Convert(step.target, step.source)
    if isinstance(step, Remap):
        return Remap(step.remapping.inverse())
    if isinstance(step, Eval):
        if step.manual_inverse is not None:
            return Eval(step.manual_inverse, manual_inverse=step.expr)
        if step.root_inverse:
            return EvalRoots(step.expr)
        try:
            return Eval(invert_expr(step.expr))
        except NotAutoInvertible as exc:
            raise NotInvertible(f"step {index}: {exc}").with_step(index) from None
    if isinstance(step, EvalRoots):
        return Eval(step.expr, root_inverse=True)
    raise NotInvertible(f"step {index}: external step {step.name!r} has no known inverse").with_step(index)


def invert_pipeline(p: Pipeline) -> Pipeline:
    steps = [invert_step(s, i) for i, s in enumerate(p.steps)]
    return Pipeline(p.output_alphabet, tuple(reversed(steps)), p.precision)


def compose(p1: Pipeline, p2: Pipeline) -> Pipeline:
    if p1.output_alphabet != p2.input_alphabet:
        raise AlphabetMismatch(f"{p1.output_alphabet.label} output cannot feed {p2.input_alphabet.label} input")
    if p1.precision != p2.precision:
        raise PrecisionMismatch(f"precision {p1.precision} vs {p2.precision}")
    return Pipeline(p1.input_alphabet, p1.steps + p2.steps, p1.precision)


# -- segmented (streaming) operation ---------------------------------------

REST = None


@dataclass(frozen=True)
class Schedule:
    """Ordered ``(length, Pipeline)`` pairs; the last length may be ``REST``."""

    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(tuple(s) for s in self.segments))
        for i, (length, _) in enumerate(self.segments):
            if length is REST:
                if i != len(self.segments) - 1:
                    raise SegmentLengthMismatch("only the last segment may take the rest")
            elif length < 1:
                raise SegmentLengthMismatch(f"segment {i} has length {length}")


def invert_schedule(s: Schedule) -> Schedule:
    return Schedule(tuple((n, invert_pipeline(p)) for n, p in s.segments))


def split_segments(s: Schedule, text: str) -> list:
    if RADIX_POINT in text or SIGN in text:
        raise SegmentLengthMismatch("segmented mode takes unsigned integer messages only")
    pieces, pos = [], 0
    for i, (length, _) in enumerate(s.segments):
        end = len(text) if length is REST else pos + length
        if end > len(text) or end <= pos:
            raise SegmentLengthMismatch(f"segment {i} runs past the {len(text)}-glyph message")
        pieces.append(text[pos:end])
        pos = end
    if pos != len(text):
        raise SegmentLengthMismatch(f"schedule covers {pos} of {len(text)} glyphs")
    return pieces


@dataclass(frozen=True)
class EnvelopeEntry:
    alphabet: str
    length: int
    text: str


def format_envelope(entries) -> str:
    lines = [f"segments {len(entries)}"]
    lines += [f"{e.alphabet} {e.length} {e.text}" for e in entries]
    return "\n".join(lines) + "\n"


def parse_envelope(text: str) -> list:
    lines = [ln.rstrip("\r") for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise FormatError("empty envelope")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "segments" or not head[1].isdigit():
        raise FormatError("envelope must start with 'segments <count>'", 1)
    count = int(head[1])
    if count != len(lines) - 1:
        raise FormatError(f"envelope declares {count} segments but has {len(lines) - 1}", 1)
    entries = []
    for n, line in enumerate(lines[1:], start=2):
        parts = line.split(" ", 2)
        if len(parts) != 3 or not parts[1].isdigit():
            raise FormatError("expected '<alphabet> <length> <text>'", n)
        entries.append(EnvelopeEntry(parts[0], int(parts[1]), parts[2]))
    return entries


def run_segmented(s: Schedule, m: Union[Message, str], mode: str = EXACT) -> str:
    """Run each segment through its own pipeline and frame the results.

    Each envelope entry records the output alphabet, the glyph count of the
    *input* segment (so decoding can restore leading zero glyphs) and the
    output text.
    """
    text = m.text if isinstance(m, Message) else m
    entries = []
    for i, (piece, (_, p)) in enumerate(zip(split_segments(s, text), s.segments)):
        try:
            out = run_forward(p, Message(piece, p.input_alphabet), mode, strict=True)
        except BaseCryptError as exc:
            exc.segment = i
            raise
        entries.append(EnvelopeEntry(out.alphabet.label, len(piece), out.text))
    return format_envelope(entries)


def decode_segmented(s: Schedule, envelope: str, mode: str = EXACT) -> str:
    """Undo :func:`run_segmented`; ``s`` holds the already inverted pipelines."""
    entries = parse_envelope(envelope)
    if len(entries) != len(s.segments):
        raise SegmentLengthMismatch(f"envelope has {len(entries)} segments, schedule {len(s.segments)}")
    out = []
    for i, (entry, (_, p)) in enumerate(zip(entries, s.segments)):
        if entry.alphabet != p.input_alphabet.label:
            raise AlphabetMismatch(f"segment {i} is in {entry.alphabet}, pipeline expects {p.input_alphabet.label}")
        try:
            plain = run_forward(p, Message(entry.text, p.input_alphabet), mode, strict=True)
        except BaseCryptError as exc:
            exc.segment = i
            raise
        if RADIX_POINT in plain.text or SIGN in plain.text or len(plain.text) > entry.length:
            raise SegmentLengthMismatch(
                f"segment {i} decodes to {plain.text!r}, which does not fit {entry.length} glyphs"
            )
        out.append(plain.text.rjust(entry.length, plain.alphabet.zero))
    return "".join(out)
