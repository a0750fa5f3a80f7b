"""Exhaustive known-plaintext search over small pipeline families.

Candidates are enumerated shortest first, like trying every 1-bit key, then
every 2-bit key, and so on: by step count, then input radix, then step by
step in a fixed choice order (conversions by target radix, rotations by
offset, affine evals by operator ``+ - * /`` and ascending constant).
Every candidate has an index, so the stream can restart anywhere and the
work splits into index ranges.
"""

from __future__ import annotations

import shlex
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .alphabet import MAX_BUILTIN_RADIX, builtin_alphabet
from .baseconv import DEFAULT_PRECISION, Message, classify_expansion
from .errors import BaseCryptError, FormatError
from .exprlang import X, Expr, Literal, literal_text
from .pipeline import Convert, Eval, Pipeline, Remap, run_forward
from .remap import Remapping

TEMPLATES = ("convert", "rot", "affine")
AFFINE_OPS = "+-*/"


@dataclass(frozen=True)
class SearchSpace:
    radices: tuple
    templates: frozenset = frozenset({"affine"})
    max_num: int = 9
    max_den: int = 1
    max_steps: int = 1
    min_steps: int = 0
    ops: str = AFFINE_OPS
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "radices", tuple(sorted(set(self.radices))))
        object.__setattr__(self, "templates", frozenset(self.templates))
        object.__setattr__(self, "ops", "".join(o for o in AFFINE_OPS if o in self.ops))
        if not self.radices:
            raise ValueError("search space needs at least one radix")
        for r in self.radices:
            if not 2 <= r <= MAX_BUILTIN_RADIX:
                raise ValueError(f"radix {r} has no built-in alphabet")
        unknown = self.templates - set(TEMPLATES)
        if unknown:
            raise ValueError(f"unknown templates {sorted(unknown)}")
        if self.max_num < 0 or self.max_den < 1:
            raise ValueError("constant bounds must be max-num >= 0, max-den >= 1")
        if not 0 <= self.min_steps <= self.max_steps:
            raise ValueError("need 0 <= min-steps <= max-steps")

    @property
    def arrangements(self) -> str:
        return "rotations" if "rot" in self.templates else "none"


@lru_cache(maxsize=None)
def _constants(max_num, max_den, radix):
    values = {Fraction(n, d) for d in range(1, max_den + 1) for n in range(max_num + 1) if gcd(n, d) == 1}
    # only values with a finite numeral in this radix can be written as literals
    return tuple(sorted(v for v in values if classify_expansion(v, radix).exact))


def constants(s: SearchSpace, radix: int) -> tuple:
    return _constants(s.max_num, s.max_den, radix)


def _affine_choices(s, radix):
    out = []
    for op in s.ops:
        out += [(op, c) for c in constants(s, radix) if not (op in "*/" and c == 0)]
    return out


class _Counter:
    def __init__(self, s: SearchSpace):
        self.s = s
        self.memo = {}
        self.affine = {r: (_affine_choices(s, r) if "affine" in s.templates else []) for r in s.radices}

    def targets(self, r):
        return [t for t in self.s.radices if t != r] if "convert" in self.s.templates else []

    def rotations(self, r):
        return r - 1 if "rot" in self.s.templates else 0

    def count(self, n, r):
        key = (n, r)
        if key not in self.memo:
            if n == 0:
                total = 1
            else:
                total = sum(self.count(n - 1, t) for t in self.targets(r))
                total += (self.rotations(r) + len(self.affine[r])) * self.count(n - 1, r)
            self.memo[key] = total
        return self.memo[key]

    def tiers(self):
        if not self.s.templates:
            return []
        return [(n, r, self.count(n, r)) for n in range(self.s.min_steps, self.s.max_steps + 1) for r in self.s.radices]


def space_size(s: SearchSpace) -> int:
    return sum(c for _, _, c in _Counter(s).tiers())


def _unrank(counter: _Counter, index: int) -> Pipeline:
    s = counter.s
    for n, r, size in counter.tiers():
        if index < size:
            break
        index -= size
    else:
        raise IndexError("candidate index out of range")

    start = builtin_alphabet(r)
    current, steps = start, []
    for remaining in range(n - 1, -1, -1):
        for t in counter.targets(r):
            size = counter.count(remaining, t)
            if index < size:
                nxt = builtin_alphabet(t)
                steps.append(Convert(current, nxt))
                current, r = nxt, t
                break
            index -= size
        else:
            size = counter.count(remaining, r)
            choice, index = divmod(index, size)
            rots = counter.rotations(r)
            if choice < rots:
                step = Remap(Remapping.rotation(current, choice + 1))
                current = step.target
            else:
                op, c = counter.affine[r][choice - rots]
                step = Eval(Expr(current, X, ((op, Literal(literal_text(c, current), c)),)))
            steps.append(step)
    return Pipeline(start, tuple(steps), s.precision)


def enumerate_pipelines(s: SearchSpace, start: int = 0, stop: int | None = None):
    """Yield ``(index, Pipeline)`` for every candidate in enumeration order."""
    counter = _Counter(s)
    total = sum(c for _, _, c in counter.tiers())
    stop = total if stop is None else min(stop, total)
    for i in range(start, stop):
        yield i, _unrank(counter, i)


def _text(m):
    return m.text if isinstance(m, Message) else m


def _scan(args):
    s, plain, cipher, lo, hi = args
    hits = []
    messages = {}
    for i, p in enumerate_pipelines(s, lo, hi):
        a = p.input_alphabet
        if a not in messages:
            try:
                messages[a] = Message(plain, a)
            except BaseCryptError:
                messages[a] = None
        if messages[a] is None:
            continue
        try:
            out = run_forward(p, messages[a])
        except BaseCryptError:
            continue
        if out.text == cipher:
            hits.append(i)
    return hits


@dataclass
class CrackReport:
    matches: list = field(default_factory=list)  # (index, Pipeline) in enumeration order
    tested: int = 0
    elapsed: float = 0.0

    def lines(self) -> list:
        return [f"match {i} {p.one_liner()}" for i, p in self.matches]

    def __str__(self):
        head = f"{len(self.matches)} match(es) among {self.tested} candidates in {self.elapsed:.3f}s"
        return "\n".join([head, *self.lines()])


def crack_known_pair(plain, cipher, s: SearchSpace, workers: int = 1) -> CrackReport:
    """Find every candidate pipeline that maps ``plain`` to exactly ``cipher``.

    Candidates that error (division by zero, bad glyph for the guessed
    input base, ...) are simply disqualified.  The result does not depend on
    ``workers``: index ranges are scanned independently and merged in order.
    """
    t0 = time.perf_counter()
    plain, cipher = _text(plain), _text(cipher)
    total = space_size(s)
    workers = max(1, min(workers, total or 1))
    bounds = [total * k // workers for k in range(workers + 1)]
    jobs = [(s, plain, cipher, bounds[k], bounds[k + 1]) for k in range(workers)]
    if workers == 1:
        chunks = [_scan(jobs[0])]
    else:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_scan, jobs))
    counter = _Counter(s)
    report = CrackReport(tested=total)
    for i in sorted(i for chunk in chunks for i in chunk):
        p = _unrank(counter, i)
        # independent re-run before a candidate is reported
        if run_forward(p, Message(plain, p.input_alphabet)).text == cipher:
            report.matches.append((i, p))
    report.elapsed = time.perf_counter() - t0
    return report


@dataclass
class CostReport:
    tiers: list  # (steps, radix, count)

    @property
    def total(self) -> int:
        return sum(c for _, _, c in self.tiers)

    def by_steps(self) -> dict:
        out = {}
        for n, _, c in self.tiers:
            out[n] = out.get(n, 0) + c
        return out

    def __str__(self):
        lines, running = [], 0
        for n, r, c in self.tiers:
            running += c
            lines.append(f"tier steps={n} radix={r} count={c} cumulative={running}")
        lines.append(f"total {self.total}")
        return "\n".join(lines)


def cost_report(s: SearchSpace) -> CostReport:
    return CostReport(_Counter(s).tiers())


def parse_space(text: str) -> SearchSpace:
    """Read a search-space file.

    Lines: ``radices 16 36 62``, ``templates affine convert rot``,
    ``constants max-num 100 max-den 10``, ``max-steps 2``, and optionally
    ``min-steps 1``, ``ops + *``, ``precision 64``.
    """
    kw = {}
    for n, line in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            raise FormatError(str(exc), n) from None
        if not tokens:
            continue
        key, args = tokens[0], tokens[1:]
        try:
            if key == "radices":
                kw["radices"] = tuple(int(a) for a in args)
            elif key == "templates":
                kw["templates"] = frozenset(args)
            elif key == "constants":
                opts = dict(zip(args[::2], args[1::2]))
                if len(args) % 2 or set(opts) - {"max-num", "max-den"}:
                    raise FormatError("expected 'constants max-num <n> max-den <d>'", n)
                if "max-num" in opts:
                    kw["max_num"] = int(opts["max-num"])
                if "max-den" in opts:
                    kw["max_den"] = int(opts["max-den"])
            elif key in ("max-steps", "min-steps", "precision") and len(args) == 1:
                kw[key.replace("-", "_")] = int(args[0])
            elif key == "ops":
                kw["ops"] = "".join(args)
            else:
                raise FormatError(f"unknown directive {key!r}", n)
        except ValueError as exc:
            raise FormatError(str(exc), n) from None
    if "radices" not in kw:
        raise FormatError("search space needs a 'radices' line")
    try:
        return SearchSpace(**kw)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
