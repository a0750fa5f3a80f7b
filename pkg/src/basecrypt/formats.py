"""Line-oriented text formats for pipelines and schedules.

Pipeline file (``#`` starts a comment, tokens are shell-quoted)::

    precision 64
    alphabet b62 builtin 62
    alphabet b36 builtin 36
    alphabet weird inline "zyx"
    input b62
    step convert b62 b36
    step remap b36 rot 3           # defines alphabet b36_rot3
    step eval b36_rot3 "*4.5/6-33" [inverse "<expr>" | inverse root]
    step undo <alphabet> "<expr>"  # run an expression backwards with exact roots
    step external twofish

A schedule file uses the same lines, groups ``input``/``step`` lines under
``pipeline <label>`` headers, and lists ``segment <length|rest> <label>``.
"""

from __future__ import annotations

import shlex
from pathlib import Path

from .alphabet import Alphabet, BUILTIN_ROSTER, builtin_alphabet, make_alphabet
from .baseconv import DEFAULT_PRECISION
from .errors import BaseCryptError, FormatError
from .exprlang import format_expr, parse_expr
from .pipeline import (
    REST,
    Convert,
    Eval,
    EvalRoots,
    External,
    Pipeline,
    Remap,
    Schedule,
)
from .remap import Remapping, rotate_arrangement


def parse_alphabet_ref(ref: str) -> Alphabet:
    """``builtin:<radix>``, ``file:<path>`` or ``inline:<glyphs>``."""
    kind, sep, rest = ref.partition(":")
    if not sep:
        raise FormatError(f"alphabet reference {ref!r} needs a builtin:, file: or inline: prefix")
    if kind == "builtin":
        try:
            radix = int(rest)
        except ValueError:
            raise FormatError(f"bad radix in {ref!r}") from None
        return builtin_alphabet(radix)
    if kind == "file":
        return make_alphabet(Path(rest).read_text(encoding="utf-8").rstrip("\r\n"), Path(rest).stem)
    if kind == "inline":
        return make_alphabet(rest)
    raise FormatError(f"unknown alphabet reference kind {kind!r}")


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Draft:
    def __init__(self, label):
        self.label = label
        self.input = None
        self.steps = []
        self.precision = None


class _Reader:
    def __init__(self):
        self.alphabets = {}
        self.precision = DEFAULT_PRECISION
        self.drafts = {}
        self.order = []
        self.segments = []
        self.current = self._draft(None)

    def _draft(self, label):
        if label in self.drafts:
            return self.drafts[label]
        d = self.drafts[label] = _Draft(label)
        self.order.append(label)
        return d

    def alphabet(self, name, n):
        try:
            return self.alphabets[name]
        except KeyError:
            raise FormatError(f"undefined alphabet {name!r}", n) from None

    def define(self, name, a, n):
        if name in self.alphabets and self.alphabets[name] != a:
            raise FormatError(f"alphabet {name!r} is defined twice", n)
        self.alphabets[name] = a.renamed(name)

    def feed(self, tokens, n):
        kw, args = tokens[0], tokens[1:]
        if kw == "precision":
            if len(args) != 1 or not args[0].isdigit():
                raise FormatError("expected 'precision <n>'", n)
            if self.current.label is None:
                self.precision = int(args[0])
            else:
                self.current.precision = int(args[0])
        elif kw == "alphabet":
            if len(args) == 3 and args[1] == "inline":
                self.define(args[0], make_alphabet(args[2]), n)
            elif len(args) == 3 and args[1] == "builtin" and args[2].isdigit():
                self.define(args[0], builtin_alphabet(int(args[2])), n)
            else:
                raise FormatError("expected 'alphabet <name> inline \"<glyphs>\"' or 'alphabet <name> builtin <radix>'", n)
        elif kw == "input":
            if len(args) != 1:
                raise FormatError("expected 'input <alphabet>'", n)
            if self.current.input is not None:
                raise FormatError("input declared twice", n)
            self.current.input = self.alphabet(args[0], n)
        elif kw == "step":
            if not args:
                raise FormatError("empty step", n)
            self.current.steps.append(self.step(args[0], args[1:], n))
        elif kw == "pipeline":
            if len(args) != 1:
                raise FormatError("expected 'pipeline <label>'", n)
            if args[0] in self.drafts:
                raise FormatError(f"pipeline {args[0]!r} is defined twice", n)
            self.current = self._draft(args[0])
        elif kw == "segment":
            if len(args) != 2 or not (args[0].isdigit() or args[0] == "rest"):
                raise FormatError("expected 'segment <length|rest> <label>'", n)
            self.segments.append((REST if args[0] == "rest" else int(args[0]), args[1], n))
        else:
            raise FormatError(f"unknown directive {kw!r}", n)

    def step(self, kind, args, n):
        if kind == "convert" and len(args) == 2:
            return Convert(self.alphabet(args[0], n), self.alphabet(args[1], n))
        if kind == "remap" and len(args) == 3 and args[1] == "rot":
            src = self.alphabet(args[0], n)
            try:
                k = int(args[2])
            except ValueError:
                raise FormatError(f"bad rotation {args[2]!r}", n) from None
            name = f"{args[0]}_rot{k}"
            self.define(name, rotate_arrangement(src, k), n)
            return Remap(Remapping(src, self.alphabets[name]))
        if kind == "remap" and len(args) == 2:
            return Remap(Remapping(self.alphabet(args[0], n), self.alphabet(args[1], n)))
        if kind in ("eval", "undo") and len(args) >= 2:
            a = self.alphabet(args[0], n)
            expr = parse_expr(args[1], a)
            if kind == "undo" and len(args) == 2:
                return EvalRoots(expr)
            if kind == "eval" and len(args) == 2:
                return Eval(expr)
            if kind == "eval" and len(args) == 4 and args[2] == "inverse":
                if args[3] == "root":
                    return Eval(expr, root_inverse=True)
                return Eval(expr, manual_inverse=parse_expr(args[3], a))
        if kind == "external" and len(args) == 1:
            return External(args[0])
        raise FormatError(f"malformed step {' '.join([kind, *args])!r}", n)

    def build(self, draft, n=None):
        if draft.input is None:
            what = f"pipeline {draft.label!r}" if draft.label else "pipeline"
            raise FormatError(f"{what} has no input alphabet", n)
        precision = self.precision if draft.precision is None else draft.precision
        try:
            return Pipeline(draft.input, tuple(draft.steps), precision)
        except BaseCryptError as exc:
            what = f"pipeline {draft.label!r}" if draft.label else "pipeline"
            raise FormatError(f"{what}: {type(exc).__name__}: {exc}", n) from exc


def _read(text: str) -> _Reader:
    r = _Reader()
    for n, line in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            raise FormatError(str(exc), n) from None
        if not tokens:
            continue
        try:
            r.feed(tokens, n)
        except FormatError:
            raise
        except BaseCryptError as exc:
            raise FormatError(f"{type(exc).__name__}: {exc}", n) from None
    return r


def parse_pipeline(text: str) -> Pipeline:
    r = _read(text)
    if len(r.drafts) != 1 or r.segments:
        raise FormatError("a pipeline file holds exactly one unlabeled pipeline")
    return r.build(r.drafts[None])


def parse_schedule(text: str):
    """Return ``(Schedule, {label: Pipeline})``."""
    r = _read(text)
    if r.drafts[None].input is not None or r.drafts[None].steps:
        raise FormatError("schedule steps must sit under a 'pipeline <label>' header")
    pipelines = {label: r.build(r.drafts[label]) for label in r.order if label is not None}
    segments = []
    for length, label, n in r.segments:
        if label not in pipelines:
            raise FormatError(f"unknown pipeline {label!r}", n)
        segments.append((length, pipelines[label]))
    if not segments:
        raise FormatError("schedule has no segments")
    try:
        return Schedule(tuple(segments)), pipelines
    except BaseCryptError as exc:
        raise FormatError(f"{type(exc).__name__}: {exc}") from None


def load_pipeline(path) -> Pipeline:
    return parse_pipeline(Path(path).read_text(encoding="utf-8"))


def load_schedule(path) -> Schedule:
    return parse_schedule(Path(path).read_text(encoding="utf-8"))[0]


class _Namer:
    def __init__(self):
        self.names = {}  # glyphs -> name
        self.lines = []

    def __call__(self, a: Alphabet) -> str:
        if a.glyphs in self.names:
            return self.names[a.glyphs]
        taken = set(self.names.values())
        name = a.name if a.name and a.name not in taken else f"a{len(self.names)}"
        while name in taken:
            name += "_"
        self.names[a.glyphs] = name
        if a.glyphs == BUILTIN_ROSTER[: a.radix]:
            self.lines.append(f"alphabet {name} builtin {a.radix}")
        else:
            self.lines.append(f"alphabet {name} inline {quote(a.glyphs)}")
        return name


def _step_line(step, name) -> str:
    if isinstance(step, Convert):
        return f"step convert {name(step.source)} {name(step.target)}"
    if isinstance(step, Remap):
        return f"step remap {name(step.source)} {name(step.target)}"
    if isinstance(step, Eval):
        line = f"step eval {name(step.source)} {quote(format_expr(step.expr))}"
        if step.manual_inverse is not None:
            line += f" inverse {quote(format_expr(step.manual_inverse))}"
        elif step.root_inverse:
            line += " inverse root"
        return line
    if isinstance(step, EvalRoots):
        return f"step undo {name(step.source)} {quote(format_expr(step.expr))}"
    return f"step external {step.name}"


def _body(p: Pipeline, name) -> list:
    return [f"input {name(p.input_alphabet)}"] + [_step_line(s, name) for s in p.steps]


def format_pipeline(p: Pipeline) -> str:
    name = _Namer()
    body = _body(p, name)
    return "\n".join([f"precision {p.precision}", *name.lines, *body]) + "\n"


def format_schedule(s: Schedule) -> str:
    name = _Namer()
    labels, blocks = {}, []
    for _, p in s.segments:
        if id(p) in labels:
            continue
        label = labels[id(p)] = f"p{len(labels)}"
        blocks += [f"pipeline {label}", f"precision {p.precision}", *_body(p, name)]
    segs = [f"segment {'rest' if n is REST else n} {labels[id(p)]}" for n, p in s.segments]
    return "\n".join([*name.lines, *blocks, *segs]) + "\n"
