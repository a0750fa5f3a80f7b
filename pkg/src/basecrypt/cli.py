"""Command-line interface.

Exit codes: 0 success, 1 domain error (error class name on stderr), 2 usage.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import baseconv, cracker, formats
from .alphabet import BUILTIN_ROSTER, MAX_BUILTIN_RADIX, builtin_alphabet
from .baseconv import DEFAULT_PRECISION, Message
from .errors import BaseCryptError
from .exprlang import format_expr, invert_expr, parse_expr, evaluate, verify_inverse
from .pipeline import (
    EXACT,
    RENDERED,
    Pipeline,
    compose,
    decode_segmented,
    invert_pipeline,
    invert_schedule,
    run_forward,
    run_segmented,
)
from .remap import Remapping, apply_remap

# which library operations each command exercises
COMMAND_OPERATIONS = {
    "alphabets": {"builtin_alphabet", "make_alphabet"},
    "convert": {"parse", "render", "convert", "classify_expansion", "value_of", "symbol_of", "divmod_int"},
    "eval": {"parse_expr", "evaluate", "invert_expr", "verify_inverse"},
    "remap": {"apply_remap", "rotate_arrangement"},
    "encode": {"run_forward", "compose"},
    "decode": {"run_forward", "invert_pipeline", "compose"},
    "invert": {"invert_pipeline"},
    "segment": {"run_segmented", "decode_segmented"},
    "crack": {"enumerate_pipelines", "crack_known_pair", "cost_report"},
    "selftest": {"run_forward", "invert_pipeline", "convert", "apply_remap"},
}


class UsageError(Exception):
    pass


def _alphabet(ref):
    try:
        return formats.parse_alphabet_ref(ref)
    except (BaseCryptError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _messages(args, alphabet):
    if args.message is not None and args.input is not None:
        raise UsageError("give the message inline or with --input, not both")
    if args.message is not None:
        return [Message(args.message, alphabet)]
    if args.input is None:
        raise UsageError("no message: pass it inline or with --input FILE")
    return baseconv.read_messages(_read(args.input), alphabet)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _add_message(p):
    p.add_argument("message", nargs="?", help="message text")
    p.add_argument("--input", metavar="FILE", help="message file, one per line ('-' for stdin)")


def cmd_alphabets(args, out):
    radices = [args.radix] if args.radix else range(2, MAX_BUILTIN_RADIX + 1)
    for r in radices:
        out.write(f"{r} {builtin_alphabet(r).glyphs}\n")


def cmd_convert(args, out):
    for m in _messages(args, args.source):
        res, info = baseconv.convert(m, args.target, args.precision)
        out.write(res.text + "\n")
        if args.info:
            exp = baseconv.classify_expansion(m.value, args.target.radix)
            line = str(exp)
            if exp.kind == baseconv.REPEATING:
                line += f" repetend={exp.repetend_text(args.target)}"
            if not info.exact:
                line += f" (cut at {args.precision} digits)"
            out.write(f"# {line}\n")


def cmd_eval(args, out):
    a = args.alphabet
    e = parse_expr(args.expr, a)
    if args.invert:
        out.write(format_expr(invert_expr(e), implicit_head=True) + "\n")
        return
    if args.verify is not None:
        check = verify_inverse(e, parse_expr(args.verify, a), args.trials, args.seed, args.nonzero)
        out.write(f"{check}\n")
        if not check:
            raise SystemExit(1)
        return
    x = baseconv.parse(args.x, a) if args.x is not None else Fraction(0)
    text, info = baseconv.render(evaluate(e, x), a, args.precision)
    out.write(text + "\n")


def cmd_remap(args, out):
    if (args.target is None) == (args.rot is None):
        raise UsageError("remap needs exactly one of --to or --rot")
    r = Remapping.rotation(args.source, args.rot) if args.rot is not None else Remapping(args.source, args.target)
    for m in _messages(args, args.source):
        out.write(apply_remap(m, r).text + "\n")


def _pipeline(args) -> Pipeline:
    p = formats.load_pipeline(args.pipeline[0])
    for path in args.pipeline[1:]:
        p = compose(p, formats.load_pipeline(path))
    if args.precision is not None:
        p = Pipeline(p.input_alphabet, p.steps, args.precision)
    return p


def _run(p, args, out):
    for m in _messages(args, p.input_alphabet):
        res = run_forward(p, m, args.mode, strict=args.strict)
        out.write(res.text + "\n")


def cmd_encode(args, out):
    _run(_pipeline(args), args, out)


def cmd_decode(args, out):
    _run(invert_pipeline(_pipeline(args)), args, out)


def cmd_invert(args, out):
    if (args.pipeline is None) == (args.schedule is None):
        raise UsageError("invert needs exactly one of --pipeline or --schedule")
    if args.pipeline:
        out.write(formats.format_pipeline(invert_pipeline(formats.load_pipeline(args.pipeline))))
    else:
        out.write(formats.format_schedule(invert_schedule(formats.load_schedule(args.schedule))))


def cmd_segment(args, out):
    schedule = formats.load_schedule(args.schedule)
    if args.decode:
        if args.message is not None:
            raise UsageError("segment --decode reads the envelope from --input")
        if args.input is None:
            raise UsageError("segment --decode needs --input ENVELOPE")
        out.write(decode_segmented(invert_schedule(schedule), _read(args.input), args.mode) + "\n")
        return
    if args.message is not None and args.input is not None:
        raise UsageError("give the message inline or with --input, not both")
    if args.message is None and args.input is None:
        raise UsageError("no message: pass it inline or with --input FILE")
    text = args.message if args.message is not None else _read(args.input).strip("\r\n")
    out.write(run_segmented(schedule, text, args.mode))


def cmd_crack(args, out):
    space = cracker.parse_space(_read(args.space))
    if args.cost:
        out.write(f"{cracker.cost_report(space)}\n")
        return
    if args.plain is None or args.cipher is None:
        raise UsageError("crack needs --plain and --cipher (or --cost)")
    report = cracker.crack_known_pair(args.plain, args.cipher, space, args.workers)
    out.write(f"# {len(report.matches)} match(es) among {report.tested} candidates\n")
    for line in report.lines():
        out.write(line + "\n")


def _fixture(name):
    return resources.files("basecrypt").joinpath("fixtures", name).read_text(encoding="utf-8")


def cmd_selftest(args, out):
    enc = formats.parse_pipeline(_fixture("paper_encrypt.pipeline"))
    dec = formats.parse_pipeline(_fixture("paper_decrypt.pipeline"))
    cipher = Message(_fixture("paper_ciphertext.txt").strip(), dec.input_alphabet)
    if invert_pipeline(enc) != dec:
        out.write("encrypt and decrypt fixtures are not inverses\n")
        raise SystemExit(1)
    plain = run_forward(dec, cipher, strict=True)
    out.write(plain.text + "\n")
    again = run_forward(enc, plain, strict=True)
    if again.text != cipher.text:
        out.write(f"roundtrip FAILED: {again.text}\n")
        raise SystemExit(1)
    if run_forward(enc, plain, RENDERED, strict=True).text != cipher.text:
        out.write("roundtrip FAILED in rendered mode\n")
        raise SystemExit(1)
    out.write("roundtrip OK\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="basecrypt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def precision(p, default=DEFAULT_PRECISION):
        p.add_argument("--precision", type=int, default=default, help="fractional digits to render")

    def mode(p):
        p.add_argument("--mode", choices=[EXACT, RENDERED], default=EXACT)

    p = sub.add_parser("alphabets", help="list built-in alphabets")
    p.add_argument("--radix", type=int, choices=range(2, MAX_BUILTIN_RADIX + 1), metavar="R")
    p.set_defaults(func=cmd_alphabets)

    p = sub.add_parser("convert", help="numerical base conversion")
    p.add_argument("--from", dest="source", type=_alphabet, required=True, metavar="REF")
    p.add_argument("--to", dest="target", type=_alphabet, required=True, metavar="REF")
    p.add_argument("--info", action="store_true", help="also print the expansion class")
    precision(p)
    _add_message(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("eval", help="evaluate, invert or verify an expression")
    p.add_argument("--alphabet", type=_alphabet, required=True, metavar="REF")
    p.add_argument("expr")
    p.add_argument("--x", metavar="NUMERAL", help="value of X, written in the alphabet (default 0)")
    p.add_argument("--invert", action="store_true")
    p.add_argument("--verify", metavar="EXPR", help="check EXPR undoes the expression")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nonzero", action="store_true", help="skip x = 0 when verifying")
    precision(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("remap", help="substitute glyphs under a rearranged alphabet")
    p.add_argument("--from", dest="source", type=_alphabet, required=True, metavar="REF")
    p.add_argument("--to", dest="target", type=_alphabet, metavar="REF")
    p.add_argument("--rot", type=int, metavar="K")
    _add_message(p)
    p.set_defaults(func=cmd_remap)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} messages with a pipeline file")
        p.add_argument("--pipeline", required=True, action="append", metavar="FILE",
                       help="pipeline file; repeat to chain several")
        p.add_argument("--strict", action="store_true", help="fail if the output digits were cut")
        precision(p, None)
        mode(p)
        _add_message(p)
        p.set_defaults(func=func)

    p = sub.add_parser("invert", help="print the inverse of a pipeline or schedule")
    p.add_argument("--pipeline", metavar="FILE")
    p.add_argument("--schedule", metavar="FILE")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("segment", help="segmented encode, or decode an envelope")
    p.add_argument("--schedule", required=True, metavar="FILE")
    p.add_argument("--decode", action="store_true")
    mode(p)
    _add_message(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("crack", help="exhaustive known-plaintext search")
    p.add_argument("--space", required=True, metavar="FILE")
    p.add_argument("--plain")
    p.add_argument("--cipher")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cost", action="store_true", help="print candidate counts only")
    p.set_defaults(func=cmd_crack)

    p = sub.add_parser("selftest", help="replay the worked example fixtures")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        args.func(args, out)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"basecrypt: error: {exc}\n")
        return 2
    except BaseCryptError as exc:
        where = ""
        if exc.segment is not None:
            where += f" [segment {exc.segment}]"
        if exc.step is not None:
            where += f" [step {exc.step}]"
        err.write(f"error: {type(exc).__name__}{where}: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
