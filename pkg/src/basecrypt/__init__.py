"""Exact base conversion, symbol remapping and left-to-right operator
pipelines over arbitrary alphabets, plus a bounded brute-force harness."""

from .alphabet import Alphabet, SurjectiveMap, builtin_alphabet, make_alphabet, make_surjective, symbol_of, value_of
from .baseconv import ExpansionInfo, Message, canonical, classify_expansion, convert, parse, render
from .exprlang import Expr, evaluate, invert_expr, parse_expr, verify_inverse
from .pipeline import (
    Convert,
    Eval,
    External,
    Pipeline,
    Remap,
    Schedule,
    compose,
    decode_segmented,
    invert_pipeline,
    invert_schedule,
    run_forward,
    run_segmented,
)
from .remap import Remapping, apply_remap, rotate_arrangement

__version__ = "0.1.0"
