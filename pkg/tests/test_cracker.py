import itertools
import random
from fractions import Fraction

import pytest

from basecrypt.alphabet import builtin_alphabet
from basecrypt.baseconv import Message
from basecrypt.cracker import (
    SearchSpace,
    cost_report,
    crack_known_pair,
    enumerate_pipelines,
    parse_space,
    space_size,
)
from basecrypt.errors import FormatError
from basecrypt.pipeline import run_forward

B10 = builtin_alphabet(10)


def brute_force_affine_count(ops, consts, steps):
    """Count step sequences by listing them outright."""
    one_step = [(op, c) for op in ops for c in consts if not (op in "*/" and c == 0)]
    return sum(1 for _ in itertools.product(one_step, repeat=steps))


ONE_STEP = SearchSpace((10,), min_steps=1, max_steps=1)


def test_one_step_affine_space():
    assert brute_force_affine_count("+-*/", range(10), 1) == 38
    listed = [p.one_liner() for _, p in enumerate_pipelines(ONE_STEP)]
    assert len(listed) == 38 == space_size(ONE_STEP)
    expected = [f"[b10] X{op}{c}" for op in "+-*/" for c in range(10) if not (op in "*/" and c == 0)]
    assert listed == expected


def test_empty_and_identity():
    assert list(enumerate_pipelines(SearchSpace((10,), templates=frozenset()))) == []
    assert space_size(SearchSpace((10,), templates=frozenset())) == 0
    first = next(enumerate_pipelines(SearchSpace((10, 16), max_steps=2)))
    assert first[0] == 0 and first[1].steps == ()


def test_enumeration_is_complete_and_unique():
    s = SearchSpace((2, 10, 16), templates=frozenset({"affine", "convert", "rot"}), max_num=3, max_den=2, max_steps=2)
    seen = [p for _, p in enumerate_pipelines(s)]
    assert len(seen) == space_size(s) == len(set(seen))
    assert [len(p.steps) for p in seen] == sorted(len(p.steps) for p in seen)


def test_restart_from_index():
    s = SearchSpace((10, 36), templates=frozenset({"affine", "convert"}), max_steps=2)
    full = list(enumerate_pipelines(s))
    assert list(enumerate_pipelines(s, 123, 200)) == full[123:200]


def test_rational_constants_only_when_finite():
    s = SearchSpace((10,), max_num=1, max_den=3, ops="+", min_steps=1)
    # 1/3 has no finite base-10 numeral, 1/2 does
    assert [p.one_liner() for _, p in enumerate_pipelines(s)] == ["[b10] X+0", "[b10] X+0.5", "[b10] X+1"]


def test_planted_additive():
    assert 5 + 7 == 12
    s = SearchSpace((10,), ops="+", max_num=99, min_steps=1)
    report = crack_known_pair(Message("5", B10), Message("12", B10), s)
    assert [p.one_liner() for _, p in report.matches] == ["[b10] X+7"]
    assert report.tested == 100


def test_multiple_preimages():
    s = SearchSpace((10,), ops="+*", max_num=9, min_steps=1)
    found = [str(p.steps[0]) for _, p in crack_known_pair("42", "42", s).matches]
    assert found == ["X+0", "X*1"]


def test_no_match():
    assert crack_known_pair("5", "zz", SearchSpace((10,), max_steps=1)).matches == []


def test_cost_report():
    assert cost_report(ONE_STEP).total == 38
    assert cost_report(SearchSpace((10,), templates=frozenset())).total == 0
    for k in (1, 2):
        single = cost_report(SearchSpace((10,), min_steps=k, max_steps=k)).total
        double = cost_report(SearchSpace((10,), min_steps=2 * k, max_steps=2 * k)).total
        assert single == brute_force_affine_count("+-*/", range(10), k)
        assert double >= single**2
    text = str(cost_report(SearchSpace((10, 16), max_steps=1)))
    assert text.splitlines()[-1] == "total 78"


def test_parallel_is_deterministic():
    s = SearchSpace((10, 16), templates=frozenset({"affine", "convert", "rot"}), max_steps=2)
    one = crack_known_pair("ab", "3c", s, workers=1)
    two = crack_known_pair("ab", "3c", s, workers=3)
    assert one.lines() == two.lines() and one.matches


def test_planted_random_pipelines_are_recovered():
    rng = random.Random(8)
    for _ in range(15):
        s = SearchSpace(
            tuple(rng.sample([2, 8, 10, 16], rng.randint(1, 2))),
            templates=frozenset(rng.sample(["affine", "convert", "rot"], rng.randint(1, 3))),
            max_num=rng.randint(1, 5), max_den=rng.randint(1, 2), max_steps=2,
        )
        index = rng.randrange(space_size(s))
        _, planted = next(enumerate_pipelines(s, index))
        plain = Message("101", planted.input_alphabet)
        try:
            cipher = run_forward(planted, plain)
        except ZeroDivisionError:
            continue
        report = crack_known_pair(plain, cipher, s)
        assert index in [i for i, _ in report.matches]
        for _, p in report.matches:
            assert run_forward(p, Message("101", p.input_alphabet)).text == cipher.text


def test_space_file():
    s = parse_space("radices 16 36 62\ntemplates affine convert rot\nconstants max-num 100 max-den 10\nmax-steps 2\n")
    assert s.radices == (16, 36, 62) and s.max_num == 100 and s.max_den == 10 and s.max_steps == 2
    assert s.arrangements == "rotations"
    assert parse_space("radices 10\nops + *  # only these\nmin-steps 1\n").ops == "+*"
    for bad in ("templates affine", "radices 10\ntemplates magic", "radices 10\nconstants max-num", "radices 10\nfoo 1"):
        with pytest.raises(FormatError):
            parse_space(bad)
