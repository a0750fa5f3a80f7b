import random
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from basecrypt.alphabet import builtin_alphabet
from basecrypt.baseconv import Message, canonical
from basecrypt.errors import (
    AlphabetMismatch,
    ExternalStepNotExecutable,
    InexactRoot,
    NonTerminatingAtDigitStep,
    NotInvertible,
    PrecisionMismatch,
    SegmentLengthMismatch,
)
from basecrypt.exprlang import parse_expr
from basecrypt.formats import parse_pipeline
from basecrypt.pipeline import (
    RENDERED,
    REST,
    Convert,
    Eval,
    EvalRoots,
    External,
    Pipeline,
    Remap,
    Schedule,
    compose,
    decode_segmented,
    invert_pipeline,
    invert_schedule,
    parse_envelope,
    run_forward,
    run_forward_ex,
    run_segmented,
)
from basecrypt.remap import Remapping

from generators import random_message, random_pipeline
from oracles import independent_decrypt

B10, B16, B36, B62 = (builtin_alphabet(r) for r in (10, 16, 36, 62))
CIPHERTEXT = "nphiwva8nas4xf0u8kyuw1etq3hsxb0ks4qbrlr27b6dam8tu4bily.5i"
PLAINTEXT = independent_decrypt(CIPHERTEXT)


def fixture(name):
    return parse_pipeline(resources.files("basecrypt").joinpath("fixtures", name).read_text())


ENC = fixture("paper_encrypt.pipeline")
DEC = fixture("paper_decrypt.pipeline")


def test_paper_fixture_both_directions():
    plain = run_forward(DEC, Message(CIPHERTEXT, B36), strict=True)
    assert plain.alphabet == B62
    assert plain.text == PLAINTEXT
    assert run_forward(ENC, plain, strict=True).text == CIPHERTEXT
    assert run_forward(ENC, plain, RENDERED).text == CIPHERTEXT


def test_fixtures_are_inverse():
    assert invert_pipeline(ENC) == DEC
    assert invert_pipeline(DEC) == ENC


def test_empty_pipeline_canonicalizes():
    m = Message("0012.50", B10)
    assert run_forward(Pipeline(B10), m) == canonical(m)


def test_double_inversion():
    rng = random.Random(5)
    for _ in range(50):
        p = random_pipeline(rng)
        assert invert_pipeline(invert_pipeline(p)) == p


def test_power_not_invertible():
    p = Pipeline(B10, (Eval(parse_expr("X^6", B10)),))
    with pytest.raises(NotInvertible) as info:
        invert_pipeline(p)
    assert info.value.step == 0


def test_manual_inverse():
    e, inv = parse_expr("2*X", B10), parse_expr("X/2", B10)
    p = Pipeline(B10, (Eval(e, manual_inverse=inv),))
    m = Message("21", B10)
    assert run_forward(invert_pipeline(p), run_forward(p, m)) == m
    with pytest.raises(NotInvertible):
        Pipeline(B10, (Eval(e, manual_inverse=parse_expr("X/3", B10)),))


def test_root_inverse():
    p = Pipeline(B10, (Eval(parse_expr("X^3+1", B10), root_inverse=True),))
    inv = invert_pipeline(p)
    assert isinstance(inv.steps[0], EvalRoots)
    assert invert_pipeline(inv) == p
    m = Message("-2.5", B10)
    assert run_forward(p, m).text == "-14.625"
    assert run_forward(inv, run_forward(p, m)) == m
    with pytest.raises(InexactRoot):
        run_forward(inv, Message("3", B10))


def test_compose():
    p = ENC
    assert compose(p, Pipeline(p.output_alphabet, (), p.precision)) == p
    ident = compose(p, invert_pipeline(p))
    m = Message("Hello", B62)
    assert run_forward(ident, m) == m
    with pytest.raises(AlphabetMismatch):
        compose(p, p)
    with pytest.raises(PrecisionMismatch):
        compose(p, Pipeline(B36, (), 3))


def test_compose_matches_sequential():
    rng = random.Random(11)
    for _ in range(30):
        p1 = random_pipeline(rng, 2)
        p2 = random_pipeline(rng, 2)
        p2 = Pipeline(p1.output_alphabet, (Convert(p1.output_alphabet, p2.input_alphabet),) + p2.steps)
        m = Message(str(rng.randint(0, 10**6)), p1.input_alphabet) if p1.input_alphabet.radix >= 10 else None
        try:
            expected = run_forward(p2, run_forward(p1, m, strict=True), strict=True)
        except NonTerminatingAtDigitStep:
            continue
        assert run_forward(compose(p1, p2), m) == expected


@given(st.integers(0, 2**256))
def test_two_converts_equal_one(n):
    m = Message(format(n, "x"), B16)
    chained = compose(Pipeline(B16, (Convert(B16, B62),)), Pipeline(B62, (Convert(B62, B36),)))
    assert run_forward(chained, m).value == run_forward(Pipeline(B16, (Convert(B16, B36),)), m).value == n


def test_remap_needs_terminating_digits():
    p = Pipeline(B10, (Eval(parse_expr("X/3", B10)), Remap(Remapping.rotation(B10, 1))))
    with pytest.raises(NonTerminatingAtDigitStep) as info:
        run_forward(p, Message("1", B10))
    assert info.value.step == 1


def test_remap_step_changes_glyphs_not_value():
    p = Pipeline(B10, (Remap(Remapping.rotation(B10, 1)),))
    out = run_forward(p, Message("109", B10))
    assert out.text == "098"  # roster 9012345678
    assert out.value == 109


def test_strict_output():
    p = Pipeline(B10, (Eval(parse_expr("X/3", B10)),), precision=5)
    out, info = run_forward_ex(p, Message("1", B10))
    assert out.text == "0.33333" and not info.exact
    with pytest.raises(NonTerminatingAtDigitStep):
        run_forward(p, Message("1", B10), strict=True)


def test_external_and_continuity():
    p = Pipeline(B10, (External("twofish"),))
    assert not p.runnable
    with pytest.raises(ExternalStepNotExecutable):
        run_forward(p, Message("1", B10))
    with pytest.raises(NotInvertible):
        invert_pipeline(p)
    with pytest.raises(AlphabetMismatch):
        Pipeline(B10, (Convert(B16, B10),))
    with pytest.raises(AlphabetMismatch):
        run_forward(Pipeline(B16), Message("1", B10))


def test_step_index_on_errors():
    p = Pipeline(B10, (Convert(B10, B16), Eval(parse_expr("X/0", B16))))
    with pytest.raises(ZeroDivisionError) as info:
        run_forward(p, Message("1", B10))
    assert info.value.step == 1


def test_rendered_mode_refuses_cut_intermediates():
    p = Pipeline(B10, (Eval(parse_expr("X/3", B10)), Eval(parse_expr("X*3", B10))))
    assert run_forward(p, Message("1", B10)).text == "1"
    with pytest.raises(NonTerminatingAtDigitStep):
        run_forward(p, Message("1", B10), RENDERED)


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_modes_agree_and_roundtrip(rng):
    p = random_pipeline(rng)
    m = random_message(rng, p.input_alphabet)
    try:
        enc = run_forward(p, m, strict=True)
    except NonTerminatingAtDigitStep:
        return
    assert run_forward(invert_pipeline(p), enc) == canonical(m)
    try:
        ref = run_forward(p, m, RENDERED, strict=True)
    except NonTerminatingAtDigitStep:
        return
    assert ref == enc


# segmented

ADD7 = Pipeline(B10, (Eval(parse_expr("+7", B10)), Convert(B10, B16)))
TO36 = Pipeline(B10, (Convert(B10, B36), Eval(parse_expr("*3", B36)), Remap(Remapping.rotation(B36, 5))))


def test_single_segment_is_run_forward():
    m = Message("123456", B10)
    env = run_segmented(Schedule(((REST, ADD7),)), m)
    [entry] = parse_envelope(env)
    assert entry.text == run_forward(ADD7, m).text
    assert entry.length == 6


def test_identity_segments():
    ident = Pipeline(B10)
    env = run_segmented(Schedule(((3, ident), (3, ident))), "123456")
    assert env == "segments 2\nb10 3 123\nb10 3 456\n"


def test_segmented_roundtrip_keeps_leading_zeros():
    s = Schedule(((4, ADD7), (REST, TO36)))
    text = "0012000450"
    env = run_segmented(s, text)
    assert decode_segmented(invert_schedule(s), env) == text


def test_segment_errors():
    s = Schedule(((4, ADD7), (4, TO36)))
    with pytest.raises(SegmentLengthMismatch):
        run_segmented(s, "1234567")
    with pytest.raises(SegmentLengthMismatch):
        run_segmented(s, "123456789")
    with pytest.raises(SegmentLengthMismatch):
        run_segmented(Schedule(((REST, ADD7),)), "12.5")
    with pytest.raises(SegmentLengthMismatch):
        Schedule(((REST, ADD7), (2, ADD7)))
    bad = Pipeline(B10, (Eval(parse_expr("X/0", B10)),))
    with pytest.raises(ZeroDivisionError) as info:
        run_segmented(Schedule(((2, ADD7), (2, bad))), "1234")
    assert info.value.segment == 1
