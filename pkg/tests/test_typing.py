import pytest
from hypothesis import given, strategies as st

from mell.cli.parser import parse_formula, parse_term
from mell.generators import TermGenerator
from mell.syntax import MELL, MLL, negate
from mell.typing import (
    NonLinearUsage, NonLocalLinearCapture, TypeMismatch, TypingError, UnboundVariable,
    check, derivation_ok, typecheck,
)

seeds = st.integers(0, 2**32 - 1)
F = parse_formula


def test_axiom():
    ty, d = check(parse_term("a"), {}, {"a": F("A")})
    assert ty == F("A") and d.rule == "m-ax"


def test_pair_and_split():
    ty, _ = check(parse_term("(y, x)[(x, y) := z]"), {}, {"z": F("A * B")})
    assert ty == F("B * A")


def test_unrestricted_axiom():
    ty, d = check(parse_term("$u"), {"u": F("A")}, {})
    assert ty == F("A") and d.rule == "m-uax"


def test_contradiction_has_type_bottom():
    ty, _ = check(parse_term("t # s"), {}, {"t": F("A"), "s": F("~A")})
    assert ty == F("bot")


def test_linear_variable_used_twice():
    with pytest.raises(NonLinearUsage):
        check(parse_term("(a, a)"), {}, {"a": F("A")})


def test_bang_cannot_capture_linear_variables():
    with pytest.raises(NonLocalLinearCapture):
        typecheck(parse_term("bang a. x # a"), open_vars=True)


def test_mismatch():
    with pytest.raises(TypeMismatch):
        check(parse_term("t # s"), {}, {"t": F("A"), "s": F("A")})


def test_unbound():
    with pytest.raises(UnboundVariable):
        check(parse_term("x"), {}, {})


def test_expected_type_is_enforced():
    with pytest.raises(TypingError):
        check(parse_term("a"), {}, {"a": F("A")}, MELL, F("B"))


def test_mll_lambda():
    ty, _ = check(parse_term("\\x. x"), {}, {}, MLL)
    assert ty.__class__.__name__ == "LinImp"


def test_principal_types_for_open_terms():
    r = typecheck(parse_term("x @ y"), open_vars=True)
    assert set(r.lin) == {"x", "y"}
    # x : ¬A ⅋ B applied to y : A
    assert r.lin["x"].left == negate(r.lin["y"])


@given(seeds, st.sampled_from([MLL, MELL]))
def test_random_derivations_verify(seed, mode):
    gen = TermGenerator(seed, mode, redex_bias=0.3)
    s = gen.typed(gen.rng.randint(2, 14))
    assert derivation_ok(s.typing.derivation, mode)
    again, _ = check(s.term, s.unr, s.lin, mode, s.type)
    assert again == s.type
