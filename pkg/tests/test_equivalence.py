import pytest
from hypothesis import given, strategies as st

from mell.cli.parser import parse_formula, parse_term
from mell.equivalence import (
    AXIOMS, EQUIVALENT, NOT_EQUIVALENT, cos_via_context, derived_equations, enumerate_class,
    equiv_check, equiv_neighbors, is_deep_context, replay, simplify,
)
from mell.generators import TermGenerator, equivalent_pair
from mell.syntax import HOLE_VAR, MELL, Context, OfcIntro, alpha_eq, canonical_key, replace_at

seeds = st.integers(0, 2**32 - 1)
F = parse_formula


@pytest.mark.parametrize("name,lhs,rhs,lin", derived_equations(), ids=[e[0] for e in derived_equations()])
def test_derived_equation(name, lhs, rhs, lin):
    res = equiv_check(lhs, rhs, None, lin)
    assert res.verdict == EQUIVALENT
    assert res.path, "expected an axiom-path witness"
    assert {s.axiom for s in res.path} <= set(AXIOMS)


def test_witness_replays_to_the_target():
    t, s = parse_term("(s @ t) # r"), parse_term("t # (s ~@ r)")
    res = equiv_check(t, s)
    assert canonical_key(simplify(replay(t, res.path))) == canonical_key(simplify(s))


def test_distinct_pairs_are_not_equivalent():
    lin = {"x": F("A"), "y": F("A")}
    res = equiv_check(parse_term("(x, y)"), parse_term("(y, x)"), None, lin)
    assert res.verdict == NOT_EQUIVALENT


def test_type_mismatch_is_an_error():
    from mell.typing import TypeMismatch

    with pytest.raises(TypeMismatch):
        equiv_check(parse_term("x"), parse_term("(x, *)"), None, {"x": F("A")})


def test_simplify_removes_unit_redexes():
    assert simplify(parse_term("* # (x[* := *])")) == parse_term("x")


@given(seeds)
def test_simplify_idempotent(seed):
    t = TermGenerator(seed, MELL, redex_bias=0.4).term(12)
    assert simplify(simplify(t)) == simplify(t)


@given(seeds)
def test_random_axiom_chains_are_recognised(seed):
    sample, s, _ = equivalent_pair(seed)
    res = equiv_check(sample.term, s, sample.unr, sample.lin)
    assert res.verdict == EQUIVALENT


@given(seeds)
def test_neighbours_preserve_typing(seed):
    from mell.typing import check

    gen = TermGenerator(seed, MELL, redex_bias=0.4)
    sample = gen.typed(gen.rng.randint(3, 10))
    for _, y in equiv_neighbors(sample.term, sample.unr, sample.lin):
        ty, _ = check(y, sample.unr, sample.lin, MELL, sample.type)
        assert ty == sample.type


def test_class_enumeration_contains_start():
    t = parse_term("t # s")
    members = [m for m, _ in enumerate_class(t)]
    assert any(alpha_eq(m, t) for m in members)
    assert any(alpha_eq(m, parse_term("s # t")) for m in members)


def test_contra_substitution_through_deep_context():
    body = parse_term("(h, y)")
    ctx = Context(replace_at(body, (0,), HOLE_VAR))
    assert is_deep_context(ctx)
    left, right = cos_via_context(ctx, parse_term("z"))
    assert equiv_check(left, right).verdict == EQUIVALENT


def test_hole_under_bang_is_not_deep():
    ctx = Context(OfcIntro("c", HOLE_VAR))
    assert not is_deep_context(ctx)
