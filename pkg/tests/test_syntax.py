import random

from hypothesis import given, strategies as st

from mell.cli.parser import parse_formula, parse_term
from mell.generators import TermGenerator, random_formula
from mell.syntax import (
    BOTTOM, MELL, MLL, ONE, Atom, Contradiction, LinImp, LinVar, NegAtom, OfCourse, OfcIntro,
    Par, Tensor, WhyNot, alpha_eq, bang, canonical_key, canonicalize, free_vars, from_json,
    negate, rename_bound, show, show_formula, size, to_json,
)

seeds = st.integers(0, 2**32 - 1)


def test_negation_mell_de_morgan():
    a, b = Atom("A"), Atom("B")
    assert negate(Tensor(a, b)) == Par(NegAtom("A"), NegAtom("B"))
    assert negate(OfCourse(a)) == WhyNot(NegAtom("A"))
    assert negate(ONE) == BOTTOM


def test_negation_mll_uses_implication():
    a, b = Atom("A"), Atom("B")
    assert negate(Tensor(a, b), MLL) == LinImp(a, NegAtom("B"))
    assert negate(LinImp(a, b), MLL) == Tensor(a, NegAtom("B"))


def test_mell_implication_is_par():
    assert parse_formula("A -o B") == Par(NegAtom("A"), Atom("B"))


@given(seeds, st.sampled_from([MLL, MELL]))
def test_negation_involutive(seed, mode):
    f = random_formula(random.Random(seed), 8, mode)
    assert negate(negate(f, mode), mode) == f


@given(seeds)
def test_formula_print_parse_roundtrip(seed):
    f = random_formula(random.Random(seed), 5, MELL)
    assert parse_formula(show_formula(f)) == f


@given(seeds, st.sampled_from([MLL, MELL]))
def test_term_print_parse_roundtrip(seed, mode):
    gen = TermGenerator(seed, mode, redex_bias=0.4)
    t = gen.term(gen.rng.randint(1, 14))
    assert alpha_eq(parse_term(show(t)), t)


@given(seeds)
def test_json_roundtrip(seed):
    gen = TermGenerator(seed, MELL)
    t = gen.term(10)
    assert from_json(to_json(t)) == t


@given(seeds)
def test_renaming_bound_variables_preserves_alpha_class(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.3)
    t = gen.term(12)
    r = rename_bound(t)
    assert alpha_eq(t, r)
    assert canonical_key(canonicalize(t)) == canonical_key(t)
    assert free_vars(r) == free_vars(t)


def test_alpha_eq_distinguishes_free_names():
    assert alpha_eq(parse_term("par a b. a # b"), parse_term("par c d. c # d"))
    assert not alpha_eq(parse_term("x # y"), parse_term("y # x"))


def test_bang_shorthand():
    t = bang(LinVar("x"), "c")
    assert t == OfcIntro("c", Contradiction(LinVar("x"), LinVar("c")))


def test_size_counts_constructors_not_variables():
    assert size(parse_term("x")) == 0
    assert size(parse_term("*")) == 1
    assert size(parse_term("(x, y)")) == 1
    assert size(parse_term("par a b. a # b")) == 2
