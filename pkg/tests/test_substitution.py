import pytest
from hypothesis import given, strategies as st

from mell.cli.parser import parse_term
from mell.generators import contra_triple
from mell.substitution import (
    NotLinear, VariableNotFree, check_contra_typing, contra_subst, subst_linear, subst_unrestricted,
    substitute,
)
from mell.syntax import MELL, MLL, STAR, LinVar, UnrVar, alpha_eq, free_vars, size

seeds = st.integers(0, 2**32 - 1)


def test_linear_substitution_avoids_capture():
    t = substitute(parse_term("par a b. x # (a, b)"), lin={"x": LinVar("a")})
    assert "a" in free_vars(t)[0]
    assert alpha_eq(t, parse_term("par c d. a # (c, d)"))


def test_unrestricted_substitution_replaces_every_occurrence():
    t = subst_unrestricted(parse_term("($u, $u)"), "u", LinVar("y"))
    assert t == parse_term("(y, y)")


def test_mll_contra_substitution_example():
    got = contra_subst(parse_term("\\b. a @ b"), "a", LinVar("s"), MLL)
    assert alpha_eq(got, parse_term("(b, c)[(b, c) := s]"))


def test_mell_contra_substitution_example():
    got = contra_subst(parse_term("(par c d. s)[* := a] @ t"), "a", STAR, MELL)
    assert alpha_eq(got, parse_term("(par c d. s) # (t, *)"))


def test_contra_substitution_of_the_variable_itself():
    assert contra_subst(LinVar("a"), "a", LinVar("s")) == LinVar("s")


def test_contra_substitution_needs_the_variable():
    with pytest.raises((VariableNotFree, NotLinear)):
        contra_subst(parse_term("x @ y"), "a", LinVar("s"))


@given(seeds, st.sampled_from([MLL, MELL]))
def test_contra_substitution_preserves_typing(seed, mode):
    dt, a, ds = contra_triple(seed, mode)
    d = check_contra_typing(dt, a, ds, mode)
    assert alpha_eq(d.term, contra_subst(dt.term, a, ds.term, mode))


@given(seeds)
def test_mll_sizes_add_up(seed):
    dt, a, ds = contra_triple(seed, MLL)
    assert size(contra_subst(dt.term, a, ds.term, MLL)) == size(dt.term) + size(ds.term)
    assert size(subst_linear(dt.term, a, ds.term)) == size(dt.term) + size(ds.term)


def test_unrestricted_substitution_of_variable():
    assert subst_unrestricted(UnrVar("u"), "u", STAR) == STAR
