import random

from hypothesis import given, strategies as st

from mell.generators import (
    TermGenerator, contra_triple, enumerate_saturated, enumerate_terms, random_formula, saturated_corpus,
    shrink, typed_corpus,
)
from mell.reduction import find_pre_redexes
from mell.syntax import MELL, MLL, canonical_key, free_vars, size
from mell.typing import typable, typecheck, verify_derivation

seeds = st.integers(0, 2**32 - 1)


def test_enumeration_has_no_alpha_duplicates():
    terms = list(enumerate_terms(3, MELL, max_free=1))
    keys = [canonical_key(t) for t in terms]
    assert len(keys) == len(set(keys))
    assert all(size(t) <= 3 for t in terms)


def test_enumeration_respects_bounds():
    for t in enumerate_terms(4, MLL, max_free=2, min_size=3):
        assert 3 <= size(t) <= 5
        assert len(free_vars(t)[0]) <= 2


def test_typed_corpus_is_typable():
    for s in typed_corpus(4, MLL, max_free=1):
        typecheck(s.term, s.unr, s.lin, MLL, s.type, derivation=False)


def test_saturated_terms_are_typable_and_closed_under_unrestricted():
    terms = list(enumerate_saturated(5, max_free=0))
    assert terms
    for t in terms:
        assert typable(t, open_vars=True)
        assert not free_vars(t)[1]
    assert sum(1 for t in terms if find_pre_redexes(t)) > len(terms) // 2


def test_saturated_corpus_attaches_typings():
    for s in saturated_corpus(4, max_free=1):
        assert s.typing.type is not None


@given(seeds, st.sampled_from([MELL, MLL]))
def test_typed_samples_check(seed, mode):
    gen = TermGenerator(seed, mode, redex_bias=0.5)
    s = gen.typed(gen.rng.randint(4, 15), min_redexes=1)
    assert find_pre_redexes(s.term, mode)
    typecheck(s.term, s.unr, s.lin, mode, s.type, derivation=False)


@given(seeds)
def test_generation_is_reproducible(seed):
    a = TermGenerator(seed, MELL, redex_bias=0.5).term(15)
    b = TermGenerator(seed, MELL, redex_bias=0.5).term(15)
    assert a == b


@given(seeds)
def test_contra_triples_are_well_formed(seed):
    dt, a, ds = contra_triple(seed)
    verify_derivation(dt)
    verify_derivation(ds)
    assert a in dt.lin
    assert not set(dt.lin) & set(ds.lin)


@given(seeds)
def test_random_formulas_respect_depth(seed):
    from mell.syntax import formula_depth

    assert formula_depth(random_formula(random.Random(seed), 3)) <= 3


def test_shrink_finds_a_smaller_failing_subterm():
    gen = TermGenerator(5, MELL, redex_bias=0.5)
    t = gen.typed(14).term
    small = shrink(t, lambda s: size(s) >= 1)
    assert size(small) <= size(t)
    assert size(small) >= 1
