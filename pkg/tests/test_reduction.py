import pytest
from hypothesis import given, settings, strategies as st

from mell.cli.parser import parse_formula, parse_term
from mell.equivalence import EQUIVALENT, equiv_check
from mell.generators import TermGenerator, equivalent_pair
from mell.reduction import (
    FuelExhausted, MELL_AXIOMS, MLL_AXIOMS, bisim_check, find_pre_redexes, is_normal, longest_path,
    normal_forms, normalize, pre_reducts, step_modulo, tml, wcr_join,
)
from mell.syntax import MELL, MLL, alpha_eq, size
from mell.typing import check, typecheck

seeds = st.integers(0, 2**32 - 1)
F = parse_formula
CRITICAL = parse_term("(par a b. (par c d. b # (c, d))[* := a] @ p) ~@ r")
CRITICAL_LIN = {"p": F("~X"), "r": F("X par bot")}


def test_elimination_of_a_variable_is_stuck():
    t = parse_term("(y, x)[(x, y) := z]")
    nf, trace = normalize(t)
    assert alpha_eq(nf, t) and len(trace) == 0


def test_critical_pair_has_two_normal_forms_joined_modulo_equivalence():
    nfs = normal_forms(CRITICAL)
    assert len(nfs) == 2
    assert not alpha_eq(nfs[0], nfs[1])
    assert equiv_check(nfs[0], nfs[1], None, CRITICAL_LIN).verdict == EQUIVALENT
    report = wcr_join(CRITICAL, lin=CRITICAL_LIN)
    assert report.joins and report.joined


def test_trace_records_each_step():
    nf, trace = normalize(CRITICAL)
    assert len(trace) == 2
    assert trace.lines() == ["STEP beta-parR @ root", "STEP par-tensor @ root"]
    assert alpha_eq(trace.steps[-1].after, nf)


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError):
        normalize(CRITICAL, strategy="random")


def test_fuel_exhaustion_raises():
    with pytest.raises(FuelExhausted):
        normalize(CRITICAL, fuel=1)
    with pytest.raises(FuelExhausted):
        normal_forms(CRITICAL, fuel=1)


def test_full_search_agrees_with_normal_forms():
    nf, _ = normalize(CRITICAL, strategy="full-search")
    assert any(alpha_eq(nf, m) for m in normal_forms(CRITICAL))


def test_axiom_names_are_declared():
    for mode, names in ((MELL, MELL_AXIOMS), (MLL, MLL_AXIOMS)):
        gen = TermGenerator(7, mode, redex_bias=0.8)
        for _ in range(30):
            for r in find_pre_redexes(gen.typed(10).term, mode):
                assert r.axiom in names


@given(seeds)
def test_subject_reduction(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.6)
    sample = gen.typed(gen.rng.randint(3, 14), min_redexes=1)
    for _, s in pre_reducts(sample.term):
        assert check(s, sample.unr, sample.lin, MELL, sample.type)[0] == sample.type


@given(seeds)
def test_subject_reduction_modulo_equivalence(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.6)
    sample = gen.typed(gen.rng.randint(3, 12), min_redexes=1)
    for s, _ in step_modulo(sample.term):
        check(s, sample.unr, sample.lin, MELL, sample.type)


@given(seeds)
def test_mll_steps_shrink_by_two(seed):
    gen = TermGenerator(seed, MLL, redex_bias=0.7)
    t = gen.typed(gen.rng.randint(3, 14), min_redexes=1).term
    for _, s in pre_reducts(t, MLL):
        assert size(s) == size(t) - 2
    nf, trace = normalize(t, MLL)
    assert len(trace) == (size(t) - size(nf)) // 2


@given(seeds)
def test_normal_forms_are_equivalent(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.6)
    sample = gen.typed(gen.rng.randint(3, 10), min_redexes=1)
    nfs = normal_forms(sample.term, fuel=5000)
    for m in nfs[1:]:
        assert equiv_check(nfs[0], m, sample.unr, sample.lin).verdict == EQUIVALENT


@given(seeds)
def test_local_confluence_modulo_equivalence(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.7)
    sample = gen.typed(gen.rng.randint(4, 12), min_redexes=2)
    report = wcr_join(sample.term, unr=sample.unr, lin=sample.lin)
    assert report.joined


@given(seeds)
def test_equivalent_terms_are_bisimilar(seed):
    sample, s, _ = equivalent_pair(seed)
    assert bisim_check(sample.term, s, unr=sample.unr, lin=sample.lin).ok


@settings(max_examples=30)
@given(seeds)
def test_tml_memo_agrees_with_plain_search(seed):
    gen = TermGenerator(seed, MELL, redex_bias=0.6)
    t = gen.typed(gen.rng.randint(3, 9), min_redexes=1).term
    assert tml(t, memo=True) == tml(t, memo=False)


@given(seeds)
def test_longest_path_is_realised(seed):
    gen = TermGenerator(seed, MLL, redex_bias=0.6)
    t = gen.typed(gen.rng.randint(3, 10)).term
    n, path = longest_path(t, MLL)
    assert n == len(path) == tml(t, MLL)


def test_typed_terms_normalize():
    gen = TermGenerator(3, MELL, redex_bias=0.7)
    for _ in range(50):
        sample = gen.typed(gen.rng.randint(3, 16))
        nf, _ = normalize(sample.term)
        assert is_normal(nf)
        typecheck(nf, sample.unr, sample.lin, MELL, sample.type, derivation=False)
