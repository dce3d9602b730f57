import pytest

from mell.classical import (
    CBOT, LAMBDA_MU, LAMBDA_MU_V, LBAR_MU_MUTILDE, MU_DCLL, Arrow, ClassicalTypeError, TAtom,
    UnsupportedSource, check_ch_steps, check_dcll_steps, check_mu_steps, check_translation_type,
    ch_check, ch_step, ch_t_judgement, ch_t_translate, classical_corpus, dcll_check, dcll_equal,
    dcll_judgement, dcll_translate, mu_alpha_eq, mu_infer, mu_normalize, mu_step, q_supported,
    simulate_verify, t_translate, t_type,
)
from mell.cli.parser import parse_classical, parse_formula, parse_term
from mell.syntax import MELL, alpha_eq
from mell.typing import check, verify_derivation

LMU = classical_corpus(LAMBDA_MU)
LBAR = classical_corpus(LBAR_MU_MUTILDE)
DCLL = classical_corpus(MU_DCLL)


def _src(text, calculus=None):
    return parse_classical(text, calculus).term


def test_corpora_exercise_every_rule():
    t_rules = {r for m in LMU for r, _, _ in mu_step(m, LAMBDA_MU)}
    v_rules = {r for m in LMU for r, _, _ in mu_step(m, LAMBDA_MU_V)}
    assert t_rules == {"beta", "mu", "rho", "theta"}
    assert v_rules == {"beta-v", "mu-v", "mu-v'", "rho", "theta"}
    assert {r for c in LBAR for r, _, _ in ch_step(c)} == {"lambda", "mu"}
    assert {r for m in DCLL for r, _, _ in dcll_equal(m)} == {"beta-int", "beta-lin", "mu-r", "theta"}
    assert len(LMU) >= 30


def test_variable_image():
    assert alpha_eq(t_translate(_src("x")), parse_term("$x # (bang c. $k # c)"))


def test_arrow_type_image():
    assert t_type(Arrow(TAtom("A"), CBOT)) == parse_formula("?!~A par ?bot")


@pytest.mark.parametrize("m", LMU, ids=[str(i) for i in range(len(LMU))])
def test_t_translation_preserves_types(m):
    verify_derivation(check_translation_type(m, "T"), MELL)


@pytest.mark.parametrize("m", [m for m in LMU if q_supported(m)])
def test_q_translation_preserves_types(m):
    verify_derivation(check_translation_type(m, "Q"), MELL)


@pytest.mark.parametrize("m", LMU, ids=[str(i) for i in range(len(LMU))])
def test_t_simulation(m):
    for c in check_mu_steps(m, "T"):
        assert c.ok, (c.rule, c.report)


@pytest.mark.parametrize("m", [m for m in LMU if q_supported(m)])
def test_q_simulation(m):
    for c in check_mu_steps(m, "Q"):
        assert c.ok, (c.rule, c.report)


@pytest.mark.parametrize("c", LBAR)
def test_lbar_simulation(c):
    env, goal = ch_t_judgement(ch_check(c))
    check(ch_t_translate(c), env, {}, MELL, goal)
    for s in check_ch_steps(c):
        assert s.ok, (s.rule, s.report)


@pytest.mark.parametrize("m", DCLL)
def test_dcll_equations(m):
    unr, lin, goal = dcll_judgement(dcll_check(m))
    check(dcll_translate(m), unr, lin, MELL, goal)
    for s in check_dcll_steps(m):
        assert s.ok, (s.rule, s.report)


def test_rho_fails_when_the_mu_body_is_not_a_named_term():
    # y z : bot stands directly under mu b, so the continuation of the outer
    # name ends up frozen inside a bang on one side only.
    m = _src("[a] (mu b. y z)")
    [c] = check_mu_steps(m, "T")
    assert c.rule == "rho"
    assert c.report.verdict == "Refuted"


def test_q_rejects_bottom_typed_variables():
    m = _src("\\x. mu a. x")
    assert mu_infer(m).type.left == CBOT
    assert not q_supported(m)
    with pytest.raises(UnsupportedSource):
        check_translation_type(m, "Q")


def test_untypable_sources_rejected():
    with pytest.raises(ClassicalTypeError):
        mu_infer(_src("x x"))


def test_dcll_names_are_linear():
    with pytest.raises(ClassicalTypeError):
        dcll_check(_src("mu a. [b] z", MU_DCLL))
    with pytest.raises(ClassicalTypeError):
        dcll_check(_src("\\x. f x x", MU_DCLL))


def test_normalization_reaches_a_normal_form():
    nf = mu_normalize(_src("(\\x. \\y. x) z w"))
    assert mu_alpha_eq(nf, _src("z"))
    assert not mu_step(nf)


def test_unknown_relation_rejected():
    t = parse_term("*")
    with pytest.raises(ValueError):
        simulate_verify(t, t, "~~")
