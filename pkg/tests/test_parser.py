import pytest

from mell.cli.parser import ParseError, parse_classical, parse_ctype, parse_formula, parse_problem, parse_term, show_problem
from mell.classical import App, Arrow, CBOT, Cmd, CoApp, CoVar, ILam, IApp, Lam, Mu, Name, TAtom, UVar, Var
from mell.syntax import STAR, LinVar, ParIntro, Contradiction, alpha_eq


def test_star():
    assert parse_term("*") == STAR


def test_par_introduction():
    assert parse_term("par a b. (a # b)") == ParIntro("a", "b", Contradiction(LinVar("a"), LinVar("b")))


def test_error_position():
    with pytest.raises(ParseError, match="line 2, column 3"):
        parse_term("x #\n  )")


def test_problem_roundtrip():
    p = parse_problem("mode mell;\nlinear a : A * B;\nunrestricted $u : !C;\na[(x, y) := a]")
    q = parse_problem(show_problem(p))
    assert q.linear == p.linear and q.unrestricted == p.unrestricted
    assert alpha_eq(q.term, p.term)


def test_unknown_mode_rejected():
    with pytest.raises(ParseError):
        parse_problem("mode ll; x")


def test_lambda_mu_terms():
    assert parse_classical("mu a. [a] x").term == Mu("a", Name("a", Var("x")))
    assert parse_classical("(\\x. x) y z").term == App(App(Lam("x", Var("x")), Var("y")), Var("z"))


def test_dcll_unrestricted_binder():
    t = parse_classical("(\\\\u. u) !(\\\\w. w)", "mu-dcll").term
    assert t == IApp(ILam("u", UVar("u")), ILam("w", UVar("w")))


def test_lbar_command():
    t = parse_classical("<x | y . a>").term
    assert t.__class__ is Cmd and t.coterm == CoApp(t.coterm.arg, CoVar("a"))
    assert parse_classical("<x | y . a>").calculus == "lbar-mu-mutilde"


def test_classical_header():
    src = parse_classical("calculus lambda-mu-v;\nvar x : A => bot;\nname a : A;\n[a] x")
    assert src.calculus == "lambda-mu-v"
    assert src.gamma == {"x": Arrow(TAtom("A"), CBOT)}


def test_ctype_right_associative():
    assert parse_ctype("A => B => C") == Arrow(TAtom("A"), Arrow(TAtom("B"), TAtom("C")))


def test_formula_units():
    from mell.syntax import BOTTOM, ONE, OfCourse, Tensor

    assert parse_formula("!1 * bot") == Tensor(OfCourse(ONE), BOTTOM)
