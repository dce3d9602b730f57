"""Concrete syntax for formulas, terms and typing environments.

Terms::

    term    := 'par' x y '.' term | 'bang' x '.' term | 'wn' $u '.' term
             | 'wncase' term 'with' x '.' term | '\\' x '.' term | contra
    contra  := app ('#' app)*                    (left associative)
    app     := postfix (('@' | '~@') postfix)*   (left associative)
    postfix := atom ('[' elim ']')*
    elim    := '(' x ',' y ')' ':=' term | '!' $u ':=' term | '*' ':=' term
    atom    := x | $u | '*' | '(' term ')' | '(' term ',' term ')'

Formulas (loosest first): ``A -o B`` (right associative), ``A par B``,
``A * B``, then prefix ``!A``, ``?A``, ``~A`` and the units ``1``, ``bot``.

An input file is a sequence of declarations followed by the term::

    mode mell;
    linear a : A * B;
    unrestricted $u : !C;
    a[(x, y) := a]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from mell.syntax import (
    BOTTOM, MELL, MLL, ONE, App, Atom, ContraApp, Contradiction, Formula, LinImp, LinVar,
    Lambda, OfCourse, OfcElim, OfcIntro, OneElim, Pair, Par, ParIntro, STAR, Tensor,
    TensorElim, Term, UnrVar, WhyElim, WhyIntro, WhyNot, desugar, negate,
)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<comment>--[^\n]*)|(?P<op>~@|:=|-o|[()\[\],.@#*!?~$:;\\|-]|⊢)|(?P<id>[A-Za-z_][A-Za-z0-9_']*|\d+))"
)
KEYWORDS = {"par", "bang", "wn", "wncase", "with", "bot", "linear", "unrestricted", "mode"}


@dataclass
class _Tokens:
    text: str
    toks: list[tuple[str, int]] = field(default_factory=list)
    i: int = 0

    def __post_init__(self):
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
            pos = m.end()
            if m.group("comment"):
                continue
            tok = m.group("op") or m.group("id")
            self.toks.append((tok, m.start(m.lastgroup)))
        self.toks.append(("<eof>", len(text)))

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def next(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}", self.pos(), self.text)
        self.i += 1

    def ident(self) -> str:
        tok = self.peek()
        if not re.match(r"[A-Za-z_]", tok) or tok in KEYWORDS:
            raise ParseError(f"expected identifier, found {tok!r}", self.pos(), self.text)
        self.i += 1
        return tok

    def unr_ident(self) -> str:
        self.expect("$")
        return self.ident()

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos(), self.text)


# --------------------------------------------------------------------------- terms

# A binder may also stand as the last operand of an infix operator and then
# extends as far to the right as possible.
_BINDERS = ("par", "bang", "wn", "wncase", "\\")


def _term(ts: _Tokens) -> Term:
    tok = ts.peek()
    if tok == "par":
        ts.next()
        a = ts.ident()
        b = ts.ident()
        ts.expect(".")
        return ParIntro(a, b, _term(ts))
    if tok == "bang":
        ts.next()
        a = ts.ident()
        ts.expect(".")
        return OfcIntro(a, _term(ts))
    if tok == "wn":
        ts.next()
        u = ts.unr_ident()
        ts.expect(".")
        return WhyIntro(u, _term(ts))
    if tok == "wncase":
        ts.next()
        s = _term(ts)
        ts.expect("with")
        a = ts.ident()
        ts.expect(".")
        return WhyElim(_term(ts), a, s)
    if tok == "\\":
        ts.next()
        a = ts.ident()
        ts.expect(".")
        return Lambda(a, _term(ts))
    return _contra(ts)


def _contra(ts: _Tokens) -> Term:
    t = _app(ts)
    while ts.peek() == "#":
        ts.next()
        if ts.peek() in _BINDERS:
            return Contradiction(t, _term(ts))
        t = Contradiction(t, _app(ts))
    return t


def _app(ts: _Tokens) -> Term:
    t = _postfix(ts)
    while ts.peek() in ("@", "~@"):
        op = ts.next()
        if ts.peek() in _BINDERS:
            s = _term(ts)
            return App(t, s) if op == "@" else ContraApp(t, s)
        s = _postfix(ts)
        t = App(t, s) if op == "@" else ContraApp(t, s)
    return t


def _postfix(ts: _Tokens) -> Term:
    t = _atom(ts)
    while ts.peek() == "[":
        ts.next()
        if ts.peek() == "(":
            ts.next()
            a = ts.ident()
            ts.expect(",")
            b = ts.ident()
            ts.expect(")")
            ts.expect(":=")
            t = TensorElim(t, a, b, _term(ts))
        elif ts.peek() == "!":
            ts.next()
            u = ts.unr_ident()
            ts.expect(":=")
            t = OfcElim(t, u, _term(ts))
        elif ts.peek() == "*":
            ts.next()
            ts.expect(":=")
            t = OneElim(t, _term(ts))
        else:
            raise ts.error("expected a pattern '(a, b)', '!$u' or '*'")
        ts.expect("]")
    return t


def _atom(ts: _Tokens) -> Term:
    tok = ts.peek()
    if tok == "*":
        ts.next()
        return STAR
    if tok == "$":
        return UnrVar(ts.unr_ident())
    if tok == "(":
        ts.next()
        t = _term(ts)
        if ts.peek() == ",":
            ts.next()
            s = _term(ts)
            ts.expect(")")
            return Pair(t, s)
        ts.expect(")")
        return t
    return LinVar(ts.ident())


def parse_term(text: str) -> Term:
    ts = _Tokens(text)
    t = _term(ts)
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r} after term")
    return t


# --------------------------------------------------------------------------- formulas


def _imp(ts: _Tokens, mode: str) -> Formula:
    a = _parf(ts, mode)
    if ts.peek() == "-o":
        ts.next()
        b = _imp(ts, mode)
        return LinImp(a, b) if mode == MLL else Par(negate(desugar(a)), b)
    return a


def _parf(ts: _Tokens, mode: str) -> Formula:
    a = _tens(ts, mode)
    while ts.peek() in ("par", "|"):
        ts.next()
        a = Par(a, _tens(ts, mode))
    return a


def _tens(ts: _Tokens, mode: str) -> Formula:
    a = _unary(ts, mode)
    while ts.peek() == "*":
        ts.next()
        a = Tensor(a, _unary(ts, mode))
    return a


def _unary(ts: _Tokens, mode: str) -> Formula:
    tok = ts.peek()
    if tok == "!":
        ts.next()
        return OfCourse(_unary(ts, mode))
    if tok == "?":
        ts.next()
        return WhyNot(_unary(ts, mode))
    if tok == "~":
        ts.next()
        return negate(_unary(ts, mode), mode)
    if tok == "1":
        ts.next()
        return ONE
    if tok == "bot":
        ts.next()
        return BOTTOM
    if tok == "(":
        ts.next()
        f = _imp(ts, mode)
        ts.expect(")")
        return f
    return Atom(ts.ident())


def parse_formula(text: str, mode: str = MELL) -> Formula:
    ts = _Tokens(text)
    f = _imp(ts, mode)
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r} after formula")
    return f


def parse_formula_list(text: str, mode: str = MELL) -> list[Formula]:
    """Comma separated formulas; the empty string is the empty list."""
    ts = _Tokens(text)
    out: list[Formula] = []
    if ts.peek() == "<eof>":
        return out
    out.append(_imp(ts, mode))
    while ts.peek() == ",":
        ts.next()
        out.append(_imp(ts, mode))
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r} in formula list")
    return out


# --------------------------------------------------------------------------- files


@dataclass
class Problem:
    """A parsed input file: mode, typing environments and a term."""

    mode: str
    linear: dict[str, Formula]
    unrestricted: dict[str, Formula]
    term: Term
    expected: Formula | None = None


def parse_problem(text: str, mode: str | None = None) -> Problem:
    """Parse ``mode``/``linear``/``unrestricted``/``type`` headers and a term.

    A ``mode`` header wins over the ``mode`` argument only when the argument is ``None``.
    """
    ts = _Tokens(text)
    declared: str | None = None
    decls: list[tuple[str, str, int, int]] = []
    expected_span: tuple[int, int] | None = None
    while ts.peek() in ("mode", "linear", "unrestricted", "type"):
        # "type" is only a header when followed by ":"
        if ts.peek() == "type" and ts.peek(1) != ":":
            break
        kw = ts.next()
        if kw == "mode":
            m = ts.ident().lower()
            if m not in (MLL, MELL):
                raise ts.error(f"unknown mode {m!r}")
            declared = m
            ts.expect(";")
            continue
        if kw == "type":
            ts.expect(":")
            start = ts.i
            while ts.peek() not in (";", "<eof>"):
                ts.next()
            expected_span = (start, ts.i)
            ts.expect(";")
            continue
        name = ts.unr_ident() if kw == "unrestricted" else ts.ident()
        ts.expect(":")
        start = ts.i
        while ts.peek() not in (";", "<eof>"):
            ts.next()
        decls.append((kw, name, start, ts.i))
        ts.expect(";")
    mode = mode or declared or MELL

    def formula_of(span: tuple[int, int]) -> Formula:
        sub = _Tokens.__new__(_Tokens)
        sub.text = ts.text
        sub.toks = ts.toks[span[0]:span[1]] + [("<eof>", ts.toks[span[1]][1])]
        sub.i = 0
        f = _imp(sub, mode)
        if sub.peek() != "<eof>":
            raise sub.error(f"unexpected {sub.peek()!r} in formula")
        return f

    lin: dict[str, Formula] = {}
    unr: dict[str, Formula] = {}
    for kw, name, s, e in decls:
        (unr if kw == "unrestricted" else lin)[name] = formula_of((s, e))
    expected = formula_of(expected_span) if expected_span else None
    t = _term(ts)
    if ts.peek() == ";":
        ts.next()
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r} after term")
    return Problem(mode, lin, unr, t, expected)


def show_problem(p: Problem) -> str:
    from mell.syntax import show, show_formula

    lines = [f"mode {p.mode};"]
    lines += [f"linear {n} : {show_formula(f)};" for n, f in p.linear.items()]
    lines += [f"unrestricted ${n} : {show_formula(f)};" for n, f in p.unrestricted.items()]
    if p.expected is not None:
        lines.append(f"type : {show_formula(p.expected)};")
    lines.append(show(p.term))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- classical sources

_CTOKEN = re.compile(r"\s*(?:(?P<comment>--[^\n]*)|(?P<calc>lambda-mu-v|lambda-mu|lbar-mu-mutilde|mu-dcll)\b|(?P<op>\\\\|=>|-o|[\\.()\[\]!<>|;:,])|(?P<id>[A-Za-z_][A-Za-z0-9_']*))")
_CKEYWORDS = {"mu", "bot", "calculus", "var", "uvar", "name", "covar", "type"}


class _CTokens(_Tokens):
    def __post_init__(self):
        pos = 0
        text = self.text
        while pos < len(text):
            m = _CTOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
            pos = m.end()
            if m.group("comment"):
                continue
            self.toks.append((m.group("calc") or m.group("op") or m.group("id"), m.start(m.lastgroup)))
        self.toks.append(("<eof>", len(text)))

    def ident(self) -> str:
        tok = self.peek()
        if not re.match(r"[A-Za-z_]", tok) or tok in _CKEYWORDS:
            raise ParseError(f"expected identifier, found {tok!r}", self.pos(), self.text)
        self.i += 1
        return tok


def _ctype(ts: _CTokens):
    from mell.classical import CBOT, Arrow, LinArrow, TAtom

    if ts.peek() == "(":
        ts.next()
        left = _ctype(ts)
        ts.expect(")")
    elif ts.peek() == "bot":
        ts.next()
        left = CBOT
    else:
        left = TAtom(ts.ident())
    if ts.peek() == "=>":
        ts.next()
        return Arrow(left, _ctype(ts))
    if ts.peek() == "-o":
        ts.next()
        return LinArrow(left, _ctype(ts))
    return left


def parse_ctype(text: str):
    """``bot``, atoms, ``A => B`` and ``A -o B`` (both right associative)."""
    ts = _CTokens(text)
    a = _ctype(ts)
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r} in type")
    return a


def _mu(ts: _CTokens, unr: frozenset[str]):
    from mell.classical import ILam, Lam, Mu, Name

    tok = ts.peek()
    if tok in ("\\", "\\\\"):
        ts.next()
        x = ts.ident()
        ts.expect(".")
        if tok == "\\\\":
            return ILam(x, _mu(ts, unr | {x}))
        return Lam(x, _mu(ts, unr - {x}))
    if tok == "mu":
        ts.next()
        a = ts.ident()
        ts.expect(".")
        return Mu(a, _mu(ts, unr))
    if tok == "[":
        ts.next()
        a = ts.ident()
        ts.expect("]")
        return Name(a, _mu(ts, unr))
    return _mu_app(ts, unr)


def _mu_app(ts: _CTokens, unr):
    from mell.classical import App, IApp

    t = _mu_atom(ts, unr)
    while True:
        tok = ts.peek()
        if tok == "!":
            ts.next()
            t = IApp(t, _mu_atom(ts, unr))
        elif tok in ("\\", "\\\\", "mu", "["):
            # a trailing binder extends to the right
            return App(t, _mu(ts, unr))
        elif tok == "(" or (re.match(r"[A-Za-z_]", tok) and tok not in _CKEYWORDS):
            t = App(t, _mu_atom(ts, unr))
        else:
            return t


def _mu_atom(ts: _CTokens, unr):
    from mell.classical import UVar, Var

    if ts.peek() == "(":
        ts.next()
        t = _mu(ts, unr)
        ts.expect(")")
        return t
    x = ts.ident()
    return UVar(x) if x in unr else Var(x)


def _ch_term(ts: _CTokens):
    from mell.classical import CLam, CMu, CVar

    tok = ts.peek()
    if tok == "mu":
        ts.next()
        a = ts.ident()
        ts.expect(".")
        return CMu(a, _ch_command(ts))
    if tok == "\\":
        ts.next()
        x = ts.ident()
        ts.expect(".")
        return CLam(x, _ch_term(ts))
    if tok == "(":
        ts.next()
        v = _ch_term(ts)
        ts.expect(")")
        return v
    return CVar(ts.ident())


def _ch_coterm(ts: _CTokens):
    from mell.classical import CoApp, CoVar

    if ts.peek() == "(" or ts.peek() in ("mu", "\\") or ts.peek(1) == ".":
        v = _ch_term(ts)
        ts.expect(".")
        return CoApp(v, _ch_coterm(ts))
    return CoVar(ts.ident())


def _ch_command(ts: _CTokens):
    from mell.classical import Cmd

    ts.expect("<")
    v = _ch_term(ts)
    ts.expect("|")
    e = _ch_coterm(ts)
    ts.expect(">")
    return Cmd(v, e)


@dataclass
class ClassicalSource:
    """A classical source: which calculus, declared types and the expression."""

    calculus: str
    term: object
    gamma: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)


def parse_classical(text: str, calculus: str | None = None) -> ClassicalSource:
    """Parse a λμ, λμ_V, λ̄μμ̃ or μDCLL source.

    Optional headers: ``calculus NAME;``, ``var x : A;`` (term or linear
    variable), ``uvar u : A;`` (μDCLL unrestricted variable), ``name a : A;``
    and ``covar a : A;``.  Identifiers bound by ``\\\\`` or declared with
    ``uvar`` are unrestricted.
    """
    from mell.classical import LAMBDA_MU, LAMBDA_MU_V, LBAR_MU_MUTILDE, MU_DCLL

    ts = _CTokens(text)
    gamma, delta, sigma = {}, {}, {}
    declared = None
    while ts.peek() in ("calculus", "var", "uvar", "name", "covar"):
        kw = ts.next()
        if kw == "calculus":
            start = ts.i
            parts = []
            while ts.peek() not in (";", "<eof>"):
                parts.append(ts.next())
            declared = "".join(parts)
            if declared not in (LAMBDA_MU, LAMBDA_MU_V, LBAR_MU_MUTILDE, MU_DCLL):
                ts.i = start
                raise ts.error(f"unknown calculus {declared!r}")
            ts.expect(";")
            continue
        n = ts.ident()
        ts.expect(":")
        a = _ctype(ts)
        ts.expect(";")
        {"var": gamma, "uvar": delta, "name": sigma, "covar": sigma}[kw][n] = a
    calc = calculus or declared or (LBAR_MU_MUTILDE if ts.peek() == "<" else LAMBDA_MU)
    if calc == LBAR_MU_MUTILDE:
        t = _ch_command(ts) if ts.peek() == "<" else _ch_term(ts)
    else:
        t = _mu(ts, frozenset(delta))
    if ts.peek() == ";":
        ts.next()
    if ts.peek() != "<eof>":
        raise ts.error(f"unexpected {ts.peek()!r}")
    return ClassicalSource(calc, t, gamma, delta, sigma)
