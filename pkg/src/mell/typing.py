"""Type checking for λ_MLL and λ_MELL with derivation trees.

Terms carry no annotations, so types of bound variables and cut formulas are
found by first-order unification over formula metavariables.  Negation acts on
metavariables through a polarity flag, which keeps every stored formula in
negation normal form.  The linear context is never guessed: at each binary
rule it is the restriction of the ambient context to the free linear
variables of each premise.

:func:`verify_derivation` replays a finished derivation against the rule
schemas without any unification, so it doubles as an independent oracle for
:func:`check`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from mell.syntax import (
    BOTTOM, MELL, MLL, ONE, App, Atom, Bottom, ContraApp, Contradiction, Formula, LinImp,
    LinVar, Lambda, Meta, ModeViolation, NegAtom, OfCourse, OfcElim, OfcIntro, One, OneElim,
    Pair, Par, ParIntro, Path, Star, Tensor, TensorElim, Term, UnrVar, WhyElim, WhyIntro,
    WhyNot, check_mode, children, free_vars, linearity_error, negate, show, show_formula,
    show_path,
)


class TypingError(Exception):
    """Base class for checker failures."""


class UnboundVariable(TypingError):
    pass


class NonLinearUsage(TypingError):
    pass


class NonLocalLinearCapture(NonLinearUsage):
    pass


class TypeMismatch(TypingError):
    def __init__(self, expected: Formula, got: Formula, path: Path, term: Term | None = None):
        self.expected, self.got, self.path = expected, got, path
        where = f" in {show(term)}" if term is not None else ""
        super().__init__(
            f"type mismatch at {show_path(path)}{where}: expected {show_formula(expected)}, got {show_formula(got)}"
        )


class NameClash(TypingError):
    pass


class ContextOverlap(TypingError):
    pass


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

MELL_RULES = (
    "m-ax", "m-uax", "m-i⊗", "m-e⊗", "m-i⅋", "m-e⅋₁", "m-e⅋₂", "m-i!", "m-e!",
    "m-i?", "m-e?", "m-i⊥", "m-i1", "m-e1",
)
MLL_RULES = ("m-ax", "m-i⊗", "m-e⊗", "m-i⊸", "m-e⊸₁", "m-e⊸₂")


@dataclass(frozen=True)
class Derivation:
    """A node concluding ``unr ; lin ⊢ term : type`` by ``rule``."""

    rule: str
    term: Term
    unr: Mapping[str, Formula]
    lin: Mapping[str, Formula]
    type: Formula
    premises: tuple["Derivation", ...] = ()

    def judgement(self) -> str:
        d = ", ".join(f"${u}:{show_formula(f)}" for u, f in sorted(self.unr.items()))
        g = ", ".join(f"{a}:{show_formula(f)}" for a, f in sorted(self.lin.items()))
        return f"{d} ; {g} ⊢ {show(self.term)} : {show_formula(self.type)}"

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def render(self, indent: int = 0) -> str:
        lines = [" " * indent + f"{self.rule}  {self.judgement()}"]
        lines += [p.render(indent + 2) for p in self.premises]
        return "\n".join(lines)


def _rule_name(t: Term, mode: str) -> str:
    match t:
        case LinVar():
            return "m-ax"
        case UnrVar():
            return "m-uax"
        case Pair():
            return "m-i⊗"
        case TensorElim():
            return "m-e⊗"
        case ParIntro():
            return "m-i⅋"
        case Lambda():
            return "m-i⊸"
        case App():
            return "m-e⊸₁" if mode == MLL else "m-e⅋₁"
        case ContraApp():
            return "m-e⊸₂" if mode == MLL else "m-e⅋₂"
        case OfcIntro():
            return "m-i!"
        case OfcElim():
            return "m-e!"
        case WhyIntro():
            return "m-i?"
        case WhyElim():
            return "m-e?"
        case Contradiction():
            return "m-i⊥"
        case Star():
            return "m-i1"
        case OneElim():
            return "m-e1"
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Unification
# ---------------------------------------------------------------------------


@dataclass
class Unifier:
    mode: str = MELL
    subst: dict[int, Formula] = field(default_factory=dict)
    counter: itertools.count = field(default_factory=lambda: itertools.count(0))

    def new(self) -> Meta:
        return Meta(next(self.counter))

    def neg(self, f: Formula) -> Formula:
        return negate(f, self.mode)

    def head(self, f: Formula) -> Formula:
        while isinstance(f, Meta) and f.ident in self.subst:
            g = self.subst[f.ident]
            f = self.neg(g) if f.neg else g
        return f

    def resolve(self, f: Formula) -> Formula:
        f = self.head(f)
        match f:
            case Tensor(a, b):
                return Tensor(self.resolve(a), self.resolve(b))
            case Par(a, b):
                return Par(self.resolve(a), self.resolve(b))
            case LinImp(a, b):
                return LinImp(self.resolve(a), self.resolve(b))
            case OfCourse(a):
                return OfCourse(self.resolve(a))
            case WhyNot(a):
                return WhyNot(self.resolve(a))
        return f

    def occurs(self, i: int, f: Formula) -> bool:
        f = self.head(f)
        match f:
            case Meta(j, _):
                return i == j
            case Tensor(a, b) | Par(a, b) | LinImp(a, b):
                return self.occurs(i, a) or self.occurs(i, b)
            case OfCourse(a) | WhyNot(a):
                return self.occurs(i, a)
        return False

    def unify(self, f: Formula, g: Formula) -> bool:
        f, g = self.head(f), self.head(g)
        if isinstance(f, Meta):
            if isinstance(g, Meta) and g.ident == f.ident:
                return g.neg == f.neg
            if self.occurs(f.ident, g):
                return False
            self.subst[f.ident] = self.neg(g) if f.neg else g
            return True
        if isinstance(g, Meta):
            return self.unify(g, f)
        if type(f) is not type(g):
            return False
        match f:
            case Atom(n) | NegAtom(n):
                return n == g.name
            case One() | Bottom():
                return True
            case Tensor(a, b) | Par(a, b) | LinImp(a, b):
                return self.unify(a, g.left) and self.unify(b, g.right)
            case OfCourse(a) | WhyNot(a):
                return self.unify(a, g.body)
        return False

    def metas(self, f: Formula, out: set[int]) -> set[int]:
        f = self.head(f)
        match f:
            case Meta(i, _):
                out.add(i)
            case Tensor(a, b) | Par(a, b) | LinImp(a, b):
                self.metas(a, out)
                self.metas(b, out)
            case OfCourse(a) | WhyNot(a):
                self.metas(a, out)
        return out


def ground_name(i: int) -> str:
    """Atom name used for a metavariable left unconstrained by a derivation."""
    return f"X'{i}"


# ---------------------------------------------------------------------------
# Constraint generation
# ---------------------------------------------------------------------------


class _Gen:
    def __init__(self, mode: str, unr: Mapping[str, Formula], lin: Mapping[str, Formula], open_vars: bool):
        self.u = Unifier(mode)
        self.mode = mode
        self.free_unr = dict(unr)
        self.free_lin = dict(lin)
        self.open_vars = open_vars
        self.types: dict[Path, Formula] = {}
        # per-node environment of bound variables introduced at that node
        self.binds: dict[Path, tuple[dict[str, Formula], dict[str, Formula]]] = {}

    def expect(self, got: Formula, want: Formula, path: Path, t: Term) -> None:
        if not self.u.unify(got, want):
            raise TypeMismatch(self.u.resolve(want), self.u.resolve(got), path, t)

    def var_type(self, env: dict, free: dict, name: str, kind: str, path: Path) -> Formula:
        if name in env:
            return env[name]
        if name in free:
            return free[name]
        if self.open_vars:
            free[name] = self.u.new()
            return free[name]
        raise UnboundVariable(f"{kind} variable {'$' if kind == 'unrestricted' else ''}{name} at {show_path(path)} has no declared type")

    def gen(self, t: Term, lin: dict, unr: dict, path: Path) -> Formula:
        ty = self._gen(t, lin, unr, path)
        self.types[path] = ty
        return ty

    def _gen(self, t: Term, lin: dict, unr: dict, path: Path) -> Formula:
        u = self.u
        mll = self.mode == MLL
        match t:
            case LinVar(n):
                return self.var_type(lin, self.free_lin, n, "linear", path)
            case UnrVar(n):
                return self.var_type(unr, self.free_unr, n, "unrestricted", path)
            case Star():
                return ONE
            case Pair(l, r):
                return Tensor(self.gen(l, lin, unr, path + (0,)), self.gen(r, lin, unr, path + (1,)))
            case TensorElim(body, a, b, arg):
                s = self.gen(arg, lin, unr, path + (1,))
                x, y = u.new(), u.new()
                self.expect(s, Tensor(x, y), path + (1,), arg)
                self.binds[path] = ({a: x, b: y}, {})
                return self.gen(body, {**lin, a: x, b: y}, unr, path + (0,))
            case ParIntro(a, b, body):
                x, y = u.new(), u.new()
                self.binds[path] = ({a: x, b: y}, {})
                bt = self.gen(body, {**lin, a: x, b: y}, unr, path + (0,))
                self.expect(bt, BOTTOM, path + (0,), body)
                return Par(u.neg(x), u.neg(y))
            case Lambda(a, body):
                x = u.new()
                self.binds[path] = ({a: x}, {})
                return LinImp(x, self.gen(body, {**lin, a: x}, unr, path + (0,)))
            case App(fn, arg):
                f = self.gen(fn, lin, unr, path + (0,))
                x, y = u.new(), u.new()
                self.expect(f, LinImp(x, y) if mll else Par(x, y), path + (0,), fn)
                s = self.gen(arg, lin, unr, path + (1,))
                self.expect(s, x if mll else u.neg(x), path + (1,), arg)
                return y
            case ContraApp(fn, arg):
                f = self.gen(fn, lin, unr, path + (0,))
                x, y = u.new(), u.new()
                self.expect(f, LinImp(x, y) if mll else Par(x, y), path + (0,), fn)
                s = self.gen(arg, lin, unr, path + (1,))
                self.expect(s, u.neg(y), path + (1,), arg)
                return u.neg(x) if mll else x
            case OfcIntro(a, body):
                x = u.new()
                self.binds[path] = ({a: x}, {})
                bt = self.gen(body, {**lin, a: x}, unr, path + (0,))
                self.expect(bt, BOTTOM, path + (0,), body)
                return OfCourse(u.neg(x))
            case OfcElim(body, v, arg):
                s = self.gen(arg, lin, unr, path + (1,))
                x = u.new()
                self.expect(s, OfCourse(x), path + (1,), arg)
                self.binds[path] = ({}, {v: x})
                return self.gen(body, lin, {**unr, v: x}, path + (0,))
            case WhyIntro(v, body):
                x = u.new()
                self.binds[path] = ({}, {v: x})
                bt = self.gen(body, lin, {**unr, v: x}, path + (0,))
                self.expect(bt, BOTTOM, path + (0,), body)
                return WhyNot(u.neg(x))
            case WhyElim(body, a, arg):
                s = self.gen(arg, lin, unr, path + (1,))
                x = u.new()
                self.expect(s, WhyNot(x), path + (1,), arg)
                self.binds[path] = ({a: x}, {})
                bt = self.gen(body, {**lin, a: x}, unr, path + (0,))
                self.expect(bt, BOTTOM, path + (0,), body)
                return BOTTOM
            case Contradiction(l, r):
                lt = self.gen(l, lin, unr, path + (0,))
                rt = self.gen(r, lin, unr, path + (1,))
                self.expect(rt, u.neg(lt), path + (1,), r)
                return BOTTOM
            case OneElim(body, arg):
                s = self.gen(arg, lin, unr, path + (1,))
                self.expect(s, ONE, path + (1,), arg)
                return self.gen(body, lin, unr, path + (0,))
        raise TypeError(f"not a term: {t!r}")


@dataclass
class Typing:
    """Result of a successful check: conclusion, derivation and per-position types."""

    type: Formula
    lin: dict[str, Formula]
    unr: dict[str, Formula]
    derivation: Derivation | None
    types: dict[Path, Formula]
    mode: str


def _prepare(t: Term, mode: str) -> None:
    check_mode(t, mode)
    err = linearity_error(t, mode)
    if err is not None:
        cls = NonLocalLinearCapture if "captures" in err else NonLinearUsage
        raise cls(err)


def typecheck(
    t: Term,
    unr: Mapping[str, Formula] | None = None,
    lin: Mapping[str, Formula] | None = None,
    mode: str = MELL,
    expected: Formula | None = None,
    open_vars: bool = False,
    ground: bool = True,
    derivation: bool = True,
) -> Typing:
    """Check ``unr ; lin ⊢ t : expected`` (or infer the type when ``expected`` is None).

    With ``open_vars`` the free variables without declared types receive
    their principal types; otherwise they raise :class:`UnboundVariable`.
    Metavariables left unconstrained are replaced by fresh atoms ``X'n``
    unless ``ground`` is false.
    """
    unr = dict(unr or {})
    lin = dict(lin or {})
    _prepare(t, mode)
    fl, _ = free_vars(t)
    extra = sorted(set(lin) - fl)
    if extra:
        raise NonLinearUsage(f"linear hypotheses {', '.join(extra)} are not used by the term")
    g = _Gen(mode, unr, lin, open_vars)
    ty = g.gen(t, {}, {}, ())
    if expected is not None:
        g.expect(ty, expected, (), t)
    u = g.u
    res = u.resolve
    if ground:
        leftover: set[int] = set()
        for f in list(g.types.values()) + list(g.free_lin.values()) + list(g.free_unr.values()):
            u.metas(f, leftover)
        for env in g.binds.values():
            for f in list(env[0].values()) + list(env[1].values()):
                u.metas(f, leftover)
        for i in sorted(leftover):
            u.subst[i] = Atom(ground_name(i))
    types = {p: res(f) for p, f in g.types.items()}
    free_lin = {n: res(f) for n, f in g.free_lin.items() if n in fl}
    free_unr = {n: res(f) for n, f in g.free_unr.items()}
    binds = {p: ({n: res(f) for n, f in l.items()}, {n: res(f) for n, f in v.items()}) for p, (l, v) in g.binds.items()}
    d = _build(t, (), free_lin, free_unr, types, binds, mode) if derivation else None
    return Typing(types[()], free_lin, free_unr, d, types, mode)


def _build(t, path, lin_env, unr_env, types, binds, mode) -> Derivation:
    fl, _ = free_vars(t)
    node_lin = {n: lin_env[n] for n in fl}
    prem = []
    for i, c in enumerate(children(t)):
        bl, bu = binds.get(path, ({}, {}))
        take = _bound_by_child(t, i)
        cl = {**lin_env, **{n: f for n, f in bl.items() if n in take}}
        cu = {**unr_env, **{n: f for n, f in bu.items() if n in take}}
        prem.append(_build(c, path + (i,), cl, cu, types, binds, mode))
    return Derivation(_rule_name(t, mode), t, dict(unr_env), node_lin, types[path], tuple(prem))


def _bound_by_child(t: Term, i: int) -> set[str]:
    from mell.syntax import binders_at

    l, u = binders_at(t, i)
    return set(l) | set(u)


def check(
    t: Term,
    unr: Mapping[str, Formula] | None = None,
    lin: Mapping[str, Formula] | None = None,
    mode: str = MELL,
    expected: Formula | None = None,
) -> tuple[Formula, Derivation]:
    """Checking entry point: every free variable needs a declared type."""
    r = typecheck(t, unr, lin, mode, expected)
    return r.type, r.derivation


def infer(
    unr: Mapping[str, Formula],
    t: Term,
    mode: str = MELL,
    lin: Mapping[str, Formula] | None = None,
) -> tuple[Formula, dict[str, Formula], Derivation]:
    """Type of ``t`` and the exact linear context it consumes.

    Free linear variables missing from ``lin`` get their principal type,
    with unconstrained parts named by fresh atoms.
    """
    r = typecheck(t, unr, lin, mode, open_vars=True)
    return r.type, r.lin, r.derivation


def typable(t: Term, unr=None, lin=None, mode: str = MELL, expected=None, open_vars: bool = False) -> bool:
    try:
        typecheck(t, unr, lin, mode, expected, open_vars)
        return True
    except (TypingError, ModeViolation):
        return False


# ---------------------------------------------------------------------------
# Independent replay of a derivation
# ---------------------------------------------------------------------------


class InvalidDerivation(TypingError):
    pass


def verify_derivation(d: Derivation, mode: str = MELL) -> None:
    """Check every node against its rule schema; raise :class:`InvalidDerivation`."""
    _verify(d, mode, ())


def derivation_ok(d: Derivation, mode: str = MELL) -> bool:
    try:
        verify_derivation(d, mode)
        return True
    except InvalidDerivation:
        return False


def _verify(d: Derivation, mode: str, path: Path) -> None:
    def fail(msg: str):
        raise InvalidDerivation(f"{d.rule} at {show_path(path)}: {msg}")

    t = d.term
    neg = lambda f: negate(f, mode)  # noqa: E731
    if d.rule != _rule_name(t, mode):
        fail(f"rule does not match term {show(t)}")
    kids = children(t)
    if len(kids) != len(d.premises):
        fail("wrong number of premises")
    for i, (k, p) in enumerate(zip(kids, d.premises)):
        if p.term != k:
            fail(f"premise {i} concludes about the wrong subterm")
        _verify(p, mode, path + (i,))
    P = d.premises

    def same_unr(p: Derivation, extra: dict[str, Formula] | None = None):
        if dict(p.unr) != {**d.unr, **(extra or {})}:
            fail("unrestricted context not propagated")

    def split(*envs: Mapping[str, Formula], bound: dict[str, Formula] | None = None):
        merged: dict[str, Formula] = {}
        for e in envs:
            for n, f in e.items():
                if n in merged:
                    fail(f"linear variable {n} used twice")
                merged[n] = f
        bound = bound or {}
        for n, f in bound.items():
            if merged.pop(n, None) != f:
                fail(f"bound variable {n} missing or mistyped in premise")
        if merged != dict(d.lin):
            fail("linear contexts do not split the conclusion")

    def eq(a: Formula, b: Formula, what: str):
        if a != b:
            fail(f"{what}: {show_formula(a)} vs {show_formula(b)}")

    match t:
        case LinVar(n):
            if dict(d.lin) != {n: d.type}:
                fail("axiom context")
        case UnrVar(n):
            if d.lin or d.unr.get(n) != d.type:
                fail("unrestricted axiom")
        case Star():
            if d.lin:
                fail("unit with nonempty linear context")
            eq(d.type, ONE, "unit")
        case Pair():
            same_unr(P[0]); same_unr(P[1])
            split(P[0].lin, P[1].lin)
            eq(d.type, Tensor(P[0].type, P[1].type), "pair")
        case TensorElim(_, a, b, _):
            same_unr(P[1])
            if not isinstance(P[1].type, Tensor):
                fail("argument is not a tensor")
            same_unr(P[0])
            split(P[0].lin, P[1].lin, bound={a: P[1].type.left, b: P[1].type.right})
            eq(d.type, P[0].type, "tensor elimination")
        case ParIntro(a, b, _):
            same_unr(P[0])
            eq(P[0].type, BOTTOM, "par body")
            if a not in P[0].lin or b not in P[0].lin:
                fail("par binders unused")
            split(P[0].lin, bound={a: P[0].lin[a], b: P[0].lin[b]})
            eq(d.type, Par(neg(P[0].lin[a]), neg(P[0].lin[b])), "par intro")
        case Lambda(a, _):
            same_unr(P[0])
            if a not in P[0].lin:
                fail("lambda binder unused")
            split(P[0].lin, bound={a: P[0].lin[a]})
            eq(d.type, LinImp(P[0].lin[a], P[0].type), "lambda")
        case App() | ContraApp():
            same_unr(P[0]); same_unr(P[1])
            split(P[0].lin, P[1].lin)
            f = P[0].type
            if mode == MLL:
                if not isinstance(f, LinImp):
                    fail("function is not an implication")
                if isinstance(t, App):
                    eq(P[1].type, f.left, "argument"); eq(d.type, f.right, "result")
                else:
                    eq(P[1].type, neg(f.right), "argument"); eq(d.type, neg(f.left), "result")
            else:
                if not isinstance(f, Par):
                    fail("function is not a par")
                if isinstance(t, App):
                    eq(P[1].type, neg(f.left), "argument"); eq(d.type, f.right, "result")
                else:
                    eq(P[1].type, neg(f.right), "argument"); eq(d.type, f.left, "result")
        case OfcIntro(a, _):
            same_unr(P[0])
            eq(P[0].type, BOTTOM, "bang body")
            if set(P[0].lin) != {a}:
                fail("bang body must use exactly its bound variable")
            split(P[0].lin, bound={a: P[0].lin[a]})
            eq(d.type, OfCourse(neg(P[0].lin[a])), "bang")
        case OfcElim(_, v, _):
            same_unr(P[1])
            if not isinstance(P[1].type, OfCourse):
                fail("argument is not a !")
            same_unr(P[0], {v: P[1].type.body})
            split(P[0].lin, P[1].lin)
            eq(d.type, P[0].type, "bang elimination")
        case WhyIntro(v, _):
            if v not in P[0].unr:
                fail("bound unrestricted variable missing")
            same_unr(P[0], {v: P[0].unr[v]})
            eq(P[0].type, BOTTOM, "why-not body")
            split(P[0].lin)
            eq(d.type, WhyNot(neg(P[0].unr[v])), "why-not")
        case WhyElim(_, a, _):
            same_unr(P[0]); same_unr(P[1])
            if not isinstance(P[1].type, WhyNot):
                fail("argument is not a ?")
            if set(P[0].lin) != {a}:
                fail("why-not case body must use exactly its bound variable")
            eq(P[0].lin[a], P[1].type.body, "case binder")
            eq(P[0].type, BOTTOM, "case body")
            split(P[1].lin)
            eq(d.type, BOTTOM, "case")
        case Contradiction():
            same_unr(P[0]); same_unr(P[1])
            split(P[0].lin, P[1].lin)
            eq(P[1].type, neg(P[0].type), "contradiction")
            eq(d.type, BOTTOM, "contradiction")
        case OneElim():
            same_unr(P[0]); same_unr(P[1])
            split(P[0].lin, P[1].lin)
            eq(P[1].type, ONE, "unit elimination")
            eq(d.type, P[0].type, "unit elimination")


# ---------------------------------------------------------------------------
# Admissible structural operations
# ---------------------------------------------------------------------------


def _recheck(t: Term, unr, lin, mode: str, expected: Formula) -> Derivation:
    return check(t, unr, lin, mode, expected)[1]


def weaken(d: Derivation, u: str, b: Formula, mode: str = MELL) -> Derivation:
    """From ``Δ;Γ ⊢ t:A`` derive ``Δ,u:B;Γ ⊢ t:A``."""
    if u in d.unr:
        raise NameClash(f"${u} already declared")
    return _recheck(d.term, {**d.unr, u: b}, d.lin, mode, d.type)


def contract(d: Derivation, u: str, v: str, mode: str = MELL) -> tuple[Term, Derivation]:
    """From ``Δ,u:B,v:B;Γ ⊢ t:A`` derive ``Δ,u:B;Γ ⊢ t{v:=u}:A``."""
    from mell.substitution import subst_unrestricted

    if u not in d.unr or v not in d.unr:
        raise UnboundVariable(f"both ${u} and ${v} must be declared")
    if d.unr[u] != d.unr[v]:
        raise TypeMismatch(d.unr[u], d.unr[v], ())
    t = subst_unrestricted(d.term, v, UnrVar(u))
    unr = {n: f for n, f in d.unr.items() if n != v}
    return t, _recheck(t, unr, d.lin, mode, d.type)


def to_bang_linear(d: Derivation, u: str, a: str, mode: str = MELL) -> Derivation:
    """From ``Δ,u:A;Γ ⊢ t:B`` derive ``Δ;a:!A,Γ ⊢ t[!u:=a] : B``."""
    if u not in d.unr:
        raise UnboundVariable(f"${u} is not declared")
    if a in d.lin:
        raise NameClash(f"{a} already used")
    unr = {n: f for n, f in d.unr.items() if n != u}
    return _recheck(OfcElim(d.term, u, LinVar(a)), unr, {**d.lin, a: OfCourse(d.unr[u])}, mode, d.type)


def from_bang_linear(d: Derivation, a: str, u: str, mode: str = MELL) -> Derivation:
    """From ``Δ;a:!A,Γ ⊢ t:B`` derive ``Δ,u:A;Γ ⊢ t{a := bang b.(u # b)} : B``."""
    from mell.substitution import subst_linear
    from mell.syntax import bang

    fa = d.lin.get(a)
    if not isinstance(fa, OfCourse):
        raise TypeMismatch(OfCourse(Atom("_")), fa if fa is not None else BOTTOM, ())
    if u in d.unr:
        raise NameClash(f"${u} already declared")
    t = subst_linear(d.term, a, bang(UnrVar(u)))
    lin = {n: f for n, f in d.lin.items() if n != a}
    return _recheck(t, {**d.unr, u: fa.body}, lin, mode, d.type)


def admissible_sub(d1: Derivation, a: str, d2: Derivation, mode: str = MELL) -> Derivation:
    """From ``Δ;Γ,a:A ⊢ t:B`` and ``Δ;Γ' ⊢ s:A`` derive ``Δ;Γ,Γ' ⊢ t{a:=s}:B``."""
    from mell.substitution import subst_linear

    if a not in d1.lin:
        raise UnboundVariable(f"{a} is not a linear hypothesis")
    rest = {n: f for n, f in d1.lin.items() if n != a}
    overlap = set(rest) & set(d2.lin)
    if overlap:
        raise ContextOverlap(f"linear contexts share {', '.join(sorted(overlap))}")
    if d1.lin[a] != d2.type:
        raise TypeMismatch(d1.lin[a], d2.type, ())
    t = subst_linear(d1.term, a, d2.term)
    return _recheck(t, {**d2.unr, **d1.unr}, {**rest, **d2.lin}, mode, d1.type)


def admissible_usub(d1: Derivation, u: str, d2: Derivation, mode: str = MELL) -> Derivation:
    """From ``Δ,u:A;Γ ⊢ t:B`` and ``Δ;· ⊢ s:A`` derive ``Δ;Γ ⊢ t{u:=s}:B``."""
    from mell.substitution import subst_unrestricted

    if d2.lin:
        raise ContextOverlap("substituted term must have an empty linear context")
    if d1.unr.get(u) != d2.type:
        raise TypeMismatch(d1.unr.get(u, BOTTOM), d2.type, ())
    t = subst_unrestricted(d1.term, u, d2.term)
    unr = {n: f for n, f in d1.unr.items() if n != u}
    return _recheck(t, unr, d1.lin, mode, d1.type)
