"""Formulas, terms, binding structure and contexts for λ_MLL and λ_MELL.

Both calculi share one abstract syntax.  A ``mode`` flag (``"mll"`` or
``"mell"``) says which constructors are legal; mixing them is reported by
:func:`check_mode` instead of being silently coerced.

Terms use named variables.  Linear variables (:class:`LinVar`) and
unrestricted variables (:class:`UnrVar`) live in disjoint namespaces, so the
same string may name one of each without confusion.  Alpha-equivalence is
decided by renaming binders in order of appearance (:func:`canonical_key`).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Union

MLL = "mll"
MELL = "mell"
MODES = (MLL, MELL)


class ModeViolation(ValueError):
    """A constructor or connective was used outside the calculus that allows it."""


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return show_formula(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Par(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class One(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class OfCourse(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class WhyNot(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class LinImp(Formula):
    """A ⊸ B.  Primitive in MLL; in MELL it is written ¬A ⅋ B instead."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Meta(Formula):
    """Type metavariable used during inference; ``neg`` marks its dual."""

    ident: int
    neg: bool = False


ONE = One()
BOTTOM = Bottom()


def negate(f: Formula, mode: str = MELL) -> Formula:
    """Linear negation, computed structurally.

    In MLL mode ¬(A⊗B) = A⊸¬B and ¬(A⊸B) = A⊗¬B; in MELL mode the De Morgan
    dualities for ⊗/⅋, !/? and 1/⊥ apply.  A ``LinImp`` met in MELL mode is
    read as ¬A⅋B.
    """
    match f:
        case Atom(n):
            return NegAtom(n)
        case NegAtom(n):
            return Atom(n)
        case Tensor(a, b):
            if mode == MLL:
                return LinImp(a, negate(b, mode))
            return Par(negate(a, mode), negate(b, mode))
        case Par(a, b):
            return Tensor(negate(a, mode), negate(b, mode))
        case LinImp(a, b):
            return Tensor(a, negate(b, mode))
        case One():
            return BOTTOM
        case Bottom():
            return ONE
        case OfCourse(a):
            return WhyNot(negate(a, mode))
        case WhyNot(a):
            return OfCourse(negate(a, mode))
        case Meta(i, n):
            return Meta(i, not n)
    raise TypeError(f"not a formula: {f!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite every A ⊸ B into ¬A ⅋ B (MELL reading)."""
    match f:
        case LinImp(a, b):
            return Par(negate(desugar(a)), desugar(b))
        case Tensor(a, b):
            return Tensor(desugar(a), desugar(b))
        case Par(a, b):
            return Par(desugar(a), desugar(b))
        case OfCourse(a):
            return OfCourse(desugar(a))
        case WhyNot(a):
            return WhyNot(desugar(a))
    return f


def formula_size(f: Formula) -> int:
    match f:
        case Tensor(a, b) | Par(a, b) | LinImp(a, b):
            return 1 + formula_size(a) + formula_size(b)
        case OfCourse(a) | WhyNot(a):
            return 1 + formula_size(a)
    return 1


def formula_depth(f: Formula) -> int:
    match f:
        case Tensor(a, b) | Par(a, b) | LinImp(a, b):
            return 1 + max(formula_depth(a), formula_depth(b))
        case OfCourse(a) | WhyNot(a):
            return 1 + formula_depth(a)
    return 0


def formula_mode_ok(f: Formula, mode: str) -> bool:
    match f:
        case Atom() | NegAtom() | Meta():
            return True
        case Tensor(a, b):
            return formula_mode_ok(a, mode) and formula_mode_ok(b, mode)
        case LinImp(a, b):
            return mode == MLL and formula_mode_ok(a, mode) and formula_mode_ok(b, mode)
        case Par(a, b):
            return mode == MELL and formula_mode_ok(a, mode) and formula_mode_ok(b, mode)
        case OfCourse(a) | WhyNot(a):
            return mode == MELL and formula_mode_ok(a, mode)
        case One() | Bottom():
            return mode == MELL
    return False


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def _fprec(f: Formula) -> int:
    match f:
        case LinImp():
            return 0
        case Par():
            return 1
        case Tensor():
            return 2
    return 3


def show_formula(f: Formula) -> str:
    """Concrete syntax: ``1 bot !A ?A A * B A par B A -o B ~a``."""
    match f:
        case Atom(n):
            return n
        case NegAtom(n):
            return "~" + n
        case One():
            return "1"
        case Bottom():
            return "bot"
        case Meta(i, n):
            return ("~" if n else "") + f"'X{i}"
        case OfCourse(a):
            return "!" + _fwrap(a, 3)
        case WhyNot(a):
            return "?" + _fwrap(a, 3)
        case Tensor(a, b):
            return f"{_fwrap(a, 2)} * {_fwrap(b, 3)}"
        case Par(a, b):
            return f"{_fwrap(a, 1)} par {_fwrap(b, 2)}"
        case LinImp(a, b):
            return f"{_fwrap(a, 1)} -o {_fwrap(b, 0)}"
    raise TypeError(f"not a formula: {f!r}")


def _fwrap(f: Formula, level: int) -> str:
    s = show_formula(f)
    return f"({s})" if _fprec(f) < level else s


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class LinVar(Term):
    name: str


@dataclass(frozen=True, slots=True)
class UnrVar(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class TensorElim(Term):
    """``body[(a,b) := arg]``: binds ``a`` and ``b`` in ``body``."""

    body: Term
    left_var: str
    right_var: str
    arg: Term


@dataclass(frozen=True, slots=True)
class ParIntro(Term):
    """``par a b. body``: binds ``a`` and ``b``."""

    left_var: str
    right_var: str
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class ContraApp(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class OfcIntro(Term):
    """``bang a. body``: binds the linear variable ``a``."""

    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class OfcElim(Term):
    """``body[!$u := arg]``: binds the unrestricted variable ``u`` in ``body``."""

    body: Term
    var: str
    arg: Term


@dataclass(frozen=True, slots=True)
class WhyIntro(Term):
    """``wn $u. body``: binds the unrestricted variable ``u``."""

    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class WhyElim(Term):
    """``wncase arg with a. body``: binds ``a`` in ``body``; ``arg`` has type ?A."""

    body: Term
    var: str
    arg: Term


@dataclass(frozen=True, slots=True)
class Contradiction(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Star(Term):
    pass


@dataclass(frozen=True, slots=True)
class OneElim(Term):
    """``body[* := arg]``."""

    body: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Lambda(Term):
    """``\\a. body`` (MLL only)."""

    var: str
    body: Term


STAR = Star()

Path = tuple[int, ...]

_MLL_ONLY = (Lambda,)
_MELL_ONLY = (ParIntro, OfcIntro, OfcElim, WhyIntro, WhyElim, Contradiction, Star, OneElim, UnrVar)

ELIMINATORS = (TensorElim, OfcElim, OneElim)


def children(t: Term) -> tuple[Term, ...]:
    """Immediate subterms, in path order (body before argument for eliminators)."""
    match t:
        case LinVar() | UnrVar() | Star():
            return ()
        case Pair(a, b) | App(a, b) | ContraApp(a, b) | Contradiction(a, b) | OneElim(a, b):
            return (a, b)
        case TensorElim(body, _, _, arg) | OfcElim(body, _, arg) | WhyElim(body, _, arg):
            return (body, arg)
        case ParIntro(_, _, body) | OfcIntro(_, body) | WhyIntro(_, body) | Lambda(_, body):
            return (body,)
    raise TypeError(f"not a term: {t!r}")


def with_children(t: Term, kids: tuple[Term, ...] | list[Term]) -> Term:
    match t:
        case Pair():
            return Pair(kids[0], kids[1])
        case App():
            return App(kids[0], kids[1])
        case ContraApp():
            return ContraApp(kids[0], kids[1])
        case Contradiction():
            return Contradiction(kids[0], kids[1])
        case OneElim():
            return OneElim(kids[0], kids[1])
        case TensorElim(_, a, b, _):
            return TensorElim(kids[0], a, b, kids[1])
        case OfcElim(_, u, _):
            return OfcElim(kids[0], u, kids[1])
        case WhyElim(_, a, _):
            return WhyElim(kids[0], a, kids[1])
        case ParIntro(a, b, _):
            return ParIntro(a, b, kids[0])
        case OfcIntro(a, _):
            return OfcIntro(a, kids[0])
        case WhyIntro(u, _):
            return WhyIntro(u, kids[0])
        case Lambda(a, _):
            return Lambda(a, kids[0])
    return t


def binders_at(t: Term, i: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(linear, unrestricted) names that ``t`` binds over its ``i``-th child."""
    match t:
        case TensorElim(_, a, b, _) if i == 0:
            return (a, b), ()
        case ParIntro(a, b, _):
            return (a, b), ()
        case OfcIntro(a, _) | Lambda(a, _):
            return (a,), ()
        case WhyElim(_, a, _) if i == 0:
            return (a,), ()
        case OfcElim(_, u, _) if i == 0:
            return (), (u,)
        case WhyIntro(u, _):
            return (), (u,)
    return (), ()


def size(t: Term) -> int:
    """Number of term constructors; variables count 0."""
    match t:
        case LinVar() | UnrVar():
            return 0
        case Star():
            return 1
    return 1 + sum(size(c) for c in children(t))


def subterm(t: Term, path: Path) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(t, kids)


def positions(t: Term, prefix: Path = ()) -> Iterator[tuple[Path, Term]]:
    """Pre-order walk yielding ``(path, subterm)``."""
    yield prefix, t
    for i, c in enumerate(children(t)):
        yield from positions(c, prefix + (i,))


def show_path(path: Path) -> str:
    return ".".join(map(str, path)) if path else "root"


# ---------------------------------------------------------------------------
# Free variables, linearity, mode
# ---------------------------------------------------------------------------


def free_vars(t: Term) -> tuple[frozenset[str], frozenset[str]]:
    """Free (linear, unrestricted) variable names of ``t``."""
    lin: set[str] = set()
    unr: set[str] = set()
    _fv(t, lin, unr, frozenset(), frozenset())
    return frozenset(lin), frozenset(unr)


def _fv(t, lin, unr, bl, bu):
    match t:
        case LinVar(n):
            if n not in bl:
                lin.add(n)
            return
        case UnrVar(n):
            if n not in bu:
                unr.add(n)
            return
        case Star():
            return
    for i, c in enumerate(children(t)):
        l, u = binders_at(t, i)
        _fv(c, lin, unr, bl | set(l) if l else bl, bu | set(u) if u else bu)


def free_linear(t: Term) -> frozenset[str]:
    return free_vars(t)[0]


def linear_occurrences(t: Term) -> dict[str, int]:
    """Count free occurrences of each linear variable."""
    out: dict[str, int] = {}
    _count(t, out, frozenset())
    return out


def _count(t, out, bound):
    match t:
        case LinVar(n):
            if n not in bound:
                out[n] = out.get(n, 0) + 1
            return
        case UnrVar() | Star():
            return
    for i, c in enumerate(children(t)):
        l, _ = binders_at(t, i)
        _count(c, out, bound | set(l) if l else bound)


def is_linear(t: Term, mode: str = MELL) -> bool:
    """Linearity conditions of the calculus.

    (1) free linear variables occur once; (2) each bound linear variable
    occurs once in its scope; and in MELL (3) ``bang a. t`` has no free linear
    variable other than ``a`` and (4) in ``wncase s with a. t`` the only free
    linear variable of ``t`` is ``a``.
    """
    return linearity_error(t, mode) is None


def linearity_error(t: Term, mode: str = MELL) -> str | None:
    """Explain the first linearity violation, or ``None`` if ``t`` is linear."""
    occ = linear_occurrences(t)
    for n, k in occ.items():
        if k != 1:
            return f"linear variable {n} occurs {k} times"
    return _lin_check(t, mode)


def _lin_check(t: Term, mode: str) -> str | None:
    for i, c in enumerate(children(t)):
        err = _lin_check(c, mode)
        if err:
            return err
    lin, _ = binders_at(t, 0)
    if lin:
        body = children(t)[0]
        occ = linear_occurrences(body)
        for a in lin:
            if occ.get(a, 0) != 1:
                return f"bound linear variable {a} occurs {occ.get(a, 0)} times in {show(t)}"
        if isinstance(t, (OfcIntro, WhyElim)) and mode == MELL:
            extra = sorted(set(occ) - {lin[0]})
            if extra:
                kind = "bang" if isinstance(t, OfcIntro) else "wncase body"
                return f"{kind} captures free linear variable(s) {', '.join(extra)}"
    return None


def check_mode(t: Term, mode: str) -> None:
    """Raise :class:`ModeViolation` if ``t`` uses a constructor foreign to ``mode``."""
    bad = _MELL_ONLY if mode == MLL else _MLL_ONLY
    for path, s in positions(t):
        if isinstance(s, bad):
            raise ModeViolation(f"{type(s).__name__} at {show_path(path)} is not a {mode.upper()} constructor")


def infer_mode(t: Term) -> str:
    for _, s in positions(t):
        if isinstance(s, _MLL_ONLY):
            return MLL
    return MELL


# ---------------------------------------------------------------------------
# Fresh names, renaming, alpha-equivalence
# ---------------------------------------------------------------------------

_counter = itertools.count(1)


def fresh(base: str = "x") -> str:
    """A name that no parser-produced identifier uses (it contains ``'``)."""
    root = base.split("'")[0] or "x"
    return f"{root}'{next(_counter)}"


def rename_bound(t: Term, lin_map: dict[str, str] | None = None, unr_map: dict[str, str] | None = None) -> Term:
    """Give every binder in ``t`` a globally fresh name (Barendregt convention)."""
    return _refresh(t, lin_map or {}, unr_map or {})


def _refresh(t, lm, um):
    match t:
        case LinVar(n):
            m = lm.get(n)
            return t if m is None else LinVar(m)
        case UnrVar(n):
            m = um.get(n)
            return t if m is None else UnrVar(m)
        case Star():
            return t
        case TensorElim(body, a, b, arg):
            a2, b2 = fresh(a), fresh(b)
            return TensorElim(_refresh(body, {**lm, a: a2, b: b2}, um), a2, b2, _refresh(arg, lm, um))
        case ParIntro(a, b, body):
            a2, b2 = fresh(a), fresh(b)
            return ParIntro(a2, b2, _refresh(body, {**lm, a: a2, b: b2}, um))
        case OfcIntro(a, body):
            a2 = fresh(a)
            return OfcIntro(a2, _refresh(body, {**lm, a: a2}, um))
        case Lambda(a, body):
            a2 = fresh(a)
            return Lambda(a2, _refresh(body, {**lm, a: a2}, um))
        case WhyElim(body, a, arg):
            a2 = fresh(a)
            return WhyElim(_refresh(body, {**lm, a: a2}, um), a2, _refresh(arg, lm, um))
        case OfcElim(body, u, arg):
            u2 = fresh(u)
            return OfcElim(_refresh(body, lm, {**um, u: u2}), u2, _refresh(arg, lm, um))
        case WhyIntro(u, body):
            u2 = fresh(u)
            return WhyIntro(u2, _refresh(body, lm, {**um, u: u2}))
    return with_children(t, [_refresh(c, lm, um) for c in children(t)])


def rename_free(t: Term, lin_map: dict[str, str] | None = None, unr_map: dict[str, str] | None = None) -> Term:
    """Rename free variables; binders are refreshed so nothing is captured."""
    return _refresh(t, dict(lin_map or {}), dict(unr_map or {}))


_TAGS = {
    Pair: "P", App: "A", ContraApp: "C", Contradiction: "X", OneElim: "O",
    TensorElim: "T", OfcElim: "E", WhyElim: "W", ParIntro: "R", OfcIntro: "B",
    WhyIntro: "Q", Lambda: "L",
}


def canonical_key(t: Term) -> str:
    """String that is equal for two terms iff they are alpha-equivalent."""
    from mell import kernel

    return kernel.canonical_key(t)


def alpha_eq(t: Term, s: Term) -> bool:
    return canonical_key(t) == canonical_key(s)


def canonicalize(t: Term, prefix: str = "") -> Term:
    """Rename binders to ``a1, a2, ...`` / ``u1, u2, ...`` in order of appearance.

    Names already free in ``t`` are skipped, so the result is alpha-equal to
    ``t`` and the output is deterministic.
    """
    lin, unr = free_vars(t)
    taken = set(lin) | set(unr)
    counter = itertools.count(1)

    def pick(kind: str) -> str:
        while True:
            n = f"{prefix}{kind}{next(counter)}"
            if n not in taken:
                return n

    def go(t, lm, um):
        match t:
            case LinVar(n):
                return LinVar(lm.get(n, n))
            case UnrVar(n):
                return UnrVar(um.get(n, n))
            case Star():
                return t
            case TensorElim(body, a, b, arg):
                arg2 = go(arg, lm, um)
                a2, b2 = pick("a"), pick("a")
                return TensorElim(go(body, {**lm, a: a2, b: b2}, um), a2, b2, arg2)
            case ParIntro(a, b, body):
                a2, b2 = pick("a"), pick("a")
                return ParIntro(a2, b2, go(body, {**lm, a: a2, b: b2}, um))
            case OfcIntro(a, body):
                a2 = pick("a")
                return OfcIntro(a2, go(body, {**lm, a: a2}, um))
            case Lambda(a, body):
                a2 = pick("a")
                return Lambda(a2, go(body, {**lm, a: a2}, um))
            case WhyElim(body, a, arg):
                arg2 = go(arg, lm, um)
                a2 = pick("a")
                return WhyElim(go(body, {**lm, a: a2}, um), a2, arg2)
            case OfcElim(body, u, arg):
                arg2 = go(arg, lm, um)
                u2 = pick("u")
                return OfcElim(go(body, lm, {**um, u: u2}), u2, arg2)
            case WhyIntro(u, body):
                u2 = pick("u")
                return WhyIntro(u2, go(body, lm, {**um, u: u2}))
        return with_children(t, [go(c, lm, um) for c in children(t)])

    return go(t, {}, {})


# ---------------------------------------------------------------------------
# Positive eliminator contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PairPat:
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class BangPat:
    var: str


@dataclass(frozen=True, slots=True)
class StarPat:
    pass


Pattern = Union[PairPat, BangPat, StarPat]


def pattern_vars(p: Pattern) -> tuple[frozenset[str], frozenset[str]]:
    """(linear, unrestricted) variables bound by a pattern."""
    match p:
        case PairPat(a, b):
            return frozenset((a, b)), frozenset()
        case BangPat(u):
            return frozenset(), frozenset((u,))
    return frozenset(), frozenset()


@dataclass(frozen=True, slots=True)
class Elim:
    """One positive eliminator ``[p := arg]`` awaiting its body."""

    pattern: Pattern
    arg: Term

    def apply(self, body: Term) -> Term:
        match self.pattern:
            case PairPat(a, b):
                return TensorElim(body, a, b, self.arg)
            case BangPat(u):
                return OfcElim(body, u, self.arg)
        return OneElim(body, self.arg)


PosElimCtx = tuple[Elim, ...]
CaseCtx = tuple[Elim, ...]


def as_elim(t: Term) -> tuple[Term, Elim] | None:
    """Split a positive eliminator into its body and frame."""
    match t:
        case TensorElim(body, a, b, arg):
            return body, Elim(PairPat(a, b), arg)
        case OfcElim(body, u, arg):
            return body, Elim(BangPat(u), arg)
        case OneElim(body, arg):
            return body, Elim(StarPat(), arg)
    return None


def plug(t: Term, ctx: PosElimCtx) -> Term:
    """``t L``: apply eliminators innermost first.  Captures by design."""
    for e in ctx:
        t = e.apply(t)
    return t


def unplug(t: Term, mode: str = MELL) -> tuple[Term, PosElimCtx]:
    """Strip the maximal spine of positive eliminators (tensor eliminations in MLL)."""
    frames: list[Elim] = []
    while True:
        split = as_elim(t)
        if split is None or (mode == MLL and not isinstance(t, TensorElim)):
            break
        t, e = split
        frames.append(e)
    frames.reverse()
    return t, tuple(frames)


def elim_vars(ctx: PosElimCtx) -> tuple[frozenset[str], frozenset[str]]:
    lin: set[str] = set()
    unr: set[str] = set()
    for e in ctx:
        l, u = pattern_vars(e.pattern)
        lin |= l
        unr |= u
    return frozenset(lin), frozenset(unr)


# ---------------------------------------------------------------------------
# One-hole contexts (surface and deep)
# ---------------------------------------------------------------------------

HOLE = "[]"
HOLE_VAR = LinVar(HOLE)


@dataclass(frozen=True, slots=True)
class Context:
    """A term with exactly one occurrence of the hole variable ``[]``."""

    term: Term

    def plug(self, t: Term) -> Term:
        return _plug_hole(self.term, t)

    def hole_path(self) -> Path:
        for path, s in positions(self.term):
            if s == HOLE_VAR:
                return path
        raise ValueError("context has no hole")

    def binders_over_hole(self) -> tuple[frozenset[str], frozenset[str]]:
        lin: set[str] = set()
        unr: set[str] = set()
        t = self.term
        for i in self.hole_path():
            l, u = binders_at(t, i)
            lin |= set(l)
            unr |= set(u)
            t = children(t)[i]
        return frozenset(lin), frozenset(unr)

    def __str__(self) -> str:
        return show(self.term)


def _plug_hole(c: Term, t: Term) -> Term:
    if c == HOLE_VAR:
        return t
    kids = children(c)
    if not kids:
        return c
    return with_children(c, [_plug_hole(k, t) for k in kids])


def free_for(t: Term, ctx: Context) -> bool:
    """True iff plugging ``t`` into ``ctx`` captures none of its free variables."""
    lin, unr = free_vars(t)
    bl, bu = ctx.binders_over_hole()
    return not (lin & bl) and not (unr & bu)


SURFACE_FORMS = (
    "par a b.[]", "([], t)", "(t, [])", "[] @ t", "t @ []", "[] ~@ t", "t ~@ []",
    "[] # t", "t # []", "wn $u. []", "[][p := t]", "t[p := []]", "wncase [] with a. t",
)


def is_surface_position(t: Term, i: int) -> bool:
    """Whether child ``i`` of ``t`` is the hole of a surface context.

    Excluded are the body of ``bang a. _`` and the body of ``wncase s with a. _``.
    """
    match t:
        case OfcIntro():
            return False
        case WhyElim():
            return i == 1
        case Lambda():
            return False
    return bool(children(t))


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

_BINDER, _CONTRA, _APP, _POST, _ATOM = range(5)


def _prec(t: Term) -> int:
    match t:
        case ParIntro() | OfcIntro() | WhyIntro() | WhyElim() | Lambda():
            return _BINDER
        case Contradiction():
            return _CONTRA
        case App() | ContraApp():
            return _APP
        case TensorElim() | OfcElim() | OneElim():
            return _POST
    return _ATOM


def _wrap(t: Term, level: int) -> str:
    s = show(t)
    return f"({s})" if _prec(t) < level else s


def show(t: Term) -> str:
    """Concrete syntax accepted by :func:`mell.cli.parser.parse_term`."""
    match t:
        case LinVar(n):
            return n
        case UnrVar(n):
            return "$" + n
        case Star():
            return "*"
        case Pair(a, b):
            return f"({show(a)}, {show(b)})"
        case TensorElim(body, a, b, arg):
            return f"{_wrap(body, _POST)}[({a}, {b}) := {show(arg)}]"
        case OfcElim(body, u, arg):
            return f"{_wrap(body, _POST)}[!${u} := {show(arg)}]"
        case OneElim(body, arg):
            return f"{_wrap(body, _POST)}[* := {show(arg)}]"
        case App(f, a):
            return f"{_wrap(f, _APP)} @ {_wrap(a, _POST)}"
        case ContraApp(f, a):
            return f"{_wrap(f, _APP)} ~@ {_wrap(a, _POST)}"
        case Contradiction(a, b):
            return f"{_wrap(a, _CONTRA)} # {_wrap(b, _APP)}"
        case ParIntro(a, b, body):
            return f"par {a} {b}. {show(body)}"
        case OfcIntro(a, body):
            return f"bang {a}. {show(body)}"
        case WhyIntro(u, body):
            return f"wn ${u}. {show(body)}"
        case WhyElim(body, a, arg):
            return f"wncase {show(arg)} with {a}. {show(body)}"
        case Lambda(a, body):
            return f"\\{a}. {show(body)}"
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def to_json(x: Term | Formula) -> dict:
    """One object per constructor with a ``"tag"`` field."""
    out: dict = {"tag": type(x).__name__}
    for name in type(x).__dataclass_fields__:
        v = getattr(x, name)
        out[name] = to_json(v) if isinstance(v, (Term, Formula)) else v
    return out


_REGISTRY = {
    cls.__name__: cls
    for cls in (
        LinVar, UnrVar, Pair, TensorElim, ParIntro, App, ContraApp, OfcIntro, OfcElim,
        WhyIntro, WhyElim, Contradiction, Star, OneElim, Lambda,
        Atom, NegAtom, Tensor, Par, One, Bottom, OfCourse, WhyNot, LinImp,
    )
}


def from_json(obj: dict) -> Term | Formula:
    cls = _REGISTRY[obj["tag"]]
    kwargs = {}
    for name in cls.__dataclass_fields__:
        v = obj[name]
        kwargs[name] = from_json(v) if isinstance(v, dict) else v
    return cls(**kwargs)


# ---------------------------------------------------------------------------
# Small constructors used throughout
# ---------------------------------------------------------------------------


def bang(t: Term, var: str | None = None) -> Term:
    """The shorthand ``!t := bang a. (t # a)``."""
    a = var or fresh("c")
    return OfcIntro(a, Contradiction(t, LinVar(a)))


def map_terms(f: Callable[[Term], Term], t: Term) -> Term:
    """Bottom-up rebuild."""
    return f(with_children(t, [map_terms(f, c) for c in children(t)]))
