"""Structural equivalence of typed λ_MELL terms.

The relation is generated by the substitution-free axioms below, closed under
symmetry, transitivity and arbitrary contexts.  Axioms are applied at a
position of a term; a :class:`Step` records the position, the axiom name and
whether it was used left-to-right (``"->"``) or right-to-left (``"<-"``).

======================  ===============================================
``Prop``                ``F<t>[p:=r]  =  F<t[p:=r]>``  (F a surface context)
``beta-one``            ``t[*:=*]  =  t``
``Symm-one``            ``t[*:=s]  =  s[*:=t]``          (t : 1)
``LUnit``               ``* # t  =  t``                  (t : bot)
``E-par2/I-par``        ``(s ~@ t) # r  =  t # (s @ r)``
``I-tensor/E-par2``     ``(r, t) # s  =  r # (s ~@ t)``
``I-par/E-tensor``      ``(par a b. s) # t  =  s[(a,b):=t]``
``I-wn/E-bang``         ``(wn $u. s) # t  =  s[!$u:=t]``
``I-bang/E-wn``         ``(bang a. t) # s  =  wncase s with a. t``
``I-bot/E-one``         ``t[*:=s] # r  =  s # (r # t)``
======================  ===============================================

Deciding the relation is done by bidirectional breadth-first search over
*simplified* terms: :func:`simplify` applies ``beta-one``, ``LUnit`` and the
derived ``*[*:=t] = t`` left-to-right until none applies.  Search moves are
single axiom applications in either direction plus two derived moves, the
symmetry of ``#`` and ``t[*:=s] = t # s`` for ``t : bot``; each derived move
is recorded as the axiom chain that proves it, so witnesses consist of
axiom steps only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from mell.substitution import contra_subst_mell
from mell.syntax import (
    BOTTOM, HOLE, HOLE_VAR, MELL, MLL, ONE, STAR, App, ContraApp, Context,
    Contradiction, Formula, LinVar, OfcElim, OfcIntro, OneElim, Pair, ParIntro,
    Path, Star, TensorElim, Term, WhyElim, WhyIntro, alpha_eq, as_elim, binders_at,
    canonical_key, canonicalize, children, free_for, free_vars, is_surface_position,
    pattern_vars, positions, replace_at, show, show_path, subterm, with_children,
)
from mell.typing import TypingError, typecheck

AXIOMS = (
    "Prop", "beta-one", "Symm-one", "LUnit", "E-par2/I-par", "I-tensor/E-par2",
    "I-par/E-tensor", "I-wn/E-bang", "I-bang/E-wn", "I-bot/E-one",
)

TypeOracle = Callable[[Path], "Formula | None"]


@dataclass(frozen=True)
class Step:
    path: Path
    axiom: str
    direction: str
    child: int | None = None  # for Prop: which child of the surface context holds t

    def reversed(self) -> "Step":
        return Step(self.path, self.axiom, "<-" if self.direction == "->" else "->", self.child)

    def __str__(self) -> str:
        extra = f" (child {self.child})" if self.child is not None else ""
        return f"{self.axiom} {self.direction} @ {show_path(self.path)}{extra}"


class NotApplicable(ValueError):
    pass


# ---------------------------------------------------------------------------
# Local axioms
# ---------------------------------------------------------------------------


def _no_types(_: Path) -> None:
    return None


def rewrite_local(x: Term, axiom: str, direction: str, ty: TypeOracle = _no_types) -> Term | None:
    """Apply a non-``Prop`` axiom at the root of ``x``.

    ``ty`` gives the types of subterms of ``x`` by relative path; type
    conditions that cannot be confirmed make the rewrite inapplicable.
    """
    fwd = direction == "->"
    match axiom:
        case "beta-one":
            if fwd:
                return x.body if isinstance(x, OneElim) and isinstance(x.arg, Star) else None
            return OneElim(x, STAR)
        case "Symm-one":
            if isinstance(x, OneElim) and ty((0,)) == ONE:
                return OneElim(x.arg, x.body)
            return None
        case "LUnit":
            if fwd:
                return x.right if isinstance(x, Contradiction) and isinstance(x.left, Star) else None
            return Contradiction(STAR, x) if ty(()) == BOTTOM else None
        case "E-par2/I-par":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, ContraApp):
                    return Contradiction(x.left.arg, App(x.left.fn, x.right))
            elif isinstance(x, Contradiction) and isinstance(x.right, App):
                return Contradiction(ContraApp(x.right.fn, x.left), x.right.arg)
            return None
        case "I-tensor/E-par2":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, Pair):
                    return Contradiction(x.left.left, ContraApp(x.right, x.left.right))
            elif isinstance(x, Contradiction) and isinstance(x.right, ContraApp):
                return Contradiction(Pair(x.left, x.right.arg), x.right.fn)
            return None
        case "I-par/E-tensor":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, ParIntro):
                    p = x.left
                    return TensorElim(p.body, p.left_var, p.right_var, x.right)
            elif isinstance(x, TensorElim) and ty(()) == BOTTOM:
                return Contradiction(ParIntro(x.left_var, x.right_var, x.body), x.arg)
            return None
        case "I-wn/E-bang":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, WhyIntro):
                    return OfcElim(x.left.body, x.left.var, x.right)
            elif isinstance(x, OfcElim) and ty(()) == BOTTOM:
                return Contradiction(WhyIntro(x.var, x.body), x.arg)
            return None
        case "I-bang/E-wn":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, OfcIntro):
                    return WhyElim(x.left.body, x.left.var, x.right)
            elif isinstance(x, WhyElim):
                return Contradiction(OfcIntro(x.var, x.body), x.arg)
            return None
        case "I-bot/E-one":
            if fwd:
                if isinstance(x, Contradiction) and isinstance(x.left, OneElim):
                    return Contradiction(x.left.arg, Contradiction(x.right, x.left.body))
            elif isinstance(x, Contradiction) and isinstance(x.right, Contradiction):
                return Contradiction(OneElim(x.right.right, x.left), x.right.left)
            return None
    raise ValueError(f"unknown axiom {axiom!r}")


# ---------------------------------------------------------------------------
# Prop: moving a positive eliminator across a surface context
# ---------------------------------------------------------------------------


def prop_out(x: Term) -> list[tuple[int, Term]]:
    """``F<t[p:=r]> -> F<t>[p:=r]`` for each surface child of ``x`` that is an eliminator."""
    out = []
    for i, c in enumerate(children(x)):
        if not is_surface_position(x, i):
            continue
        split = as_elim(c)
        if split is None:
            continue
        t, e = split
        bl, bu = binders_at(x, i)
        rl, ru = free_vars(e.arg)
        if set(bl) & rl or set(bu) & ru:
            continue  # r would escape a binder of F
        pl, pu = pattern_vars(e.pattern)
        if set(bl) & pl or set(bu) & pu:
            continue
        others = [k for j, k in enumerate(children(x)) if j != i]
        if any((pl & free_vars(k)[0]) or (pu & free_vars(k)[1]) for k in others):
            continue
        kids = list(children(x))
        kids[i] = t
        out.append((i, e.apply(with_children(x, kids))))
    return out


def prop_in(x: Term) -> list[tuple[int, Term]]:
    """``F<t>[p:=r] -> F<t[p:=r]>`` for each surface position ``i`` of the body ``F``."""
    split = as_elim(x)
    if split is None:
        return []
    body, e = split
    pl, pu = pattern_vars(e.pattern)
    rl, ru = free_vars(e.arg)
    out = []
    kids = children(body)
    for i, c in enumerate(kids):
        if not is_surface_position(body, i):
            continue
        bl, bu = binders_at(body, i)
        if set(bl) & (rl | pl) or set(bu) & (ru | pu):
            continue  # needs renaming; callers work on canonical terms where this cannot occur
        others = [k for j, k in enumerate(kids) if j != i]
        if any((pl & free_vars(k)[0]) or (pu & free_vars(k)[1]) for k in others):
            continue
        new = list(kids)
        new[i] = e.apply(c)
        out.append((i, with_children(body, new)))
    return out


# ---------------------------------------------------------------------------
# Applying and replaying steps
# ---------------------------------------------------------------------------


def apply_step(t: Term, step: Step, ty: TypeOracle = _no_types) -> Term:
    """Apply one axiom step; raise :class:`NotApplicable` if it does not fit."""
    x = subterm(t, step.path)
    sub_ty: TypeOracle = lambda rel: ty(step.path + rel)  # noqa: E731
    if step.axiom == "Prop":
        cands = prop_in(x) if step.direction == "->" else prop_out(x)
        if step.child is not None:
            cands = [c for c in cands if c[0] == step.child]
        if len(cands) != 1:
            raise NotApplicable(f"Prop {step.direction} at {show_path(step.path)}: {len(cands)} candidates")
        return replace_at(t, step.path, cands[0][1])
    y = rewrite_local(x, step.axiom, step.direction, sub_ty)
    if y is None:
        raise NotApplicable(f"{step} does not apply to {show(x)}")
    return replace_at(t, step.path, y)


def type_oracle(t: Term, unr=None, lin=None) -> TypeOracle:
    """Types of the subterms of ``t`` (free variables get principal types)."""
    try:
        r = typecheck(t, unr, lin, MELL, open_vars=True, derivation=False)
    except TypingError:
        return _no_types
    return r.types.get


def replay(t: Term, steps: list[Step], unr=None, lin=None) -> Term:
    """Re-run a witness, re-typing the term before every step."""
    for st in steps:
        t = apply_step(t, st, type_oracle(t, unr, lin))
    return t


# ---------------------------------------------------------------------------
# Neighbours
# ---------------------------------------------------------------------------

_LOCAL = [ax for ax in AXIOMS if ax != "Prop"]


def equiv_neighbors(t: Term, unr=None, lin=None) -> list[tuple[Step, Term]]:
    """Every term one axiom application away from ``t`` (either direction, any position)."""
    t = canonicalize(t)
    ty = type_oracle(t, unr, lin)
    out: list[tuple[Step, Term]] = []
    seen: set[str] = set()

    def add(step: Step, y: Term):
        k = canonical_key(y)
        if k not in seen:
            seen.add(k)
            out.append((step, canonicalize(y)))

    for p, x in positions(t):
        sub_ty: TypeOracle = lambda rel, p=p: ty(p + rel)  # noqa: E731
        for ax in _LOCAL:
            for d in ("->", "<-"):
                if ax == "Symm-one" and d == "<-":
                    continue
                y = rewrite_local(x, ax, d, sub_ty)
                if y is not None:
                    add(Step(p, ax, d), replace_at(t, p, y))
        for i, y in prop_in(x):
            add(Step(p, "Prop", "->", i), replace_at(t, p, y))
        for i, y in prop_out(x):
            add(Step(p, "Prop", "<-", i), replace_at(t, p, y))
    return out


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------


def simplify_with_steps(t: Term) -> tuple[Term, list[Step]]:
    """Remove ``t[*:=*]``, ``* # t`` and ``*[*:=t]`` redexes bottom-up."""
    steps: list[Step] = []

    def go(x: Term, p: Path) -> Term:
        kids = children(x)
        if kids:
            new = [go(c, p + (i,)) for i, c in enumerate(kids)]
            if any(a is not b for a, b in zip(new, kids)):
                x = with_children(x, new)
        while True:
            if isinstance(x, OneElim) and isinstance(x.arg, Star):
                steps.append(Step(p, "beta-one", "->"))
                x = x.body
            elif isinstance(x, Contradiction) and isinstance(x.left, Star):
                steps.append(Step(p, "LUnit", "->"))
                x = x.right
            elif isinstance(x, OneElim) and isinstance(x.body, Star):
                steps.append(Step(p, "Symm-one", "->"))
                steps.append(Step(p, "beta-one", "->"))
                x = x.arg
            else:
                return x

    return go(t, ()), steps


def simplify(t: Term) -> Term:
    return simplify_with_steps(t)[0]


# ---------------------------------------------------------------------------
# Derived moves
# ---------------------------------------------------------------------------


def symm_bot_steps(p: Path) -> list[Step]:
    """``t # s = s # t`` at ``p``."""
    return [Step(p + (0,), "beta-one", "<-"), Step(p, "I-bot/E-one", "->"), Step(p, "LUnit", "->")]


def unit_cut_steps(p: Path) -> list[Step]:
    """``t[*:=s] = t # s`` at ``p`` (``t : bot``)."""
    return (
        [Step(p, "LUnit", "<-")]
        + symm_bot_steps(p)
        + [Step(p, "I-bot/E-one", "->"), Step(p + (1,), "LUnit", "->")]
        + symm_bot_steps(p)
    )


def search_moves(t: Term, ty: TypeOracle) -> Iterator[tuple[list[Step], Term]]:
    """Moves used by the search: single axioms plus the derived symmetry moves."""
    for p, x in positions(t):
        sub_ty: TypeOracle = lambda rel, p=p: ty(p + rel)  # noqa: E731
        for ax in _LOCAL:
            for d in ("->", "<-"):
                if (ax, d) in (("beta-one", "<-"), ("LUnit", "<-"), ("Symm-one", "<-")):
                    continue
                y = rewrite_local(x, ax, d, sub_ty)
                if y is not None:
                    yield [Step(p, ax, d)], replace_at(t, p, y)
        for i, y in prop_in(x):
            yield [Step(p, "Prop", "->", i)], replace_at(t, p, y)
        for i, y in prop_out(x):
            yield [Step(p, "Prop", "<-", i)], replace_at(t, p, y)
        if isinstance(x, Contradiction):
            steps = symm_bot_steps(p)
            yield steps, replace_at(t, p, Contradiction(x.right, x.left))
            if ty(p + (1,)) == ONE:
                back = [s.reversed() for s in reversed(unit_cut_steps(p))]
                yield back, replace_at(t, p, OneElim(x.left, x.right))
        if isinstance(x, OneElim) and ty(p) == BOTTOM:
            yield unit_cut_steps(p), replace_at(t, p, Contradiction(x.body, x.arg))


# ---------------------------------------------------------------------------
# Bidirectional search
# ---------------------------------------------------------------------------

EQUIVALENT, NOT_EQUIVALENT, UNKNOWN = "Equivalent", "NotEquivalent", "Unknown"


@dataclass
class EquivResult:
    verdict: str
    path: list[Step] = field(default_factory=list)
    explored: int = 0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict == EQUIVALENT


class _Side:
    def __init__(self, start: Term, unr, lin):
        s, steps = simplify_with_steps(start)
        s = canonicalize(s)
        self.unr, self.lin = unr, lin
        self.start_steps = steps
        k = canonical_key(s)
        self.parent: dict[str, tuple[str | None, list[Step]]] = {k: (None, [])}
        self.terms: dict[str, Term] = {k: s}
        self.frontier: deque[str] = deque([k])
        self.root = k

    def chain(self, k: str) -> list[Step]:
        out: list[Step] = []
        while k is not None:
            prev, steps = self.parent[k]
            out = steps + out
            k = prev
        return self.start_steps + out

    def expand(self) -> Iterator[str]:
        k = self.frontier.popleft()
        t = self.terms[k]
        ty = type_oracle(t, self.unr, self.lin)
        for steps, y in search_moves(t, ty):
            y2, more = simplify_with_steps(y)
            k2 = canonical_key(y2)
            if k2 in self.parent:
                continue
            self.parent[k2] = (k, steps + more)
            self.terms[k2] = canonicalize(y2)
            self.frontier.append(k2)
            yield k2


def _same_up_to_instances(t, s, rt, rs, unr, lin, mode) -> bool:
    # Unconstrained type variables are grounded with fresh atoms, so two
    # principal types may differ only by naming: each must fit the other.
    from mell.typing import TypingError

    try:
        typecheck(s, unr, rs.lin, mode, expected=rt.type, derivation=False)
        typecheck(t, unr, rt.lin, mode, expected=rs.type, derivation=False)
    except TypingError:
        return False
    return True


def _env_of(t: Term, unr, lin, mode):
    if lin is not None:
        fl = free_vars(t)[0]
        lin = {n: f for n, f in lin.items() if n in fl}
    return typecheck(t, unr, lin, mode, open_vars=unr is None and lin is None, derivation=False)


def equiv_check(
    t: Term,
    s: Term,
    unr: Mapping[str, Formula] | None = None,
    lin: Mapping[str, Formula] | None = None,
    fuel: int = 10_000,
    mode: str = MELL,
) -> EquivResult:
    """Decide ``t ≡ s`` by bidirectional search with ``fuel`` expanded nodes.

    When an environment is given both terms must check against it with the
    same type.  Without one, each term is typed with principal types for its
    free variables.  ``NotEquivalent`` is reported only when the reachable
    classes of both terms are exhausted without meeting.
    """
    from mell.typing import TypeMismatch

    rt = _env_of(t, unr, lin, mode)
    rs = _env_of(s, unr, lin, mode)
    if unr is not None or lin is not None:
        if rt.type != rs.type and not _same_up_to_instances(t, s, rt, rs, unr, lin, mode):
            raise TypeMismatch(rt.type, rs.type, ())
        if set(rt.lin) != set(rs.lin):
            raise TypeMismatch(rt.type, rs.type, (), s)
    if mode == MLL:
        if alpha_eq(t, s):
            return EquivResult(EQUIVALENT, [], 1)
        return EquivResult(NOT_EQUIVALENT, [], 1, "structural equivalence is syntactic identity in MLL")
    a = _Side(t, rt.unr, rt.lin)
    b = _Side(s, rs.unr, rs.lin)
    if a.root == b.root:
        return EquivResult(EQUIVALENT, a.chain(a.root) + [x.reversed() for x in reversed(b.chain(b.root))], 0)
    explored = 0
    while a.frontier or b.frontier:
        if explored >= fuel:
            return EquivResult(UNKNOWN, [], explored, "fuel exhausted")
        side, other = (a, b) if (a.frontier and (len(a.frontier) <= len(b.frontier) or not b.frontier)) else (b, a)
        explored += 1
        for k in side.expand():
            if k in other.parent:
                left, right = (side, other) if side is a else (other, side)
                path = left.chain(k) + [x.reversed() for x in reversed(right.chain(k))]
                return EquivResult(EQUIVALENT, path, explored)
    return EquivResult(NOT_EQUIVALENT, [], explored, "both classes exhausted")


def equivalent(t: Term, s: Term, unr=None, lin=None, fuel: int = 10_000) -> bool:
    return equiv_check(t, s, unr, lin, fuel).verdict == EQUIVALENT


def enumerate_class(t: Term, unr=None, lin=None, fuel: int = 10_000) -> list[tuple[Term, list[Step]]]:
    """Members of the (simplified) class of ``t`` reachable within ``fuel`` expansions."""
    r = typecheck(t, unr, lin, MELL, open_vars=unr is None and lin is None, derivation=False)
    side = _Side(t, r.unr, r.lin)
    n = 0
    while side.frontier and n < fuel:
        n += 1
        for _ in side.expand():
            pass
    return [(side.terms[k], side.chain(k)) for k in side.terms]


# ---------------------------------------------------------------------------
# Deep contexts and their duals
# ---------------------------------------------------------------------------


class FreenessViolation(ValueError):
    pass


def is_deep_context(c: Context) -> bool:
    """A one-hole context whose hole is not under ``bang``."""
    try:
        path = c.hole_path()
    except ValueError:
        return False
    x = c.term
    for i in path:
        if isinstance(x, OfcIntro):
            return False
        x = children(x)[i]
    occ = [p for p, s in positions(c.term) if s == HOLE_VAR]
    return len(occ) == 1


def dual_deep_ctx(d: Context) -> Context:
    """``¬D = D⦅[]:=[]⦆``."""
    if d.term == HOLE_VAR:
        return d
    return Context(contra_subst_mell(d.term, HOLE, HOLE_VAR))


def cos_via_context(d: Context, t: Term, a: str = "a'hole") -> tuple[Term, Term]:
    """``(D<a>⦅a:=t⦆, ¬D<t>)``, which are structurally equivalent."""
    if not free_for(t, d):
        raise FreenessViolation(f"{show(t)} is not free for {show(d.term)}")
    left = contra_subst_mell(d.plug(LinVar(a)), a, t)
    right = dual_deep_ctx(d).plug(t)
    return left, right


# ---------------------------------------------------------------------------
# Derived equations
# ---------------------------------------------------------------------------

_DERIVED = [
    ("left unit of #", "* # t", "t"),
    ("symmetry of #", "t # s", "s # t"),
    ("pair cut to contra-application", "(r, t) # s", "r # (s ~@ t)"),
    ("pair cut to application", "(t, r) # s", "r # (s @ t)"),
    ("application cut to contra-application", "(s @ t) # r", "t # (s ~@ r)"),
    ("par cut to pair elimination", "(par a b. x # (a, b)) # t", "(x # (a, b))[(a, b) := t]"),
    ("why-not cut to bang elimination", "(wn $u. $u # y) # t", "($u # y)[!$u := t]"),
    ("guarded bang cut", "(bang a. $v # a)[* := p] # r", "p # (wncase r with a. $v # a)"),
    ("bang cut to why-not elimination", "(bang a. $v # a) # r", "wncase r with a. $v # a"),
    ("nested cut to unit elimination", "(s # t) # r", "s # t[* := r]"),
    ("unit elimination of bottom is a cut", "t[* := s]", "t # s", {"t": "bot", "s": "1"}),
    ("unit elimination of star", "*[* := t]", "t"),
    ("contra-application cut to pair", "(s ~@ t) # r", "s # (r, t)"),
    ("contra-application cut to application", "(s ~@ t) # r", "t # (s @ r)"),
    ("pair cut to contra-application on the right", "(t, s) # r", "t # (r ~@ s)"),
    ("unit elimination under a cut", "t[* := s] # r", "s # (r # t)"),
    ("propagation through application", "(x @ t)[* := r]", "x @ t[* := r]"),
    ("propagation through a pair", "(x, a # b)[(a, b) := r]", "(x, (a # b)[(a, b) := r])"),
]


def derived_equations() -> list[tuple[str, Term, Term, dict[str, Formula] | None]]:
    """Instances of the derived ≡-equations as ``(name, lhs, rhs, linear context)``.

    The context is ``None`` when the free variables take principal types.

    Two equations mention contra-substitution and are built through the API:
    ``t⦅a:=★⦆[★:=r] ≡ t⦅a:=r⦆`` and ``t⦅a:=r⦆ ≡ t{a:=r}`` for ``t : ⊥``.
    """
    from mell.cli.parser import parse_formula, parse_term
    from mell.substitution import contra_subst, subst_linear
    from mell.syntax import STAR, OneElim

    out = []
    for name, lhs, rhs, *env in _DERIVED:
        lin = {x: parse_formula(f) for x, f in env[0].items()} if env else None
        out.append((name, parse_term(lhs), parse_term(rhs), lin))
    t = parse_term("u @ a")
    out.append(("star contra-substitution then unit elimination",
                OneElim(contra_subst(t, "a", STAR), LinVar("r")), contra_subst(t, "a", LinVar("r")), None))
    t = parse_term("x # a")
    out.append(("contra-substitution of a bottom term is substitution",
                contra_subst(t, "a", LinVar("r")), subst_linear(t, "a", LinVar("r")),
                {"x": parse_formula("bot"), "r": parse_formula("1")}))
    return out
