"""Classical source calculi and their translations into λ_MELL.

Four calculi are covered:

* λμ and its call-by-value variant λμ_V, with terms ``x``, ``λx.M``,
  ``M N``, ``[a]M`` and ``μa.M``;
* λ̄μμ̃, split into terms, co-terms and commands;
* μDCLL, a dual-context calculus with intuitionistic (⊃) and linear (⊸)
  arrows.

Typing is by unification, so source terms carry no annotations and free
variables receive principal types.  Each calculus has its one-step rules and a
translation into λ_MELL together with the target judgement that the
translation is meant to inhabit.  ``simulate_verify`` checks the relation
between the images of the two sides of a source step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Callable, Iterator, Mapping

from mell.syntax import (
    BOTTOM, MELL, STAR, Atom, Bottom, ContraApp, Contradiction, Formula, LinVar,
    OfcElim, OfCourse, Pair, Par, ParIntro, Term, UnrVar, WhyIntro, WhyNot, alpha_eq,
    bang, canonical_key, fresh, negate, show,
)
from mell.syntax import App as MellApp
from mell.substitution import contra_subst, subst_unrestricted

LAMBDA_MU = "lambda-mu"
LAMBDA_MU_V = "lambda-mu-v"
LBAR_MU_MUTILDE = "lbar-mu-mutilde"
MU_DCLL = "mu-dcll"


class ClassicalError(ValueError):
    pass


class ClassicalTypeError(ClassicalError):
    pass


class UntypedSource(ClassicalError):
    pass


class UnsupportedSource(ClassicalError):
    """The source term lies outside the fragment a translation handles."""


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


class CType:
    __slots__ = ()

    def __str__(self) -> str:
        return show_ctype(self)


@dataclass(frozen=True, slots=True)
class CBot(CType):
    pass


@dataclass(frozen=True, slots=True)
class TAtom(CType):
    name: str


@dataclass(frozen=True, slots=True)
class Arrow(CType):
    """``A ⇒ B``; in μDCLL this is the intuitionistic arrow ``A ⊃ B``."""

    left: CType
    right: CType


@dataclass(frozen=True, slots=True)
class LinArrow(CType):
    """``A ⊸ B`` (μDCLL only)."""

    left: CType
    right: CType


@dataclass(frozen=True, slots=True)
class TVar(CType):
    ident: int


CBOT = CBot()


def show_ctype(a: CType) -> str:
    match a:
        case CBot():
            return "bot"
        case TAtom(n):
            return n
        case TVar(i):
            return f"?{i}"
        case Arrow(l, r) | LinArrow(l, r):
            op = "=>" if isinstance(a, Arrow) else "-o"
            left = show_ctype(l)
            if isinstance(l, (Arrow, LinArrow)):
                left = f"({left})"
            return f"{left} {op} {show_ctype(r)}"
    raise TypeError(a)


class _Unifier:
    def __init__(self):
        self.sub: dict[int, CType] = {}
        self.ids = count()

    def new(self) -> TVar:
        return TVar(next(self.ids))

    def resolve(self, a: CType) -> CType:
        while isinstance(a, TVar) and a.ident in self.sub:
            a = self.sub[a.ident]
        return a

    def full(self, a: CType) -> CType:
        a = self.resolve(a)
        if isinstance(a, (Arrow, LinArrow)):
            return type(a)(self.full(a.left), self.full(a.right))
        return a

    def occurs(self, i: int, a: CType) -> bool:
        a = self.resolve(a)
        if isinstance(a, TVar):
            return a.ident == i
        if isinstance(a, (Arrow, LinArrow)):
            return self.occurs(i, a.left) or self.occurs(i, a.right)
        return False

    def unify(self, a: CType, b: CType, where: str) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a.ident, b):
                raise ClassicalTypeError(f"{where}: circular type")
            self.sub[a.ident] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, where)
            return
        if type(a) is type(b) and isinstance(a, (Arrow, LinArrow)):
            self.unify(a.left, b.left, where)
            self.unify(a.right, b.right, where)
            return
        raise ClassicalTypeError(f"{where}: cannot match {show_ctype(self.full(a))} with {show_ctype(self.full(b))}")


def _grounder(u: _Unifier, taken: set[str]) -> Callable[[CType], CType]:
    names: dict[int, str] = {}
    counter = count(1)

    def ground(a: CType) -> CType:
        a = u.full(a)
        match a:
            case TVar(i):
                if i not in names:
                    n = f"X{next(counter)}"
                    while n in taken:
                        n = f"X{next(counter)}"
                    names[i] = n
                return TAtom(names[i])
            case Arrow(l, r) | LinArrow(l, r):
                return type(a)(ground(l), ground(r))
        return a

    return ground


def _atoms(a: CType) -> set[str]:
    match a:
        case TAtom(n):
            return {n}
        case Arrow(l, r) | LinArrow(l, r):
            return _atoms(l) | _atoms(r)
    return set()


# ---------------------------------------------------------------------------
# λμ terms
# ---------------------------------------------------------------------------


class MuTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show_mu(self)


@dataclass(frozen=True, slots=True)
class Var(MuTerm):
    """A term variable; linear in μDCLL."""

    name: str


@dataclass(frozen=True, slots=True)
class UVar(MuTerm):
    """An unrestricted variable of μDCLL."""

    name: str


@dataclass(frozen=True, slots=True)
class Lam(MuTerm):
    var: str
    body: MuTerm


@dataclass(frozen=True, slots=True)
class App(MuTerm):
    fn: MuTerm
    arg: MuTerm


@dataclass(frozen=True, slots=True)
class Name(MuTerm):
    """``[a]M``."""

    name: str
    body: MuTerm


@dataclass(frozen=True, slots=True)
class Mu(MuTerm):
    """``μa.M``."""

    name: str
    body: MuTerm


@dataclass(frozen=True, slots=True)
class ILam(MuTerm):
    """``λ̂u.M``: the intuitionistic abstraction of μDCLL."""

    var: str
    body: MuTerm


@dataclass(frozen=True, slots=True)
class IApp(MuTerm):
    """Intuitionistic application of μDCLL."""

    fn: MuTerm
    arg: MuTerm


MuPath = tuple[int, ...]


def mu_children(m: MuTerm) -> tuple[MuTerm, ...]:
    match m:
        case Var() | UVar():
            return ()
        case Lam(_, b) | Name(_, b) | Mu(_, b) | ILam(_, b):
            return (b,)
        case App(f, a) | IApp(f, a):
            return (f, a)
    raise TypeError(m)


def mu_with_children(m: MuTerm, kids) -> MuTerm:
    match m:
        case Var() | UVar():
            return m
        case Lam(x, _):
            return Lam(x, kids[0])
        case ILam(x, _):
            return ILam(x, kids[0])
        case Name(a, _):
            return Name(a, kids[0])
        case Mu(a, _):
            return Mu(a, kids[0])
        case App():
            return App(kids[0], kids[1])
        case IApp():
            return IApp(kids[0], kids[1])
    raise TypeError(m)


def mu_positions(m: MuTerm, prefix: MuPath = ()) -> Iterator[tuple[MuPath, MuTerm]]:
    yield prefix, m
    for i, c in enumerate(mu_children(m)):
        yield from mu_positions(c, prefix + (i,))


def mu_replace(m: MuTerm, path: MuPath, new: MuTerm) -> MuTerm:
    if not path:
        return new
    kids = list(mu_children(m))
    kids[path[0]] = mu_replace(kids[path[0]], path[1:], new)
    return mu_with_children(m, kids)


def mu_size(m: MuTerm) -> int:
    return 1 + sum(mu_size(c) for c in mu_children(m))


def mu_free(m: MuTerm) -> tuple[frozenset[str], frozenset[str]]:
    """Free term variables (including unrestricted ones) and free names."""
    match m:
        case Var(x) | UVar(x):
            return frozenset([x]), frozenset()
        case Lam(x, b) | ILam(x, b):
            v, n = mu_free(b)
            return v - {x}, n
        case Name(a, b):
            v, n = mu_free(b)
            return v, n | {a}
        case Mu(a, b):
            v, n = mu_free(b)
            return v, n - {a}
        case App(f, a) | IApp(f, a):
            v1, n1 = mu_free(f)
            v2, n2 = mu_free(a)
            return v1 | v2, n1 | n2
    raise TypeError(m)


def _mu_prec(m: MuTerm) -> int:
    if isinstance(m, (Lam, ILam, Mu, Name)):
        return 0
    if isinstance(m, (App, IApp)):
        return 1
    return 2


def show_mu(m: MuTerm) -> str:
    def wrap(t: MuTerm, level: int) -> str:
        s = show_mu(t)
        return f"({s})" if _mu_prec(t) < level else s

    match m:
        case Var(x) | UVar(x):
            return x
        case Lam(x, b):
            return f"\\{x}. {show_mu(b)}"
        case ILam(x, b):
            return f"\\\\{x}. {show_mu(b)}"
        case Name(a, b):
            return f"[{a}] {wrap(b, 1)}"
        case Mu(a, b):
            return f"mu {a}. {show_mu(b)}"
        case App(f, a):
            return f"{wrap(f, 1)} {wrap(a, 2)}"
        case IApp(f, a):
            return f"{wrap(f, 1)} !{wrap(a, 2)}"
    raise TypeError(m)


def _fresh_src(base: str, avoid: set[str]) -> str:
    root = base.rstrip("0123456789'")
    i = 1
    while f"{root}{i}" in avoid:
        i += 1
    return f"{root}{i}"


def _all_names(m: MuTerm) -> set[str]:
    out: set[str] = set()
    for _, s in mu_positions(m):
        match s:
            case Var(x) | UVar(x) | Lam(x, _) | ILam(x, _) | Name(x, _) | Mu(x, _):
                out.add(x)
    return out


def mu_subst(m: MuTerm, x: str, n: MuTerm) -> MuTerm:
    """Capture-avoiding ``M{x:=N}`` for term variables (linear or not)."""
    fv_n, fn_n = mu_free(n)
    avoid = _all_names(m) | _all_names(n)

    def go(t: MuTerm) -> MuTerm:
        match t:
            case Var(y) | UVar(y):
                return n if y == x else t
            case Lam(y, b) | ILam(y, b):
                if y == x:
                    return t
                if y in fv_n:
                    z = _fresh_src(y, avoid)
                    avoid.add(z)
                    b = mu_rename_var(b, y, z)
                    y = z
                return type(t)(y, go(b))
            case Mu(a, b):
                if a in fn_n:
                    c = _fresh_src(a, avoid)
                    avoid.add(c)
                    b = mu_rename_name(b, a, c)
                    a = c
                return Mu(a, go(b))
            case Name(a, b):
                return Name(a, go(b))
            case App(f, a) | IApp(f, a):
                return type(t)(go(f), go(a))
        raise TypeError(t)

    return go(m)


def mu_rename_var(m: MuTerm, y: str, z: str) -> MuTerm:
    target = UVar(z) if any(isinstance(s, UVar) and s.name == y for _, s in mu_positions(m)) else Var(z)
    return mu_subst(m, y, target)


def mu_rename_name(m: MuTerm, b: str, a: str) -> MuTerm:
    """``M{b:=a}`` on free occurrences of the name ``b``."""
    return _struct(m, b, lambda o: o, a)


def struct_subst(m: MuTerm, a: str, n: MuTerm, left: bool = False) -> MuTerm:
    """Structural substitution: ``[a]O`` becomes ``[a](O N)``, or ``[a](N O)`` when ``left``."""
    if left:
        return _struct(m, a, lambda o: App(n, o), a, n)
    return _struct(m, a, lambda o: App(o, n), a, n)


def _struct(m: MuTerm, a: str, wrap: Callable[[MuTerm], MuTerm], new: str, n: MuTerm | None = None) -> MuTerm:
    fv_n, fn_n = mu_free(n) if n is not None else (frozenset(), frozenset())
    avoid = _all_names(m) | ({new} if n is None else _all_names(n) | {new})

    def go(t: MuTerm) -> MuTerm:
        match t:
            case Var() | UVar():
                return t
            case Name(b, body):
                body = go(body)
                if b == a:
                    return Name(new, wrap(body))
                return Name(b, body)
            case Mu(b, body):
                if b == a:
                    return t
                if b in fn_n or b == new:
                    c = _fresh_src(b, avoid)
                    avoid.add(c)
                    body = mu_rename_name(body, b, c)
                    b = c
                return Mu(b, go(body))
            case Lam(y, body) | ILam(y, body):
                if y in fv_n:
                    z = _fresh_src(y, avoid)
                    avoid.add(z)
                    body = mu_rename_var(body, y, z)
                    y = z
                return type(t)(y, go(body))
            case App(f, x) | IApp(f, x):
                return type(t)(go(f), go(x))
        raise TypeError(t)

    return go(m)


def mu_alpha_key(m: MuTerm) -> str:
    """A string equal for exactly the alpha-equivalent terms."""
    out: list[str] = []

    def go(t: MuTerm, env: dict[str, str]) -> None:
        match t:
            case Var(x):
                out.append(env.get(x, "v:" + x))
            case UVar(x):
                out.append(env.get(x, "u:" + x))
            case Lam(x, b) | ILam(x, b):
                i = f"#{len(env)}"
                out.append(type(t).__name__ + "(")
                go(b, {**env, x: i})
                out.append(")")
            case Mu(a, b):
                i = f"#{len(env)}"
                out.append("Mu(")
                go(b, {**env, "name:" + a: i})
                out.append(")")
            case Name(a, b):
                out.append("Name(" + env.get("name:" + a, "n:" + a) + ",")
                go(b, env)
                out.append(")")
            case App(f, a) | IApp(f, a):
                out.append(type(t).__name__ + "(")
                go(f, env)
                out.append(",")
                go(a, env)
                out.append(")")

    go(m, {})
    return "".join(out)


def mu_alpha_eq(m: MuTerm, n: MuTerm) -> bool:
    return mu_alpha_key(m) == mu_alpha_key(n)


# ---------------------------------------------------------------------------
# λμ typing
# ---------------------------------------------------------------------------


@dataclass
class MuTyping:
    """``Γ ⊢ M : A | Σ`` with every type ground."""

    type: CType
    gamma: dict[str, CType]
    sigma: dict[str, CType]

    def judgement(self, m: MuTerm) -> str:
        g = ", ".join(f"{x}:{show_ctype(a)}" for x, a in sorted(self.gamma.items()))
        s = ", ".join(f"{x}:{show_ctype(a)}" for x, a in sorted(self.sigma.items()))
        return f"{g} ⊢ {show_mu(m)} : {show_ctype(self.type)} | {s}"


def mu_infer(m: MuTerm, gamma: Mapping[str, CType] | None = None, sigma: Mapping[str, CType] | None = None) -> MuTyping:
    """Principal typing of a λμ term.

    Declared variables and names keep their types; undeclared free ones are
    given fresh type variables, which are grounded to atoms at the end.
    """
    u = _Unifier()
    g = dict(gamma or {})
    s = dict(sigma or {})
    free_g: dict[str, CType] = {}
    free_s: dict[str, CType] = {}

    def look(x, env, frees, kind):
        if x in env:
            return env[x]
        if x not in frees:
            frees[x] = u.new()
        return frees[x]

    def go(t: MuTerm, env: dict[str, CType], names: dict[str, CType]) -> CType:
        match t:
            case Var(x):
                return env[x] if x in env else look(x, g, free_g, "variable")
            case Lam(x, b):
                a = u.new()
                return Arrow(a, go(b, {**env, x: a}, names))
            case App(f, a):
                tf = go(f, env, names)
                ta = go(a, env, names)
                r = u.new()
                u.unify(tf, Arrow(ta, r), f"application {show_mu(t)}")
                return r
            case Name(a, b):
                tb = go(b, env, names)
                ta = names[a] if a in names else look(a, s, free_s, "name")
                u.unify(tb, ta, f"naming {show_mu(t)}")
                return CBOT
            case Mu(a, b):
                ta = u.new()
                tb = go(b, env, {**names, a: ta})
                u.unify(tb, CBOT, f"body of {show_mu(t)}")
                return ta
        raise UntypedSource(f"{show_mu(t)} is not a λμ term")

    ty = go(m, {}, {})
    fv, fn = mu_free(m)
    taken = set().union(*(_atoms(a) for a in list(g.values()) + list(s.values())))
    ground = _grounder(u, taken)
    gam = {x: ground(g[x] if x in g else free_g[x]) for x in fv}
    sig = {a: ground(s[a] if a in s else free_s[a]) for a in fn}
    return MuTyping(ground(ty), gam, sig)


def mu_check(gamma: Mapping[str, CType], sigma: Mapping[str, CType], m: MuTerm) -> CType:
    """The type of ``M`` under ``Γ`` and ``Σ``; every free symbol must be declared."""
    fv, fn = mu_free(m)
    missing = sorted((fv - set(gamma)) | (fn - set(sigma)))
    if missing:
        raise ClassicalTypeError(f"undeclared: {', '.join(missing)}")
    return mu_infer(m, gamma, sigma).type


# ---------------------------------------------------------------------------
# λμ and λμ_V reduction
# ---------------------------------------------------------------------------


def is_value(m: MuTerm) -> bool:
    return isinstance(m, (Var, Lam))


def _mu_contract(m: MuTerm, calculus: str) -> list[tuple[str, MuTerm]]:
    cbv = calculus == LAMBDA_MU_V
    out: list[tuple[str, MuTerm]] = []
    match m:
        case App(Lam(x, b), n) if not cbv or is_value(n):
            out.append(("beta-v" if cbv else "beta", mu_subst(b, x, n)))
    match m:
        case App(Mu(a, b), n) if not cbv or is_value(n):
            out.append(("mu-v" if cbv else "mu", Mu(a, struct_subst(b, a, n))))
    match m:
        case App(v, Mu(a, b)) if cbv and is_value(v):
            out.append(("mu-v'", Mu(a, struct_subst(b, a, v, left=True))))
    match m:
        case Name(a, Mu(b, body)):
            out.append(("rho", mu_rename_name(body, b, a)))
    match m:
        case Mu(a, Name(b, body)) if a == b and a not in mu_free(body)[1]:
            out.append(("theta", body))
    return out


def mu_step(m: MuTerm, calculus: str = LAMBDA_MU) -> list[tuple[str, MuPath, MuTerm]]:
    """Every one-step reduct, as ``(rule, position, result)``."""
    if calculus not in (LAMBDA_MU, LAMBDA_MU_V):
        raise ValueError(f"unknown calculus {calculus!r}")
    out = []
    for path, s in mu_positions(m):
        for rule, r in _mu_contract(s, calculus):
            out.append((rule, path, mu_replace(m, path, r)))
    return out


def mu_normalize(m: MuTerm, calculus: str = LAMBDA_MU, fuel: int = 10_000) -> MuTerm:
    for _ in range(fuel):
        steps = mu_step(m, calculus)
        if not steps:
            return m
        m = steps[0][2]
    raise ClassicalError(f"no normal form within {fuel} steps")


# ---------------------------------------------------------------------------
# T-translation of λμ
# ---------------------------------------------------------------------------


def t_type(a: CType) -> Formula:
    """``⊥ ↦ ⊥``, ``α ↦ α``, ``A⇒B ↦ ?!¬Aᵀ ⅋ ?Bᵀ``."""
    match a:
        case CBot():
            return BOTTOM
        case TAtom(n):
            return Atom(n)
        case Arrow(l, r):
            return Par(WhyNot(OfCourse(negate(t_type(l)))), WhyNot(t_type(r)))
    raise UnsupportedSource(f"no T-translation for type {show_ctype(a)}")


def _disjoint(m: MuTerm) -> None:
    vars_, names = set(), set()
    for _, s in mu_positions(m):
        match s:
            case Var(x) | Lam(x, _):
                vars_.add(x)
            case Name(a, _) | Mu(a, _):
                names.add(a)
    clash = vars_ & names
    if clash:
        raise UnsupportedSource(f"{', '.join(sorted(clash))} used both as a variable and as a name")


def _ofc_unr(k: str) -> Term:
    return bang(UnrVar(k))


def t_translate(m: MuTerm, k: str = "k") -> Term:
    """``Mᵀ_k``; variables, names and ``k`` become unrestricted variables."""
    _disjoint(m)
    return _t(m, k)


def _t(m: MuTerm, k: str) -> Term:
    match m:
        case Var(x):
            return Contradiction(UnrVar(x), _ofc_unr(k))
        case Lam(x, b):
            k1, a, c = fresh("k"), fresh("a"), fresh("b")
            body = OfcElim(OfcElim(_t(b, k1), x, LinVar(a)), k1, LinVar(c))
            return Contradiction(ParIntro(a, c, body), UnrVar(k))
        case App(f, n):
            k1, k2 = fresh("k"), fresh("k")
            arg = Pair(bang(WhyIntro(k2, _t(n, k2))), _ofc_unr(k))
            return subst_unrestricted(_t(f, k1), k1, arg)
        case Name(a, b):
            k1 = fresh("k")
            return Contradiction(subst_unrestricted(_t(b, k1), k1, UnrVar(a)), UnrVar(k))
        case Mu(a, b):
            k1 = fresh("k")
            return subst_unrestricted(subst_unrestricted(_t(b, k1), k1, STAR), a, UnrVar(k))
    raise UnsupportedSource(f"{show_mu(m)} is not a λμ term")


def t_env(typing: MuTyping, k: str = "k") -> dict[str, Formula]:
    """The unrestricted context ``?Γᵀ, ¬Σᵀ, k:¬Aᵀ`` of the target judgement."""
    env = {x: WhyNot(t_type(a)) for x, a in typing.gamma.items()}
    env.update({a: negate(t_type(b)) for a, b in typing.sigma.items()})
    env[k] = negate(t_type(typing.type))
    return env


# ---------------------------------------------------------------------------
# Q-translation of λμ_V
# ---------------------------------------------------------------------------


def q_type(a: CType) -> Formula:
    """``⊥ ↦ ⊥``, ``α ↦ !α``, ``A⇒B ↦ !(¬A^Q ⅋ ?B^Q)``.

    ``⊥`` is sent to ``⊥`` rather than ``!⊥`` so that the clauses for
    ``[a]M`` and ``μa.M``, whose continuations have type ``1``, are well typed.
    """
    if isinstance(a, CBot):
        return BOTTOM
    return OfCourse(q2_type(a))


def q2_type(a: CType) -> Formula:
    """The formula under the ``!`` of ``A^Q``; undefined for ``⊥``."""
    match a:
        case TAtom(n):
            return Atom(n)
        case Arrow(l, r):
            return Par(negate(q_type(l)), WhyNot(q_type(r)))
    raise UnsupportedSource(f"values of type {show_ctype(a)} have no Q-translation")


def q_value(v: MuTerm) -> Term:
    """``V^{Q₂}`` for a value ``V``."""
    match v:
        case Var(x):
            return UnrVar(x)
        case Lam(x, b):
            k, a, c = fresh("k"), fresh("a"), fresh("b")
            return ParIntro(a, c, OfcElim(OfcElim(_q(b, k), x, LinVar(a)), k, LinVar(c)))
    raise ClassicalError(f"{show_mu(v)} is not a value")


def q_translate(m: MuTerm, k: str = "k") -> Term:
    """``M^Q_k``."""
    _disjoint(m)
    return _q(m, k)


def _q(m: MuTerm, k: str) -> Term:
    if is_value(m):
        return Contradiction(bang(q_value(m)), UnrVar(k))
    match m:
        case App(f, n):
            k1, k2, v = fresh("k"), fresh("k"), fresh("v")
            inner = subst_unrestricted(_q(n, k1), k1, ContraApp(UnrVar(v), _ofc_unr(k)))
            return subst_unrestricted(_q(f, k2), k2, WhyIntro(v, inner))
        case Name(a, b):
            k1 = fresh("k")
            return Contradiction(subst_unrestricted(_q(b, k1), k1, UnrVar(a)), UnrVar(k))
        case Mu(a, b):
            k1 = fresh("k")
            return subst_unrestricted(subst_unrestricted(_q(b, k1), k1, STAR), a, UnrVar(k))
    raise UnsupportedSource(f"{show_mu(m)} is not a λμ term")


def q_env(typing: MuTyping, k: str = "k") -> dict[str, Formula]:
    """The unrestricted context ``Γ^{Q₂}, ¬Σ^Q, k:¬A^Q``."""
    env = {x: q2_type(a) for x, a in typing.gamma.items()}
    env.update({a: negate(q_type(b)) for a, b in typing.sigma.items()})
    env[k] = negate(q_type(typing.type))
    return env


def q_supported(m: MuTerm) -> bool:
    """No term variable (free or bound) has type ⊥ in the principal typing."""
    try:
        _q_binder_types(m)
        return True
    except (UnsupportedSource, ClassicalTypeError):
        return False


def _q_binder_types(m: MuTerm) -> None:
    ty = mu_infer(m)
    for a in ty.gamma.values():
        q2_type(a) if not isinstance(a, CBot) else _raise_bot()
    for path, s in mu_positions(m):
        if isinstance(s, Lam):
            # the binder's type is the domain of the abstraction's type
            sub = _typing_at(m, path, ty)
            if isinstance(sub, Arrow) and isinstance(sub.left, CBot):
                _raise_bot()


def _raise_bot():
    raise UnsupportedSource("a term variable of type bot has no Q-translation")


def _typing_at(m: MuTerm, path: MuPath, ty: MuTyping) -> CType:
    """Type of the subterm at ``path`` inside the principal typing of ``m``."""
    u = _Unifier()
    found: list[CType] = []
    free_g = {x: a for x, a in ty.gamma.items()}
    free_s = {a: b for a, b in ty.sigma.items()}

    def go(t: MuTerm, env, names, p) -> CType:
        match t:
            case Var(x):
                r = env.get(x, free_g.get(x))
            case Lam(x, b):
                a = u.new()
                r = Arrow(a, go(b, {**env, x: a}, names, p + (0,)))
            case App(f, a):
                tf = go(f, env, names, p + (0,))
                ta = go(a, env, names, p + (1,))
                r = u.new()
                u.unify(tf, Arrow(ta, r), "application")
            case Name(a, b):
                tb = go(b, env, names, p + (0,))
                u.unify(tb, names.get(a, free_s.get(a)), "naming")
                r = CBOT
            case Mu(a, b):
                ta = u.new()
                u.unify(go(b, env, {**names, a: ta}, p + (0,)), CBOT, "mu")
                r = ta
            case _:
                raise UntypedSource(show_mu(t))
        if p == path:
            found.append(r)
        return r

    u.unify(go(m, {}, {}, ()), ty.type, "root")
    return u.full(found[0])


# ---------------------------------------------------------------------------
# λ̄μμ̃
# ---------------------------------------------------------------------------


class CHTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show_ch(self)


@dataclass(frozen=True, slots=True)
class CVar(CHTerm):
    name: str


@dataclass(frozen=True, slots=True)
class CMu(CHTerm):
    """``μα.c`` (a term)."""

    covar: str
    cmd: "Cmd"


@dataclass(frozen=True, slots=True)
class CLam(CHTerm):
    var: str
    body: CHTerm


@dataclass(frozen=True, slots=True)
class CoVar(CHTerm):
    name: str


@dataclass(frozen=True, slots=True)
class CoApp(CHTerm):
    """``v · e`` (a co-term)."""

    arg: CHTerm
    rest: CHTerm


@dataclass(frozen=True, slots=True)
class Cmd(CHTerm):
    """``⟨v | e⟩``."""

    term: CHTerm
    coterm: CHTerm


def ch_category(x: CHTerm) -> str:
    if isinstance(x, (CVar, CMu, CLam)):
        return "term"
    if isinstance(x, (CoVar, CoApp)):
        return "coterm"
    return "command"


def ch_children(x: CHTerm) -> tuple[CHTerm, ...]:
    match x:
        case CVar() | CoVar():
            return ()
        case CMu(_, c):
            return (c,)
        case CLam(_, b):
            return (b,)
        case CoApp(v, e) | Cmd(v, e):
            return (v, e)
    raise TypeError(x)


def ch_with_children(x: CHTerm, kids) -> CHTerm:
    match x:
        case CVar() | CoVar():
            return x
        case CMu(a, _):
            return CMu(a, kids[0])
        case CLam(v, _):
            return CLam(v, kids[0])
        case CoApp():
            return CoApp(kids[0], kids[1])
        case Cmd():
            return Cmd(kids[0], kids[1])
    raise TypeError(x)


def ch_positions(x: CHTerm, prefix: MuPath = ()) -> Iterator[tuple[MuPath, CHTerm]]:
    yield prefix, x
    for i, c in enumerate(ch_children(x)):
        yield from ch_positions(c, prefix + (i,))


def ch_replace(x: CHTerm, path: MuPath, new: CHTerm) -> CHTerm:
    if not path:
        return new
    kids = list(ch_children(x))
    kids[path[0]] = ch_replace(kids[path[0]], path[1:], new)
    return ch_with_children(x, kids)


def show_ch(x: CHTerm) -> str:
    match x:
        case CVar(n) | CoVar(n):
            return n
        case CMu(a, c):
            return f"mu {a}. {show_ch(c)}"
        case CLam(v, b):
            return f"\\{v}. {show_ch(b)}"
        case CoApp(v, e):
            s = show_ch(v)
            if isinstance(v, (CMu, CLam)):
                s = f"({s})"
            return f"{s} . {show_ch(e)}"
        case Cmd(v, e):
            return f"<{show_ch(v)} | {show_ch(e)}>"
    raise TypeError(x)


def ch_free(x: CHTerm) -> tuple[frozenset[str], frozenset[str]]:
    """Free variables and free co-variables."""
    match x:
        case CVar(n):
            return frozenset([n]), frozenset()
        case CoVar(n):
            return frozenset(), frozenset([n])
        case CMu(a, c):
            v, n = ch_free(c)
            return v, n - {a}
        case CLam(y, b):
            v, n = ch_free(b)
            return v - {y}, n
        case CoApp(a, b) | Cmd(a, b):
            v1, n1 = ch_free(a)
            v2, n2 = ch_free(b)
            return v1 | v2, n1 | n2
    raise TypeError(x)


def _ch_names(x: CHTerm) -> set[str]:
    out = set()
    for _, s in ch_positions(x):
        match s:
            case CVar(n) | CoVar(n) | CMu(n, _) | CLam(n, _):
                out.add(n)
    return out


def ch_subst(x: CHTerm, name: str, s: CHTerm) -> CHTerm:
    """``x{name:=s}``: a term for a variable or a co-term for a co-variable."""
    covar = ch_category(s) == "coterm"
    fv, fc = ch_free(s)
    avoid = _ch_names(x) | _ch_names(s)

    def go(t: CHTerm) -> CHTerm:
        match t:
            case CVar(n):
                return s if (n == name and not covar) else t
            case CoVar(n):
                return s if (n == name and covar) else t
            case CMu(a, c):
                if covar and a == name:
                    return t
                if a in fc:
                    b = _fresh_src(a, avoid)
                    avoid.add(b)
                    c = ch_subst(c, a, CoVar(b))
                    a = b
                return CMu(a, go(c))
            case CLam(y, b):
                if not covar and y == name:
                    return t
                if y in fv:
                    z = _fresh_src(y, avoid)
                    avoid.add(z)
                    b = ch_subst(b, y, CVar(z))
                    y = z
                return CLam(y, go(b))
            case CoApp(v, e):
                return CoApp(go(v), go(e))
            case Cmd(v, e):
                return Cmd(go(v), go(e))
        raise TypeError(t)

    return go(x)


def ch_alpha_key(x: CHTerm) -> str:
    out: list[str] = []

    def go(t: CHTerm, env: dict[str, str]) -> None:
        match t:
            case CVar(n):
                out.append(env.get("v:" + n, "v:" + n))
            case CoVar(n):
                out.append(env.get("c:" + n, "c:" + n))
            case CMu(a, c):
                out.append("Mu(")
                go(c, {**env, "c:" + a: f"#{len(env)}"})
                out.append(")")
            case CLam(y, b):
                out.append("Lam(")
                go(b, {**env, "v:" + y: f"#{len(env)}"})
                out.append(")")
            case CoApp(a, b) | Cmd(a, b):
                out.append(type(t).__name__ + "(")
                go(a, env)
                out.append(",")
                go(b, env)
                out.append(")")

    go(x, {})
    return "".join(out)


@dataclass
class CHTyping:
    """The judgement of a λ̄μμ̃ expression with ground types.

    ``type`` is ``None`` for commands, the type of the term for terms and the
    type consumed for co-terms.
    """

    category: str
    type: CType | None
    gamma: dict[str, CType]
    delta: dict[str, CType]


def ch_check(x: CHTerm, gamma: Mapping[str, CType] | None = None, delta: Mapping[str, CType] | None = None) -> CHTyping:
    """Type a term, co-term or command with rules VarR, VarL, AppL, ActivR, Abs and cut."""
    u = _Unifier()
    g = dict(gamma or {})
    d = dict(delta or {})
    fg: dict[str, CType] = {}
    fd: dict[str, CType] = {}

    def look(n, decl, frees):
        if n in decl:
            return decl[n]
        if n not in frees:
            frees[n] = u.new()
        return frees[n]

    def go(t: CHTerm, env, cenv) -> CType | None:
        match t:
            case CVar(n):
                return env[n] if n in env else look(n, g, fg)
            case CoVar(n):
                return cenv[n] if n in cenv else look(n, d, fd)
            case CLam(y, b):
                a = u.new()
                return Arrow(a, go(b, {**env, y: a}, cenv))
            case CMu(a, c):
                ta = u.new()
                go(c, env, {**cenv, a: ta})
                return ta
            case CoApp(v, e):
                return Arrow(go(v, env, cenv), go(e, env, cenv))
            case Cmd(v, e):
                u.unify(go(v, env, cenv), go(e, env, cenv), f"cut {show_ch(t)}")
                return None
        raise UntypedSource(str(t))

    if ch_category(x) == "term" and isinstance(x, CoVar):
        raise UntypedSource("category mismatch")
    ty = go(x, {}, {})
    fv, fc = ch_free(x)
    taken = set().union(*(_atoms(a) for a in list(g.values()) + list(d.values())))
    ground = _grounder(u, taken)
    return CHTyping(
        ch_category(x),
        None if ty is None else ground(ty),
        {n: ground(g[n] if n in g else fg[n]) for n in fv},
        {n: ground(d[n] if n in d else fd[n]) for n in fc},
    )


def _ch_contract(x: CHTerm) -> list[tuple[str, CHTerm]]:
    match x:
        case Cmd(CLam(y, v1), CoApp(v2, e)):
            return [("lambda", Cmd(ch_subst(v1, y, v2), e))]
        case Cmd(CMu(a, c), e):
            return [("mu", ch_subst(c, a, e))]
    return []


def ch_step(x: CHTerm) -> list[tuple[str, MuPath, CHTerm]]:
    out = []
    for path, s in ch_positions(x):
        for rule, r in _ch_contract(s):
            out.append((rule, path, ch_replace(x, path, r)))
    return out


def ch_t_translate(x: CHTerm) -> Term:
    """The T-translation of a term, co-term or command."""
    match x:
        case CVar(n):
            return UnrVar(n)
        case CMu(a, c):
            return WhyIntro(a, ch_t_translate(c))
        case CLam(y, v):
            u, a, b = fresh("u"), fresh("a"), fresh("b")
            inner = OfcElim(Contradiction(ch_t_translate(v), LinVar(b)), y, LinVar(a))
            return WhyIntro(u, Contradiction(UnrVar(u), ParIntro(a, b, inner)))
        case CoVar(n):
            return _ofc_unr(n)
        case CoApp(v, e):
            return bang(Pair(bang(ch_t_translate(v)), ch_t_translate(e)))
        case Cmd(v, e):
            return Contradiction(ch_t_translate(v), ch_t_translate(e))
    raise UnsupportedSource(str(x))


def ch_t_judgement(typing: CHTyping) -> tuple[dict[str, Formula], Formula]:
    """Unrestricted context ``?Γᵀ, (Δᵀ)^⊥`` and the target type for the category."""
    for a in list(typing.gamma.values()) + list(typing.delta.values()) + ([typing.type] if typing.type else []):
        if _has_bot(a):
            raise UnsupportedSource("λ̄μμ̃ types have no ⊥")
    env = {x: WhyNot(t_type(a)) for x, a in typing.gamma.items()}
    env.update({a: negate(t_type(b)) for a, b in typing.delta.items()})
    if typing.category == "command":
        return env, BOTTOM
    if typing.category == "coterm":
        return env, OfCourse(negate(t_type(typing.type)))
    return env, WhyNot(t_type(typing.type))


def _has_bot(a: CType) -> bool:
    match a:
        case CBot():
            return True
        case Arrow(l, r) | LinArrow(l, r):
            return _has_bot(l) or _has_bot(r)
    return False


# ---------------------------------------------------------------------------
# μDCLL
# ---------------------------------------------------------------------------


@dataclass
class DcllTyping:
    """``Δ ; Γ ⊢ M : A | Σ`` with ground types."""

    type: CType
    delta: dict[str, CType]
    gamma: dict[str, CType]
    sigma: dict[str, CType]


def dcll_check(
    m: MuTerm,
    delta: Mapping[str, CType] | None = None,
    gamma: Mapping[str, CType] | None = None,
    sigma: Mapping[str, CType] | None = None,
) -> DcllTyping:
    """Dual-context typing: linear variables and names are used exactly once."""
    u = _Unifier()
    decl_d, decl_g, decl_s = dict(delta or {}), dict(gamma or {}), dict(sigma or {})
    fd: dict[str, CType] = {}
    fg: dict[str, CType] = {}
    fs: dict[str, CType] = {}

    def look(n, decl, frees):
        if n in decl:
            return decl[n]
        if n not in frees:
            frees[n] = u.new()
        return frees[n]

    def go(t: MuTerm, uenv, lenv, nenv) -> CType:
        match t:
            case UVar(n):
                return uenv[n] if n in uenv else look(n, decl_d, fd)
            case Var(n):
                return lenv[n] if n in lenv else look(n, decl_g, fg)
            case ILam(x, b):
                a = u.new()
                return Arrow(a, go(b, {**uenv, x: a}, lenv, nenv))
            case Lam(x, b):
                a = u.new()
                return LinArrow(a, go(b, uenv, {**lenv, x: a}, nenv))
            case IApp(f, a):
                fv, fn = _linear_free(a)
                if fv or fn:
                    raise ClassicalTypeError(f"argument of intuitionistic application {show_mu(t)} uses linear resources")
                r = u.new()
                u.unify(go(f, uenv, lenv, nenv), Arrow(go(a, uenv, lenv, nenv), r), f"application {show_mu(t)}")
                return r
            case App(f, a):
                r = u.new()
                u.unify(go(f, uenv, lenv, nenv), LinArrow(go(a, uenv, lenv, nenv), r), f"application {show_mu(t)}")
                return r
            case Name(a, b):
                tb = go(b, uenv, lenv, nenv)
                u.unify(tb, nenv[a] if a in nenv else look(a, decl_s, fs), f"naming {show_mu(t)}")
                return CBOT
            case Mu(a, b):
                ta = u.new()
                u.unify(go(b, uenv, lenv, {**nenv, a: ta}), CBOT, f"body of {show_mu(t)}")
                return ta
        raise UntypedSource(show_mu(t))

    _dcll_linearity(m)
    ty = go(m, {}, {}, {})
    uv, lv, names = _dcll_free(m)
    taken = set().union(*(_atoms(a) for a in list(decl_d.values()) + list(decl_g.values()) + list(decl_s.values())))
    ground = _grounder(u, taken)
    return DcllTyping(
        ground(ty),
        {n: ground(decl_d[n] if n in decl_d else fd[n]) for n in uv},
        {n: ground(decl_g[n] if n in decl_g else fg[n]) for n in lv},
        {n: ground(decl_s[n] if n in decl_s else fs[n]) for n in names},
    )


def _dcll_free(m: MuTerm) -> tuple[set[str], set[str], set[str]]:
    uv, lv, nm = set(), set(), set()

    def go(t, bu, bl, bn):
        match t:
            case UVar(n):
                if n not in bu:
                    uv.add(n)
            case Var(n):
                if n not in bl:
                    lv.add(n)
            case ILam(x, b):
                go(b, bu | {x}, bl, bn)
            case Lam(x, b):
                go(b, bu, bl | {x}, bn)
            case Name(a, b):
                if a not in bn:
                    nm.add(a)
                go(b, bu, bl, bn)
            case Mu(a, b):
                go(b, bu, bl, bn | {a})
            case App(f, a) | IApp(f, a):
                go(f, bu, bl, bn)
                go(a, bu, bl, bn)

    go(m, frozenset(), frozenset(), frozenset())
    return uv, lv, nm


def _linear_free(m: MuTerm) -> tuple[set[str], set[str]]:
    _, lv, nm = _dcll_free(m)
    return lv, nm


def _dcll_linearity(m: MuTerm) -> None:
    """Every linear variable and every name occurs exactly once in its scope."""

    def count_in(t: MuTerm, name: str, is_name: bool) -> int:
        match t:
            case Var(n):
                return int(not is_name and n == name)
            case UVar():
                return 0
            case Lam(x, b):
                return 0 if (not is_name and x == name) else count_in(b, name, is_name)
            case ILam(_, b):
                return count_in(b, name, is_name)
            case Name(a, b):
                return int(is_name and a == name) + count_in(b, name, is_name)
            case Mu(a, b):
                return 0 if (is_name and a == name) else count_in(b, name, is_name)
            case App(f, a) | IApp(f, a):
                return count_in(f, name, is_name) + count_in(a, name, is_name)
        return 0

    for _, s in mu_positions(m):
        match s:
            case Lam(x, b) if count_in(b, x, False) != 1:
                raise ClassicalTypeError(f"linear variable {x} must be used exactly once in {show_mu(s)}")
            case Mu(a, b) if count_in(b, a, True) != 1:
                raise ClassicalTypeError(f"name {a} must be used exactly once in {show_mu(s)}")
    _, lv, nm = _dcll_free(m)
    for x in lv:
        if count_in(m, x, False) != 1:
            raise ClassicalTypeError(f"free linear variable {x} must occur exactly once")
    for a in nm:
        if count_in(m, a, True) != 1:
            raise ClassicalTypeError(f"free name {a} must occur exactly once")


def _dcll_contract(m: MuTerm) -> list[tuple[str, MuTerm]]:
    out: list[tuple[str, MuTerm]] = []
    match m:
        case IApp(ILam(u, b), n):
            out.append(("beta-int", mu_subst(b, u, n)))
        case App(Lam(x, b), n):
            out.append(("beta-lin", mu_subst(b, x, n)))
    match m:
        case App(n, Mu(a, b)):
            out.append(("mu-r", Mu(a, struct_subst(b, a, n, left=True))))
    match m:
        case Mu(a, Name(b, body)) if a == b and a not in mu_free(body)[1]:
            out.append(("theta", body))
    return out


def dcll_equal(m: MuTerm) -> list[tuple[str, MuPath, MuTerm]]:
    """Instances of the four equations, oriented left to right, at every position."""
    out = []
    for path, s in mu_positions(m):
        for rule, r in _dcll_contract(s):
            out.append((rule, path, mu_replace(m, path, r)))
    return out


def dcll_type(a: CType) -> Formula:
    """``A⊃B ↦ ?¬Aᴴ ⅋ Bᴴ`` and ``A⊸B ↦ ¬Aᴴ ⅋ Bᴴ``."""
    match a:
        case CBot():
            return BOTTOM
        case TAtom(n):
            return Atom(n)
        case Arrow(l, r):
            return Par(WhyNot(negate(dcll_type(l))), dcll_type(r))
        case LinArrow(l, r):
            return Par(negate(dcll_type(l)), dcll_type(r))
    raise UnsupportedSource(show_ctype(a))


def dcll_translate(m: MuTerm) -> Term:
    match m:
        case Var(x):
            return LinVar(x)
        case UVar(u):
            return UnrVar(u)
        case ILam(u, b):
            a, k = fresh("a"), fresh("k")
            return ParIntro(a, k, Contradiction(OfcElim(dcll_translate(b), u, LinVar(a)), LinVar(k)))
        case IApp(f, n):
            return MellApp(dcll_translate(f), bang(dcll_translate(n)))
        case Lam(x, b):
            k = fresh("k")
            return ParIntro(x, k, Contradiction(dcll_translate(b), LinVar(k)))
        case App(f, n):
            return MellApp(dcll_translate(f), dcll_translate(n))
        case Name(a, b):
            return Contradiction(dcll_translate(b), LinVar(a))
        case Mu(a, b):
            return contra_subst(dcll_translate(b), a, STAR, MELL)
    raise UnsupportedSource(show_mu(m))


def dcll_judgement(typing: DcllTyping) -> tuple[dict[str, Formula], dict[str, Formula], Formula]:
    """``Δᴴ ; Γᴴ, ¬Σᴴ`` and ``Aᴴ``."""
    unr = {u: dcll_type(a) for u, a in typing.delta.items()}
    lin = {x: dcll_type(a) for x, a in typing.gamma.items()}
    lin.update({a: negate(dcll_type(b)) for a, b in typing.sigma.items()})
    return unr, lin, dcll_type(typing.type)


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

EQUAL, EQUIV, STEP, REDUCES, CONVERTIBLE = "=", "≡", "→", "↠", "≐"

T_RELATION = {"beta": REDUCES, "mu": EQUAL, "rho": EQUIV, "theta": EQUIV}
Q_RELATION = {"beta-v": CONVERTIBLE, "mu-v": CONVERTIBLE, "mu-v'": CONVERTIBLE, "rho": CONVERTIBLE, "theta": CONVERTIBLE}
CH_RELATION = {"lambda": REDUCES, "mu": REDUCES}
DCLL_RELATION = {"beta-int": REDUCES, "beta-lin": STEP, "mu-r": EQUIV, "theta": EQUIV}


@dataclass
class SimReport:
    """Outcome of checking that two images stand in ``relation``.

    ``verdict`` is ``Verified``, ``Refuted`` (the search space was exhausted)
    or ``Unknown`` (fuel ran out).  ``witness`` lists the intermediate terms.
    """

    relation: str
    verdict: str
    witness: list[Term] = field(default_factory=list)
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == "Verified"


def simulate_verify(
    lhs: Term,
    rhs: Term,
    relation: str,
    unr: Mapping[str, Formula] | None = None,
    lin: Mapping[str, Formula] | None = None,
    fuel: int = 10_000,
) -> SimReport:
    """Check ``lhs R rhs`` for ``R`` among ``=``, ``≡``, ``→``, ``↠`` and ``≐``.

    ``→`` and ``↠`` are read modulo ≡: some pre-reduction path from ``lhs``
    (one step, or any number) ends in a term ≡ ``rhs``.  ``≐`` is decided by
    comparing normal forms up to ≡, which is complete for conversion since
    reduction modulo ≡ is confluent and strongly normalizing on typed terms.
    """
    from mell.equivalence import EQUIVALENT, UNKNOWN, equiv_check
    from mell.reduction import FuelExhausted, _normal_key, _path_to, _reachable, is_normal, pre_reducts

    def same(x: Term, y: Term) -> str:
        if _normal_key(x, MELL)[0] == _normal_key(y, MELL)[0]:
            return EQUIVALENT
        return equiv_check(x, y, unr, lin, fuel=fuel).verdict

    if relation == EQUAL:
        ok = alpha_eq(lhs, rhs)
        return SimReport(relation, "Verified" if ok else "Refuted", [lhs, rhs] if ok else [])
    if relation == EQUIV:
        res = equiv_check(lhs, rhs, unr, lin, fuel=fuel)
        verdict = {"Equivalent": "Verified", "NotEquivalent": "Refuted"}.get(res.verdict, "Unknown")
        return SimReport(relation, verdict, [lhs, rhs], f"{len(res.path)} axiom steps")
    if relation == STEP:
        unsure = False
        for r, s in pre_reducts(lhs, MELL):
            v = same(s, rhs)
            if v == EQUIVALENT:
                return SimReport(relation, "Verified", [lhs, s, rhs], f"fired {r.axiom}")
            unsure = unsure or v == UNKNOWN
        return SimReport(relation, "Unknown" if unsure else "Refuted")
    if relation not in (REDUCES, CONVERTIBLE):
        raise ValueError(f"unknown relation {relation!r}")
    try:
        nodes, parent, order = _reachable(lhs, MELL, fuel)
    except FuelExhausted:
        return SimReport(relation, "Unknown", detail="reduction graph too large")
    target = _normal_key(rhs, MELL)[0]
    if relation == REDUCES:
        if target in nodes:
            return SimReport(relation, "Verified", _path_to(nodes, parent, target) + [rhs])
        unsure = False
        for k in order:
            v = equiv_check(nodes[k], rhs, unr, lin, fuel=fuel).verdict
            if v == EQUIVALENT:
                return SimReport(relation, "Verified", _path_to(nodes, parent, k) + [rhs])
            unsure = unsure or v == UNKNOWN
        return SimReport(relation, "Unknown" if unsure else "Refuted")
    try:
        nodes2, parent2, order2 = _reachable(rhs, MELL, fuel)
    except FuelExhausted:
        return SimReport(relation, "Unknown", detail="reduction graph too large")
    common = next((k for k in order if k in nodes2), None)
    if common is not None:
        path = _path_to(nodes, parent, common) + _path_to(nodes2, parent2, common)[::-1][1:]
        return SimReport(relation, "Verified", path)
    nf1 = [k for k in order if is_normal(nodes[k], MELL)]
    nf2 = [k for k in order2 if is_normal(nodes2[k], MELL)]
    unsure = False
    for a in nf1:
        for b in nf2:
            v = equiv_check(nodes[a], nodes2[b], unr, lin, fuel=fuel).verdict
            if v == EQUIVALENT:
                path = _path_to(nodes, parent, a) + _path_to(nodes2, parent2, b)[::-1]
                return SimReport(relation, "Verified", path)
            unsure = unsure or v == UNKNOWN
    return SimReport(relation, "Unknown" if unsure else "Refuted")


# ---------------------------------------------------------------------------
# Checking a whole source step
# ---------------------------------------------------------------------------


@dataclass
class StepCheck:
    calculus: str
    translation: str
    rule: str
    source: object
    target: object
    report: SimReport

    @property
    def ok(self) -> bool:
        return self.report.ok


def check_translation_type(m: MuTerm, translation: str = "T", k: str = "k"):
    """Re-check the image of ``M`` at the judgement its type should have.

    Returns the λ_MELL derivation.  ``translation`` is ``T`` or ``Q`` for λμ.
    """
    from mell.typing import check

    ty = mu_infer(m)
    if translation == "T":
        t, env = t_translate(m, k), t_env(ty, k)
    elif translation == "Q":
        if not q_supported(m):
            raise UnsupportedSource("term variable of type bot")
        t, env = q_translate(m, k), q_env(ty, k)
    else:
        raise ValueError(f"unknown translation {translation!r}")
    return check(t, env, {}, MELL, BOTTOM)[1]


def check_mu_steps(m: MuTerm, translation: str = "T", fuel: int = 10_000, k: str = "k") -> list[StepCheck]:
    """Translate both ends of every one-step reduct of ``M`` and verify the stated relation."""
    calculus = LAMBDA_MU if translation == "T" else LAMBDA_MU_V
    table = T_RELATION if translation == "T" else Q_RELATION
    tr = t_translate if translation == "T" else q_translate
    envf = t_env if translation == "T" else q_env
    ty = mu_infer(m)
    env = envf(ty, k)
    src = tr(m, k)
    out = []
    for rule, _, n in mu_step(m, calculus):
        # the reduct may have lost free symbols but keeps the source's context
        report = simulate_verify(src, tr(n, k), table[rule], env, {}, fuel)
        out.append(StepCheck(calculus, translation, rule, m, n, report))
    return out


def check_ch_steps(c: CHTerm, fuel: int = 10_000) -> list[StepCheck]:
    ty = ch_check(c)
    env, _ = ch_t_judgement(ty)
    src = ch_t_translate(c)
    out = []
    for rule, _, d in ch_step(c):
        report = simulate_verify(src, ch_t_translate(d), CH_RELATION[rule], env, {}, fuel)
        out.append(StepCheck(LBAR_MU_MUTILDE, "T", rule, c, d, report))
    return out


def check_dcll_steps(m: MuTerm, fuel: int = 10_000) -> list[StepCheck]:
    ty = dcll_check(m)
    unr, lin, _ = dcll_judgement(ty)
    src = dcll_translate(m)
    out = []
    for rule, _, n in dcll_equal(m):
        report = simulate_verify(src, dcll_translate(n), DCLL_RELATION[rule], unr, lin, fuel)
        out.append(StepCheck(MU_DCLL, "H", rule, m, n, report))
    return out


_CORPORA = {LAMBDA_MU: "lambda_mu.txt", LBAR_MU_MUTILDE: "lbar_mu.txt", MU_DCLL: "mu_dcll.txt"}


def classical_corpus(calculus: str) -> list[MuTerm | CHTerm]:
    """The bundled source terms for ``calculus`` (λμ and λμ_V share a corpus)."""
    from importlib.resources import files

    from mell.cli.parser import parse_classical

    key = LAMBDA_MU if calculus == LAMBDA_MU_V else calculus
    text = files("mell.data").joinpath(_CORPORA[key]).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("--"):
            out.append(parse_classical(line, calculus).term)
    return out


t_translate_type = t_type
q_translate_type = q_type


def image_key(t: Term) -> str:
    return canonical_key(t)


__all__ = [name for name in dir() if not name.startswith("_")] + ["show"]
