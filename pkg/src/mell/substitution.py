"""Linear, unrestricted and contra-substitution.

Ordinary substitutions are capture avoiding: a binder is renamed only when
it would capture a free variable of the substituted term.  Contra-substitution
first gives every binder of the host term a globally fresh name, after which
the clauses can move subterms across binders without any further checks.
"""

from __future__ import annotations

from mell.syntax import (
    MELL, MLL, STAR, App, ContraApp, Contradiction, LinVar, Lambda, OfcElim, OfcIntro,
    OneElim, Pair, ParIntro, Star, TensorElim, Term, UnrVar, WhyElim, WhyIntro, children,
    fresh, free_vars, linear_occurrences, rename_bound, show, with_children,
)


class SubstitutionError(ValueError):
    pass


class NotLinear(SubstitutionError):
    pass


class VariableNotFree(SubstitutionError):
    pass


class ImpossibleCase(SubstitutionError):
    pass


# ---------------------------------------------------------------------------
# Capture-avoiding substitution
# ---------------------------------------------------------------------------


def substitute(t: Term, lin: dict[str, Term] | None = None, unr: dict[str, Term] | None = None) -> Term:
    """Simultaneous capture-avoiding substitution for linear and unrestricted variables."""
    lin = dict(lin or {})
    unr = dict(unr or {})
    if not lin and not unr:
        return t
    avoid_l: set[str] = set()
    avoid_u: set[str] = set()
    for s in list(lin.values()) + list(unr.values()):
        fl, fu = free_vars(s)
        avoid_l |= fl
        avoid_u |= fu
    return _subst(t, lin, unr, avoid_l, avoid_u)


def _bind_lin(names, lin, unr, avoid_l):
    """Drop shadowed entries and rename binders that would capture."""
    lin = {k: v for k, v in lin.items() if k not in names}
    ren = {}
    for n in names:
        if n in avoid_l and (lin or unr):
            ren[n] = fresh(n)
    if ren:
        lin = {**lin, **{n: LinVar(m) for n, m in ren.items()}}
    return lin, ren


def _subst(t, lin, unr, al, au):
    if not lin and not unr:
        return t
    match t:
        case LinVar(n):
            return lin.get(n, t)
        case UnrVar(n):
            return unr.get(n, t)
        case Star():
            return t
        case TensorElim(body, a, b, arg):
            l2, ren = _bind_lin((a, b), lin, unr, al)
            return TensorElim(_subst(body, l2, unr, al, au), ren.get(a, a), ren.get(b, b), _subst(arg, lin, unr, al, au))
        case ParIntro(a, b, body):
            l2, ren = _bind_lin((a, b), lin, unr, al)
            return ParIntro(ren.get(a, a), ren.get(b, b), _subst(body, l2, unr, al, au))
        case OfcIntro(a, body) | Lambda(a, body):
            l2, ren = _bind_lin((a,), lin, unr, al)
            return type(t)(ren.get(a, a), _subst(body, l2, unr, al, au))
        case WhyElim(body, a, arg):
            l2, ren = _bind_lin((a,), lin, unr, al)
            return WhyElim(_subst(body, l2, unr, al, au), ren.get(a, a), _subst(arg, lin, unr, al, au))
        case OfcElim(body, u, arg):
            u2, uu = _bind_unr(u, lin, unr, au)
            return OfcElim(_subst(body, lin, uu, al, au), u2, _subst(arg, lin, unr, al, au))
        case WhyIntro(u, body):
            u2, uu = _bind_unr(u, lin, unr, au)
            return WhyIntro(u2, _subst(body, lin, uu, al, au))
    return with_children(t, [_subst(c, lin, unr, al, au) for c in children(t)])


def _bind_unr(u, lin, unr, au):
    unr = {k: v for k, v in unr.items() if k != u}
    if u in au and (lin or unr):
        u2 = fresh(u)
        return u2, {**unr, u: UnrVar(u2)}
    return u, unr


def subst_linear(t: Term, a: str, s: Term) -> Term:
    """``t{a:=s}``."""
    return substitute(t, lin={a: s})


def subst_unrestricted(t: Term, u: str, s: Term) -> Term:
    """``t{u:=s}``; may copy or erase ``s``."""
    return substitute(t, unr={u: s})


# ---------------------------------------------------------------------------
# Contra-substitution
# ---------------------------------------------------------------------------


def _has(t: Term, a: str) -> bool:
    return a in free_vars(t)[0]


def _precheck(t: Term, a: str) -> None:
    occ = linear_occurrences(t)
    if occ.get(a, 0) == 0:
        raise VariableNotFree(f"{a} is not free in {show(t)}")
    dup = sorted(n for n, k in occ.items() if k > 1)
    if dup:
        raise NotLinear(f"linear variable(s) {', '.join(dup)} occur more than once in {show(t)}")


def contra_subst_mll(t: Term, a: str, s: Term) -> Term:
    """``t⦅a:=s⦆`` for λ_MLL terms."""
    _precheck(t, a)
    return _cs(rename_bound(t), a, s, MLL)


def contra_subst_mell(t: Term, a: str, s: Term) -> Term:
    """``t⦅a:=s⦆`` for λ_MELL terms."""
    _precheck(t, a)
    return _cs(rename_bound(t), a, s, MELL)


def contra_subst(t: Term, a: str, s: Term, mode: str = MELL) -> Term:
    return contra_subst_mll(t, a, s) if mode == MLL else contra_subst_mell(t, a, s)


def _pick(t1: Term, t2: Term, a: str) -> int:
    in1, in2 = _has(t1, a), _has(t2, a)
    if in1 and in2:
        raise NotLinear(f"{a} occurs in both components")
    if not (in1 or in2):
        raise VariableNotFree(f"{a} is not free")
    return 1 if in1 else 2


def _cs(t: Term, a: str, s: Term, mode: str) -> Term:
    # Binders of t are globally fresh, so no clause below can capture.
    match t:
        case LinVar(n):
            if n != a:
                raise VariableNotFree(f"{a} is not free")
            return s
        case Pair(t1, t2):
            if _pick(t1, t2, a) == 1:
                return _cs(t1, a, ContraApp(s, t2), mode)
            return _cs(t2, a, App(s, t1), mode)
        case App(t1, t2):
            if _pick(t1, t2, a) == 1:
                return _cs(t1, a, Pair(t2, s), mode)
            return _cs(t2, a, ContraApp(t1, s), mode)
        case ContraApp(t1, t2):
            if _pick(t1, t2, a) == 1:
                return _cs(t1, a, Pair(s, t2), mode)
            return _cs(t2, a, App(t1, s), mode)
        case TensorElim(t1, b, c, t2):
            if _pick(t1, t2, a) == 1:
                return TensorElim(_cs(t1, a, s, mode), b, c, t2)
            if mode == MLL:
                return _cs(t2, a, Lambda(b, _cs(t1, c, s, mode)), mode)
            return _cs(t2, a, ParIntro(b, c, Contradiction(t1, s)), mode)
        case Lambda(b, body) if mode == MLL:
            c = fresh("c")
            return TensorElim(_cs(body, a, LinVar(c), mode), b, c, s)
        case ParIntro(b, c, body) if mode == MELL:
            return TensorElim(_cs(body, a, STAR, mode), b, c, s)
        case OfcIntro() | Star():
            raise ImpossibleCase(f"{show(t)} has no free linear variables")
        case OfcElim(t1, u, t2):
            if _pick(t1, t2, a) == 1:
                return OfcElim(_cs(t1, a, s, mode), u, t2)
            return _cs(t2, a, WhyIntro(u, Contradiction(t1, s)), mode)
        case WhyIntro(u, body):
            return OfcElim(_cs(body, a, STAR, mode), u, s)
        case WhyElim(t1, b, t2):
            if _pick(t1, t2, a) == 1:
                raise ImpossibleCase("the case body only has its bound variable free")
            return OneElim(_cs(t2, a, OfcIntro(b, t1), mode), s)
        case Contradiction(t1, t2):
            if _pick(t1, t2, a) == 1:
                return OneElim(_cs(t1, a, t2, mode), s)
            return OneElim(_cs(t2, a, t1, mode), s)
        case OneElim(t1, t2):
            if _pick(t1, t2, a) == 1:
                return OneElim(_cs(t1, a, s, mode), t2)
            return _cs(t2, a, Contradiction(t1, s), mode)
    raise ImpossibleCase(f"no {mode.upper()} clause for {show(t)}")


# ---------------------------------------------------------------------------
# Typing of contra-substitution
# ---------------------------------------------------------------------------


def check_contra_typing(dt, a: str, ds, mode: str = MELL):
    """From ``Δ;Γ,a:A ⊢ t:B`` and ``Δ;Γ' ⊢ s:¬B`` derive ``Δ;Γ,Γ' ⊢ t⦅a:=s⦆ : ¬A``.

    The result is obtained by re-checking the contra-substituted term, so a
    failure here means the substitution broke typing.
    """
    from mell.syntax import negate
    from mell.typing import ContextOverlap, TypeMismatch, UnboundVariable, check

    if a not in dt.lin:
        raise UnboundVariable(f"{a} is not a linear hypothesis")
    rest = {n: f for n, f in dt.lin.items() if n != a}
    overlap = set(rest) & set(ds.lin)
    if overlap:
        raise ContextOverlap(f"linear contexts share {', '.join(sorted(overlap))}")
    if ds.type != negate(dt.type, mode):
        raise TypeMismatch(negate(dt.type, mode), ds.type, ())
    out = contra_subst(dt.term, a, ds.term, mode)
    return check(out, {**ds.unr, **dt.unr}, {**rest, **ds.lin}, mode, negate(dt.lin[a], mode))[1]
