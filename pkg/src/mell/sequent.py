"""One-sided sequent calculi for MLL and MELL, and the bridges to terms.

A proof node stores its rule, its conclusion (a list read as a multiset) and
its premises.  Checking a node searches for the principal formula and the
active formulas of its premises and verifies that the remaining formulas
agree as multisets, so proofs never need an exchange rule.

``soundness_translate`` turns a typing derivation of ``Δ;Γ ⊢ t:A`` into a
proof of ``⊢ ?¬Δ, ¬Γ, A``.  ``completeness_extract`` turns a cut-free proof
of ``⊢ Γ₀`` and a chosen conclusion ``A`` of ``Γ₀ = Γ, A`` into a term ``t``
with ``·;¬Γ ⊢ t:A``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from mell.syntax import (
    BOTTOM, MELL, MLL, ONE, STAR, App, Atom, Bottom, ContraApp, Contradiction, Formula,
    Lambda, LinImp, LinVar, OfCourse, OfcElim, OneElim, One, Pair, Par, ParIntro, Tensor,
    TensorElim, Term, UnrVar, WhyElim, WhyIntro, WhyNot, bang, canonicalize, fresh,
    negate, rename_free, show_formula,
)
from mell.typing import Derivation, check

MELL_RULES = ("l-ax", "l-cut", "l-⊗", "l-⅋", "l-1", "l-⊥", "l-!p", "l-?w", "l-?d", "l-?c")
MLL_RULES = ("l-ax", "l-cut", "l-⊗", "l-⊸")
ASCII_RULES = {"l-tensor": "l-⊗", "l-par": "l-⅋", "l-one": "l-1", "l-bot": "l-⊥", "l-lolli": "l-⊸", "l-imp": "l-⊸"}
TO_ASCII = {v: k for k, v in ASCII_RULES.items() if k not in ("l-imp",)}


class SequentError(ValueError):
    pass


class CutPresent(SequentError):
    pass


class EmptyContextCase(SequentError):
    pass


class ProofParseError(SequentError):
    pass


@dataclass(frozen=True)
class Proof:
    """A sequent proof node concluding ``⊢ conclusion``."""

    rule: str
    conclusion: tuple[Formula, ...]
    premises: tuple["Proof", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rule", ASCII_RULES.get(self.rule, self.rule))
        object.__setattr__(self, "conclusion", tuple(self.conclusion))
        object.__setattr__(self, "premises", tuple(self.premises))

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def rules(self) -> Counter:
        c = Counter([self.rule])
        for p in self.premises:
            c.update(p.rules())
        return c

    def is_cut_free(self) -> bool:
        return self.rule != "l-cut" and all(p.is_cut_free() for p in self.premises)

    def sequent(self) -> str:
        return "⊢ " + ", ".join(show_formula(f) for f in self.conclusion)


SequentProof = Proof


def multiset(fs: Sequence[Formula]) -> Counter:
    return Counter(fs)


# ---------------------------------------------------------------------------
# Rule matching
# ---------------------------------------------------------------------------


@dataclass
class Match:
    """How a node instantiates its rule.

    ``principal`` is the index of the principal formula in the conclusion
    (None for cut).  ``active[k]`` lists the indices of the active formulas in
    premise ``k`` and ``ctx[k]`` maps every other index of premise ``k`` to the
    index of the same formula occurrence in the conclusion.
    """

    principal: int | None
    active: list[list[int]]
    ctx: list[dict[int, int]]


def _assign(conclusion: Sequence[Formula], taken: set[int], premises: list[tuple[Sequence[Formula], list[int]]]) -> list[dict[int, int]] | None:
    """Map the non-active premise formulas onto the free conclusion positions."""
    free: dict[Formula, list[int]] = {}
    for j, f in enumerate(conclusion):
        if j not in taken:
            free.setdefault(f, []).append(j)
    out = []
    for fs, act in premises:
        m = {}
        for j, f in enumerate(fs):
            if j in act:
                continue
            slots = free.get(f)
            if not slots:
                return None
            m[j] = slots.pop(0)
        out.append(m)
    if any(v for v in free.values()):
        return None
    return out


def _neg(f: Formula, mode: str) -> Formula:
    return negate(f, mode)


def match_node(p: Proof, mode: str = MELL) -> Match:
    """Find a consistent reading of the node, or raise :class:`SequentError`."""
    rules = MLL_RULES if mode == MLL else MELL_RULES
    c = list(p.conclusion)
    prem = [list(q.conclusion) for q in p.premises]
    r = p.rule
    if r not in rules:
        raise SequentError(f"unknown rule {r} in {mode.upper()}")
    arity = {"l-ax": 0, "l-1": 0, "l-cut": 2, "l-⊗": 2}.get(r, 1)
    if len(prem) != arity:
        raise SequentError(f"{r} takes {arity} premise(s), found {len(prem)}")

    if r == "l-ax":
        if len(c) == 2 and c[1] == _neg(c[0], mode):
            return Match(0, [], [])
        raise SequentError("axiom must conclude a formula and its negation")
    if r == "l-1":
        if c == [ONE]:
            return Match(0, [], [])
        raise SequentError("l-1 concludes exactly 1")
    if r == "l-cut":
        for i, a in enumerate(prem[0]):
            na = _neg(a, mode)
            for j, b in enumerate(prem[1]):
                if b == na:
                    ctx = _assign(c, set(), [(prem[0], [i]), (prem[1], [j])])
                    if ctx is not None:
                        return Match(None, [[i], [j]], ctx)
        raise SequentError("no cut formula makes the premises add up to the conclusion")

    for pi, f in enumerate(c):
        m = _try_principal(r, pi, f, c, prem, mode)
        if m is not None:
            return m
    raise SequentError(f"no principal formula fits {r}")


def _try_principal(r: str, pi: int, f: Formula, c, prem, mode) -> Match | None:
    taken = {pi}
    if r == "l-⊗" and isinstance(f, Tensor):
        for i, a in enumerate(prem[0]):
            if a != f.left:
                continue
            for j, b in enumerate(prem[1]):
                if b == f.right:
                    ctx = _assign(c, taken, [(prem[0], [i]), (prem[1], [j])])
                    if ctx is not None:
                        return Match(pi, [[i], [j]], ctx)
        return None
    if r in ("l-⅋", "l-⊸") and isinstance(f, Par if r == "l-⅋" else LinImp):
        first = f.left if r == "l-⅋" else _neg(f.left, mode)
        for i, a in enumerate(prem[0]):
            if a != first:
                continue
            for j, b in enumerate(prem[0]):
                if j != i and b == f.right:
                    ctx = _assign(c, taken, [(prem[0], [i, j])])
                    if ctx is not None:
                        return Match(pi, [[i, j]], ctx)
        return None
    if r in ("l-⊥", "l-?w") and isinstance(f, Bottom if r == "l-⊥" else WhyNot):
        ctx = _assign(c, taken, [(prem[0], [])])
        return Match(pi, [[]], ctx) if ctx is not None else None
    if r == "l-?d" and isinstance(f, WhyNot):
        for i, a in enumerate(prem[0]):
            if a == f.body:
                ctx = _assign(c, taken, [(prem[0], [i])])
                if ctx is not None:
                    return Match(pi, [[i]], ctx)
        return None
    if r == "l-?c" and isinstance(f, WhyNot):
        idx = [i for i, a in enumerate(prem[0]) if a == f]
        for x in range(len(idx)):
            for y in range(x + 1, len(idx)):
                ctx = _assign(c, taken, [(prem[0], [idx[x], idx[y]])])
                if ctx is not None:
                    return Match(pi, [[idx[x], idx[y]]], ctx)
        return None
    if r == "l-!p" and isinstance(f, OfCourse):
        if not all(isinstance(g, WhyNot) for j, g in enumerate(c) if j != pi):
            return None
        for i, a in enumerate(prem[0]):
            if a == f.body:
                ctx = _assign(c, taken, [(prem[0], [i])])
                if ctx is not None:
                    return Match(pi, [[i]], ctx)
        return None
    return None


@dataclass
class CheckResult:
    ok: bool
    errors: list[tuple[str, str, str]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def report(self) -> str:
        if self.ok:
            return "proof is valid"
        return "\n".join(f"at {pos} ({rule}): {msg}" for pos, rule, msg in self.errors)


def check_proof(p: Proof, mode: str = MELL) -> CheckResult:
    """Check every node of ``p`` against its rule schema."""
    errors: list[tuple[str, str, str]] = []

    def go(q: Proof, pos: str) -> None:
        try:
            match_node(q, mode)
        except SequentError as e:
            errors.append((pos, q.rule, f"{e}; conclusion {q.sequent()}"))
        for k, child in enumerate(q.premises):
            go(child, f"{pos}.{k}" if pos != "root" else str(k))

    go(p, "root")
    return CheckResult(not errors, errors)


# ---------------------------------------------------------------------------
# Soundness: derivations to proofs
# ---------------------------------------------------------------------------


def _unr_part(d: Derivation) -> list[Formula]:
    return [WhyNot(negate(d.unr[u])) for u in sorted(d.unr)]


def _lin_part(d: Derivation, mode: str) -> list[Formula]:
    return [negate(d.lin[a], mode) for a in sorted(d.lin)]


def _weaken(p: Proof, extra: list[Formula]) -> Proof:
    """Repeated l-?w adding every formula of ``extra`` (all ?-formulas)."""
    for f in extra:
        p = Proof("l-?w", p.conclusion + (f,), (p,))
    return p


def _contract(p: Proof, dup: list[Formula]) -> Proof:
    """Repeated l-?c removing one copy of every formula of ``dup``."""
    for f in dup:
        concl = list(p.conclusion)
        concl.remove(f)
        p = Proof("l-?c", tuple(concl), (p,))
    return p


def _without(fs: Sequence[Formula], drop: Sequence[Formula]) -> tuple[Formula, ...]:
    out = list(fs)
    for f in drop:
        out.remove(f)
    return tuple(out)


def _cut(p: Proof, q: Proof, a: Formula, mode: str) -> Proof:
    return Proof("l-cut", _without(p.conclusion, [a]) + _without(q.conclusion, [negate(a, mode)]), (p, q))


def soundness_translate(d: Derivation, mode: str = MELL) -> Proof:
    """A proof of ``⊢ ?¬Δ, ¬Γ, A`` from a derivation of ``Δ;Γ ⊢ t:A``."""
    if mode == MLL:
        return _sound_mll(d)
    return _sound_mell(d)


def _one() -> Proof:
    return Proof("l-1", (ONE,))


def _expected(d: Derivation, mode: str) -> tuple[Formula, ...]:
    unr = [] if mode == MLL else _unr_part(d)
    return tuple(unr + _lin_part(d, mode) + [d.type])


def _finish(d: Derivation, p: Proof, mode: str) -> Proof:
    """Put the conclusion in the order ``?¬Δ, ¬Γ, A`` so that ``A`` comes last."""
    want = _expected(d, mode)
    if Counter(want) != Counter(p.conclusion):
        raise SequentError(f"soundness case {d.rule} concluded {p.sequent()}")
    return Proof(p.rule, want, p.premises)


def _sound_mell(d: Derivation) -> Proof:
    return _finish(d, _sound_mell_node(d), MELL)


def _sound_mell_node(d: Derivation) -> Proof:
    r = d.rule
    delta = _unr_part(d)
    ps = d.premises
    A = d.type
    if r == "m-ax":
        (b,) = d.lin.values()
        return _weaken(Proof("l-ax", (negate(b), b)), delta)
    if r == "m-uax":
        u = d.term.name
        f = d.unr[u]
        ax = Proof("l-ax", (negate(f), f))
        p = Proof("l-?d", (WhyNot(negate(f)), f), (ax,))
        rest = [WhyNot(negate(d.unr[v])) for v in sorted(d.unr) if v != u]
        return _weaken(p, rest)
    if r == "m-i1":
        return _weaken(_one(), delta)
    if r == "m-i⊗":
        p1, p2 = _sound_mell(ps[0]), _sound_mell(ps[1])
        concl = p1.conclusion[:-1] + p2.conclusion[:-1] + (A,)
        return _contract(Proof("l-⊗", concl, (p1, p2)), delta)
    if r == "m-e⊗":
        # premises follow the term: the body s (with b:B, c:C), then t : B ⊗ C
        ps_, pt = _sound_mell(ps[0]), _sound_mell(ps[1])
        bc = ps[1].type
        nb, nc = negate(bc.left), negate(bc.right)
        par = Proof("l-⅋", _without(ps_.conclusion, [nb, nc]) + (Par(nb, nc),), (ps_,))
        return _contract(_cut(pt, par, bc, MELL), delta)
    if r == "m-i⅋":
        p = _sound_mell(ps[0])
        cut = _cut(p, _one(), BOTTOM, MELL)
        return Proof("l-⅋", _without(cut.conclusion, [A.left, A.right]) + (A,), (cut,))
    if r == "m-e⅋₁":
        # t : B ⅋ C, s : ¬B, result C
        pt, pss = _sound_mell(ps[0]), _sound_mell(ps[1])
        bc = ps[0].type
        nb, nc = negate(bc.left), negate(bc.right)
        ax = Proof("l-ax", (nc, bc.right))
        tens = Proof("l-⊗", pss.conclusion[:-1] + (bc.right, Tensor(nb, nc)), (pss, ax))
        return _contract(_cut(tens, pt, Tensor(nb, nc), MELL), delta)
    if r == "m-e⅋₂":
        # t : B ⅋ C, s : ¬C, result B
        pt, pss = _sound_mell(ps[0]), _sound_mell(ps[1])
        bc = ps[0].type
        nb, nc = negate(bc.left), negate(bc.right)
        ax = Proof("l-ax", (bc.left, nb))
        tens = Proof("l-⊗", (bc.left,) + pss.conclusion[:-1] + (Tensor(nb, nc),), (ax, pss))
        return _contract(_cut(tens, pt, Tensor(nb, nc), MELL), delta)
    if r == "m-i!":
        p = _sound_mell(ps[0])
        cut = _cut(p, _one(), BOTTOM, MELL)
        return Proof("l-!p", _without(cut.conclusion, [A.body]) + (A,), (cut,))
    if r == "m-e!":
        pss, pt = _sound_mell(ps[0]), _sound_mell(ps[1])
        return _contract(_cut(pt, pss, ps[1].type, MELL), delta)
    if r == "m-i?":
        p = _sound_mell(ps[0])
        return _cut(p, _one(), BOTTOM, MELL)
    if r == "m-e?":
        pb, ps1 = _sound_mell(ps[0]), _sound_mell(ps[1])
        cut1 = _cut(pb, _one(), BOTTOM, MELL)
        na = negate(ps[1].type.body)
        prom = Proof("l-!p", _without(cut1.conclusion, [na]) + (OfCourse(na),), (cut1,))
        cut2 = _contract(_cut(ps1, prom, ps[1].type, MELL), delta)
        return Proof("l-⊥", cut2.conclusion + (BOTTOM,), (cut2,))
    if r == "m-i⊥":
        pt, pss = _sound_mell(ps[0]), _sound_mell(ps[1])
        cut = _cut(pt, pss, ps[0].type, MELL)
        bot = Proof("l-⊥", cut.conclusion + (BOTTOM,), (cut,))
        return _contract(bot, delta)
    if r == "m-e1":
        # s[* := t]: premises are s : A and t : 1
        pss, pt = _sound_mell(ps[0]), _sound_mell(ps[1])
        bot = Proof("l-⊥", pss.conclusion + (BOTTOM,), (pss,))
        return _contract(_cut(pt, bot, ONE, MELL), delta)
    raise SequentError(f"no soundness case for rule {r}")


def _sound_mll(d: Derivation) -> Proof:
    return _finish(d, _sound_mll_node(d), MLL)


def _sound_mll_node(d: Derivation) -> Proof:
    r = d.rule
    ps = d.premises
    A = d.type
    neg = lambda f: negate(f, MLL)  # noqa: E731
    if r == "m-ax":
        (b,) = d.lin.values()
        return Proof("l-ax", (b, neg(b)))
    if r == "m-i⊗":
        p1, p2 = _sound_mll(ps[0]), _sound_mll(ps[1])
        return Proof("l-⊗", p1.conclusion[:-1] + p2.conclusion[:-1] + (A,), (p1, p2))
    if r == "m-e⊗":
        pss, pt = _sound_mll(ps[0]), _sound_mll(ps[1])
        bc = ps[1].type
        nb, nc = neg(bc.left), neg(bc.right)
        imp = Proof("l-⊸", _without(pss.conclusion, [nb, nc]) + (LinImp(bc.left, nc),), (pss,))
        return _cut(pt, imp, bc, MLL)
    if r == "m-i⊸":
        p = _sound_mll(ps[0])
        return Proof("l-⊸", _without(p.conclusion, [neg(A.left), A.right]) + (A,), (p,))
    if r == "m-e⊸₁":
        # s : B ⊸ A, r : B
        pt, pr = _sound_mll(ps[0]), _sound_mll(ps[1])
        ba = ps[0].type
        ax = Proof("l-ax", (ba.right, neg(ba.right)))
        tens = Proof("l-⊗", pr.conclusion[:-1] + (ba.right, Tensor(ba.left, neg(ba.right))), (pr, ax))
        return _cut(pt, tens, ba, MLL)
    if r == "m-e⊸₂":
        # s : ¬A ⊸ B, r : ¬B, result A
        pt, pr = _sound_mll(ps[0]), _sound_mll(ps[1])
        ab = ps[0].type
        ax = Proof("l-ax", (A, ab.left))
        tens = Proof("l-⊗", (A,) + pr.conclusion[:-1] + (Tensor(ab.left, neg(ab.right)),), (ax, pr))
        return _cut(pt, tens, ab, MLL)
    raise SequentError(f"no soundness case for rule {r}")


def translate_mll(d: Derivation) -> Proof:
    return _sound_mll(d)


# ---------------------------------------------------------------------------
# Completeness: cut-free proofs to terms
# ---------------------------------------------------------------------------


def completeness_extract(
    p: Proof, select: int, mode: str = MELL, tidy: bool = True, cases: Counter | None = None
) -> tuple[Term, Derivation]:
    """A term ``t`` with ``·;¬Γ ⊢ t:A`` where ``A`` is conclusion ``select``.

    The linear variables are named ``x1, x2, ...`` after the remaining
    conclusions in order when ``tidy`` is set.
    """
    if not p.is_cut_free():
        raise CutPresent("extraction needs a cut-free proof")
    if not 0 <= select < len(p.conclusion):
        raise IndexError(f"conclusion index {select} out of range")
    res = check_proof(p, mode)
    if not res:
        raise SequentError(res.report())
    t, names = _extract(p, select, mode, cases)
    env = {names[j]: negate(p.conclusion[j], mode) for j in names}
    if tidy:
        ren = {names[j]: f"x{k + 1}" for k, j in enumerate(sorted(names))}
        t = canonicalize(rename_free(t, ren))
        env = {ren[a]: f for a, f in env.items()}
    ty, der = check(t, {}, env, mode, p.conclusion[select])
    return t, der


def completeness_extract_mll(p: Proof, select: int) -> tuple[Term, Derivation]:
    return completeness_extract(p, select, MLL)


def _ofc_u(u: str) -> Term:
    return bang(UnrVar(u))


def _lift(names: dict[int, str], ctx: dict[int, int], skip: Sequence[int] = ()) -> dict[int, str]:
    """Re-index premise variables by conclusion position."""
    return {ctx[j]: a for j, a in names.items() if j not in skip}


def _case_label(p: Proof, i: int, m: Match) -> str:
    """Which extraction case a node falls in: principal, or the premise holding the selection."""
    if p.rule in ("l-ax", "l-1") or m.principal is None:
        return p.rule
    if i == m.principal:
        return f"{p.rule}/principal"
    if p.rule == "l-⊗":
        return f"{p.rule}/{'left' if i in m.ctx[0].values() else 'right'}"
    return f"{p.rule}/side"


def _extract(p: Proof, i: int, mode: str, cases: Counter | None = None) -> tuple[Term, dict[int, str]]:
    """``(t, names)`` with ``t : C[i]`` and ``names[j] : ¬C[j]`` for ``j ≠ i``."""
    from mell.substitution import substitute

    m = match_node(p, mode)
    r = p.rule
    c = p.conclusion
    if cases is not None:
        cases[_case_label(p, i, m)] += 1
    if r == "l-ax":
        a = fresh("a")
        return LinVar(a), {1 - i: a}
    if r == "l-1":
        return STAR, {}
    P = p.premises
    ctx = m.ctx
    pi = m.principal
    inv = [{v: k for k, v in cx.items()} for cx in ctx]

    if r == "l-⊗":
        (a1,), (a2,) = m.active
        if i == pi:
            s1, v1 = _extract(P[0], a1, mode, cases)
            s2, v2 = _extract(P[1], a2, mode, cases)
            return Pair(s1, s2), {**_lift(v1, ctx[0]), **_lift(v2, ctx[1])}
        b = fresh("b")
        if i in inv[0]:
            s, v = _extract(P[0], inv[0][i], mode, cases)
            rr, w = _extract(P[1], a2, mode, cases)
            arg = ContraApp(LinVar(b), rr)
            t = substitute(s, {v[a1]: arg})
            return t, {**_lift(v, ctx[0], [a1]), **_lift(w, ctx[1]), pi: b}
        s, v = _extract(P[1], inv[1][i], mode, cases)
        rr, w = _extract(P[0], a1, mode, cases)
        arg = App(LinVar(b), rr)
        t = substitute(s, {v[a2]: arg})
        return t, {**_lift(v, ctx[1], [a2]), **_lift(w, ctx[0]), pi: b}

    if r in ("l-⅋", "l-⊸"):
        a1, a2 = m.active[0]
        if i == pi:
            s, v = _extract(P[0], a2, mode, cases)
            b = v[a1]
            if r == "l-⊸":
                return Lambda(b, s), _lift(v, ctx[0], [a1])
            cc = fresh("c")
            return ParIntro(b, cc, Contradiction(s, LinVar(cc))), _lift(v, ctx[0], [a1])
        s, v = _extract(P[0], inv[0][i], mode, cases)
        d = fresh("d")
        return TensorElim(s, v[a1], v[a2], LinVar(d)), {**_lift(v, ctx[0], [a1, a2]), pi: d}

    if r in ("l-⊥", "l-?w"):
        if i == pi:
            if not P[0].conclusion:
                raise EmptyContextCase(f"{r} with the principal formula selected and an empty context")
            s, v = _extract(P[0], 0, mode, cases)
            a = fresh("a")
            names = {**_lift(v, ctx[0]), ctx[0][0]: a}
            body = Contradiction(s, LinVar(a))
            if r == "l-⊥":
                return body, names
            return WhyIntro(fresh("u"), body), names
        s, v = _extract(P[0], inv[0][i], mode, cases)
        b = fresh("b")
        if r == "l-⊥":
            return OneElim(s, LinVar(b)), {**_lift(v, ctx[0]), pi: b}
        return OfcElim(s, fresh("u"), LinVar(b)), {**_lift(v, ctx[0]), pi: b}

    if r == "l-?d":
        (a1,) = m.active[0]
        u = fresh("u")
        if i == pi:
            s, v = _extract(P[0], a1, mode, cases)
            return WhyIntro(u, Contradiction(s, UnrVar(u))), _lift(v, ctx[0])
        s, v = _extract(P[0], inv[0][i], mode, cases)
        b = fresh("b")
        t = substitute(s, {v[a1]: UnrVar(u)})
        return OfcElim(t, u, LinVar(b)), {**_lift(v, ctx[0], [a1]), pi: b}

    if r == "l-?c":
        a1, a2 = m.active[0]
        if i == pi:
            s, v = _extract(P[0], a1, mode, cases)
            u = fresh("u")
            t = substitute(s, {v[a2]: _ofc_u(u)})
            return WhyIntro(u, Contradiction(t, _ofc_u(u))), _lift(v, ctx[0], [a2])
        s, v = _extract(P[0], inv[0][i], mode, cases)
        u1, u2 = fresh("u"), fresh("u")
        t = substitute(s, {v[a1]: _ofc_u(u1), v[a2]: _ofc_u(u2)})
        t = substitute(t, unr={u2: UnrVar(u1)})
        b = fresh("b")
        return OfcElim(t, u1, LinVar(b)), {**_lift(v, ctx[0], [a1, a2]), pi: b}

    if r == "l-!p":
        (a1,) = m.active[0]
        if i == pi:
            s, v = _extract(P[0], a1, mode, cases)
            us = {j: fresh("u") for j in v}
            t = bang(substitute(s, {v[j]: _ofc_u(us[j]) for j in v}))
            names = {}
            for j in sorted(v):
                b = fresh("b")
                t = OfcElim(t, us[j], LinVar(b))
                names[ctx[0][j]] = b
            return t, names
        j0 = inv[0][i]
        s, v = _extract(P[0], j0, mode, cases)
        b = v[a1]
        others = [j for j in v if j != a1]
        us = {j: fresh("u") for j in others}
        s2 = substitute(s, {v[j]: _ofc_u(us[j]) for j in others})
        vv, d, cc = fresh("v"), fresh("d"), fresh("c")
        body = Contradiction(s2, _promote_unr(d, vv))
        t = WhyIntro(vv, WhyElim(body, b, LinVar(cc)))
        names = {pi: cc}
        for j in sorted(others):
            dj = fresh("d")
            t = OfcElim(t, us[j], LinVar(dj))
            names[ctx[0][j]] = dj
        return t, names
    raise SequentError(f"no extraction case for rule {r}")


def _promote_unr(d: str, v: str) -> Term:
    """``bang d. (d # v)``: the promotion of an unrestricted variable."""
    from mell.syntax import OfcIntro

    return OfcIntro(d, Contradiction(LinVar(d), UnrVar(v)))


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_LINE = re.compile(r"^(?P<indent>\s*)(?P<rule>\S+)\s*(?:\|-|⊢)\s*(?P<fs>.*?)\s*$")


def parse_proof(text: str, mode: str = MELL) -> Proof:
    """Parse an indented rule tree, one ``<rule> |- <formulas>`` node per line.

    Premises are the following lines indented deeper than their parent, in
    order.  Blank lines and ``--`` comments are ignored.
    """
    from mell.cli.parser import ParseError, parse_formula_list

    rows: list[tuple[int, str, tuple[Formula, ...], int]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        mt = _LINE.match(line)
        if not mt:
            raise ProofParseError(f"line {n}: expected '<rule> |- <formulas>'")
        try:
            fs = tuple(parse_formula_list(mt.group("fs"), mode))
        except ParseError as e:
            raise ProofParseError(f"line {n}: {e}") from None
        rows.append((len(mt.group("indent").expandtabs(4)), mt.group("rule"), fs, n))
    if not rows:
        raise ProofParseError("empty proof")

    pos = [0]

    def node() -> Proof:
        ind, rule, fs, _ = rows[pos[0]]
        pos[0] += 1
        kids = []
        while pos[0] < len(rows) and rows[pos[0]][0] > ind:
            kids.append(node())
        return Proof(rule, fs, tuple(kids))

    root = node()
    if pos[0] != len(rows):
        raise ProofParseError(f"line {rows[pos[0]][3]}: more than one root")
    return root


def _strip_comment(raw: str) -> str:
    m = re.search(r"(^|\s)--", raw)
    return raw[: m.start()] if m else raw


def show_proof(p: Proof, ascii_rules: bool = False, indent: int = 0) -> str:
    rule = TO_ASCII.get(p.rule, p.rule) if ascii_rules else p.rule
    lines = [" " * indent + f"{rule} |- " + ", ".join(show_formula(f) for f in p.conclusion)]
    for q in p.premises:
        lines.append(show_proof(q, ascii_rules, indent + 2))
    return "\n".join(lines)


def load_proofs(text: str) -> list[tuple[str, str, Proof]]:
    """Split a ``== <name> <mode>`` delimited file into named proofs."""
    out = []
    blocks = re.split(r"^==[ \t]*", text, flags=re.M)
    for block in blocks[1:]:
        head, _, body = block.partition("\n")
        name, mode = head.split()
        out.append((name, mode, parse_proof(body, mode)))
    return out


def curated_proofs() -> list[tuple[str, str, Proof]]:
    """The bundled corpus of cut-free MLL and MELL proofs."""
    from importlib.resources import files

    return load_proofs(files("mell").joinpath("data/proofs.txt").read_text(encoding="utf-8"))
