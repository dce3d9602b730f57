"""Pre-reduction, reduction modulo structural equivalence, and their metrics.

Redexes are found "at a distance": the principal introduction may sit under
a spine of positive eliminators ``L`` which the contractum re-attaches.
Before contracting, every binder of the redex is renamed apart, which
discharges the freshness side conditions of the reduction axioms.

Reduction modulo ≡ is computed through the strong bisimulation property:
every step from a term equivalent to ``t`` is matched, up to ≡, by a
pre-reduction step from ``t`` itself.  The successors of ``t`` modulo ≡ are
therefore the pre-reducts of ``t``, each brought to simplified canonical form.
:func:`step_modulo` can also enumerate the equivalence class explicitly when
asked, which the test-suite uses to cross-check the shortcut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from mell.substitution import contra_subst, subst_linear, subst_unrestricted
from mell.syntax import (
    MELL, MLL, STAR, App, ContraApp, Contradiction, Lambda, OfcElim, OfcIntro, Pair,
    ParIntro, Path, PosElimCtx, TensorElim, Term, WhyElim, WhyIntro, canonical_key,
    canonicalize, plug, positions, rename_bound, replace_at, show, show_path, subterm,
    unplug,
)

MELL_AXIOMS = ("beta-parL", "beta-parR", "beta-tensor", "beta-bang", "beta-wn", "par-tensor", "tensor-par", "bang-wn", "wn-bang")
MLL_AXIOMS = ("beta-lamL", "beta-lamR", "beta-tensor")
AXIOM_SYMBOLS = {
    "beta-parL": "β⅋L", "beta-parR": "β⅋R", "beta-tensor": "β⊗", "beta-bang": "β!", "beta-wn": "β?",
    "par-tensor": "⅋⊗", "tensor-par": "⊗⅋", "bang-wn": "!?", "wn-bang": "?!",
    "beta-lamL": "βλL", "beta-lamR": "βλR",
}


class ReductionError(Exception):
    pass


class StaleRedex(ReductionError):
    pass


class FuelExhausted(ReductionError):
    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class Redex:
    """A pre-reduction redex: where it is, which axiom, and the contexts met."""

    path: Path
    axiom: str
    contexts: tuple[PosElimCtx, ...] = ()

    def __str__(self) -> str:
        return f"{self.axiom} @ {show_path(self.path)}"


def _match(t: Term, mode: str) -> tuple[str, tuple[PosElimCtx, ...]] | None:
    """Axiom whose left-hand side is ``t`` at the root, if any."""
    match t:
        case App(f, _) | ContraApp(f, _):
            head, ctx = unplug(f, mode)
            if mode == MLL and isinstance(head, Lambda):
                return ("beta-lamL" if isinstance(t, App) else "beta-lamR"), (ctx,)
            if mode == MELL and isinstance(head, ParIntro):
                return ("beta-parL" if isinstance(t, App) else "beta-parR"), (ctx,)
        case TensorElim(_, _, _, arg):
            head, ctx = unplug(arg, mode)
            if isinstance(head, Pair):
                return "beta-tensor", (ctx,)
        case OfcElim(_, _, arg) if mode == MELL:
            head, ctx = unplug(arg, mode)
            if isinstance(head, OfcIntro):
                return "beta-bang", (ctx,)
        case WhyElim(_, _, arg) if mode == MELL:
            head, ctx = unplug(arg, mode)
            if isinstance(head, WhyIntro):
                return "beta-wn", (ctx,)
        case Contradiction(l, r) if mode == MELL:
            hl, cl = unplug(l, mode)
            hr, cr = unplug(r, mode)
            pairs = {
                (ParIntro, Pair): "par-tensor", (Pair, ParIntro): "tensor-par",
                (OfcIntro, WhyIntro): "bang-wn", (WhyIntro, OfcIntro): "wn-bang",
            }
            ax = pairs.get((type(hl), type(hr)))
            if ax:
                return ax, (cl, cr)
    return None


def find_pre_redexes(t: Term, mode: str = MELL) -> list[Redex]:
    """All pre-reduction redexes of ``t``, in pre-order of their positions."""
    out = []
    for path, s in positions(t):
        m = _match(s, mode)
        if m:
            out.append(Redex(path, m[0], m[1]))
    return out


def contract(s: Term, mode: str = MELL) -> tuple[str, Term]:
    """Contract the redex at the root of ``s``."""
    m = _match(s, mode)
    if m is None:
        raise StaleRedex(f"no redex at the root of {show(s)}")
    ax = m[0]
    s = rename_bound(s)
    match ax:
        case "beta-lamL" | "beta-lamR":
            head, ctx = unplug(s.fn, mode)
            body = head.body
            if ax == "beta-lamL":
                return ax, plug(subst_linear(body, head.var, s.arg), ctx)
            return ax, plug(contra_subst(body, head.var, s.arg, MLL), ctx)
        case "beta-parL" | "beta-parR":
            head, ctx = unplug(s.fn, mode)
            a, b, body = head.left_var, head.right_var, head.body
            if ax == "beta-parL":
                r = contra_subst(subst_linear(body, a, s.arg), b, STAR, MELL)
            else:
                r = contra_subst(subst_linear(body, b, s.arg), a, STAR, MELL)
            return ax, plug(r, ctx)
        case "beta-tensor":
            head, ctx = unplug(s.arg, mode)
            r = subst_linear(subst_linear(s.body, s.left_var, head.left), s.right_var, head.right)
            return ax, plug(r, ctx)
        case "beta-bang":
            head, ctx = unplug(s.arg, mode)
            val = contra_subst(head.body, head.var, STAR, MELL)
            return ax, plug(subst_unrestricted(s.body, s.var, val), ctx)
        case "beta-wn":
            head, ctx = unplug(s.arg, mode)
            val = contra_subst(s.body, s.var, STAR, MELL)
            return ax, plug(subst_unrestricted(head.body, head.var, val), ctx)
        case "par-tensor" | "tensor-par":
            hl, cl = unplug(s.left, mode)
            hr, cr = unplug(s.right, mode)
            par, pair = (hl, hr) if ax == "par-tensor" else (hr, hl)
            r = subst_linear(subst_linear(par.body, par.left_var, pair.left), par.right_var, pair.right)
            return ax, plug(plug(r, cl), cr)
        case "bang-wn" | "wn-bang":
            hl, cl = unplug(s.left, mode)
            hr, cr = unplug(s.right, mode)
            ofc, why = (hl, hr) if ax == "bang-wn" else (hr, hl)
            val = contra_subst(ofc.body, ofc.var, STAR, MELL)
            return ax, plug(plug(subst_unrestricted(why.body, why.var, val), cl), cr)
    raise StaleRedex(ax)


def pre_step(t: Term, r: Redex, mode: str = MELL) -> Term:
    """Fire ``r`` inside ``t``."""
    try:
        s = subterm(t, r.path)
    except (IndexError, TypeError) as exc:
        raise StaleRedex(f"no subterm at {show_path(r.path)}") from exc
    m = _match(s, mode)
    if m is None or m[0] != r.axiom:
        raise StaleRedex(f"{r} does not match {show(s)}")
    return replace_at(t, r.path, contract(s, mode)[1])


def pre_reducts(t: Term, mode: str = MELL) -> list[tuple[Redex, Term]]:
    return [(r, pre_step(t, r, mode)) for r in find_pre_redexes(t, mode)]


def is_normal(t: Term, mode: str = MELL) -> bool:
    return not find_pre_redexes(t, mode)


# ---------------------------------------------------------------------------
# Traces and normalization
# ---------------------------------------------------------------------------


@dataclass
class TraceStep:
    before: Term
    redex: Redex
    after: Term
    bridge: list = field(default_factory=list)  # equivalence steps (path, axiom, direction)


@dataclass
class Trace:
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def lines(self) -> list[str]:
        out = []
        for st in self.steps:
            for b in st.bridge:
                out.append(f"EQUIV {b.axiom} @ {show_path(b.path)}")
            out.append(f"STEP {st.redex.axiom} @ {show_path(st.redex.path)}")
        return out


def _normal_key(t: Term, mode: str) -> tuple[str, Term]:
    if mode == MLL:
        return canonical_key(t), t
    from mell.equivalence import simplify

    s = simplify(t)
    return canonical_key(s), s


def normalize(t: Term, mode: str = MELL, strategy: str = "leftmost-outermost", fuel: int = 100_000) -> tuple[Term, Trace]:
    """Reduce to normal form.

    ``leftmost-outermost`` fires the first redex in pre-order.  ``full-search``
    explores every reduction path (small terms only) and returns the normal
    form of the first path; use :func:`normal_forms` for all of them.
    """
    if strategy == "full-search":
        nfs = normal_forms(t, mode, fuel)
        first = nfs[0]
        return first, normalize(t, mode, "leftmost-outermost", fuel)[1]
    if strategy != "leftmost-outermost":
        raise ValueError(f"unknown strategy {strategy!r}")
    trace = Trace()
    for _ in range(fuel):
        rs = find_pre_redexes(t, mode)
        if not rs:
            return t, trace
        s = pre_step(t, rs[0], mode)
        trace.steps.append(TraceStep(t, rs[0], s))
        t = s
    raise FuelExhausted(f"no normal form within {fuel} steps", (t, trace))


def normal_forms(t: Term, mode: str = MELL, fuel: int = 100_000) -> list[Term]:
    """Every normal form reachable by pre-reduction (one representative per alpha-class)."""
    seen: dict[str, bool] = {}
    out: dict[str, Term] = {}
    stack = [t]
    budget = fuel
    while stack:
        s = stack.pop()
        k = canonical_key(s)
        if k in seen:
            continue
        seen[k] = True
        budget -= 1
        if budget < 0:
            raise FuelExhausted(f"reduction graph larger than {fuel} terms", list(out.values()))
        succ = pre_reducts(s, mode)
        if not succ:
            out[k] = s
        stack.extend(r for _, r in reversed(succ))
    return list(out.values())


# ---------------------------------------------------------------------------
# Reduction modulo ≡
# ---------------------------------------------------------------------------


def step_modulo(t: Term, mode: str = MELL, fuel: int = 10_000, explore_class: bool = False) -> list[tuple[Term, Trace]]:
    """One-step successors of ``t`` under reduction modulo ≡.

    Each successor is returned in simplified canonical form, paired with the
    trace of the pre-reduction step that produced it.  With ``explore_class``
    the equivalence class of ``t`` is enumerated (up to ``fuel`` members) and
    redexes of every member are fired.
    """
    sources: list[tuple[Term, list]] = [(t, [])]
    if explore_class and mode == MELL:
        from mell.equivalence import enumerate_class

        sources = enumerate_class(t, fuel=fuel)
    out: dict[str, tuple[Term, Trace]] = {}
    for src, bridge in sources:
        for r, s in pre_reducts(src, mode):
            k, rep = _normal_key(s, mode)
            if k not in out:
                out[k] = (canonicalize(rep), Trace([TraceStep(src, r, s, list(bridge))]))
    return list(out.values())


def tml(t: Term, mode: str = MELL, fuel: int = 100_000, memo: bool = True) -> int:
    """Length of the longest reduction sequence from ``t``.

    The reduction graph is explored with ≡-classes represented by simplified
    canonical forms.  ``memo=False`` recomputes shared subgraphs, which gives
    an independent (exponential) oracle for small terms.
    """
    table: dict[str, int] = {}
    budget = [fuel]

    def go(s: Term) -> int:
        k, rep = _normal_key(s, mode)
        if memo and k in table:
            return table[k]
        budget[0] -= 1
        if budget[0] < 0:
            raise FuelExhausted(f"reduction graph exceeds {fuel} nodes")
        best = 0
        for _, r in pre_reducts(rep, mode):
            best = max(best, 1 + go(r))
        if memo:
            table[k] = best
        return best

    return go(t)


def longest_path(t: Term, mode: str = MELL, fuel: int = 100_000) -> tuple[int, list[Redex]]:
    """A longest pre-reduction sequence, as the redexes fired along it."""
    table: dict[str, tuple[int, list[Redex]]] = {}

    def go(s: Term) -> tuple[int, list[Redex]]:
        k = canonical_key(s)
        if k in table:
            return table[k]
        if len(table) > fuel:
            raise FuelExhausted(f"reduction graph exceeds {fuel} nodes")
        best: tuple[int, list[Redex]] = (0, [])
        for r, s2 in pre_reducts(s, mode):
            n, path = go(s2)
            if n + 1 > best[0]:
                best = (n + 1, [r] + path)
        table[k] = best
        return best

    return go(t)


def reduction_paths(t: Term, mode: str = MELL, limit: int = 10_000) -> Iterator[list[Term]]:
    """All maximal pre-reduction sequences (small terms only)."""
    count = [0]

    def go(s: Term, acc: list[Term]):
        succ = pre_reducts(s, mode)
        if not succ:
            count[0] += 1
            if count[0] > limit:
                raise FuelExhausted(f"more than {limit} maximal paths")
            yield acc + [s]
            return
        for _, r in succ:
            yield from go(r, acc + [s])

    yield from go(t, [])


# ---------------------------------------------------------------------------
# Joinability and bisimulation reports
# ---------------------------------------------------------------------------


@dataclass
class Join:
    """How two one-step reducts of a term were joined."""

    left: Redex
    right: Redex
    verdict: str
    left_path: list[Term] = field(default_factory=list)
    right_path: list[Term] = field(default_factory=list)
    witness: list = field(default_factory=list)


@dataclass
class WcrReport:
    joins: list[Join] = field(default_factory=list)

    @property
    def joined(self) -> bool:
        return all(j.verdict == "Equivalent" for j in self.joins)

    @property
    def unknown(self) -> list[Join]:
        return [j for j in self.joins if j.verdict == "Unknown"]

    @property
    def failures(self) -> list[Join]:
        return [j for j in self.joins if j.verdict == "NotEquivalent"]

    @property
    def vacuous(self) -> bool:
        return not self.joins


def _reachable(t: Term, mode: str, fuel: int) -> tuple[dict[str, Term], dict[str, str | None], list[str]]:
    """Pre-reduction graph from ``t`` keyed by simplified canonical form."""
    k0, rep0 = _normal_key(t, mode)
    nodes = {k0: rep0}
    parent: dict[str, str | None] = {k0: None}
    order = [k0]
    i = 0
    while i < len(order):
        k = order[i]
        i += 1
        for _, r in pre_reducts(nodes[k], mode):
            k2, rep = _normal_key(r, mode)
            if k2 not in nodes:
                if len(nodes) >= fuel:
                    raise FuelExhausted(f"reduction graph exceeds {fuel} nodes")
                nodes[k2] = rep
                parent[k2] = k
                order.append(k2)
    return nodes, parent, order


def _path_to(nodes, parent, k) -> list[Term]:
    out = []
    while k is not None:
        out.append(nodes[k])
        k = parent[k]
    return out[::-1]


def wcr_join(t: Term, mode: str = MELL, fuel: int = 10_000, unr=None, lin=None) -> WcrReport:
    """Join every pair of one-step pre-reducts of ``t`` modulo ≡.

    For each pair the reduction graphs of both reducts are explored; a shared
    simplified form joins them directly, otherwise their normal forms are
    compared with the equivalence checker.
    """
    from mell.equivalence import EQUIVALENT, NOT_EQUIVALENT, UNKNOWN, equiv_check

    if unr is None and lin is None and mode == MELL:
        from mell.typing import typecheck

        ty = typecheck(t, open_vars=True, derivation=False)
        unr, lin = ty.unr, ty.lin
    steps = pre_reducts(t, mode)
    report = WcrReport()
    graphs = [_reachable(r, mode, fuel) for _, r in steps]
    for i in range(len(steps)):
        for j in range(i + 1, len(steps)):
            (ni, pi, oi), (nj, pj, oj) = graphs[i], graphs[j]
            common = next((k for k in oi if k in nj), None)
            if common is not None:
                report.joins.append(Join(steps[i][0], steps[j][0], EQUIVALENT, _path_to(ni, pi, common), _path_to(nj, pj, common)))
                continue
            if mode == MLL:
                report.joins.append(Join(steps[i][0], steps[j][0], NOT_EQUIVALENT))
                continue
            nfi = [k for k in oi if is_normal(ni[k], mode)]
            nfj = [k for k in oj if is_normal(nj[k], mode)]
            verdict, found = NOT_EQUIVALENT, None
            for a in nfi:
                for b in nfj:
                    res = equiv_check(ni[a], nj[b], unr, lin, fuel=fuel)
                    if res.verdict == EQUIVALENT:
                        verdict, found = EQUIVALENT, (a, b, res.path)
                        break
                    if res.verdict == UNKNOWN:
                        verdict = UNKNOWN
                if found:
                    break
            if found:
                a, b, w = found
                report.joins.append(Join(steps[i][0], steps[j][0], verdict, _path_to(ni, pi, a), _path_to(nj, pj, b), w))
            else:
                report.joins.append(Join(steps[i][0], steps[j][0], verdict))
    return report


@dataclass
class BisimReport:
    """Matching of pre-steps between two equivalent terms.

    ``matched`` holds ``(side, redex, partner redex)``.  A counterexample is a
    step whose reduct is provably not equivalent to any reduct of the other
    side; it would refute strong bisimulation.
    """

    matched: list[tuple[str, Redex, Redex]] = field(default_factory=list)
    counterexamples: list[tuple[str, Redex, Term]] = field(default_factory=list)
    unknown: list[tuple[str, Redex, Term]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.unknown


def _match_up_to_equiv(x: Term, theirs, unr, lin, fuel: int, mode: str) -> tuple[Redex | None, bool]:
    """A step among ``theirs`` whose reduct is ≡ ``x``, and whether any search ran out of fuel.

    The budget grows gradually: the matching reduct is usually a few axioms
    away, while refuting a wrong candidate can use up the whole budget.
    """
    from mell.equivalence import EQUIVALENT, UNKNOWN, equiv_check

    pending = list(theirs)
    for budget in [b for b in (16, 256) if b < fuel] + [fuel]:
        still = []
        for r2, y, k2 in pending:
            res = equiv_check(x, y, unr, lin, fuel=budget, mode=mode)
            if res.verdict == EQUIVALENT:
                return r2, False
            if res.verdict == UNKNOWN:
                still.append((r2, y, k2))
        if not still:
            return None, False
        pending = still
    return None, True


def bisim_check(t: Term, s: Term, mode: str = MELL, fuel: int = 10_000, unr=None, lin=None) -> BisimReport:
    """Check that every pre-step of ``t`` is matched by one of ``s`` up to ≡, and conversely."""
    if unr is None and lin is None and mode == MELL:
        from mell.typing import typecheck

        ty = typecheck(t, open_vars=True, derivation=False)
        unr, lin = ty.unr, ty.lin
    report = BisimReport()
    left = [(r, x, _normal_key(x, mode)[0]) for r, x in pre_reducts(t, mode)]
    right = [(r, x, _normal_key(x, mode)[0]) for r, x in pre_reducts(s, mode)]
    for side, mine, theirs in (("left", left, right), ("right", right, left)):
        for r, x, k in mine:
            partner, unsure = None, False
            for r2, y, k2 in theirs:
                if k == k2:
                    partner = r2
                    break
            if partner is None:
                partner, unsure = _match_up_to_equiv(x, theirs, unr, lin, fuel, mode)
            if partner is not None:
                report.matched.append((side, r, partner))
            elif unsure:
                report.unknown.append((side, r, x))
            else:
                report.counterexamples.append((side, r, x))
    return report

