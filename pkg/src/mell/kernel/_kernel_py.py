"""Pure-Python hot kernels: alpha-canonical keys, sizes and free variables."""

from __future__ import annotations

from mell.syntax import (
    App, ContraApp, Contradiction, LinVar, Lambda, OfcElim, OfcIntro, OneElim, Pair,
    ParIntro, Star, TensorElim, Term, UnrVar, WhyElim, WhyIntro,
)


def canonical_key(t: Term) -> str:
    """Bound variables become the index of their binder in pre-order."""
    out: list[str] = []
    _key(t, {}, {}, out, [0])
    return "".join(out)


def _key(t, lm, um, out, ctr):
    tp = type(t)
    if tp is LinVar:
        i = lm.get(t.name)
        out.append(f"l{t.name};" if i is None else f"#{i};")
    elif tp is UnrVar:
        i = um.get(t.name)
        out.append(f"u{t.name};" if i is None else f"${i};")
    elif tp is Star:
        out.append("*")
    elif tp is Pair:
        out.append("P(")
        _key(t.left, lm, um, out, ctr)
        _key(t.right, lm, um, out, ctr)
        out.append(")")
    elif tp is App:
        out.append("A(")
        _key(t.fn, lm, um, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is ContraApp:
        out.append("C(")
        _key(t.fn, lm, um, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is Contradiction:
        out.append("X(")
        _key(t.left, lm, um, out, ctr)
        _key(t.right, lm, um, out, ctr)
        out.append(")")
    elif tp is OneElim:
        out.append("O(")
        _key(t.body, lm, um, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is TensorElim:
        out.append("T(")
        n = ctr[0]
        ctr[0] += 2
        _key(t.body, {**lm, t.left_var: n, t.right_var: n + 1}, um, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is ParIntro:
        out.append("R(")
        n = ctr[0]
        ctr[0] += 2
        _key(t.body, {**lm, t.left_var: n, t.right_var: n + 1}, um, out, ctr)
        out.append(")")
    elif tp is OfcIntro or tp is Lambda:
        out.append("B(" if tp is OfcIntro else "L(")
        n = ctr[0]
        ctr[0] += 1
        _key(t.body, {**lm, t.var: n}, um, out, ctr)
        out.append(")")
    elif tp is WhyElim:
        out.append("W(")
        n = ctr[0]
        ctr[0] += 1
        _key(t.body, {**lm, t.var: n}, um, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is OfcElim:
        out.append("E(")
        n = ctr[0]
        ctr[0] += 1
        _key(t.body, lm, {**um, t.var: n}, out, ctr)
        _key(t.arg, lm, um, out, ctr)
        out.append(")")
    elif tp is WhyIntro:
        out.append("Q(")
        n = ctr[0]
        ctr[0] += 1
        _key(t.body, lm, {**um, t.var: n}, out, ctr)
        out.append(")")
    else:
        raise TypeError(f"not a term: {t!r}")


def term_size(t: Term) -> int:
    tp = type(t)
    if tp is LinVar or tp is UnrVar:
        return 0
    if tp is Star:
        return 1
    if tp is ParIntro or tp is OfcIntro or tp is WhyIntro or tp is Lambda:
        return 1 + term_size(t.body)
    if tp is Pair or tp is Contradiction:
        return 1 + term_size(t.left) + term_size(t.right)
    if tp is App or tp is ContraApp:
        return 1 + term_size(t.fn) + term_size(t.arg)
    return 1 + term_size(t.body) + term_size(t.arg)
