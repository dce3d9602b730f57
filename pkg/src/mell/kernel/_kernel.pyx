# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels: alpha-canonical keys and term sizes.

Mirrors ``_kernel_py`` exactly; the two are compared by the test-suite.
"""

from mell.syntax import (
    App, ContraApp, Contradiction, LinVar, Lambda, OfcElim, OfcIntro, OneElim, Pair,
    ParIntro, Star, TensorElim, UnrVar, WhyElim, WhyIntro,
)

cdef object _LinVar = LinVar
cdef object _UnrVar = UnrVar
cdef object _Star = Star
cdef object _Pair = Pair
cdef object _App = App
cdef object _ContraApp = ContraApp
cdef object _Contradiction = Contradiction
cdef object _OneElim = OneElim
cdef object _TensorElim = TensorElim
cdef object _ParIntro = ParIntro
cdef object _OfcIntro = OfcIntro
cdef object _Lambda = Lambda
cdef object _WhyElim = WhyElim
cdef object _OfcElim = OfcElim
cdef object _WhyIntro = WhyIntro


cdef class _Walker:
    cdef list out
    cdef long ctr

    def __init__(self):
        self.out = []
        self.ctr = 0

    cdef void binary(self, str tag, object a, object b, dict lm, dict um) except *:
        self.out.append(tag)
        self.walk(a, lm, um)
        self.walk(b, lm, um)
        self.out.append(")")

    cdef void walk(self, object t, dict lm, dict um) except *:
        cdef object tp = type(t)
        cdef long n
        cdef dict d
        if tp is _LinVar:
            i = lm.get(t.name)
            self.out.append(("l" + t.name + ";") if i is None else ("#" + str(i) + ";"))
        elif tp is _UnrVar:
            i = um.get(t.name)
            self.out.append(("u" + t.name + ";") if i is None else ("$" + str(i) + ";"))
        elif tp is _Star:
            self.out.append("*")
        elif tp is _Pair:
            self.binary("P(", t.left, t.right, lm, um)
        elif tp is _App:
            self.binary("A(", t.fn, t.arg, lm, um)
        elif tp is _ContraApp:
            self.binary("C(", t.fn, t.arg, lm, um)
        elif tp is _Contradiction:
            self.binary("X(", t.left, t.right, lm, um)
        elif tp is _OneElim:
            self.binary("O(", t.body, t.arg, lm, um)
        elif tp is _TensorElim:
            self.out.append("T(")
            n = self.ctr
            self.ctr += 2
            d = dict(lm)
            d[t.left_var] = n
            d[t.right_var] = n + 1
            self.walk(t.body, d, um)
            self.walk(t.arg, lm, um)
            self.out.append(")")
        elif tp is _ParIntro:
            self.out.append("R(")
            n = self.ctr
            self.ctr += 2
            d = dict(lm)
            d[t.left_var] = n
            d[t.right_var] = n + 1
            self.walk(t.body, d, um)
            self.out.append(")")
        elif tp is _OfcIntro or tp is _Lambda:
            self.out.append("B(" if tp is _OfcIntro else "L(")
            n = self.ctr
            self.ctr += 1
            d = dict(lm)
            d[t.var] = n
            self.walk(t.body, d, um)
            self.out.append(")")
        elif tp is _WhyElim:
            self.out.append("W(")
            n = self.ctr
            self.ctr += 1
            d = dict(lm)
            d[t.var] = n
            self.walk(t.body, d, um)
            self.walk(t.arg, lm, um)
            self.out.append(")")
        elif tp is _OfcElim:
            self.out.append("E(")
            n = self.ctr
            self.ctr += 1
            d = dict(um)
            d[t.var] = n
            self.walk(t.body, lm, d)
            self.walk(t.arg, lm, um)
            self.out.append(")")
        elif tp is _WhyIntro:
            self.out.append("Q(")
            n = self.ctr
            self.ctr += 1
            d = dict(um)
            d[t.var] = n
            self.walk(t.body, lm, d)
            self.out.append(")")
        else:
            raise TypeError(f"not a term: {t!r}")


def canonical_key(t):
    cdef _Walker w = _Walker()
    w.walk(t, {}, {})
    return "".join(w.out)


cdef long _size(object t) except -1:
    cdef object tp = type(t)
    if tp is _LinVar or tp is _UnrVar:
        return 0
    if tp is _Star:
        return 1
    if tp is _ParIntro or tp is _OfcIntro or tp is _WhyIntro or tp is _Lambda:
        return 1 + _size(t.body)
    if tp is _Pair or tp is _Contradiction:
        return 1 + _size(t.left) + _size(t.right)
    if tp is _App or tp is _ContraApp:
        return 1 + _size(t.fn) + _size(t.arg)
    return 1 + _size(t.body) + _size(t.arg)


def term_size(t):
    return _size(t)
