"""Random and exhaustive generation of linear, typable terms.

Generation is shape first: constructors are chosen while distributing the
linear variables that must be used exactly once, then a term is kept only if
the checker accepts it (free variables receive principal types).  This
guarantees linearity by construction and typability by filtering.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator

from mell.sequent import Proof
from mell.syntax import (
    BOTTOM, MELL, MLL, ONE, STAR, Atom, LinImp, NegAtom, OfCourse, Par, Tensor, WhyNot, negate, App, ContraApp, Contradiction, Formula, LinVar, Lambda, OfcElim,
    OfcIntro, OneElim, Pair, ParIntro, TensorElim, Term, UnrVar, WhyElim, WhyIntro,
    children, size, with_children,
)
from mell.typing import Typing, TypingError, typecheck

_BINARY = (Pair, App, ContraApp, Contradiction, OneElim)


@dataclass
class Sample:
    term: Term
    typing: Typing

    @property
    def lin(self) -> dict[str, Formula]:
        return self.typing.lin

    @property
    def unr(self) -> dict[str, Formula]:
        return self.typing.unr

    @property
    def type(self) -> Formula:
        return self.typing.type


class TermGenerator:
    """Seeded generator of random linear terms.

    ``redex_bias`` is the probability of steering an application, a
    contradiction or an eliminator argument towards a matching introduction,
    which makes pre-reduction redexes frequent.
    """

    def __init__(self, seed: int = 0, mode: str = MELL, redex_bias: float = 0.0, free_unr: int = 1):
        self.rng = random.Random(seed)
        self.mode = mode
        self.redex_bias = redex_bias
        self.free_unr = [f"v{i}" for i in range(free_unr)]
        self.counter = 0

    def _name(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def _split(self, lin: list[str]) -> tuple[list[str], list[str]]:
        left, right = [], []
        for v in lin:
            (left if self.rng.random() < 0.5 else right).append(v)
        return left, right

    def _sizes(self, n: int) -> tuple[int, int]:
        k = self.rng.randint(0, max(0, n))
        return k, n - k

    def leaf(self, lin: list[str], unr: list[str], want: str | None = None, closed: bool = False) -> Term:
        if len(lin) == 1:
            return LinVar(lin[0])
        assert not lin
        if self.mode == MLL:
            return LinVar(self._name("x"))
        pool = unr + self.free_unr
        if want == "one":
            return STAR
        r = self.rng.random()
        if pool and (r < 0.35 or closed and want is not None):
            return UnrVar(self.rng.choice(pool))
        if closed or r < 0.5:
            return STAR
        return LinVar(self._name("x"))

    def term(self, n: int, lin: list[str] | None = None, unr: list[str] | None = None, want: str | None = None) -> Term:
        """A linear term of size about ``n`` using each variable of ``lin`` exactly once.

        ``want`` names the main connective the term should preferably have:
        one of ``tensor``, ``par``, ``bang``, ``wn``, ``one``, ``bot`` or None.
        """
        if self.mode == MLL:
            return self._gen_mll(n, list(lin or []))
        return self._gen(n, list(lin or []), list(unr or []), want, False, "any")

    _INTRO = {"tensor": "pair", "par": "par", "bang": "bang", "wn": "wn", "one": "star", "bot": "contra"}
    _ELIMS = ("app", "capp", "onee", "tense", "bange")

    def _gen(self, n: int, lin: list[str], unr: list[str], want: str | None, closed: bool, intro: str) -> Term:
        rng = self.rng
        if n <= 0 and len(lin) <= 1:
            return self.leaf(lin, unr, want, closed)
        if n <= 0:
            # budget spent: split the remaining variables without binding more
            k = rng.randint(1, len(lin) - 1)
            left, right = lin[:k], lin[k:]
            if want == "bot":
                cls = Contradiction
            elif want == "tensor" and intro != "forbid":
                cls = Pair
            else:
                cls = rng.choice((App, ContraApp))
            return cls(self._gen(0, left, unr, None, closed, "any"), self._gen(0, right, unr, None, closed, "any"))
        if intro == "force" and want is not None:
            return self._intro(n, lin, unr, want, closed)
        if want is None:
            c = rng.choice(("pair", "app", "capp", "contra", "onee", "tense", "par", "bang", "bange", "wn", "wne"))
        elif intro != "forbid" and rng.random() < 0.5:
            c = self._INTRO[want]
            if want == "bot" and rng.random() < 0.4:
                c = "wne"
        else:
            c = rng.choice(self._ELIMS)
        if (c == "bang" and lin) or (c == "star" and (lin or n != 1)):
            c = rng.choice(self._ELIMS)
        m = n - 1
        l1, l2 = self._split(lin)
        n1, n2 = self._sizes(m)
        if c == "pair":
            return Pair(self._gen(n1, l1, unr, None, closed, "any"), self._gen(n2, l2, unr, None, closed, "any"))
        if c == "star":
            return STAR
        if c in ("app", "capp"):
            fn = self._arg(n1, l1, unr, "par", closed)
            arg = self._gen(n2, l2, unr, None, closed, "any")
            return (App if c == "app" else ContraApp)(fn, arg)
        if c == "contra":
            return self._contra(n1, n2, l1, l2, unr, closed)
        if c == "onee":
            return OneElim(self._gen(n1, l1, unr, want, closed, intro), self._arg(n2, l2, unr, "one", closed))
        if c == "tense":
            a, b = self._name("a"), self._name("b")
            return TensorElim(self._gen(n1, l1 + [a, b], unr, want, closed, intro), a, b, self._arg(n2, l2, unr, "tensor", closed))
        if c == "bange":
            u = self._name("u")
            return OfcElim(self._gen(n1, l1, unr + [u], want, closed, intro), u, self._arg(n2, l2, unr, "bang", closed))
        return self._intro(n, lin, unr, {"par": "par", "bang": "bang", "wn": "wn", "wne": "bot"}[c], closed, c == "wne")

    def _arg(self, n: int, lin: list[str], unr: list[str], want: str, closed: bool) -> Term:
        """An eliminator argument: a matching introduction with probability ``redex_bias``."""
        if self.rng.random() < self.redex_bias and n >= 1 and not (want == "bang" and lin):
            return self._gen(n, lin, unr, want, closed, "force")
        return self._gen(n, lin, unr, want, closed, "forbid")

    def _intro(self, n: int, lin: list[str], unr: list[str], want: str, closed: bool, wne: bool = False) -> Term:
        m = n - 1
        rng = self.rng
        if want == "bang" and lin:
            return self._gen(n, lin, unr, want, closed, "forbid")
        if rng.random() < 0.2 and m >= 2 and want != "bot":
            # an introduction under a positive eliminator is still a redex
            k = rng.randint(1, m - 1)
            l1, l2 = self._split(lin) if want != "bang" else ([], [])
            r = rng.random()
            if r < 0.4:
                return OneElim(self._intro(k, l1, unr, want, closed), self._arg(m - k, l2, unr, "one", closed))
            if r < 0.7 or want == "bang":
                u = self._name("u")
                return OfcElim(self._intro(k, l1, unr + [u], want, closed), u, self._arg(m - k, l2, unr, "bang", closed))
            a, b = self._name("a"), self._name("b")
            return TensorElim(self._intro(k, l1 + [a, b], unr, want, closed), a, b, self._arg(m - k, l2, unr, "tensor", closed))
        if want == "par":
            a, b = self._name("a"), self._name("b")
            return ParIntro(a, b, self._gen(m, lin + [a, b], unr, "bot", closed, "any"))
        if want == "tensor":
            l1, l2 = self._split(lin)
            n1, n2 = self._sizes(m)
            return Pair(self._gen(n1, l1, unr, None, closed, "any"), self._gen(n2, l2, unr, None, closed, "any"))
        if want == "bang":
            a = self._name("a")
            return OfcIntro(a, self._gen(m, [a], unr, "bot", True, "any"))
        if want == "wn":
            u = self._name("u")
            return WhyIntro(u, self._gen(m, lin, unr + [u], "bot", closed, "any"))
        if want == "one":
            return STAR if not lin else self._gen(n, lin, unr, want, closed, "forbid")
        n1, n2 = self._sizes(m)
        if wne or rng.random() < 0.3:
            a = self._name("a")
            return WhyElim(self._gen(n1, [a], unr, "bot", True, "any"), a, self._arg(n2, lin, unr, "wn", closed))
        l1, l2 = self._split(lin)
        return self._contra(n1, n2, l1, l2, unr, closed)

    def _contra(self, n1: int, n2: int, l1: list[str], l2: list[str], unr: list[str], closed: bool) -> Term:
        if self.rng.random() < self.redex_bias and n1 >= 1 and n2 >= 1:
            kind = self.rng.choice([("par", "tensor"), ("tensor", "par"), ("bang", "wn"), ("wn", "bang")])
            if (kind[0] == "bang" and l1) or (kind[1] == "bang" and l2):
                kind = ("par", "tensor")
            return Contradiction(self._intro(n1, l1, unr, kind[0], closed), self._intro(n2, l2, unr, kind[1], closed))
        return Contradiction(self._gen(n1, l1, unr, None, closed, "any"), self._gen(n2, l2, unr, None, closed, "any"))

    def _gen_mll(self, n: int, lin: list[str]) -> Term:
        rng = self.rng
        if n <= 0 and len(lin) <= 1:
            return self.leaf(lin, [])
        if n <= 0:
            k = rng.randint(1, len(lin) - 1)
            cls = rng.choice((Pair, App, ContraApp))
            return cls(self._gen_mll(0, lin[:k]), self._gen_mll(0, lin[k:]))
        m = n - 1
        c = rng.choice(["pair", "app", "capp", "tense", "lam"])
        if c == "lam":
            a = self._name("a")
            return Lambda(a, self._gen_mll(m, lin + [a]))
        l1, l2 = self._split(lin)
        n1, n2 = self._sizes(m)
        if c == "tense":
            a, b = self._name("a"), self._name("b")
            arg = self._mll_intro(n2, l2, Pair)
            return TensorElim(self._gen_mll(n1, l1 + [a, b]), a, b, arg)
        if c == "pair":
            return Pair(self._gen_mll(n1, l1), self._gen_mll(n2, l2))
        fn = self._mll_intro(n1, l1, Lambda)
        arg = self._gen_mll(n2, l2)
        return (App if c == "app" else ContraApp)(fn, arg)

    def _mll_intro(self, n: int, lin: list[str], want: type) -> Term:
        if self.rng.random() >= self.redex_bias or n < 1:
            return self._gen_mll(n, lin)
        m = n - 1
        if want is Lambda:
            a = self._name("a")
            return Lambda(a, self._gen_mll(m, lin + [a]))
        l1, l2 = self._split(lin)
        n1, n2 = self._sizes(m)
        return Pair(self._gen_mll(n1, l1), self._gen_mll(n2, l2))

    # ------------------------------------------------------------------ typed sampling

    def typed(self, n: int, tries: int = 200, min_redexes: int = 0, max_size: int | None = None) -> Sample:
        """A random typable term of size about ``n``."""
        from mell.reduction import find_pre_redexes

        for _ in range(tries):
            t = self.term(n)
            if max_size is not None and size(t) > max_size:
                continue
            try:
                r = typecheck(t, mode=self.mode, open_vars=True)
            except TypingError:
                continue
            if min_redexes and len(find_pre_redexes(t, self.mode)) < min_redexes:
                continue
            return Sample(t, r)
        raise RuntimeError(f"no typable term of size {n} after {tries} tries")

    def typed_open(self, n: int, var: str, tries: int = 200) -> Sample:
        """A typable term with the free linear variable ``var``."""
        for _ in range(tries):
            t = self.term(n, [var])
            try:
                return Sample(t, typecheck(t, mode=self.mode, open_vars=True))
            except TypingError:
                continue
        raise RuntimeError(f"no typable open term of size {n}")


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


def enumerate_terms(max_size: int, mode: str = MELL, max_free: int = 2, free_unr: int = 1, min_size: int = 0) -> Iterator[Term]:
    """Every linear term of size in ``[min_size, max_size]`` up to renaming.

    At most ``max_free`` distinct free linear variables occur; they are named
    ``x1, x2, ...`` in order of occurrence.  Free unrestricted variables are
    drawn from ``$v0 ... $v{free_unr-1}``.  Binders are named after their
    depth, so every term is produced exactly once.
    """
    for n in range(min_size, max_size + 1):
        for t, _ in _enum(n, (), (), mode, free_unr, max_free, 0):
            yield _name_free(t)


_FREE = "?free"


def _name_free(t: Term) -> Term:
    counter = [0]

    def go(x: Term) -> Term:
        if isinstance(x, LinVar) and x.name == _FREE:
            counter[0] += 1
            return LinVar(f"x{counter[0]}")
        kids = children(x)
        if not kids:
            return x
        return with_children(x, [go(k) for k in kids])

    return go(t)


def _splits(lin: tuple[str, ...]) -> Iterator[tuple[tuple[str, ...], tuple[str, ...]]]:
    k = len(lin)
    for mask in range(1 << k):
        yield (tuple(v for i, v in enumerate(lin) if mask >> i & 1), tuple(v for i, v in enumerate(lin) if not mask >> i & 1))


_Enum = Iterator[tuple[Term, int]]


@lru_cache(maxsize=None)
def _exists(n: int, k: int, nu: int, free: int, mode: str, fu: int) -> bool:
    """Whether :func:`_enum` yields anything for size ``n`` and ``k`` linear variables."""
    if n == 0:
        return k == 1 or (k == 0 and (free > 0 or (mode == MELL and nu + fu > 0)))
    if k > n + 1:
        return False
    m = n - 1
    if mode == MELL and n == 1 and k == 0:
        return True

    def pair(k1: int, k2: int, nu1: int, f2_closed: bool = False) -> bool:
        for i in range(m + 1):
            for f1 in range(free + 1):
                if _exists(i, k1, nu1, 0 if f2_closed else f1, mode, fu) and _exists(m - i, k2, nu, free - (0 if f2_closed else f1), mode, fu):
                    return True
        return False

    for k1 in range(k + 1):
        if pair(k1, k - k1, nu) or pair(k1 + 2, k - k1, nu):
            return True
        if mode == MELL and pair(k1, k - k1, nu + 1):
            return True
    if mode == MLL:
        return _exists(m, k + 1, nu, free, mode, fu)
    if _exists(m, k + 2, nu, free, mode, fu) or _exists(m, k, nu + 1, free, mode, fu):
        return True
    if k == 0 and _exists(m, 1, nu, 0, mode, fu):
        return True
    return pair(1, k, nu, True)


def _two(k: int, m: int, l1, l2, unr1, unr2, mode, fu, free, d) -> Iterator[tuple[Term, Term, int]]:
    if not _exists(m - k, len(l2), len(unr2), free, mode, fu):
        return
    for t1, f1 in _enum(k, l1, unr1, mode, fu, free, d):
        for t2, f2 in _enum(m - k, l2, unr2, mode, fu, free - f1, d):
            yield t1, t2, f1 + f2


def _enum(n: int, lin: tuple[str, ...], unr: tuple[str, ...], mode: str, fu: int, free: int, d: int) -> _Enum:
    """Terms of size exactly ``n`` using every variable in ``lin`` once and at most ``free`` fresh ones."""
    if n == 0:
        if len(lin) == 1:
            yield LinVar(lin[0]), 0
        elif not lin:
            if free > 0:
                yield LinVar(_FREE), 1
            if mode == MELL:
                for u in unr:
                    yield UnrVar(u), 0
                for i in range(fu):
                    yield UnrVar(f"v{i}"), 0
        return
    if not _exists(n, len(lin), len(unr), free, mode, fu):
        return
    m = n - 1
    if mode == MELL and n == 1 and not lin:
        yield STAR, 0
    binaries = (Pair, App, ContraApp) if mode == MLL else _BINARY
    for cls in binaries:
        for k in range(m + 1):
            for l1, l2 in _splits(lin):
                for t1, t2, f in _two(k, m, l1, l2, unr, unr, mode, fu, free, d + 1):
                    yield cls(t1, t2), f
    a, b = f"a{d}", f"b{d}"
    for k in range(m + 1):
        for l1, l2 in _splits(lin):
            for t1, t2, f in _two(k, m, l1 + (a, b), l2, unr, unr, mode, fu, free, d + 1):
                yield TensorElim(t1, a, b, t2), f
    if mode == MLL:
        for t, f in _enum(m, lin + (a,), unr, mode, fu, free, d + 1):
            yield Lambda(a, t), f
        return
    for t, f in _enum(m, lin + (a, b), unr, mode, fu, free, d + 1):
        yield ParIntro(a, b, t), f
    if not lin:
        for t, _ in _enum(m, (a,), unr, mode, fu, 0, d + 1):
            yield OfcIntro(a, t), 0
    u = f"u{d}"
    for k in range(m + 1):
        for l1, l2 in _splits(lin):
            for t1, t2, f in _two(k, m, l1, l2, unr + (u,), unr, mode, fu, free, d + 1):
                yield OfcElim(t1, u, t2), f
    for t, f in _enum(m, lin, unr + (u,), mode, fu, free, d + 1):
        yield WhyIntro(u, t), f
    for k in range(m + 1):
        for t1, _ in _enum(k, (a,), unr, mode, fu, 0, d + 1):
            for t2, f in _enum(m - k, lin, unr, mode, fu, free, d + 1):
                yield WhyElim(t1, a, t2), f


def typed_corpus(max_size: int, mode: str = MELL, max_free: int = 2, free_unr: int = 1, min_size: int = 0) -> Iterator[Sample]:
    """The typable members of :func:`enumerate_terms`."""
    for t in enumerate_terms(max_size, mode, max_free, free_unr, min_size):
        try:
            yield Sample(t, typecheck(t, mode=mode, open_vars=True, derivation=False))
        except TypingError:
            continue


# ---------------------------------------------------------------------------
# Cut-saturated enumeration
# ---------------------------------------------------------------------------

_DUAL = {"par": "tensor", "tensor": "par", "bang": "wn", "wn": "bang"}


def enumerate_saturated(max_size: int, max_free: int = 1, min_size: int = 0) -> Iterator[Term]:
    """Typable MELL terms in which every eliminator meets a matching introduction.

    The principal argument of each eliminator (the function of an
    application, the scrutinee of a pattern match, both sides of a
    contradiction) is an introduction of the right kind, possibly under a
    spine of positive eliminators.  Such terms are as redex-dense as the size
    allows, which makes them the interesting part of a confluence check.
    There are no free unrestricted variables.  Untypable subterms are pruned
    as soon as they are built, so only typable terms are produced.
    """
    memo: dict = {}
    for n in range(min_size, max_size + 1):
        for t, _ in _sat(n, (), (), max_free, 0, memo):
            yield _name_free(t)


def _typable_open(t: Term) -> bool:
    try:
        typecheck(t, mode=MELL, open_vars=True, derivation=False)
        return True
    except TypingError:
        return False


def _memo(fn):
    def wrapped(*args):
        memo = args[-1]
        key = (fn.__name__,) + args[:-1]
        if key not in memo:
            memo[key] = [(t, f) for t, f in fn(*args) if _typable_open(t)]
        return memo[key]

    wrapped.__name__ = fn.__name__
    return wrapped


@_memo
def _sat(n: int, lin: tuple[str, ...], unr: tuple[str, ...], free: int, d: int, memo: dict) -> _Enum:
    if len(lin) > n + 1:
        return
    if n == 0:
        if len(lin) == 1:
            yield LinVar(lin[0]), 0
        elif not lin:
            if free > 0:
                yield LinVar(_FREE), 1
            for u in unr:
                yield UnrVar(u), 0
        return
    m = n - 1
    a = f"a{d}"
    for kind in ("tensor", "par", "bang", "wn", "one"):
        yield from _sat_intro(kind, n, lin, unr, free, d, False, memo)
    for k in range(m + 1):
        for l1, l2 in _splits(lin):
            for cls in (App, ContraApp):
                for t1, f1 in _sat_intro("par", k, l1, unr, free, d + 1, True, memo):
                    for t2, f2 in _sat(m - k, l2, unr, free - f1, d + 1, memo):
                        yield cls(t1, t2), f1 + f2
            for x, y in (("par", "tensor"), ("tensor", "par"), ("bang", "wn"), ("wn", "bang")):
                for t1, f1 in _sat_intro(x, k, l1, unr, free, d + 1, True, memo):
                    for t2, f2 in _sat_intro(y, m - k, l2, unr, free - f1, d + 1, True, memo):
                        yield Contradiction(t1, t2), f1 + f2
            yield from _sat_elims(k, m, l1, l2, unr, free, d, memo, lambda ls, us, fr: _sat(k, ls, us, fr, d + 1, memo))
        for t1, _ in _sat(k, (a,), unr, 0, d + 1, memo):
            for t2, f in _sat_intro("wn", m - k, lin, unr, free, d + 1, True, memo):
                yield WhyElim(t1, a, t2), f


def _sat_elims(k, m, l1, l2, unr, free, d, memo, body) -> _Enum:
    """Positive eliminators whose scrutinee is a matching introduction."""
    a, b, u = f"a{d}", f"b{d}", f"u{d}"
    for t1, f1 in body(l1 + (a, b), unr, free):
        for t2, f2 in _sat_intro("tensor", m - k, l2, unr, free - f1, d + 1, True, memo):
            yield TensorElim(t1, a, b, t2), f1 + f2
    for t1, f1 in body(l1, unr + (u,), free):
        for t2, f2 in _sat_intro("bang", m - k, l2, unr, free - f1, d + 1, True, memo):
            yield OfcElim(t1, u, t2), f1 + f2
    for t1, f1 in body(l1, unr, free):
        for t2, f2 in _sat_intro("one", m - k, l2, unr, free - f1, d + 1, True, memo):
            yield OneElim(t1, t2), f1 + f2


@_memo
def _sat_intro(kind: str, n: int, lin: tuple[str, ...], unr: tuple[str, ...], free: int, d: int, spine: bool, memo: dict) -> _Enum:
    """Introductions of ``kind`` of size ``n``, optionally under positive eliminators."""
    if n == 0 or len(lin) > n + 1:
        return
    m = n - 1
    a, b = f"a{d}", f"b{d}"
    if kind == "one" and n == 1 and not lin:
        yield STAR, 0
    elif kind == "tensor":
        for k in range(m + 1):
            for l1, l2 in _splits(lin):
                for t1, f1 in _sat(k, l1, unr, free, d + 1, memo):
                    for t2, f2 in _sat(m - k, l2, unr, free - f1, d + 1, memo):
                        yield Pair(t1, t2), f1 + f2
    elif kind == "par":
        for t, f in _sat(m, lin + (a, b), unr, free, d + 1, memo):
            yield ParIntro(a, b, t), f
    elif kind == "bang" and not lin:
        for t, _ in _sat(m, (a,), unr, 0, d + 1, memo):
            yield OfcIntro(a, t), 0
    elif kind == "wn":
        u = f"u{d}"
        for t, f in _sat(m, lin, unr + (u,), free, d + 1, memo):
            yield WhyIntro(u, t), f
    if spine:
        for k in range(1, m + 1):
            for l1, l2 in _splits(lin):
                yield from _sat_elims(k, m, l1, l2, unr, free, d, memo, lambda ls, us, fr: _sat_intro(kind, k, ls, us, fr, d + 1, True, memo))


def saturated_corpus(max_size: int, max_free: int = 1, min_size: int = 0) -> Iterator[Sample]:
    """:func:`enumerate_saturated` with principal typings attached."""
    for t in enumerate_saturated(max_size, max_free, min_size):
        yield Sample(t, typecheck(t, mode=MELL, open_vars=True, derivation=False))


# ---------------------------------------------------------------------------
# Formulas and cut-free proofs
# ---------------------------------------------------------------------------


def random_formula(rng: random.Random, depth: int, mode: str = MELL, atoms: str = "XYZ") -> Formula:
    """A random formula of depth at most ``depth`` (atoms have depth 0)."""
    if depth <= 0 or rng.random() < 0.2:
        if mode == MELL and rng.random() < 0.2:
            return rng.choice((ONE, BOTTOM))
        a = rng.choice(atoms)
        return Atom(a) if rng.random() < 0.5 else NegAtom(a)
    d = depth - 1
    if mode == MLL:
        k = rng.choice((Tensor, LinImp))
        return k(random_formula(rng, d, mode, atoms), random_formula(rng, d, mode, atoms))
    k = rng.choice((Tensor, Par, OfCourse, WhyNot))
    if k in (OfCourse, WhyNot):
        return k(random_formula(rng, d, mode, atoms))
    return k(random_formula(rng, d, mode, atoms), random_formula(rng, d, mode, atoms))


def random_proof(rng: random.Random, depth: int, mode: str = MELL) -> Proof:
    """A random cut-free proof, built from axioms downwards.

    Each node picks a rule whose side conditions the premises allow; the
    conclusion order is shuffled so that checkers cannot rely on positions.
    """
    neg = lambda f: negate(f, mode)  # noqa: E731
    if depth <= 0 or rng.random() < 0.15:
        if mode == MELL and rng.random() < 0.15:
            return Proof("l-1", (ONE,))
        a = random_formula(rng, rng.randint(0, 1), mode)
        return Proof("l-ax", _shuffled(rng, (a, neg(a))))
    p = random_proof(rng, depth - 1, mode)
    c = list(p.conclusion)
    options = ["l-⊗"]
    if len(c) >= 2:
        options.append("l-⊸" if mode == MLL else "l-⅋")
    if mode == MELL:
        options += ["l-⊥", "l-?w", "l-?d"]
        wn = [f for f in c if isinstance(f, WhyNot)]
        if len(wn) != len(set(wn)):
            options += ["l-?c"] * 3
        if sum(not isinstance(f, WhyNot) for f in c) == 1:
            options += ["l-!p"] * 2
    r = rng.choice(options)
    if r == "l-⊗":
        q = random_proof(rng, depth - 1, mode)
        i, j = rng.randrange(len(c)), rng.randrange(len(q.conclusion))
        d = list(q.conclusion)
        f = Tensor(c.pop(i), d.pop(j))
        return Proof(r, _shuffled(rng, c + d + [f]), (p, q))
    if r in ("l-⅋", "l-⊸"):
        i, j = rng.sample(range(len(c)), 2)
        a, b = c[i], c[j]
        rest = [f for k, f in enumerate(c) if k not in (i, j)]
        f = Par(a, b) if r == "l-⅋" else LinImp(neg(a), b)
        return Proof(r, _shuffled(rng, rest + [f]), (p,))
    if r == "l-⊥":
        return Proof(r, _shuffled(rng, c + [BOTTOM]), (p,))
    if r == "l-?w":
        # weakening by a copy of an existing ?-formula sets up a contraction
        wn = [f for f in c if isinstance(f, WhyNot)]
        f = rng.choice(wn) if wn and rng.random() < 0.5 else WhyNot(random_formula(rng, 1, mode))
        return Proof(r, _shuffled(rng, c + [f]), (p,))
    if r == "l-?d":
        i = rng.randrange(len(c))
        c[i] = WhyNot(c[i])
        return Proof(r, _shuffled(rng, c), (p,))
    if r == "l-?c":
        wn = [f for f in c if isinstance(f, WhyNot)]
        f = rng.choice([g for g in wn if wn.count(g) > 1])
        c.remove(f)
        return Proof(r, _shuffled(rng, c), (p,))
    i = next(k for k, f in enumerate(c) if not isinstance(f, WhyNot))
    c[i] = OfCourse(c[i])
    return Proof(r, _shuffled(rng, c), (p,))


def _shuffled(rng: random.Random, fs) -> tuple[Formula, ...]:
    fs = list(fs)
    rng.shuffle(fs)
    return tuple(fs)


def shrink(t: Term, fails) -> Term:
    """Greedy subterm shrinking: move to a typable proper subterm that still fails."""
    from mell.syntax import positions

    improved = True
    while improved:
        improved = False
        for path, s in positions(t):
            if not path or not _typable_open(s):
                continue
            try:
                bad = fails(s)
            except Exception:  # noqa: BLE001
                bad = True
            if bad:
                t = s
                improved = True
                break
    return t


def contra_triple(seed: int, mode: str = MELL, t_size: int = 6, s_size: int = 4, tries: int = 400):
    """A random valid ``(t, a, s)`` for contra-substitution, as two derivations.

    ``t`` has the free linear variable ``a`` and type ``B``; ``s`` is a random
    term that checks against ``¬B`` once its free variables (disjoint from
    those of ``t``) take principal types.  Returns ``(dt, "a", ds)``.
    """
    from mell.syntax import free_vars, negate, rename_free

    rng = random.Random(seed)
    gt = TermGenerator(rng.randrange(1 << 30), mode, redex_bias=0.3)
    gs = TermGenerator(rng.randrange(1 << 30), mode, free_unr=0)
    for _ in range(tries):
        t = gt.typed_open(rng.randint(2, t_size), "a")
        want = negate(t.type, mode)
        for _ in range(20):
            s = gs.term(rng.randint(1, s_size))
            s = rename_free(s, {x: f"s_{x}" for x in free_vars(s)[0]})
            try:
                ds = typecheck(s, t.unr, None, mode, want, open_vars=True).derivation
            except TypingError:
                continue
            return t.typing.derivation, "a", ds
    raise RuntimeError("no valid contra-substitution triple found")


def equivalent_pair(seed: int, size_range: tuple[int, int] = (4, 12), steps: tuple[int, int] = (1, 3)):
    """A redex-bearing typed term ``t`` and ``s ≡ t`` obtained by random axiom applications.

    Returns ``(sample, s, witness)`` where ``witness`` lists the applied steps.
    """
    from mell.equivalence import equiv_neighbors

    rng = random.Random(seed)
    gen = TermGenerator(rng.randrange(1 << 30), MELL, redex_bias=0.6)
    sample = gen.typed(rng.randint(*size_range), min_redexes=1)
    s, witness = sample.term, []
    for _ in range(rng.randint(*steps)):
        moves = equiv_neighbors(s, sample.unr, sample.lin)
        if not moves:
            break
        step, s = rng.choice(moves)
        witness.append(step)
    return sample, s, witness
