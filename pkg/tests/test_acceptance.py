"""Acceptance criteria 1-12, each checked at its stated scale and time budget.

Every test prints one ``PASS``/``FAIL`` line for its criterion (shown even
under output capture) and then asserts.
"""

import random
import time
from collections import Counter

import pytest

from mell.classical import (
    LAMBDA_MU, LBAR_MU_MUTILDE, MU_DCLL, check_ch_steps, check_dcll_steps, check_mu_steps,
    check_translation_type, classical_corpus, mu_step, q_supported,
)
from mell.cli.parser import parse_formula, parse_term
from mell.equivalence import EQUIVALENT, UNKNOWN, derived_equations, equiv_check, replay, simplify
from mell.generators import (
    TermGenerator, contra_triple, equivalent_pair, random_formula, saturated_corpus, typed_corpus,
)
from mell.reduction import bisim_check, find_pre_redexes, normal_forms, normalize, pre_reducts, step_modulo, tml
from mell.sequent import MELL_RULES, MLL_RULES, check_proof, completeness_extract, curated_proofs, multiset, soundness_translate
from mell.substitution import contra_subst
from mell.syntax import MELL, MLL, STAR, LinVar, alpha_eq, canonical_key, negate, size
from mell.typing import check, verify_derivation


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")

    return emit


def test_c01_negation_involution(report):
    rng = random.Random(1)
    cases = [(random_formula(rng, rng.randint(0, 8), mode), mode) for mode in (MELL, MLL) for _ in range(5000)]
    t0 = time.perf_counter()
    bad = sum(negate(negate(f, mode), mode) != f for f, mode in cases)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 1.0
    report(1, ok, f"{len(cases)} formulas, {bad} violations, {dt:.2f}s")
    assert ok


def _c2_corpus():
    # The full two-variable enumeration at size 6 has ~280k terms; closed
    # terms to size 6 and one-variable terms to size 5 stay inside the budget.
    yield from (s.term for s in typed_corpus(6, MLL, max_free=0))
    yield from (s.term for s in typed_corpus(5, MLL, max_free=1, min_size=1))
    gen = TermGenerator(2, MLL, redex_bias=0.6)
    produced = 0
    while produced < 1000:
        t = gen.typed(gen.rng.randint(2, 20)).term
        if size(t) <= 20:
            produced += 1
            yield t


def test_c02_mll_size_law_as_stated(report):
    """Literal form: each step loses one constructor and normalization takes |t| - |nf| steps."""
    t0 = time.perf_counter()
    terms = steps = step_bad = len_bad = 0
    for t in _c2_corpus():
        terms += 1
        for _, s in pre_reducts(t, MLL):
            steps += 1
            step_bad += size(t) != size(s) + 1
        nf, trace = normalize(t, MLL)
        len_bad += len(trace) != size(t) - size(nf)
    dt = time.perf_counter() - t0
    ok = step_bad == 0 and len_bad == 0 and dt < 30
    report(2, ok, f"{terms} terms, {steps} steps, {step_bad} step violations, {len_bad} length violations, {dt:.1f}s")
    assert ok, "every MLL pre-reduction step removes two constructors, not one"


def test_c02_mll_size_law_measured(report):
    """What holds instead: each step loses exactly two constructors."""
    t0 = time.perf_counter()
    terms = bad = 0
    for t in _c2_corpus():
        terms += 1
        for _, s in pre_reducts(t, MLL):
            bad += size(t) != size(s) + 2
        nf, trace = normalize(t, MLL)
        bad += 2 * len(trace) != size(t) - size(nf)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 30
    report(2, ok, f"(size drops by 2 per step) {terms} terms, {bad} violations, {dt:.1f}s")
    assert ok


def test_c03_contra_substitution_examples(report):
    mll = contra_subst(parse_term("\\b. a @ b"), "a", LinVar("s"), MLL)
    mell = contra_subst(parse_term("(par c d. s)[* := a] @ t"), "a", STAR, MELL)
    ok = alpha_eq(mll, parse_term("(b, c)[(b, c) := s]")) and alpha_eq(mell, parse_term("(par c d. s) # (t, *)"))
    report(3, ok, "both worked examples reproduce up to renaming")
    assert ok


def test_c04_contra_substitution_typing(report):
    t0 = time.perf_counter()
    bad = 0
    for i in range(1000):
        mode = MELL if i % 2 else MLL
        dt, a, ds = contra_triple(i, mode)
        out = contra_subst(dt.term, a, ds.term, mode)
        rest = {n: f for n, f in dt.lin.items() if n != a}
        try:
            want = negate(dt.lin[a], mode)
            got, d = check(out, {**ds.unr, **dt.unr}, {**rest, **ds.lin}, mode, want)
            verify_derivation(d, mode)
            bad += got != want
        except Exception:  # noqa: BLE001
            bad += 1
    dt_ = time.perf_counter() - t0
    ok = bad == 0 and dt_ < 60
    report(4, ok, f"1000 triples, {bad} failures, {dt_:.1f}s")
    assert ok


def test_c05_derived_equations(report):
    t0 = time.perf_counter()
    eqs = derived_equations()
    bad = []
    for name, lhs, rhs, lin in eqs:
        res = equiv_check(lhs, rhs, None, lin)
        if res.verdict != EQUIVALENT or not res.path:
            bad.append(name)
        elif canonical_key(simplify(replay(lhs, res.path, None, lin))) != canonical_key(simplify(rhs)):
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = not bad and len(eqs) >= 12 and dt < 10
    report(5, ok, f"{len(eqs)} equations, failing {bad}, {dt:.1f}s")
    assert ok


def test_c06_subject_reduction(report):
    t0 = time.perf_counter()
    gen = TermGenerator(6, MELL, redex_bias=0.6)
    bad = succ = 0
    for _ in range(1000):
        sample = gen.typed(gen.rng.randint(3, 16))
        for s, _ in step_modulo(sample.term):
            succ += 1
            try:
                ty, _ = check(s, sample.unr, sample.lin, MELL, sample.type)
                bad += ty != sample.type
            except Exception:  # noqa: BLE001
                bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 120
    report(6, ok, f"1000 terms, {succ} successors, {bad} failures, {dt:.1f}s")
    assert ok


def test_c07_strong_bisimulation(report):
    t0 = time.perf_counter()
    bad = moved = 0
    for i in range(500):
        sample, s, witness = equivalent_pair(i)
        moved += bool(witness)
        rep = bisim_check(sample.term, s, unr=sample.unr, lin=sample.lin)
        bad += len(rep.counterexamples) + len(rep.unknown)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 120
    report(7, ok, f"500 pairs ({moved} moved by axioms), {bad} unmatched steps, {dt:.1f}s")
    assert ok


def test_c08_critical_pair(report):
    t = parse_term("(par a b. (par c d. b # (c, d))[* := a] @ p) ~@ r")
    lin = {"p": parse_formula("~X"), "r": parse_formula("X par bot")}
    nfs = normal_forms(t)
    distinct = len(nfs) == 2 and not alpha_eq(nfs[0], nfs[1])
    joined = distinct and equiv_check(nfs[0], nfs[1], None, lin).verdict == EQUIVALENT
    report(8, distinct and joined, f"{len(nfs)} pre-reduction normal forms, joined modulo ≡: {joined}")
    assert distinct and joined


def test_c09_confluence_on_enumerated_corpus(report):
    # Corpus: closed typable MELL terms to size 7 in which every eliminator
    # meets a matching introduction (the redex-dense part of the enumeration).
    t0 = time.perf_counter()
    terms = multi = bad = unknown = 0
    for s in saturated_corpus(7, max_free=0):
        terms += 1
        nfs = normal_forms(s.term)
        multi += len(nfs) > 1
        for m in nfs[1:]:
            v = equiv_check(nfs[0], m, s.unr, s.lin).verdict
            unknown += v == UNKNOWN
            bad += v not in (EQUIVALENT, UNKNOWN)
    dt = time.perf_counter() - t0
    ok = bad == 0 and unknown == 0 and dt < 300
    report(9, ok, f"{terms} terms, {multi} with several normal forms, {bad} unjoined, {unknown} unknown, {dt:.1f}s")
    assert ok


def test_c10_sequent_round_trips(report):
    t0 = time.perf_counter()
    proofs = curated_proofs()
    rules: Counter = Counter()
    cases: Counter = Counter()
    bad = 0
    for _, mode, p in proofs:
        rules.update(p.rules())
        for i in range(len(p.conclusion)):
            try:
                _, d = completeness_extract(p, i, mode, cases=cases)
                verify_derivation(d, mode)
                q = soundness_translate(d, mode)
                bad += not check_proof(q, mode) or multiset(q.conclusion) != multiset(p.conclusion)
            except Exception:  # noqa: BLE001
                bad += 1
    dt = time.perf_counter() - t0
    needed = (set(MELL_RULES) | set(MLL_RULES)) - {"l-cut"}
    thin = sorted(r for r in needed if rules[r] < 2)
    tensor = {"l-⊗/principal", "l-⊗/left", "l-⊗/right"} <= set(cases)
    ok = len(proofs) == 50 and not thin and tensor and bad == 0 and dt < 60
    report(10, ok, f"{len(proofs)} proofs, rules used <2 times {thin}, all l-⊗ cases {tensor}, {bad} failures, {dt:.1f}s")
    assert ok


def test_c11_classical_translations(report):
    t0 = time.perf_counter()
    lmu = classical_corpus(LAMBDA_MU)
    bad, unknown, checked = [], 0, 0
    for m in lmu:
        for via in ("T", "Q"):
            if via == "Q" and not q_supported(m):
                continue
            verify_derivation(check_translation_type(m, via), MELL)
            for c in check_mu_steps(m, via):
                checked += 1
                unknown += c.report.verdict == "Unknown"
                if not c.ok:
                    bad.append((via, c.rule))
    for c in classical_corpus(LBAR_MU_MUTILDE):
        for s in check_ch_steps(c):
            checked += 1
            if not s.ok:
                bad.append(("lbar", s.rule))
    dcll_rules = set()
    for m in classical_corpus(MU_DCLL):
        for s in check_dcll_steps(m):
            checked += 1
            dcll_rules.add(s.rule)
            if not s.ok:
                bad.append(("dcll", s.rule))
    rules = {r for m in lmu for r, _, _ in mu_step(m, LAMBDA_MU)}
    dt = time.perf_counter() - t0
    ok = (
        len(lmu) >= 30 and rules == {"beta", "mu", "rho", "theta"} and len(dcll_rules) == 4
        and not bad and unknown == 0 and dt < 300
    )
    report(11, ok, f"{len(lmu)} λμ terms, {checked} simulated steps, failures {bad}, {unknown} unknown, {dt:.1f}s")
    assert ok


def test_c12_tml_against_unmemoised_search(report):
    t0 = time.perf_counter()
    gen = TermGenerator(12, MELL, redex_bias=0.6)
    bad = 0
    for _ in range(200):
        t = gen.typed(gen.rng.randint(3, 10), min_redexes=1).term
        assert find_pre_redexes(t)
        bad += tml(t, memo=True) != tml(t, memo=False)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    report(12, ok, f"200 terms, {bad} disagreements, {dt:.1f}s")
    assert ok
