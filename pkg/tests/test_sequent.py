import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from mell.cli.parser import parse_formula
from mell.generators import TermGenerator, random_proof
from mell.sequent import (
    MELL_RULES, MLL_RULES, CutPresent, Proof, SequentError, check_proof, completeness_extract,
    curated_proofs, multiset, parse_proof, show_proof, soundness_translate,
)
from mell.syntax import MELL, MLL, WhyNot, negate
from mell.typing import verify_derivation

seeds = st.integers(0, 2**32 - 1)
modes = st.sampled_from([MELL, MLL])
F = parse_formula
CURATED = curated_proofs()


def _expected_conclusion(d, mode):
    unr = [WhyNot(negate(d.unr[u])) for u in d.unr] if mode == MELL else []
    return multiset(unr + [negate(d.lin[a], mode) for a in d.lin] + [d.type])


def _round_trip(p, mode):
    for i in range(len(p.conclusion)):
        t, d = completeness_extract(p, i, mode)
        verify_derivation(d, mode)
        assert d.type == p.conclusion[i]
        q = soundness_translate(d, mode)
        assert check_proof(q, mode)
        assert multiset(q.conclusion) == multiset(p.conclusion)


@pytest.mark.parametrize("name,mode,proof", CURATED, ids=[c[0] for c in CURATED])
def test_curated_proof_round_trip(name, mode, proof):
    assert check_proof(proof, mode)
    _round_trip(proof, mode)


def test_curated_corpus_covers_every_rule_and_case():
    cases: Counter = Counter()
    seen: Counter = Counter()
    for _, mode, p in CURATED:
        seen.update(p.rules())
        for i in range(len(p.conclusion)):
            completeness_extract(p, i, mode, cases=cases)
    assert set(MELL_RULES) - {"l-cut"} <= set(seen)
    assert set(MLL_RULES) - {"l-cut"} <= set(seen)
    for r in set(MELL_RULES) - {"l-cut", "l-ax", "l-1"}:
        assert f"{r}/principal" in cases
    assert {"l-⊗/left", "l-⊗/right", "l-ax", "l-1"} <= set(cases)


@given(seeds, modes)
def test_random_proofs_round_trip(seed, mode):
    p = random_proof(random.Random(seed), 4, mode)
    assert check_proof(p, mode)
    _round_trip(p, mode)


@given(seeds, modes)
def test_soundness_of_typed_terms(seed, mode):
    gen = TermGenerator(seed, mode, redex_bias=0.4)
    sample = gen.typed(gen.rng.randint(1, 12))
    q = soundness_translate(sample.typing.derivation, mode)
    assert check_proof(q, mode)
    assert multiset(q.conclusion) == _expected_conclusion(sample.typing.derivation, mode)


@given(seeds, modes)
def test_show_parse_round_trip(seed, mode):
    p = random_proof(random.Random(seed), 3, mode)
    for ascii_rules in (False, True):
        assert parse_proof(show_proof(p, ascii_rules), mode) == p


def test_extraction_rejects_cuts():
    ax = Proof("l-ax", (F("~X"), F("X")))
    cut = Proof("l-cut", (F("~X"), F("X")), (ax, ax))
    assert check_proof(cut)
    with pytest.raises(CutPresent):
        completeness_extract(cut, 0)


def test_extraction_rejects_bad_index():
    with pytest.raises(IndexError):
        completeness_extract(Proof("l-ax", (F("~X"), F("X"))), 2)


@pytest.mark.parametrize(
    "proof",
    [
        Proof("l-ax", (F("X"), F("X"))),
        Proof("l-1", (F("1"), F("X"))),
        Proof("l-⊗", (F("X * Y"),), (Proof("l-ax", (F("~X"), F("X"))), Proof("l-ax", (F("~Y"), F("Y"))))),
        Proof("l-?w", (F("~X"), F("X"), F("!Y")), (Proof("l-ax", (F("~X"), F("X"))),)),
        Proof("l-!p", (F("!X"), F("~X")), (Proof("l-ax", (F("X"), F("~X"))),)),
    ],
)
def test_invalid_nodes_are_reported(proof):
    res = check_proof(proof)
    assert not res
    assert "root" in res.report()
    with pytest.raises(SequentError):
        completeness_extract(proof, 0)


def test_parse_errors():
    with pytest.raises(SequentError):
        parse_proof("l-ax ~X, X")
