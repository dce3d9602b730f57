import io
import json
from pathlib import Path

import pytest

from mell.cli.main import NEGATIVE, OK, UNKNOWN, USAGE, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_check_reports_judgement():
    code, out, _ = _run("check", SAMPLES / "ax.mell")
    assert code == OK
    assert "a:A ⊢ a : A" in out


def test_check_json():
    code, out, _ = _run("check", SAMPLES / "swap.mell", "--json")
    assert code == OK
    payload = json.loads(out)
    assert payload["type"] == "B * A"
    assert payload["linear"] == {"z": "A * B"}


def test_type_error_is_negative(tmp_path):
    f = _write(tmp_path, "bad.mell", "linear a : A;\n(a, a)\n")
    code, _, err = _run("check", f)
    assert code == NEGATIVE
    assert err


def test_syntax_error_is_usage(tmp_path):
    f = _write(tmp_path, "bad.mell", "(a,\n")
    code, _, err = _run("check", f)
    assert code == USAGE
    assert "syntax error" in err


@pytest.mark.parametrize("argv", [["check", "missing.mell"], ["bogus"], ["equiv", "only-one.mell"]])
def test_usage_errors(argv):
    assert _run(*argv)[0] == USAGE


def test_normalize_full_search_lists_every_normal_form():
    code, out, _ = _run("normalize", SAMPLES / "critical_pair.mell", "--strategy", "full-search")
    assert code == OK
    assert "normal form 1" in out and "normal form 2" in out
    assert "common normal form up to ≡" in out


def test_normalize_trace():
    code, out, _ = _run("normalize", SAMPLES / "critical_pair.mell", "--trace")
    assert code == OK
    assert "STEP beta-parR @ root" in out


def test_fuel_exhaustion_is_unknown():
    assert _run("normalize", SAMPLES / "critical_pair.mell", "--fuel", "1")[0] == UNKNOWN


def test_sn_reports_longest_reduction():
    code, out, _ = _run("sn", SAMPLES / "critical_pair.mell")
    assert code == OK and "tml = 2" in out


def test_equiv_verdicts(tmp_path):
    assert _run("equiv", SAMPLES / "cut_left.mell", SAMPLES / "cut_right.mell")[0] == OK
    a = _write(tmp_path, "a.mell", "linear x : A; linear y : A;\n(x, y)\n")
    b = _write(tmp_path, "b.mell", "linear x : A; linear y : A;\n(y, x)\n")
    code, out, _ = _run("equiv", a, b)
    assert code == NEGATIVE and "NotEquivalent" in out


def test_soundness_and_extract():
    code, out, _ = _run("soundness", SAMPLES / "swap.mell")
    assert code == OK and "l-tensor" in out
    code, out, _ = _run("extract", SAMPLES / "tensor_comm.proof", "--select", "1")
    assert code == OK and ": B * A" in out


@pytest.mark.parametrize("name,via", [("callcc.lmu", "T"), ("mu_v.lmu", "Q"), ("beta.lbar", None), ("theta.dcll", None)])
def test_translate_samples(name, via):
    argv = ["translate", SAMPLES / name, "--trace"] + (["--via", via] if via else [])
    code, out, _ = _run(*argv)
    assert code == OK, out
    assert "image:" in out
    assert "Refuted" not in out and "Unknown" not in out


def test_selftest_is_deterministic():
    first = _run("selftest", "--samples", "5", "--seed", "3")
    second = _run("selftest", "--samples", "5", "--seed", "3")
    assert first[0] == OK
    assert first == second
    assert "FAIL" not in first[1]


def test_parallel_jobs_match_sequential():
    files = [SAMPLES / n for n in ("ax.mell", "swap.mell", "cut_left.mell")]
    assert _run("check", *files, "--jobs", "2") == _run("check", *files)
