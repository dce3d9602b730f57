"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict (type error, NotEquivalent, failed
check), 2 Unknown or fuel exhausted, 3 usage or syntax error.  Diagnostics go
to stderr; results go to stdout, as JSON with ``--json``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

OK, NEGATIVE, UNKNOWN, USAGE = 0, 1, 2, 3

DEFAULT_EQUIV_FUEL = 10_000
DEFAULT_REDUCTION_FUEL = 100_000


@dataclass
class Outcome:
    code: int = OK
    out: list[str] = field(default_factory=list)
    err: list[str] = field(default_factory=list)

    def fail(self, code: int, msg: str) -> "Outcome":
        self.code = max(self.code, code)
        self.err.append(msg)
        return self


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc


def _problem(path: str, opts):
    from mell.cli.parser import parse_problem

    return parse_problem(_read(path), opts.mode)


def _env_or_open(p):
    """Declared environments, or ``None`` (principal types) when nothing is declared."""
    if p.linear or p.unrestricted:
        return p.unrestricted, p.linear, False
    return None, None, True


def _emit(res: Outcome, opts, payload: dict, text: list[str]) -> None:
    if opts.json:
        res.out.append(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        res.out.extend(text)


# ------------------------------------------------------------------ commands


def cmd_check(path: str, opts) -> Outcome:
    from mell.syntax import show_formula, to_json
    from mell.typing import TypingError, typecheck

    res = Outcome()
    p = _problem(path, opts)
    unr, lin, open_vars = _env_or_open(p)
    try:
        ty = typecheck(p.term, unr, lin, p.mode, p.expected, open_vars=open_vars)
    except TypingError as exc:
        return res.fail(NEGATIVE, f"{path}: type error: {exc}")
    text = [f"{path}: {ty.derivation.judgement()}"]
    if opts.trace:
        text.append(ty.derivation.render(2))
    _emit(res, opts, {
        "file": path, "mode": p.mode, "term": to_json(p.term), "type": show_formula(ty.type),
        "linear": {k: show_formula(v) for k, v in sorted(ty.lin.items())},
        "unrestricted": {k: show_formula(v) for k, v in sorted(ty.unr.items())},
    }, text)
    return res


def cmd_normalize(path: str, opts) -> Outcome:
    from mell.equivalence import EQUIVALENT, equiv_check
    from mell.reduction import FuelExhausted, normal_forms, normalize
    from mell.syntax import show, to_json

    res = Outcome()
    p = _problem(path, opts)
    fuel = opts.fuel or DEFAULT_REDUCTION_FUEL
    try:
        nf, trace = normalize(p.term, p.mode, "leftmost-outermost", fuel)
        nfs = normal_forms(p.term, p.mode, fuel) if opts.strategy == "full-search" else [nf]
    except FuelExhausted as exc:
        return res.fail(UNKNOWN, f"{path}: {exc}")
    text = []
    if opts.trace:
        text += [f"  {line}" for line in trace.lines()]
    if len(nfs) > 1:
        text += [f"normal form {i + 1}: {show(t)}" for i, t in enumerate(nfs)]
        unr, lin, _ = _env_or_open(p)
        verdicts = [equiv_check(nfs[0], t, unr, lin, DEFAULT_EQUIV_FUEL, p.mode).verdict for t in nfs[1:]]
        if all(v == EQUIVALENT for v in verdicts):
            text.append(f"common normal form up to ≡: {show(nf)}")
        else:
            res.fail(UNKNOWN if "Unknown" in verdicts else NEGATIVE, f"{path}: normal forms are not ≡-joinable")
    else:
        text.append(f"normal form: {show(nf)}")
    _emit(res, opts, {
        "file": path, "normal_forms": [to_json(t) for t in nfs], "steps": len(trace),
        "trace": trace.lines() if opts.trace else [],
    }, text)
    return res


def cmd_sn(path: str, opts) -> Outcome:
    from mell.reduction import FuelExhausted, longest_path

    res = Outcome()
    p = _problem(path, opts)
    try:
        n, redexes = longest_path(p.term, p.mode, opts.fuel or DEFAULT_REDUCTION_FUEL)
    except FuelExhausted as exc:
        return res.fail(UNKNOWN, f"{path}: {exc}")
    text = [f"{path}: tml = {n}"]
    if opts.trace:
        text += [f"  {r}" for r in redexes]
    _emit(res, opts, {"file": path, "tml": n, "path": [str(r) for r in redexes]}, text)
    return res


def cmd_soundness(path: str, opts) -> Outcome:
    from mell.sequent import check_proof, show_proof, soundness_translate
    from mell.typing import TypingError, typecheck

    res = Outcome()
    p = _problem(path, opts)
    unr, lin, open_vars = _env_or_open(p)
    try:
        d = typecheck(p.term, unr, lin, p.mode, p.expected, open_vars=open_vars).derivation
    except TypingError as exc:
        return res.fail(NEGATIVE, f"{path}: type error: {exc}")
    proof = soundness_translate(d, p.mode)
    verdict = check_proof(proof, p.mode)
    if not verdict:
        return res.fail(NEGATIVE, f"{path}: translated proof does not check:\n{verdict.report()}")
    _emit(res, opts, {"file": path, "sequent": proof.sequent(), "size": proof.size()},
          [f"{path}: {proof.sequent()}", show_proof(proof, ascii_rules=True, indent=2)])
    return res


def cmd_extract(path: str, opts) -> Outcome:
    from mell.sequent import SequentError, parse_proof
    from mell.syntax import show, to_json

    from mell.sequent import completeness_extract

    res = Outcome()
    mode = opts.mode or "mell"
    proof = parse_proof(_read(path), mode)
    picks = [opts.select] if opts.select is not None else range(len(proof.conclusion))
    rows = []
    for i in picks:
        try:
            t, d = completeness_extract(proof, i, mode)
        except (SequentError, IndexError) as exc:
            return res.fail(NEGATIVE, f"{path}: conclusion {i}: {exc}")
        rows.append((i, t, d))
    text = [f"[{i}] {d.judgement()}" for i, _, d in rows]
    _emit(res, opts, {"file": path, "terms": [{"select": i, "term": to_json(t), "shown": show(t)} for i, t, _ in rows]}, text)
    return res


def cmd_translate(path: str, opts) -> Outcome:
    from mell import classical as C
    from mell.cli.parser import parse_classical
    from mell.syntax import show, show_formula
    from mell.typing import TypingError, check

    res = Outcome()
    src = parse_classical(_read(path), opts.source)
    calc, via = src.calculus, opts.via
    try:
        if calc in (C.LAMBDA_MU, C.LAMBDA_MU_V):
            via = via or ("Q" if calc == C.LAMBDA_MU_V else "T")
            if via not in ("T", "Q"):
                raise UsageError(f"λμ sources translate via T or Q, not {via}")
            ty = C.mu_infer(src.term, src.gamma, src.sigma)
            term = C.t_translate(src.term) if via == "T" else C.q_translate(src.term)
            unr, lin, goal = (C.t_env(ty) if via == "T" else C.q_env(ty)), {}, C.BOTTOM
            source_judgement = ty.judgement(src.term)
            steps = C.check_mu_steps(src.term, via, opts.fuel or DEFAULT_EQUIV_FUEL) if opts.trace else []
        elif calc == C.LBAR_MU_MUTILDE:
            via = via or "T"
            if via != "T":
                raise UsageError("λ̄μμ̃ sources translate via T")
            ty = C.ch_check(src.term, src.gamma, src.sigma)
            term = C.ch_t_translate(src.term)
            (unr, goal), lin = C.ch_t_judgement(ty), {}
            source_judgement = f"{C.show_ch(src.term)} ({ty.category})"
            steps = C.check_ch_steps(src.term, opts.fuel or DEFAULT_EQUIV_FUEL) if opts.trace and ty.category == "command" else []
        else:
            via = via or "H"
            ty = C.dcll_check(src.term, src.delta, src.gamma, src.sigma)
            term = C.dcll_translate(src.term)
            unr, lin, goal = C.dcll_judgement(ty)
            source_judgement = f"{C.show_mu(src.term)} : {C.show_ctype(ty.type)}"
            steps = C.check_dcll_steps(src.term, opts.fuel or DEFAULT_EQUIV_FUEL) if opts.trace else []
        check(term, unr, lin, "mell", goal)
    except (C.ClassicalError, TypingError) as exc:
        return res.fail(NEGATIVE, f"{path}: {exc}")
    text = [f"source: {source_judgement}", f"image:  {show(term)}",
            "target: " + ", ".join(f"${k}:{show_formula(v)}" for k, v in sorted(unr.items()))
            + " ; " + ", ".join(f"{k}:{show_formula(v)}" for k, v in sorted(lin.items()))
            + f" ⊢ · : {show_formula(goal)}"]
    rows = []
    for s in steps:
        text.append(f"  {s.rule}: {s.target}  {s.report.relation} {s.report.verdict}")
        rows.append({"rule": s.rule, "target": str(s.target), "relation": s.report.relation, "verdict": s.report.verdict})
        if s.report.verdict == "Refuted":
            res.fail(NEGATIVE, f"{path}: {s.rule} step not simulated")
        elif s.report.verdict == "Unknown":
            res.fail(UNKNOWN, f"{path}: {s.rule} step undecided within fuel")
    _emit(res, opts, {"file": path, "calculus": calc, "via": via, "image": show(term), "steps": rows}, text)
    return res


def cmd_equiv(paths: list[str], opts) -> Outcome:
    from mell.equivalence import EQUIVALENT, NOT_EQUIVALENT, equiv_check
    from mell.typing import TypingError

    res = Outcome()
    if len(paths) != 2:
        raise UsageError("equiv takes exactly two files")
    p, q = (_problem(x, opts) for x in paths)
    unr = {**p.unrestricted, **q.unrestricted} or None
    lin = {**p.linear, **q.linear} or None
    try:
        r = equiv_check(p.term, q.term, unr, lin, opts.fuel or DEFAULT_EQUIV_FUEL, p.mode)
    except TypingError as exc:
        return res.fail(NEGATIVE, f"type error: {exc}")
    text = [r.verdict]
    if opts.trace:
        text += [f"  {s}" for s in r.path]
    _emit(res, opts, {"verdict": r.verdict, "explored": r.explored, "path": [str(s) for s in r.path]}, text)
    if r.verdict == NOT_EQUIVALENT:
        res.code = NEGATIVE
    elif r.verdict != EQUIVALENT:
        res.code = UNKNOWN
    return res


def cmd_selftest(opts) -> Outcome:
    from mell.equivalence import EQUIVALENT, equiv_check
    from mell.generators import TermGenerator, shrink
    from mell.reduction import step_modulo
    from mell.syntax import show
    from mell.typing import TypingError, typecheck

    res = Outcome()
    fuel = opts.fuel or DEFAULT_EQUIV_FUEL
    rows = []
    from mell.equivalence import derived_equations

    for name, lhs, rhs, lin in derived_equations():
        v = equiv_check(lhs, rhs, None, lin, fuel).verdict
        rows.append({"equation": name, "verdict": v})
        if v != EQUIVALENT:
            res.fail(UNKNOWN if v == "Unknown" else NEGATIVE, f"derived equation failed: {name}")
    seed = opts.seed if opts.seed is not None else 0
    gen = TermGenerator(seed, "mell", redex_bias=0.5)

    def breaks_subject_reduction(t) -> bool:
        ty = typecheck(t, open_vars=True, derivation=False)
        for s, _ in step_modulo(t, "mell", 2_000):
            try:
                got = typecheck(s, ty.unr, {k: v for k, v in ty.lin.items()}, "mell", ty.type, derivation=False)
            except TypingError:
                return True
            if got.type != ty.type:
                return True
        return False

    failures = []
    for _ in range(opts.samples):
        t = gen.typed(gen.rng.randint(3, 10)).term
        if breaks_subject_reduction(t):
            failures.append(shrink(t, breaks_subject_reduction))
    for t in failures:
        res.fail(NEGATIVE, f"subject reduction counterexample (shrunk): {show(t)}")
    text = [f"{'PASS' if r['verdict'] == EQUIVALENT else 'FAIL'} {r['equation']}" for r in rows]
    text.append(f"subject reduction: {opts.samples} random terms, seed {seed}, {len(failures)} failures")
    _emit(res, opts, {"equations": rows, "seed": seed, "samples": opts.samples,
                      "subject_reduction_failures": [show(t) for t in failures]}, text)
    return res


PER_FILE = {
    "check": cmd_check,
    "normalize": cmd_normalize,
    "sn": cmd_sn,
    "soundness": cmd_soundness,
    "extract": cmd_extract,
    "translate": cmd_translate,
}


# ------------------------------------------------------------------ plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["mll", "mell"], default=None)
    common.add_argument("--fuel", type=int, default=None, help="equivalence nodes or reduction steps")
    common.add_argument("--trace", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--strategy", choices=["leftmost-outermost", "full-search"], default="leftmost-outermost")

    ap = argparse.ArgumentParser(prog="mell", description="λ_MELL toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("check", "normalize", "sn", "soundness"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("files", nargs="+")
    sp = sub.add_parser("extract", parents=[common])
    sp.add_argument("files", nargs="+")
    sp.add_argument("--select", type=int, default=None)
    sp = sub.add_parser("translate", parents=[common])
    sp.add_argument("files", nargs="+")
    sp.add_argument("--from", dest="source", default=None,
                    choices=["lambda-mu", "lambda-mu-v", "lbar-mu-mutilde", "mu-dcll"])
    sp.add_argument("--via", choices=["T", "Q", "H"], default=None)
    sp = sub.add_parser("equiv", parents=[common])
    sp.add_argument("files", nargs=2)
    sp = sub.add_parser("selftest", parents=[common])
    sp.add_argument("--samples", type=int, default=50)
    return ap


def _guarded(fn, *args) -> Outcome:
    from mell.cli.parser import ParseError
    from mell.sequent import ProofParseError

    try:
        return fn(*args)
    except UsageError as exc:
        return Outcome(USAGE, [], [str(exc)])
    except (ParseError, ProofParseError) as exc:
        return Outcome(USAGE, [], [f"syntax error: {exc}"])


def _one_file(command: str, path: str, opts) -> Outcome:
    return _guarded(PER_FILE[command], path, opts)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    if opts.seed is not None:
        random.seed(opts.seed)
    if opts.command == "equiv":
        outcomes = [_guarded(cmd_equiv, opts.files, opts)]
    elif opts.command == "selftest":
        outcomes = [_guarded(cmd_selftest, opts)]
    elif opts.jobs > 1 and len(opts.files) > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            outcomes = list(pool.map(_one_file, [opts.command] * len(opts.files), opts.files, [opts] * len(opts.files)))
    else:
        outcomes = [_one_file(opts.command, f, opts) for f in opts.files]
    code = OK
    for o in outcomes:
        for line in o.out:
            print(line, file=stdout)
        for line in o.err:
            print(line, file=stderr)
        code = USAGE if USAGE in (code, o.code) else max(code, o.code)
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
