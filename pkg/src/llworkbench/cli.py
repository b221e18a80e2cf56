"""``llwb``: prove, encode, crosscheck and model-check from problem files.

Exit codes: 0 proved (or true), 1 not provable at the bound (or false),
2 depth exhausted, 3 input or usage error.  ``crosscheck`` exits 0 only on
full agreement.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import ctl as C
from .encoders import adequacy_crosscheck, encode_hyll_sequent_ll, encode_hyll_sequent_sell
from .hyll import check_hyll, prove_hyll, sequent
from .llf import check_llf, prove_llf
from .mumall import MissingHint, check_mumall, prove_mumall
from .problems import Problem, ProblemError, parse_problem, problem_str
from .proof import ReplayError, Verdict, serialize
from .sellf import check_sell, k_make, prove_sell

DEPTH_ENV = "LLWB_DEPTH"
DEFAULT_DEPTH = {"llf": 8, "sellf": 8, "hyll": 3, "mumall": None}
ERROR = 3


class UsageError(Exception):
    pass


def load(path: str, engine: Optional[str] = None) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    try:
        return parse_problem(text, engine)
    except ProblemError as e:
        raise UsageError(f"{path}: {e}") from None


def resolve_depth(engine: str, cli: Optional[int], p: Problem) -> Optional[int]:
    if cli is not None:
        return cli
    if p.depth is not None:
        return p.depth
    env = os.environ.get(DEPTH_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{DEPTH_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_DEPTH[engine]


def run_prove(engine: str, p: Problem, depth: Optional[int], bias: str):
    """Search and replay; returns (result, rendered proof or None)."""
    if p.engine != engine:
        raise UsageError(f"this is a {p.engine} problem, not a {engine} one")
    if engine == "llf":
        res = prove_llf(p.classical, p.linear, p.goal, depth, bias=bias, domain=p.domain, pools=p.pools,
                        slack=p.slack)
        check = lambda q: check_llf(q, bias, p.domain)
    elif engine == "sellf":
        res = prove_sell(p.signature, k_make(list(p.ctx)), p.linear, p.goal, depth, bias=bias,
                         domain=p.domain, pools=p.pools, slack=p.slack)
        check = lambda q: check_sell(q, p.signature, bias, p.domain)
    elif engine == "hyll":
        res = prove_hyll(p.sequent, depth, domain=p.domain, slack=p.slack)
        check = lambda q: check_hyll(q, p.domain)
    else:
        res = prove_mumall(p.delta, p.hints, depth)
        check = check_mumall
    if res.proof is None:
        return res, None
    check(res.proof)
    return res, serialize(res.proof)


def encode(target: str, p: Problem) -> Problem:
    if target in ("hyll-to-ll", "hyll-to-sell"):
        if p.engine != "hyll":
            raise UsageError(f"{target} needs a hyll problem")
        if target == "hyll-to-ll":
            e = encode_hyll_sequent_ll(p.sequent, domain=p.domain, slack=p.slack)
            return Problem("llf", depth=DEFAULT_DEPTH["llf"], domain=p.domain, slack=p.slack, pools=e.pools,
                           classical=e.classical, linear=e.linear)
        e = encode_hyll_sequent_sell(p.sequent, domain=p.domain, slack=p.slack)
        ctx = tuple((lab, f) for lab, fs in e.k for f in fs)
        return Problem("sellf", depth=DEFAULT_DEPTH["sellf"], domain=p.domain, slack=p.slack, pools=e.pools,
                       signature=e.sig, ctx=ctx)
    if target in ("ctl-to-mumall", "ctl-to-hyll"):
        if p.engine != "ctl" or p.query is None:
            raise UsageError(f"{target} needs a ctl problem with a 'query:' line")
        ts, s, f = p.system, p.state, p.query
        if target == "ctl-to-hyll":
            try:
                goal = C.encode_ctl_hyll(ts, f)
            except C.UnsupportedFragment as e:
                raise UsageError(f"{e}; EG/AG need a greatest fixed point and A-quantifiers a universal "
                                 "over successors, which the modal encoding cannot express adequately") from None
            return Problem("hyll", depth=6, sequent=C.hyll_query(ts, s, goal))
        delta = tuple(C.mumall_query(ts, s, f))
        synth = C.synthesizer_for(ts, f)
        hints = {}
        for g in C._subformulas(f):
            if isinstance(g, C.Temporal) and g.op == "G":
                nu = C.encode_ctl_mumall(ts, g)
                hints[nu] = synth(nu)
        return Problem("mumall", delta=delta, hints=hints)
    raise UsageError(f"unknown encode target {target!r}")


# -- crosscheck

def _cases(root: Path, pattern: str) -> list:
    return sorted(root.glob(pattern), key=lambda q: q.name)


def crosscheck(kind: str, root: Path, depth: Optional[int], size: int = 3) -> tuple:
    """Returns (records, summary dict); each record is a list of (key, value)."""
    if not root.is_dir():
        raise UsageError(f"{root}: not a directory")
    records = []
    if kind == "hyll-adequacy":
        for path in _cases(root, "*.prob"):
            p = load(str(path))
            if p.engine != "hyll":
                continue
            r = adequacy_crosscheck(p.sequent, depth if depth is not None else (p.depth or 3),
                                    domain=p.domain, slack=p.slack)
            decided = {r[k] for k in ("hyll", "ll", "sell")} - {Verdict.EXHAUSTED.value}
            ok = r["agree"] and r["bipoles"] and (p.expect is None or decided <= {p.expect})
            records.append([("case", path.name), ("hyll", r["hyll"]), ("ll", r["ll"]), ("sell", r["sell"]),
                            ("expect", p.expect or "-"), ("bipoles", _yn(r["bipoles"])),
                            ("excluded", _yn(Verdict.EXHAUSTED.value in (r["hyll"], r["ll"], r["sell"]))),
                            ("agree", _yn(ok))])
    elif kind == "ctl-mumall":
        for path in _cases(root, "*.ts"):
            ts = C.parse_system(path.read_text(encoding="utf-8"))
            for s in _states(ts):
                for f in C.enumerate_ctl(ts.vars, size):
                    records.append(_ctl_record(path.name, ts, s, f, None))
        for path in _cases(root, "*.prob"):
            p = load(str(path))
            if p.engine == "ctl" and p.query is not None:
                records.append(_ctl_record(path.name, p.system, p.state, p.query, p.expect))
    elif kind == "ctl-hyll-fragment":
        d = depth if depth is not None else 3
        for path in _cases(root, "*.ts"):
            ts = C.parse_system(path.read_text(encoding="utf-8"))
            for r in ts.rules:
                for s in ts.states():
                    for s2 in ts.states():
                        records.append(_transition_record(path.name, ts, r, s, s2, d))
        for path in _cases(root, "*.prob"):
            p = load(str(path))
            if p.engine == "ctl" and p.query is not None and C.in_hyll_fragment(p.query):
                records.append(_fragment_record(path.name, p, depth if depth is not None else 4))
    else:
        raise UsageError(f"unknown crosscheck kind {kind!r}")
    agree = sum(1 for r in records if dict(r)["agree"] == "yes")
    excluded = sum(1 for r in records if dict(r).get("excluded") == "yes")
    summary = {"kind": kind, "cases": len(records), "agree": agree, "disagree": len(records) - agree,
               "excluded": excluded,
               "percent": f"{100.0 * agree / len(records):.2f}" if records else "100.00"}
    return records, summary


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _states(ts: C.TransitionSystem) -> list:
    return ts.reachable(ts.init) if ts.init is not None else ts.states()


def _ctl_record(name, ts, s, f, expect) -> list:
    r = C.mc_via_mumall(ts, s, f)
    if r["proof"] is not None:
        check_mumall(r["proof"])
    got = r["verdict"] is Verdict.PROVED
    ok = got == r["oracle"] and (expect is None or expect == ("true" if got else "false"))
    return [("case", f"{name} {s} {C.ctl_str(f)}"), ("oracle", _tf(r["oracle"])), ("mumall", r["verdict"].value),
            ("expect", expect or "-"), ("agree", _yn(ok))]


def _tf(b: bool) -> str:
    return "true" if b else "false"


def _transition_record(name, ts, r, s, s2, depth) -> list:
    q = C.hyll_query(ts, s, C.delta_hyll(1, C.encode_state_hyll(ts, s2)))
    q = sequent([C.encode_rule_hyll(ts, r)], q.delta, q.goal)
    res = prove_hyll(q, depth)
    if res.proof is not None:
        check_hyll(res.proof)
    want = C.step(ts, s, r) == s2
    return [("case", f"{name} {r.name}: {s} -> {s2}"), ("step", _tf(want)), ("hyll", res.verdict.value),
            ("agree", _yn(res.proved == want))]


def _fragment_record(name, p: Problem, depth) -> list:
    r = C.mc_via_hyll(p.system, p.state, p.query, depth)
    if r["proof"] is not None:
        check_hyll(r["proof"])
    got = r["verdict"] is Verdict.PROVED
    ok = got == r["oracle"] and (p.expect is None or p.expect == _tf(got))
    return [("case", f"{name} {C.ctl_str(p.query)}"), ("oracle", _tf(r["oracle"])),
            ("hyll", r["verdict"].value), ("expect", p.expect or "-"), ("agree", _yn(ok))]


def report_str(records, summary) -> str:
    out = []
    for rec in records:
        out += [f"{k}: {v}" for k, v in rec]
        out.append("")
    out += [f"{k}: {v}" for k, v in summary.items()]
    bad = [dict(r)["case"] for r in records if dict(r)["agree"] != "yes"]
    out.append("disagreements: " + ("none" if not bad else str(len(bad))))
    out += [f"disagreement: {c}" for c in bad]
    return "\n".join(out) + "\n"


# -- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="llwb", description="Linear-logic framework workbench.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    pr = sub.add_parser("prove", help="search for a proof")
    pr.add_argument("engine", choices=("llf", "hyll", "sellf", "mumall"))
    pr.add_argument("file")
    pr.add_argument("--depth", type=int)
    pr.add_argument("--bias", choices=("pos", "neg"))
    pr.add_argument("--proof-out", metavar="PATH")
    en = sub.add_parser("encode", help="translate a problem into another logic")
    en.add_argument("target", choices=("hyll-to-ll", "hyll-to-sell", "ctl-to-mumall", "ctl-to-hyll"))
    en.add_argument("file")
    en.add_argument("-o", "--output", metavar="PATH")
    cc = sub.add_parser("crosscheck", help="compare engines over a corpus directory")
    cc.add_argument("kind", choices=("hyll-adequacy", "ctl-mumall", "ctl-hyll-fragment"))
    cc.add_argument("corpus")
    cc.add_argument("--depth", type=int)
    cc.add_argument("--size", type=int, default=3, help="largest enumerated CTL formula (ctl-mumall)")
    cc.add_argument("--proof-out", metavar="PATH", help="write the report here as well")
    orc = sub.add_parser("oracle", help="explicit-state CTL model checking")
    orc.add_argument("file")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (UsageError, ProblemError, C.CtlError, MissingHint) as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR
    except ReplayError as e:
        print(f"internal error: proof failed replay: {e}", file=sys.stderr)
        return ERROR


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _dispatch(args) -> int:
    if args.cmd == "prove":
        p = load(args.file, args.engine)
        if args.depth is not None and args.depth < 0:
            raise UsageError("--depth must be non-negative")
        depth = resolve_depth(args.engine, args.depth, p)
        res, text = run_prove(args.engine, p, depth, args.bias or p.bias)
        print(f"verdict: {res.verdict.value}")
        if text is not None:
            print(text)
            _write(args.proof_out, text + "\n")
        return res.verdict.exit_code
    if args.cmd == "encode":
        text = problem_str(encode(args.target, load(args.file)))
        if args.output:
            _write(args.output, text)
        else:
            sys.stdout.write(text)
        return 0
    if args.cmd == "crosscheck":
        records, summary = crosscheck(args.kind, Path(args.corpus), args.depth, args.size)
        text = report_str(records, summary)
        sys.stdout.write(text)
        _write(args.proof_out, text)
        return 0 if summary["disagree"] == 0 else 1
    p = load(args.file)
    if p.engine != "ctl" or p.query is None:
        raise UsageError("oracle needs a ctl problem with a 'query:' line")
    holds = C.ctl_check(p.system, p.state, p.query)
    print(f"{C.ctl_str(p.query)} at {p.state}: {_tf(holds)}")
    return 0 if holds else 1


if __name__ == "__main__":
    sys.exit(main())
