"""Line-oriented problem files: one task per file, ``key: value`` lines.

Sections by engine::

    llf     classical: F   linear: F   goal: F
    sellf   labels: a b   order: a <= b   unbounded: a   auto: a
            ctx a: F   linear: F   goal: F
    hyll    sequent: G1, G2 ; D1 |- A @ w
    mumall  delta: F   hint: NU :: INVARIANT
    ctl     vars: / rule NAME: ... -> ... / init:   state: +a -b   query: EF +a

Shared options: ``engine``, ``depth``, ``bias``, ``slack``, ``domain`` (``nat``
or ``free g1 g2``), ``expect`` and the search pools ``terms``/``worlds``/``forms``.
Repeating a key appends; ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ctl as C
from . import formulas as F
from .hyll import HyllSequent, sequent
from .llf import Pools
from .parser import ParseError, parse_formula, parse_judgment, parse_term
from .printer import formula_str, judgment_str, term_str
from .signature import SignatureError, SubexpSignature
from .worlds import NAT, Domain, DomainError

ENGINES = ("llf", "hyll", "sellf", "mumall", "ctl")
VERDICTS = ("proved", "not-provable", "depth-exhausted", "true", "false")

_REPEAT = {"classical", "linear", "goal", "delta", "hint", "ctx", "order"}
_SINGLE = {"engine", "depth", "bias", "slack", "domain", "expect", "sequent", "labels", "unbounded",
           "auto", "terms", "worlds", "forms", "state", "query", "vars", "init"}


class ProblemError(ValueError):
    def __init__(self, msg: str, line: int = 0):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class Problem:
    engine: str
    depth: Optional[int] = None
    bias: str = "neg"
    slack: int = 1
    domain: Domain = NAT
    expect: Optional[str] = None
    pools: Optional[Pools] = None
    classical: tuple = ()
    linear: tuple = ()
    goal: tuple = ()
    signature: Optional[SubexpSignature] = None
    ctx: tuple = ()  # (label, formula) pairs
    sequent: Optional[HyllSequent] = None
    delta: tuple = ()
    hints: dict = field(default_factory=dict)
    system: Optional[C.TransitionSystem] = None
    state: Optional[C.State] = None
    query: Optional[C.Ctl] = None


def split_top(text: str, sep: str) -> list:
    """Split on ``sep`` outside parentheses."""
    out, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            out.append(text[start:i])
            start = i + len(sep)
            i = start
            continue
        i += 1
    out.append(text[start:])
    return out


def parse_sequent(text: str, domain: Domain = NAT, line: int = 1) -> HyllSequent:
    parts = split_top(text, "|-")
    if len(parts) != 2:
        raise ProblemError("sequent needs exactly one '|-'", line)
    ctx = split_top(parts[0], ";")
    if len(ctx) != 2:
        raise ProblemError("sequent needs 'GAMMA ; DELTA |- GOAL'", line)
    items = lambda s: [parse_judgment(x, line) for x in split_top(s, ",") if x.strip()]
    return sequent(items(ctx[0]), items(ctx[1]), parse_judgment(parts[1], line), domain)


def parse_problem(text: str, engine: Optional[str] = None) -> Problem:
    """``engine`` is used when the file has no ``engine:`` line."""
    fields: dict = {}
    system_lines = []
    where: dict = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rule "):
            system_lines.append(line)
            where.setdefault("rule", n)
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ProblemError(f"expected 'key: value', got {line!r}", n)
        key, value = key.strip(), value.strip()
        if key.startswith("ctx "):
            fields.setdefault("ctx", []).append((key[4:].strip(), value, n))
            continue
        if key in ("vars", "init"):
            system_lines.append(line)
        if key in _REPEAT:
            fields.setdefault(key, []).append((value, n))
        elif key in _SINGLE:
            if key in fields:
                raise ProblemError(f"duplicate key {key!r}", n)
            fields[key] = value
        else:
            raise ProblemError(f"unknown key {key!r}", n)
        where.setdefault(key, n)
    try:
        if engine and "engine" not in fields:
            fields["engine"] = engine
        return _build(fields, system_lines, where)
    except ProblemError:
        raise
    except (ParseError, C.CtlError, SignatureError, DomainError, ValueError) as e:
        raise ProblemError(str(e)) from None


def _infer(fields: dict, system_lines: list) -> str:
    marks = {"sequent": "hyll", "ctx": "sellf", "labels": "sellf", "classical": "llf", "delta": "mumall",
             "query": "ctl"}
    found = sorted({eng for key, eng in marks.items() if key in fields})
    if system_lines and not found:
        found = ["ctl"]
    if len(found) != 1:
        raise ProblemError("cannot tell which task this file poses; add an 'engine:' line"
                           if not found else f"sections for several engines: {', '.join(found)}")
    return found[0]


def _domain(text: str) -> Domain:
    words = text.split()
    if words == ["nat"]:
        return NAT
    if words and words[0] == "free":
        return Domain("free", tuple(words[1:]))
    raise ProblemError(f"domain must be 'nat' or 'free g1 g2 ...', got {text!r}")


def _build(fields: dict, system_lines: list, where: dict) -> Problem:
    engine = fields.get("engine") or _infer(fields, system_lines)
    if engine not in ENGINES:
        raise ProblemError(f"unknown engine {engine!r}", where.get("engine", 0))
    p = Problem(engine)
    if "depth" in fields:
        p.depth = _int(fields["depth"], where["depth"])
    if "slack" in fields:
        p.slack = _int(fields["slack"], where["slack"])
    p.bias = fields.get("bias", "neg")
    if p.bias not in ("neg", "pos"):
        raise ProblemError("bias must be 'neg' or 'pos'", where["bias"])
    if "domain" in fields:
        p.domain = _domain(fields["domain"])
    p.expect = fields.get("expect")
    if p.expect is not None and p.expect not in VERDICTS:
        raise ProblemError(f"expect must be one of {', '.join(VERDICTS)}", where["expect"])
    forms = lambda key: tuple(parse_formula(v, n) for v, n in fields.get(key, ()))
    if any(k in fields for k in ("terms", "worlds", "forms")):
        pool = lambda key: tuple(parse_term(t, where[key]) for t in split_top(fields.get(key, ""), ",")
                                 if t.strip())
        p.pools = Pools(pool("terms"), pool("worlds"), pool("forms"))
    if engine == "llf":
        p.classical, p.linear, p.goal = forms("classical"), forms("linear"), forms("goal")
    elif engine == "sellf":
        labels = fields.get("labels", "").split()
        order = []
        for v, n in fields.get("order", ()):
            a, sep, b = v.partition("<=")
            if not sep:
                raise ProblemError("order lines read 'a <= b'", n)
            order.append((a.strip(), b.strip()))
        p.signature = SubexpSignature.build(labels, order, fields.get("unbounded", "").split(),
                                            fields.get("auto") or None)
        ctx = []
        for lab, v, n in fields.get("ctx", ()):
            if lab not in p.signature:
                raise ProblemError(f"context label {lab!r} is not declared", n)
            ctx.append((lab, parse_formula(v, n)))
        p.ctx, p.linear, p.goal = tuple(ctx), forms("linear"), forms("goal")
    elif engine == "hyll":
        if "sequent" not in fields:
            raise ProblemError("hyll problems need a 'sequent:' line")
        p.sequent = parse_sequent(fields["sequent"], p.domain, where["sequent"])
    elif engine == "mumall":
        p.delta = forms("delta")
        from .mumall import Invariant
        for v, n in fields.get("hint", ()):
            parts = split_top(v, "::")
            if len(parts) != 2:
                raise ProblemError("hint lines read 'NU-FORMULA :: INVARIANT'", n)
            nu = parse_formula(parts[0], n)
            if not isinstance(nu, F.Nu):
                raise ProblemError("a hint must name a nu formula", n)
            p.hints[nu] = Invariant(parse_formula(parts[1], n))
    else:
        p.system = C.parse_system("\n".join(system_lines))
        p.state = p.system.init
        if "state" in fields:
            p.state = C._total(C._lits(fields["state"].split()), p.system.vars)
        if "query" in fields:
            p.query = C.parse_ctl(fields["query"])
        if p.state is None:
            raise ProblemError("ctl problems need a 'state:' or 'init:' line")
    return p


def _int(text: str, line: int) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ProblemError(f"expected an integer, got {text!r}", line) from None
    if v < 0:
        raise ProblemError("expected a non-negative integer", line)
    return v


# -- printing

def _domain_str(d: Domain) -> str:
    return "nat" if d.kind == "nat" else " ".join(("free",) + tuple(d.generators))


def problem_str(p: Problem) -> str:
    out = [f"engine: {p.engine}"]
    if p.depth is not None:
        out.append(f"depth: {p.depth}")
    if p.bias != "neg":
        out.append(f"bias: {p.bias}")
    if p.slack != 1:
        out.append(f"slack: {p.slack}")
    if p.domain != NAT:
        out.append(f"domain: {_domain_str(p.domain)}")
    if p.expect:
        out.append(f"expect: {p.expect}")
    if p.pools is not None:
        for key, ts in (("terms", p.pools.term), ("worlds", p.pools.world), ("forms", p.pools.form)):
            if ts:
                out.append(f"{key}: " + ", ".join(term_str(t) for t in ts))
    if p.signature is not None:
        sig = p.signature
        out.append("labels: " + " ".join(sig.sorted_labels()))
        out += [f"order: {a} <= {b}" for a, b in sorted(sig.order)]
        if sig.unbounded:
            out.append("unbounded: " + " ".join(sorted(sig.unbounded)))
        if sig.auto_type:
            out.append(f"auto: {sig.auto_type}")
        out += [f"ctx {lab}: {formula_str(f)}" for lab, f in p.ctx]
    out += [f"classical: {formula_str(f)}" for f in p.classical]
    out += [f"linear: {formula_str(f)}" for f in p.linear]
    out += [f"goal: {formula_str(f)}" for f in p.goal]
    if p.sequent is not None:
        out.append(f"sequent: {sequent_str(p.sequent)}")
    out += [f"delta: {formula_str(f)}" for f in p.delta]
    out += [f"hint: {formula_str(nu)} :: {formula_str(inv.formula)}" for nu, inv in p.hints.items()]
    if p.system is not None:
        out += C.system_str(p.system).splitlines()
        if p.state is not None and p.state != p.system.init:
            out.append(f"state: {p.state}")
        if p.query is not None:
            out.append(f"query: {C.ctl_str(p.query)}")
    return "\n".join(out) + "\n"


def sequent_str(s: HyllSequent) -> str:
    g = ", ".join(judgment_str(j) for j in s.gamma)
    d = ", ".join(judgment_str(j) for j in s.delta)
    return f"{g} ; {d} |- {judgment_str(s.goal)}"
