"""Finite transition systems, CTL, an explicit-state model checker, and the
two logical encodings of CTL (into HyLL and into μMALL)."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

from . import formulas as F
from . import hyll_syntax as H
from .terms import Const
from .worlds import Dot, Nat, WVar


class CtlError(ValueError):
    pass


class NonSerialError(CtlError):
    pass


class UnsupportedFragment(CtlError):
    pass


Lits = tuple  # sorted tuple of (var, bool)


@dataclass(frozen=True)
class State:
    lits: Lits  # one entry per variable, in the system's variable order

    def __getitem__(self, var: str) -> bool:
        return dict(self.lits)[var]

    def __str__(self) -> str:
        return " ".join(("+" if v else "-") + x for x, v in self.lits)


@dataclass(frozen=True)
class Rule:
    name: str
    src: State
    dst: State


@dataclass(frozen=True)
class TransitionSystem:
    vars: tuple
    rules: tuple
    init: Optional[State] = None

    def __post_init__(self):
        for r in self.rules:
            for st in (r.src, r.dst):
                if tuple(x for x, _ in st.lits) != self.vars:
                    raise CtlError(f"rule {r.name} must assign every variable in order {self.vars}")

    def state(self, spec: dict) -> State:
        missing = set(self.vars) - set(spec)
        if missing:
            raise CtlError(f"state leaves {sorted(missing)} unassigned")
        return State(tuple((x, bool(spec[x])) for x in self.vars))

    def states(self) -> list:
        return [State(tuple(zip(self.vars, bits))) for bits in product((True, False), repeat=len(self.vars))]

    def successors(self, s: State) -> list:
        return [(r, r.dst) for r in self.rules if r.src == s]

    def reachable(self, s: State) -> list:
        seen, todo = [s], [s]
        while todo:
            for _, t in self.successors(todo.pop()):
                if t not in seen:
                    seen.append(t)
                    todo.append(t)
        return seen

    def check_serial(self, s: State) -> None:
        for t in self.reachable(s):
            if not self.successors(t):
                raise NonSerialError(f"state {t} reachable from {s} has no successor")


def step(ts: TransitionSystem, s: State, r: Rule) -> Optional[State]:
    if r not in ts.rules:
        raise CtlError(f"unknown rule {r.name}")
    return r.dst if r.src == s else None


# -- CTL syntax

@dataclass(frozen=True)
class Ctl:
    pass


@dataclass(frozen=True)
class Prop(Ctl):
    lits: Lits  # a partial valuation read as a conjunction of literals


@dataclass(frozen=True)
class And(Ctl):
    left: Ctl
    right: Ctl


@dataclass(frozen=True)
class Or(Ctl):
    left: Ctl
    right: Ctl


@dataclass(frozen=True)
class Temporal(Ctl):
    quant: str  # "A" or "E"
    op: str  # "X", "F" or "G"
    sub: Ctl


@dataclass(frozen=True)
class Until(Ctl):
    quant: str
    left: Ctl
    right: Ctl


def ctl_size(f: Ctl) -> int:
    if isinstance(f, Prop):
        return 1
    if isinstance(f, Temporal):
        return 1 + ctl_size(f.sub)
    return 1 + ctl_size(f.left) + ctl_size(f.right)


def ctl_str(f: Ctl, ctx: int = 0) -> str:
    if isinstance(f, Prop):
        out = " & ".join(("+" if v else "-") + x for x, v in f.lits)
        return f"({out})" if len(f.lits) > 1 and ctx > 0 else out
    if isinstance(f, Temporal):
        return f"{f.quant}{f.op} {ctl_str(f.sub, 3)}"
    if isinstance(f, Until):
        return f"{f.quant}[{ctl_str(f.left)} U {ctl_str(f.right)}]"
    prec, sym = (1, "|") if isinstance(f, Or) else (2, "&")
    out = f"{ctl_str(f.left, prec + 1)} {sym} {ctl_str(f.right, prec)}"
    return f"({out})" if prec < ctx else out


_CTL_TOKEN = re.compile(r"\s*(?:([+-][A-Za-z_][A-Za-z0-9_]*)|([AE][XFG])\b|([AE])\[|(U)\b|([&|()\]]))")


def parse_ctl(text: str) -> Ctl:
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _CTL_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise CtlError(f"bad CTL syntax at col {pos + 1}: {text[pos:pos + 10]!r}")
        kind = m.lastindex
        toks.append((("lit", "tmp", "until", "U", "op")[kind - 1], m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    toks.append(("eof", ""))
    i = 0

    def peek(*vals):
        return toks[i][1] in vals and toks[i][0] in ("op", "U")

    def expect(val):
        nonlocal i
        if toks[i][1] != val:
            raise CtlError(f"expected {val!r} in CTL formula, got {toks[i][1] or 'end'!r}")
        i += 1

    def disj():
        nonlocal i
        left = conj()
        if peek("|"):
            i += 1
            return Or(left, disj())
        return left

    def conj():
        nonlocal i
        left = unary()
        if peek("&"):
            i += 1
            return And(left, conj())
        return left

    def unary():
        nonlocal i
        kind, val = toks[i]
        if kind == "lit":
            i += 1
            return Prop(((val[1:], val[0] == "+"),))
        if kind == "tmp":
            i += 1
            return Temporal(val[0], val[1], unary())
        if kind == "until":
            i += 1
            left = disj()
            expect("U")
            right = disj()
            expect("]")
            return Until(val, left, right)
        if peek("("):
            i += 1
            f = disj()
            expect(")")
            return f
        raise CtlError(f"unexpected {val or 'end'!r} in CTL formula")

    f = disj()
    if toks[i][0] != "eof":
        raise CtlError(f"trailing input {toks[i][1]!r} in CTL formula")
    return f


def _lits(words: Sequence[str]) -> Lits:
    out = []
    for w in words:
        if len(w) < 2 or w[0] not in "+-":
            raise CtlError(f"bad literal {w!r}")
        out.append((w[1:], w[0] == "+"))
    return tuple(out)


def parse_system(text: str, expand: bool = False) -> TransitionSystem:
    """Read the ``vars:`` / ``rule NAME: ... -> ...`` / ``init:`` format.

    Rules must mention every variable unless ``expand`` is set, in which
    case each missing variable is split into both values on both sides.
    """
    vars_: tuple = ()
    rules, init = [], None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("vars:"):
                vars_ = tuple(line[5:].split())
            elif line.startswith("rule "):
                name, body = line[5:].split(":", 1)
                lhs, rhs = body.split("->")
                rules += _complete(name.strip(), _lits(lhs.split()), _lits(rhs.split()), vars_, expand)
            elif line.startswith("init:"):
                init = _total(_lits(line[5:].split()), vars_)
            else:
                raise CtlError(f"unknown line {line!r}")
        except (CtlError, ValueError) as e:
            raise CtlError(f"line {n}: {e}") from None
    return TransitionSystem(vars_, tuple(rules), init)


def _total(lits: Lits, vars_: tuple) -> State:
    d = dict(lits)
    if set(d) != set(vars_):
        raise CtlError(f"state must assign exactly {' '.join(vars_)}")
    return State(tuple((x, d[x]) for x in vars_))


def _complete(name, lhs, rhs, vars_, expand) -> list:
    dl, dr = dict(lhs), dict(rhs)
    missing = [x for x in vars_ if x not in dl or x not in dr]
    if missing and not expand:
        raise CtlError(f"rule {name} does not mention {' '.join(missing)}; every rule must use all "
                       "variables (pass expand to generate the completed rule set)")
    out = []
    for k, bits in enumerate(product((True, False), repeat=len(missing))):
        fill = dict(zip(missing, bits))
        src = State(tuple((x, dl.get(x, fill.get(x))) for x in vars_))
        dst = State(tuple((x, dr.get(x, fill.get(x))) for x in vars_))
        out.append(Rule(name if not missing else f"{name}_{k}", src, dst))
    return out


def system_str(ts: TransitionSystem) -> str:
    lines = ["vars: " + " ".join(ts.vars)]
    lines += [f"rule {r.name}: {r.src} -> {r.dst}" for r in ts.rules]
    if ts.init is not None:
        lines.append(f"init: {ts.init}")
    return "\n".join(lines) + "\n"


# -- oracle

def _holds(s: State, lits: Lits) -> bool:
    d = dict(s.lits)
    for x, v in lits:
        if x not in d:
            raise CtlError(f"unknown variable {x!r}")
        if d[x] != v:
            return False
    return True


def sat(ts: TransitionSystem, f: Ctl) -> frozenset:
    """States of ``ts`` satisfying ``f``, by fixed-point iteration over all states."""
    return _sat(ts, f)


@lru_cache(maxsize=4096)
def _sat(ts: TransitionSystem, f: Ctl) -> frozenset:
    every = ts.states()
    if isinstance(f, Prop):
        return frozenset(s for s in every if _holds(s, f.lits))
    if isinstance(f, And):
        return _sat(ts, f.left) & _sat(ts, f.right)
    if isinstance(f, Or):
        return _sat(ts, f.left) | _sat(ts, f.right)
    succ = {s: [t for _, t in ts.successors(s)] for s in every}
    if f.quant == "E":
        pre = lambda z: frozenset(s for s in every if any(t in z for t in succ[s]))
    else:
        pre = lambda z: frozenset(s for s in every if all(t in z for t in succ[s]))
    if isinstance(f, Until):
        a, b = _sat(ts, f.left), _sat(ts, f.right)
        return _lfp(lambda z: b | (a & pre(z)))
    body = _sat(ts, f.sub)
    if f.op == "X":
        return pre(body)
    if f.op == "F":
        return _lfp(lambda z: body | pre(z))
    return _gfp(lambda z: body & pre(z), frozenset(every))


def _lfp(fn) -> frozenset:
    z = frozenset()
    while True:
        nz = fn(z)
        if nz == z:
            return z
        z = nz


def _gfp(fn, top: frozenset) -> frozenset:
    z = top
    while True:
        nz = fn(z)
        if nz == z:
            return z
        z = nz


def _temporal(f: Ctl) -> bool:
    if isinstance(f, (Temporal, Until)):
        return True
    if isinstance(f, (And, Or)):
        return _temporal(f.left) or _temporal(f.right)
    return False


def ctl_check(ts: TransitionSystem, s: State, f: Ctl) -> bool:
    if _temporal(f):
        ts.check_serial(s)
    return s in sat(ts, f)


def enumerate_ctl(vars_: Sequence[str], max_size: int) -> Iterator[Ctl]:
    """Every CTL formula over single-literal propositions up to ``max_size``."""
    by_size: dict[int, list] = {1: [Prop(((x, v),)) for x in vars_ for v in (True, False)]}
    for n in range(2, max_size + 1):
        out = [Temporal(q, op, g) for q in "AE" for op in "XFG" for g in by_size[n - 1]]
        for k in range(1, n - 1):
            for a in by_size[k]:
                for b in by_size[n - 1 - k]:
                    out += [And(a, b), Or(a, b), Until("A", a, b), Until("E", a, b)]
        by_size[n] = out
    for n in range(1, max_size + 1):
        yield from by_size[n]


# -- HyLL encoding

def _hstate(ts: TransitionSystem, lits: Lits) -> H.HyllFormula:
    """Tensor of pres/abs atoms; unmentioned variables are absorbed by ⊤."""
    d = dict(lits)
    parts = [H.HAtom("pres" if d[x] else "abs", (Const(x),)) for x in ts.vars if x in d]
    if len(d) < len(ts.vars):
        parts.append(H.H_TOP)
    out = parts[-1] if parts else H.H_ONE
    for p in reversed(parts[:-1]):
        out = H.HTensor(p, out)
    return out


def encode_state_hyll(ts: TransitionSystem, s) -> H.HyllFormula:
    return _hstate(ts, s.lits)


def delta_hyll(v: int, a: H.HyllFormula) -> H.HyllFormula:
    """``δ_v A``: A holds v steps after the current world."""
    return H.HDown(H.HAt(a, Dot(WVar(0), Nat(v))))


def diamond_hyll(a: H.HyllFormula) -> H.HyllFormula:
    return H.HDown(H.HExistsWorld(H.HAt(a, Dot(WVar(1), WVar(0)))))


def box_hyll(a: H.HyllFormula) -> H.HyllFormula:
    return H.HDown(H.HForallWorld(H.HAt(a, Dot(WVar(1), WVar(0)))))


def until_hyll(a: H.HyllFormula, b: H.HyllFormula, bound: int) -> H.HyllFormula:
    """Finite unfolding of ``A U B`` up to ``bound`` steps."""
    here = lambda f, k: H.HAt(f, Dot(WVar(0), Nat(k)))
    alts = []
    for k in range(bound + 1):
        branch = here(b, k)
        for j in reversed(range(k)):
            branch = H.HWith(here(a, j), branch)
        alts.append(branch)
    out = alts[-1]
    for alt in reversed(alts[:-1]):
        out = H.HPlus(alt, out)
    return H.HDown(out)


def encode_rule_hyll(ts: TransitionSystem, r: Rule) -> H.HyllJudgment:
    body = H.HLimp(H.HAt(_hstate(ts, r.src.lits), WVar(0)),
                   H.HAt(delta_hyll(1, _hstate(ts, r.dst.lits)), WVar(0)))
    return H.HyllJudgment(H.HForallWorld(body), Nat(0))


def encode_rules_hyll(ts: TransitionSystem) -> list:
    return [encode_rule_hyll(ts, r) for r in ts.rules]


def encode_ctl_hyll(ts: TransitionSystem, f: Ctl, until_bound: Optional[int] = None) -> H.HyllFormula:
    """The existential, G-free fragment (∧, ∨, EX, EF, EU); anything else raises."""
    bound = until_bound if until_bound is not None else 2 ** len(ts.vars)
    if isinstance(f, Prop):
        return _hstate(ts, f.lits)
    if isinstance(f, And):
        return H.HWith(encode_ctl_hyll(ts, f.left, bound), encode_ctl_hyll(ts, f.right, bound))
    if isinstance(f, Or):
        return H.HPlus(encode_ctl_hyll(ts, f.left, bound), encode_ctl_hyll(ts, f.right, bound))
    if isinstance(f, Temporal) and f.quant == "E" and f.op in "XF":
        sub = encode_ctl_hyll(ts, f.sub, bound)
        return delta_hyll(1, sub) if f.op == "X" else diamond_hyll(sub)
    if isinstance(f, Until) and f.quant == "E":
        return until_hyll(encode_ctl_hyll(ts, f.left, bound), encode_ctl_hyll(ts, f.right, bound), bound)
    raise UnsupportedFragment(f"{ctl_str(f)} is outside the HyLL-encodable fragment (∧, ∨, EX, EF, EU)")


def in_hyll_fragment(f: Ctl) -> bool:
    if isinstance(f, Prop):
        return True
    if isinstance(f, (And, Or)):
        return in_hyll_fragment(f.left) and in_hyll_fragment(f.right)
    if isinstance(f, Temporal):
        return f.quant == "E" and f.op in "XF" and in_hyll_fragment(f.sub)
    return f.quant == "E" and in_hyll_fragment(f.left) and in_hyll_fragment(f.right)


def hyll_query(ts: TransitionSystem, s: State, goal: H.HyllFormula):
    from .hyll import sequent
    return sequent(encode_rules_hyll(ts), [H.HyllJudgment(_hstate(ts, s.lits), Nat(0))],
                   H.HyllJudgment(goal, Nat(0)))


def mc_via_hyll(ts: TransitionSystem, s: State, f: Ctl, depth: int = 6) -> dict:
    from .hyll import prove_hyll
    res = prove_hyll(hyll_query(ts, s, encode_ctl_hyll(ts, f)), depth)
    return {"verdict": res.verdict, "proof": res.proof, "oracle": ctl_check(ts, s, f)}


LOOP_SYSTEM = TransitionSystem(("a",), (Rule("r", State((("a", True),)), State((("a", True),))),),
                               State((("a", True),)))


def demo_eg_failure(bound: int = 6) -> dict:
    """EG on a one-state loop: the oracle and μMALL say yes, the □ encoding in HyLL cannot."""
    from .hyll import prove_hyll
    ts, s = LOOP_SYSTEM, LOOP_SYSTEM.init
    f = Temporal("E", "G", Prop(s.lits))
    res = prove_hyll(hyll_query(ts, s, box_hyll(_hstate(ts, s.lits))), bound)
    mu = mc_via_mumall(ts, s, f)
    return {"formula": ctl_str(f), "oracle": ctl_check(ts, s, f), "hyll": res.verdict,
            "mumall": mu["verdict"], "adequate": False}


# -- μMALL encoding

def _lit(x: str, v: bool) -> F.Atom:
    return F.Atom(x, (), not v)


def state_mumall(s) -> F.Formula:
    """⌊s⌋: the state as a par of dual literals, ready to sit on the left."""
    return F.big(F.Par, [F.negate(_lit(x, v)) for x, v in s.lits], F.BOT)


def pos(ts: TransitionSystem, lits: Lits) -> F.Formula:
    d = dict(lits)
    return F.big(F.Tensor, [_lit(x, d[x]) if x in d else F.TOP for x in ts.vars], F.ONE)


def neg(ts: TransitionSystem, s: State) -> F.Formula:
    return F.big(F.Plus, [F.Tensor(F.negate(_lit(x, v)), F.TOP) for x, v in s.lits], F.ZERO)


def _after(ts: TransitionSystem, r: Rule, k: F.Formula) -> F.Formula:
    return F.Tensor(pos(ts, r.src.lits), F.Par(state_mumall(r.dst), k))


def _next(ts: TransitionSystem, quant: str, k: F.Formula) -> F.Formula:
    if quant == "E":
        return F.big(F.Plus, [_after(ts, r, k) for r in ts.rules], F.ZERO)
    return F.big(F.With, [F.Plus(neg(ts, r.src), _after(ts, r, k)) for r in ts.rules], F.TOP)


def encode_ctl_mumall(ts: TransitionSystem, f: Ctl) -> F.Formula:
    if isinstance(f, Prop):
        return pos(ts, f.lits)
    if isinstance(f, And):
        return F.With(encode_ctl_mumall(ts, f.left), encode_ctl_mumall(ts, f.right))
    if isinstance(f, Or):
        return F.Plus(encode_ctl_mumall(ts, f.left), encode_ctl_mumall(ts, f.right))
    y = F.FixVar(0)
    if isinstance(f, Until):
        a, b = encode_ctl_mumall(ts, f.left), encode_ctl_mumall(ts, f.right)
        return F.Mu(F.Plus(b, F.With(a, _next(ts, f.quant, y))))
    phi = encode_ctl_mumall(ts, f.sub)
    if f.op == "X":
        return _next(ts, f.quant, phi)
    if f.op == "F":
        return F.Mu(F.Plus(phi, _next(ts, f.quant, y)))
    return F.Nu(F.With(phi, _next(ts, f.quant, y)))


def _subformulas(f: Ctl) -> Iterator[Ctl]:
    yield f
    if isinstance(f, Temporal):
        yield from _subformulas(f.sub)
    elif not isinstance(f, Prop):
        yield from _subformulas(f.left)
        yield from _subformulas(f.right)


def synthesize_invariant(ts: TransitionSystem, g: Ctl, oracle=sat):
    """Invariant for the ν-encoding of ``g``: the sum of the states where ``g`` holds."""
    from .mumall import Invariant
    states = tuple(s for s in ts.states() if s in oracle(ts, g))
    return Invariant(F.big(F.Plus, [pos(ts, s.lits) for s in states], F.ZERO), "synthesized", states)


def synthesizer_for(ts: TransitionSystem, f: Ctl):
    table = {encode_ctl_mumall(ts, g): g for g in _subformulas(f)
             if isinstance(g, Temporal) and g.op == "G"}
    return lambda nu: synthesize_invariant(ts, table[nu]) if nu in table else None


def mumall_query(ts: TransitionSystem, s: State, f: Ctl) -> list:
    return [state_mumall(s), encode_ctl_mumall(ts, f)]


def mc_via_mumall(ts: TransitionSystem, s: State, f: Ctl, depth: Optional[int] = None, hints=None) -> dict:
    from .mumall import default_budget, prove_mumall
    delta = mumall_query(ts, s, f)
    if depth is None:
        depth = default_budget(len(ts.states()), len(ts.rules), delta[1])
    synth = None if hints is not None else synthesizer_for(ts, f)
    res = prove_mumall(delta, hints, depth, synthesizer=synth)
    return {"verdict": res.verdict, "proof": res.proof, "oracle": ctl_check(ts, s, f), "delta": delta}
