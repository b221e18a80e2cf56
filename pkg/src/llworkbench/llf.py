"""Bounded focused proof search for one-sided classical linear logic (LLF).

Context splitting at tensors is lazy: the positive phase threads the
unused linear formulas from left to right, and the leftover is dealt out
to the released (negative) subgoals only when the phase is complete.
Existential witnesses start as metavariables bound by the identity rules;
those still unbound at release time are drawn from finite pools.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import count, product
from typing import Callable, Iterator, Optional, Sequence

from . import formulas as F
from .hyll_syntax import using_domain
from .printer import formula_str
from .proof import Proof, ReplayError, SearchResult, Verdict, canon, distributions, msub, remove_one
from .terms import App, Const, Meta, Term, UnsupportedMatch, is_ground, match, metas, resolve, subterms
from .worlds import NAT, Domain

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class LlfSeq:
    psi: tuple
    delta: tuple
    up: Optional[tuple] = None
    focus: Optional[F.Formula] = None

    def render(self) -> str:
        left = ", ".join(formula_str(f) for f in self.psi)
        mid = ", ".join(formula_str(f) for f in self.delta)
        if self.focus is not None:
            return f"{left} ; {mid} ⇓ {formula_str(self.focus)}"
        return f"{left} ; {mid} ⇑ {', '.join(formula_str(f) for f in self.up or ())}"

    __str__ = render


def is_negative_literal(f: F.Formula, bias: str) -> bool:
    return isinstance(f, F.Atom) and not F.is_positive(f, bias)


def is_literal(f: F.Formula) -> bool:
    return isinstance(f, F.Atom)


def match_atoms(pat: F.Atom, ground: F.Atom, b: dict) -> Optional[dict]:
    """Unify a focused literal's dual (may hold metas) with a stored ground literal."""
    if pat.pred != ground.pred or pat.negated != ground.negated or len(pat.args) != len(ground.args):
        return None
    cur: Optional[dict] = b
    for p, g in zip(pat.args, ground.args):
        cur = match(p, g, cur)
        if cur is None:
            return None
    return cur


@dataclass
class Outcome:
    proof: Optional[Proof] = None
    exhausted: bool = False


# skeleton of a positive phase: leaves wait for their share of the leftover context
@dataclass
class Node:
    rule: str
    formula: F.Formula  # focused formula at this node (may contain metas)
    kids: tuple = ()
    item: Optional[F.Formula] = None  # consumed literal (I1) or classical literal (I2)
    info: tuple = ()
    goal: Optional[int] = None  # index into the release list (for R⇓ and !)


@dataclass
class Pools:
    term: tuple = ()
    world: tuple = ()
    form: tuple = ()


class LlfEngine:
    """One search; owns its counters and memo table."""

    def __init__(self, depth: int, bias: str = "neg", domain: Domain = NAT,
                 pools: Optional[Pools] = None, slack: int = 1):
        self.depth = depth
        self.bias = bias
        self.domain = domain
        self.pools = pools
        self.slack = slack
        self.eigen = count(1)
        self.meta_ids = count(1)
        self.eigen_sort: dict[str, str] = {}
        self.memo: dict = {}
        self.stats = {"decides": 0, "memo_hits": 0}

    # -- entry

    def prove(self, psi: Sequence, delta: Sequence, goal: Sequence) -> SearchResult:
        with using_domain(self.domain):
            if self.pools is None:
                self.pools = default_pools(list(psi) + list(delta) + list(goal))
            out = self.neg(_dedupe(psi), canon(delta), tuple(goal), self.depth)
        if out.proof is not None:
            return SearchResult(Verdict.PROVED, out.proof, self.stats)
        return SearchResult(Verdict.EXHAUSTED if out.exhausted else Verdict.REFUTED, None, self.stats)

    # -- negative phase

    def fresh_eigen(self, sort: str) -> Const:
        name = f"%e{next(self.eigen)}"
        self.eigen_sort[name] = sort
        return Const(name)

    def neg(self, psi: tuple, delta: tuple, up: tuple, depth: int) -> Outcome:
        if not up:
            return self.stable(psi, delta, depth)
        seq = LlfSeq(psi, delta, up)
        f, rest = up[0], up[1:]
        if isinstance(f, F.Bot):
            return self._wrap("⊥", seq, self.neg(psi, delta, rest, depth))
        if isinstance(f, F.Par):
            return self._wrap("⅋", seq, self.neg(psi, delta, (f.left, f.right) + rest, depth))
        if isinstance(f, F.Quest):
            if f.label != F.CLASSICAL:
                raise ValueError(f"LLF admits only the classical exponential, got label {f.label}")
            return self._wrap("?", seq, self.neg(_add(psi, f.body), delta, rest, depth))
        if isinstance(f, F.Top):
            return Outcome(Proof("⊤", seq))
        if isinstance(f, F.With):
            left = self.neg(psi, delta, (f.left,) + rest, depth)
            if left.proof is None:
                return Outcome(None, left.exhausted)
            right = self.neg(psi, delta, (f.right,) + rest, depth)
            if right.proof is None:
                return Outcome(None, right.exhausted)
            return Outcome(Proof("&", seq, (left.proof, right.proof)))
        if isinstance(f, F.ForallTerm):
            c = self.fresh_eigen(f.sort)
            sub = self.neg(psi, delta, (F.instantiate(f.body, c),) + rest, depth)
            return self._wrap("∀", seq, sub, (("eigen", c),))
        if isinstance(f, (F.Mu, F.Nu, F.FixVar, F.ForallLoc, F.ExistsLoc)):
            raise ValueError(f"connective not supported by LLF: {type(f).__name__}")
        # positive formula or literal: store it
        return self._wrap("R⇑", seq, self.neg(psi, canon(delta + (f,)), rest, depth))

    @staticmethod
    def _wrap(rule: str, seq, sub: Outcome, info: tuple = ()) -> Outcome:
        if sub.proof is None:
            return Outcome(None, sub.exhausted)
        return Outcome(Proof(rule, seq, (sub.proof,), info))

    # -- decide

    def candidates(self, psi: tuple, delta: tuple) -> list:
        out, seen = [], set()
        for f in delta:
            if f not in seen and not is_negative_literal(f, self.bias):
                seen.add(f)
                out.append(("D1", f))
        for f in psi:
            if not is_negative_literal(f, self.bias):
                out.append(("D2", f))
        return out

    def stable(self, psi: tuple, delta: tuple, depth: int) -> Outcome:
        key = (frozenset(psi), delta)
        hit = self.memo.get(key)
        if hit is not None:
            kind, d, proof = hit
            if (kind == "proved" and depth >= d) or kind == "failed" or (kind == "exhausted" and depth <= d):
                self.stats["memo_hits"] += 1
                return Outcome(proof, kind == "exhausted")
        out = self._stable(psi, delta, depth)
        if out.proof is not None:
            self.memo[key] = ("proved", depth, out.proof)
        elif out.exhausted:
            prev = self.memo.get(key)
            if prev is None or prev[0] != "exhausted" or prev[1] < depth:
                self.memo[key] = ("exhausted", depth, None)
        else:
            self.memo[key] = ("failed", depth, None)
        return out

    def _stable(self, psi: tuple, delta: tuple, depth: int) -> Outcome:
        seq = LlfSeq(psi, delta, ())
        exhausted = False
        for rule, f in self.candidates(psi, delta):
            rest = remove_one(delta, f) if rule == "D1" else delta
            if depth <= 0:
                if self.probe(psi, rest, f):
                    return Outcome(None, True)
                continue
            self.stats["decides"] += 1
            out = self.focus(psi, rest, f, depth - 1)
            if out.proof is not None:
                return Outcome(Proof(rule, seq, (out.proof,), (("formula", f),)))
            exhausted |= out.exhausted
        return Outcome(None, exhausted)

    # -- positive phase

    def pos(self, f: F.Formula, psi: tuple, avail: tuple, b: dict, goals: tuple) -> Iterator[tuple]:
        """Yield ``(node, leftover, bindings, release_goals)`` for every way to finish the phase."""
        if isinstance(f, F.Atom) and F.is_positive(f, self.bias):
            dual = F.negate(F.resolve_formula(f, b))
            seen = set()
            for x in avail:
                if x in seen or not isinstance(x, F.Atom):
                    continue
                seen.add(x)
                nb = match_atoms(dual, x, b)
                if nb is not None:
                    yield Node("I1", f, item=x), remove_one(avail, x), nb, goals
            for x in psi:
                if isinstance(x, F.Atom):
                    nb = match_atoms(dual, x, b)
                    if nb is not None:
                        yield Node("I2", f, item=x), avail, nb, goals
        elif isinstance(f, F.One):
            yield Node("1", f), avail, b, goals
        elif isinstance(f, F.Zero):
            return
        elif isinstance(f, F.Tensor):
            for n1, a1, b1, g1 in self.pos(f.left, psi, avail, b, goals):
                for n2, a2, b2, g2 in self.pos(f.right, psi, a1, b1, g1):
                    yield Node("⊗", f, (n1, n2)), a2, b2, g2
        elif isinstance(f, F.Plus):
            for n, a, nb, g in self.pos(f.left, psi, avail, b, goals):
                yield Node("⊕l", f, (n,)), a, nb, g
            for n, a, nb, g in self.pos(f.right, psi, avail, b, goals):
                yield Node("⊕r", f, (n,)), a, nb, g
        elif isinstance(f, F.ExistsTerm):
            m = Meta(next(self.meta_ids), f.sort)
            for n, a, nb, g in self.pos(F.instantiate(f.body, m), psi, avail, b, goals):
                yield Node("∃", f, (n,), info=(("witness", m),)), a, nb, g
        elif isinstance(f, F.Bang):
            if f.label != F.CLASSICAL:
                raise ValueError(f"LLF admits only the classical exponential, got label {f.label}")
            yield Node("!", f, goal=len(goals)), avail, b, goals + (("!", f.body),)
        elif isinstance(f, (F.Mu, F.Nu, F.FixVar, F.ForallLoc, F.ExistsLoc)):
            raise ValueError(f"connective not supported by LLF: {type(f).__name__}")
        else:
            yield Node("R⇓", f, goal=len(goals)), avail, b, goals + (("R⇓", f),)

    def focus(self, psi: tuple, delta: tuple, f: F.Formula, depth: int) -> Outcome:
        exhausted = False
        for node, left, b, goals in self.pos(f, psi, delta, {}, ()):
            out = self.release(psi, node, left, b, goals, depth)
            if out.proof is not None:
                return out
            exhausted |= out.exhausted
        return Outcome(None, exhausted)

    def probe(self, psi: tuple, delta: tuple, f: F.Formula) -> bool:
        """Would a decide on ``f`` get past its positive phase?  Used when the bound is spent."""
        for _node, left, _b, goals in self.pos(f, psi, delta, {}, ()):
            if not left or any(k == "R⇓" for k, _ in goals):
                return True
        return False

    # -- release: ground leftover metas, deal out the context, run the negative phases

    def release(self, psi, node, left, b, goals, depth) -> Outcome:
        open_idx = [i for i, (k, _) in enumerate(goals) if k == "R⇓"]
        if not open_idx and left:
            return Outcome()
        goal_fs = [F.resolve_formula(g, b) for _, g in goals]
        pending: dict[int, Meta] = {}
        for g in goal_fs:
            for m in F.formula_metas(g):
                pending.setdefault(m.ident, m)
        idle = [m for m in _node_metas(node) if m.ident not in pending and resolve(m, b) == m]
        b = dict(b)
        for m in idle:
            b[m.ident] = self.default_witness(m.sort)
        metas_ = sorted(pending.values(), key=lambda m: m.ident)
        scope = self.scope_consts(psi, left, goal_fs)
        choices = [self.candidates_for(m, scope) for m in metas_]
        exhausted = False
        for pick in product(*choices):
            gb = dict(b)
            gb.update({m.ident: t for m, t in zip(metas_, pick)})
            fs = [F.resolve_formula(g, gb) for g in goal_fs]
            for deal in distributions(left, len(open_idx)):
                shares: dict[int, tuple] = {i: () for i in range(len(goals))}
                shares.update(zip(open_idx, deal))
                subs = []
                for i, g in enumerate(fs):
                    out = self.neg(psi, shares[i], (g,), depth)
                    if out.proof is None:
                        exhausted |= out.exhausted
                        break
                    subs.append(out.proof)
                else:
                    proof, _ = self.build(psi, node, gb, shares, subs)
                    return Outcome(proof)
        return Outcome(None, exhausted)

    def default_witness(self, sort: str) -> Term:
        pool = getattr(self.pools, sort, ()) if sort in ("term", "world", "form") else ()
        return pool[0] if pool else Const("c")

    def scope_consts(self, psi, delta, goals) -> set:
        names = set()
        for f in list(psi) + list(delta) + list(goals):
            for t in F.iter_terms(f):
                for s in subterms(t):
                    if isinstance(s, Const) and s.name in self.eigen_sort:
                        names.add(s.name)
        return names

    def candidates_for(self, m: Meta, scope: set) -> list:
        eig = [Const(n) for n in sorted(scope) if self.eigen_sort.get(n) == m.sort]
        if m.sort == "world":
            return list(world_candidates(self.pools.world, tuple(c.name for c in eig), self.domain, self.slack))
        base = list(getattr(self.pools, m.sort, ()))
        return base + [c for c in eig if c not in base]

    def build(self, psi, node: Node, b: dict, shares: dict, subs: list) -> tuple:
        f = F.resolve_formula(node.formula, b)
        if node.rule == "I1":
            return Proof("I1", LlfSeq(psi, (node.item,), focus=f)), (node.item,)
        if node.rule == "I2":
            return Proof("I2", LlfSeq(psi, (), focus=f), (), (("item", node.item),)), ()
        if node.rule == "1":
            return Proof("1", LlfSeq(psi, (), focus=f)), ()
        if node.rule in ("R⇓", "!"):
            share = shares[node.goal]
            return Proof(node.rule, LlfSeq(psi, share, focus=f), (subs[node.goal],)), share
        kids = [self.build(psi, k, b, shares, subs) for k in node.kids]
        used = canon(sum((c for _, c in kids), ()))
        info = tuple((k, resolve(v, b)) for k, v in node.info)
        return Proof(node.rule, LlfSeq(psi, used, focus=f), tuple(p for p, _ in kids), info), used


def _node_metas(node: Node) -> list:
    out = []
    for k, v in node.info:
        if k == "witness":
            out.append(v)
    for kid in node.kids:
        out += _node_metas(kid)
    return out


def _add(psi: tuple, f) -> tuple:
    return psi if f in psi else psi + (f,)


def _dedupe(items) -> tuple:
    out: tuple = ()
    for f in items:
        out = _add(out, f)
    return out


_WORLD_CACHE: dict = {}


def world_candidates(base: tuple, eigens: tuple, domain: Domain, slack: int) -> tuple:
    from .hyll_syntax import world_of_term
    from .worlds import Gen, pool_closure, world_key

    key = (base, eigens, domain, slack)
    if key not in _WORLD_CACHE:
        if not eigens:
            _WORLD_CACHE[key] = base
        else:
            ws = [world_of_term(c) for c in base] + [Gen(e) for e in eigens]
            extra = [Const(world_key(w, domain)) for w in pool_closure(ws, domain, slack)]
            _WORLD_CACHE[key] = tuple(base) + tuple(c for c in extra if c not in base)
    return _WORLD_CACHE[key]


def default_pools(formulas: Sequence[F.Formula]) -> Pools:
    terms: list = []
    for f in formulas:
        for t in F.iter_terms(f):
            for s in subterms(t):
                if is_ground(s) and s not in terms and s != F.CLASSICAL:
                    terms.append(s)
    return Pools(term=tuple(terms), world=tuple(t for t in terms if isinstance(t, Const)))


def prove_llf(classical: Sequence, linear: Sequence, goal: Sequence, depth: int, *,
              bias: str = "neg", domain: Domain = NAT, pools: Optional[Pools] = None,
              slack: int = 1) -> SearchResult:
    """Search ``⊢ classical ; linear ⇑ goal`` with at most ``depth`` decides per branch."""
    return LlfEngine(depth, bias, domain, pools, slack).prove(classical, linear, goal)


# -- replay

NEGATIVE_RULES = frozenset({"⊥", "⅋", "?", "⊤", "&", "∀", "R⇑"})
POSITIVE_RULES = frozenset({"1", "⊗", "!", "⊕l", "⊕r", "∃", "I1", "I2", "R⇓"})


def _const_names(fs) -> set:
    out = set()
    for f in fs:
        for t in F.iter_terms(f):
            for s in subterms(t):
                if isinstance(s, Const):
                    out.add(s.name)
    return out


def check_llf(p: Proof, bias: str = "neg", domain: Domain = NAT) -> None:
    """Raise ``ReplayError`` at the first node that is not an LLF rule instance."""
    with using_domain(domain):
        for node in p.nodes():
            _check_node(node, bias)


def replay(p: Proof, bias: str = "neg", domain: Domain = NAT) -> bool:
    try:
        check_llf(p, bias, domain)
    except ReplayError:
        return False
    return True


def _check_node(n: Proof, bias: str) -> None:
    s: LlfSeq = n.conclusion
    prem = [q.conclusion for q in n.premises]

    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise ReplayError(f"[{n.rule}] {msg}", n)

    need(all(set(q.psi) >= set(s.psi) for q in prem), "classical context shrank")
    if n.rule in NEGATIVE_RULES or n.rule in ("D1", "D2"):
        need(s.up is not None and s.focus is None, "expects a negative-phase sequent")
    if n.rule in POSITIVE_RULES:
        need(s.focus is not None, "expects a focused sequent")
    if n.rule in NEGATIVE_RULES:
        need(bool(s.up), "empty active list")
        f, rest = s.up[0], s.up[1:]
    arity = {"⊤": 0, "&": 2, "1": 0, "⊗": 2, "I1": 0, "I2": 0}.get(n.rule, 1)
    need(len(prem) == arity, f"expected {arity} premises")
    if n.rule not in ("?",):
        need(all(set(q.psi) == set(s.psi) for q in prem), "classical context changed")

    def up_prem(i, delta, up):
        q = prem[i]
        need(q.focus is None and q.up is not None, "premise should be a negative-phase sequent")
        need(canon(q.delta) == canon(delta), "linear context mismatch")
        need(tuple(q.up) == tuple(up), "active list mismatch")

    def down_prem(i, delta, focus):
        q = prem[i]
        need(q.focus is not None, "premise should be focused")
        need(canon(q.delta) == canon(delta), "linear context mismatch")
        need(q.focus == focus, "focus mismatch")

    r = n.rule
    if r == "⊥":
        need(isinstance(f, F.Bot), "not ⊥")
        up_prem(0, s.delta, rest)
    elif r == "⅋":
        need(isinstance(f, F.Par), "not ⅋")
        up_prem(0, s.delta, (f.left, f.right) + rest)
    elif r == "?":
        need(isinstance(f, F.Quest) and f.label == F.CLASSICAL, "not ?")
        need(set(prem[0].psi) == set(s.psi) | {f.body}, "? must store its body classically")
        up_prem(0, s.delta, rest)
    elif r == "⊤":
        need(isinstance(f, F.Top), "not ⊤")
    elif r == "&":
        need(isinstance(f, F.With), "not &")
        up_prem(0, s.delta, (f.left,) + rest)
        up_prem(1, s.delta, (f.right,) + rest)
    elif r == "∀":
        need(isinstance(f, F.ForallTerm), "not ∀")
        c = n.get("eigen")
        need(isinstance(c, Const) and c.name not in _const_names(s.psi + s.delta + s.up), "eigenvariable not fresh")
        up_prem(0, s.delta, (F.instantiate(f.body, c),) + rest)
    elif r == "R⇑":
        need(isinstance(f, F.Atom) or F.is_positive(f, bias), "R⇑ needs a positive formula or literal")
        up_prem(0, canon(s.delta + (f,)), rest)
    elif r in ("D1", "D2"):
        need(s.up == (), "decide while the active list is not empty")
        f = n.get("formula")
        need(f is not None and not is_negative_literal(f, bias), "cannot decide on a negative atom")
        if r == "D1":
            rest_delta = msub(s.delta, (f,))
            need(rest_delta is not None, "D1 formula not in the linear context")
            down_prem(0, rest_delta, f)
        else:
            need(f in s.psi, "D2 formula not in the classical context")
            down_prem(0, s.delta, f)
    elif r == "1":
        need(isinstance(s.focus, F.One) and not s.delta, "1 needs an empty linear context")
    elif r == "⊗":
        need(isinstance(s.focus, F.Tensor), "not ⊗")
        need(canon(prem[0].delta + prem[1].delta) == canon(s.delta), "⊗ context split mismatch")
        need(prem[0].focus == s.focus.left and prem[1].focus == s.focus.right, "⊗ premises mismatch")
    elif r == "!":
        need(isinstance(s.focus, F.Bang) and s.focus.label == F.CLASSICAL, "not !")
        need(not s.delta, "! needs an empty linear context")
        up_prem(0, (), (s.focus.body,))
    elif r in ("⊕l", "⊕r"):
        need(isinstance(s.focus, F.Plus), "not ⊕")
        down_prem(0, s.delta, s.focus.left if r == "⊕l" else s.focus.right)
    elif r == "∃":
        need(isinstance(s.focus, F.ExistsTerm), "not ∃")
        t = n.get("witness")
        need(t is not None and is_ground(t), "∃ witness must be ground")
        down_prem(0, s.delta, F.instantiate(s.focus.body, t))
    elif r in ("I1", "I2"):
        fo = s.focus
        need(isinstance(fo, F.Atom) and F.is_positive(fo, bias), "identity needs a positive literal in focus")
        dual = F.negate(fo)
        if r == "I1":
            need(tuple(s.delta) == (dual,), "I1 needs exactly the dual atom in the linear context")
        else:
            need(not s.delta and dual in s.psi, "I2 needs the dual atom classically and nothing linear")
    elif r == "R⇓":
        need(not F.is_positive(s.focus, bias), "R⇓ needs a negative formula")
        up_prem(0, s.delta, (s.focus,))
    else:
        need(False, "unknown rule")


def decide_nodes(p: Proof) -> Iterator[Proof]:
    return (n for n in p.nodes() if n.rule in ("D1", "D2", "Dl"))


def bipole_phases(d: Proof, promoted_literal_step: bool = False) -> bool:
    """Check that the derivation above decide node ``d`` is one positive phase
    followed by one negative phase ending in stable sequents or closed leaves.

    With ``promoted_literal_step`` the premise of a promotion must be the
    forced ``D, I`` step on the literal it stores, when it promotes a literal."""

    def negative(n: Proof, under_bang: bool) -> bool:
        if n.rule in ("D1", "D2", "Dl"):
            if not (under_bang and promoted_literal_step):
                return True
            return isinstance(n.get("formula"), F.Atom) and len(n.premises) == 1 \
                and n.premises[0].rule in ("I1", "I2", "I")
        if n.rule not in NEGATIVE_RULES | {"∀l", "?l"}:
            return False
        return all(negative(q, under_bang) for q in n.premises)

    def positive(n: Proof) -> bool:
        if n.rule == "R⇓":
            return all(negative(q, False) for q in n.premises)
        if n.rule in ("!", "!l"):
            body = getattr(getattr(n.conclusion, "focus", None), "body", None)
            return all(negative(q, isinstance(body, F.Atom)) for q in n.premises)
        if n.rule not in POSITIVE_RULES | {"∃l", "I", "⊕1", "⊕2"}:
            return False
        return all(positive(q) for q in n.premises)

    return all(positive(q) for q in d.premises)
