"""Focused proof search for linear logic with (quantified) subexponentials.

Contexts are indexed by labels.  Entries under unbounded labels are shared
between tensor branches and survive decides; the bounded entries and the
workbench are threaded through the positive phase like the LLF linear
context and dealt out to the released subgoals at the end.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count, product
from typing import Iterator, Optional, Sequence

from . import formulas as F
from .hyll_syntax import using_domain
from .llf import Outcome, Pools, default_pools, is_negative_literal, match_atoms, world_candidates
from .printer import formula_str, term_str
from .proof import Proof, ReplayError, SearchResult, Verdict, canon, distributions, msub, remove_one
from .signature import SignatureError, SubexpSignature
from .terms import Const, Meta, Term, resolve, subterms
from .worlds import NAT, Domain

Context = tuple  # sorted tuple of (label, canonical tuple of formulas), empty entries dropped


def k_make(entries) -> Context:
    acc: dict = {}
    for lab, f in entries:
        acc.setdefault(lab, []).append(f)
    return tuple(sorted((lab, canon(fs)) for lab, fs in acc.items() if fs))


def k_items(k: Context) -> list:
    return [(lab, f) for lab, fs in k for f in fs]


def k_get(k: Context, label: str) -> tuple:
    for lab, fs in k:
        if lab == label:
            return fs
    return ()


def k_add(k: Context, label: str, f: F.Formula) -> Context:
    return k_make(k_items(k) + [(label, f)])


def k_remove(k: Context, label: str, f: F.Formula) -> Context:
    items = k_items(k)
    items.remove((label, f))
    return k_make(items)


def k_leq(k: Context, label: str, sig: SubexpSignature) -> Context:
    """``K <=_l``: keep the entries at labels above ``label``."""
    return tuple((lab, fs) for lab, fs in k if sig.leq(label, lab))


@dataclass(frozen=True)
class SellSeq:
    k: Context
    gamma: tuple
    up: Optional[tuple] = None
    focus: Optional[F.Formula] = None

    def render(self) -> str:
        ctx = " ".join(f"{lab}:{{{', '.join(formula_str(f) for f in fs)}}}" for lab, fs in self.k)
        gam = ", ".join(formula_str(f) for f in self.gamma)
        if self.focus is not None:
            return f"{ctx} : {gam} ⇓ {formula_str(self.focus)}"
        return f"{ctx} : {gam} ⇑ {', '.join(formula_str(f) for f in self.up or ())}"

    __str__ = render


def label_name(t: Term) -> str:
    if not isinstance(t, Const):
        raise SignatureError(f"subexponential label is not a constant: {term_str(t)}")
    return t.name


@dataclass
class Node:
    rule: str
    formula: F.Formula
    kids: tuple = ()
    item: Optional[tuple] = None  # (label or None, formula) consumed or read by I
    info: tuple = ()
    goal: Optional[int] = None
    shared: bool = False  # identity read from an unbounded entry


class SellEngine:
    def __init__(self, sig: SubexpSignature, depth: int, bias: str = "neg", domain: Domain = NAT,
                 pools: Optional[Pools] = None, slack: int = 1):
        self.sig0 = sig
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

    def prove(self, k: Context, gamma: Sequence, goal: Sequence) -> SearchResult:
        with using_domain(self.domain):
            if self.pools is None:
                every = [f for _, f in k_items(k)] + list(gamma) + list(goal)
                self.pools = default_pools(every)
            sig = self.sig0
            for lab, _ in k:
                sig = sig.admit(lab)
            out = self.neg(sig, k, canon(gamma), tuple(goal), self.depth)
        if out.proof is not None:
            return SearchResult(Verdict.PROVED, out.proof, self.stats)
        return SearchResult(Verdict.EXHAUSTED if out.exhausted else Verdict.REFUTED, None, self.stats)

    # -- negative phase

    def neg(self, sig, k, gamma, up, depth) -> Outcome:
        if not up:
            return self.stable(sig, k, gamma, depth)
        seq = SellSeq(k, gamma, up)
        f, rest = up[0], up[1:]
        if isinstance(f, F.Bot):
            return _wrap("⊥", seq, self.neg(sig, k, gamma, rest, depth))
        if isinstance(f, F.Par):
            return _wrap("⅋", seq, self.neg(sig, k, gamma, (f.left, f.right) + rest, depth))
        if isinstance(f, F.Quest):
            lab = label_name(f.label)
            sig = sig.admit(lab)
            return _wrap("?l", seq, self.neg(sig, k_add(k, lab, f.body), gamma, rest, depth))
        if isinstance(f, F.Top):
            return Outcome(Proof("⊤", seq))
        if isinstance(f, F.With):
            left = self.neg(sig, k, gamma, (f.left,) + rest, depth)
            if left.proof is None:
                return Outcome(None, left.exhausted)
            right = self.neg(sig, k, gamma, (f.right,) + rest, depth)
            if right.proof is None:
                return Outcome(None, right.exhausted)
            return Outcome(Proof("&", seq, (left.proof, right.proof)))
        if isinstance(f, F.ForallTerm):
            c = Const(f"%e{next(self.eigen)}")
            self.eigen_sort[c.name] = f.sort
            sub = self.neg(sig, k, gamma, (F.instantiate(f.body, c),) + rest, depth)
            return _wrap("∀", seq, sub, (("eigen", c),))
        if isinstance(f, F.ForallLoc):
            ty = label_name(f.type_label)
            c = Const(f"%l{next(self.eigen)}")
            sig = sig.with_label(c.name, ty)
            sub = self.neg(sig, k, gamma, (F.instantiate(f.body, c),) + rest, depth)
            return _wrap("∀l", seq, sub, (("eigen", c), ("type", ty)))
        if isinstance(f, (F.Mu, F.Nu, F.FixVar)):
            raise ValueError("fixed points are not part of SELLF")
        return _wrap("R⇑", seq, self.neg(sig, k, canon(gamma + (f,)), rest, depth))

    # -- decide

    def candidates(self, sig, k, gamma) -> list:
        out, seen = [], set()
        for f in gamma:
            if f not in seen and not is_negative_literal(f, self.bias):
                seen.add(f)
                out.append(("D1", None, f))
        for lab, fs in k:
            seen = set()
            for f in fs:
                if f not in seen and not is_negative_literal(f, self.bias):
                    seen.add(f)
                    out.append(("Dl", lab, f))
        return out

    def stable(self, sig, k, gamma, depth) -> Outcome:
        key = (k, gamma, sig.labels)
        hit = self.memo.get(key)
        if hit is not None:
            kind, d, proof = hit
            if (kind == "proved" and depth >= d) or kind == "failed" or (kind == "exhausted" and depth <= d):
                self.stats["memo_hits"] += 1
                return Outcome(proof, kind == "exhausted")
        out = self._stable(sig, k, gamma, depth)
        if out.proof is not None:
            self.memo[key] = ("proved", depth, out.proof)
        elif out.exhausted:
            prev = self.memo.get(key)
            if prev is None or prev[0] != "exhausted" or prev[1] < depth:
                self.memo[key] = ("exhausted", depth, None)
        else:
            self.memo[key] = ("failed", depth, None)
        return out

    def _stable(self, sig, k, gamma, depth) -> Outcome:
        seq = SellSeq(k, gamma, ())
        exhausted = False
        for rule, lab, f in self.candidates(sig, k, gamma):
            if rule == "D1":
                k2, g2 = k, remove_one(gamma, f)
            elif sig.is_unbounded(lab):
                k2, g2 = k, gamma
            else:
                k2, g2 = k_remove(k, lab, f), gamma
            if depth <= 0:
                if self.probe(sig, k2, g2, f):
                    return Outcome(None, True)
                continue
            self.stats["decides"] += 1
            out = self.focus(sig, k2, g2, f, depth - 1)
            if out.proof is not None:
                info = (("formula", f),) + ((("label", lab),) if lab is not None else ())
                return Outcome(Proof(rule, seq, (out.proof,), info))
            exhausted |= out.exhausted
        return Outcome(None, exhausted)


def _wrap(rule: str, seq, sub: Outcome, info: tuple = ()) -> Outcome:
    if sub.proof is None:
        return Outcome(None, sub.exhausted)
    return Outcome(Proof(rule, seq, (sub.proof,), info))


def _positive_literal(f: F.Formula, bias: str) -> bool:
    return isinstance(f, F.Atom) and F.is_positive(f, bias)


def _pos(self: SellEngine, f, sig, shared, avail, b, goals) -> Iterator[tuple]:
    """Positive phase; yields ``(node, leftover, bindings, release_goals)``."""
    if _positive_literal(f, self.bias):
        dual = F.negate(F.resolve_formula(f, b))
        seen = set()
        for it in avail:
            if it in seen or not isinstance(it[1], F.Atom):
                continue
            seen.add(it)
            nb = match_atoms(dual, it[1], b)
            if nb is not None:
                yield Node("I", f, item=it), remove_one(avail, it), nb, goals
        for lab, fs in shared:
            for x in dict.fromkeys(fs):
                if isinstance(x, F.Atom):
                    nb = match_atoms(dual, x, b)
                    if nb is not None:
                        yield Node("I", f, item=(lab, x), shared=True), avail, nb, goals
    elif isinstance(f, F.One):
        yield Node("1", f), avail, b, goals
    elif isinstance(f, F.Zero):
        return
    elif isinstance(f, F.Tensor):
        for n1, a1, b1, g1 in _pos(self, f.left, sig, shared, avail, b, goals):
            for n2, a2, b2, g2 in _pos(self, f.right, sig, shared, a1, b1, g1):
                yield Node("⊗", f, (n1, n2)), a2, b2, g2
    elif isinstance(f, F.Plus):
        for n, a, nb, g in _pos(self, f.left, sig, shared, avail, b, goals):
            yield Node("⊕l", f, (n,)), a, nb, g
        for n, a, nb, g in _pos(self, f.right, sig, shared, avail, b, goals):
            yield Node("⊕r", f, (n,)), a, nb, g
    elif isinstance(f, F.ExistsTerm):
        m = Meta(next(self.meta_ids), f.sort)
        for n, a, nb, g in _pos(self, F.instantiate(f.body, m), sig, shared, avail, b, goals):
            yield Node("∃", f, (n,), info=(("witness", m),)), a, nb, g
    elif isinstance(f, F.ExistsLoc):
        m = Meta(next(self.meta_ids), "loc", f.type_label)
        for n, a, nb, g in _pos(self, F.instantiate(f.body, m), sig, shared, avail, b, goals):
            yield Node("∃l", f, (n,), info=(("witness", m),)), a, nb, g
    elif isinstance(f, F.Bang):
        if _positive_literal(f.body, self.bias):
            yield from _promote_literal(self, f, sig, shared, avail, b, goals)
            if not F.formula_metas(F.resolve_formula(f, b)):
                yield Node("!l", f, goal=len(goals)), avail, b, goals + (("!", f.body, f.label),)
        else:
            yield Node("!l", f, goal=len(goals)), avail, b, goals + (("!", f.body, f.label),)
    elif isinstance(f, (F.Mu, F.Nu, F.FixVar)):
        raise ValueError("fixed points are not part of SELLF")
    else:
        yield Node("R⇓", f, goal=len(goals)), avail, b, goals + (("R⇓", f, None),)


def _label_options(sig: SubexpSignature, lab: Term, target: str, b: dict) -> Iterator[dict]:
    """Bindings under which promotion label ``lab`` lies below ``target``."""
    lab = resolve(lab, b)
    if isinstance(lab, Meta):
        bound = label_name(resolve(lab.bound, b)) if lab.bound is not None else None
        if bound is None or sig.leq(target, bound):
            nb = dict(b)
            nb[lab.ident] = Const(target)
            yield nb
    elif sig.leq(label_name(lab), target):
        yield b


def _promote_literal(self: SellEngine, f: F.Bang, sig, shared, avail, b, goals) -> Iterator[tuple]:
    """``!^l A`` with ``A`` a positive literal: the premise can only be closed by
    deciding ``A`` and meeting its dual, stored at some label above ``l``."""
    for it in dict.fromkeys(avail):
        lab, x = it
        if lab is None or not isinstance(x, F.Atom):
            continue
        for lb in _label_options(sig, f.label, lab, b):
            nb = match_atoms(F.negate(F.resolve_formula(f.body, lb)), x, lb)
            if nb is not None:
                yield Node("!l", f, item=it, info=(("fast", True),)), remove_one(avail, it), nb, goals
    for lab, fs in shared:
        for x in dict.fromkeys(fs):
            if not isinstance(x, F.Atom):
                continue
            for lb in _label_options(sig, f.label, lab, b):
                nb = match_atoms(F.negate(F.resolve_formula(f.body, lb)), x, lb)
                if nb is not None:
                    yield Node("!l", f, item=(lab, x), shared=True, info=(("fast", True),)), avail, nb, goals


def _focus(self: SellEngine, sig, k, gamma, f, depth) -> Outcome:
    shared = tuple((lab, fs) for lab, fs in k if sig.is_unbounded(lab))
    avail = canon([(lab, x) for lab, fs in k if not sig.is_unbounded(lab) for x in fs]
                  + [(None, x) for x in gamma])
    exhausted = False
    for node, left, b, goals in _pos(self, f, sig, shared, avail, {}, ()):
        out = _release(self, sig, shared, node, left, b, goals, depth)
        if out.proof is not None:
            return out
        exhausted |= out.exhausted
    return Outcome(None, exhausted)


def _probe(self: SellEngine, sig, k, gamma, f) -> bool:
    shared = tuple((lab, fs) for lab, fs in k if sig.is_unbounded(lab))
    avail = canon([(lab, x) for lab, fs in k if not sig.is_unbounded(lab) for x in fs]
                  + [(None, x) for x in gamma])
    for _node, left, _b, goals in _pos(self, f, sig, shared, avail, {}, ()):
        if not left or goals:
            return True
    return False


def _node_metas(node: Node) -> list:
    out = [v for k, v in node.info if k == "witness"]
    for kid in node.kids:
        out += _node_metas(kid)
    return out


def _release(self: SellEngine, sig, shared, node, left, b, goals, depth) -> Outcome:
    if not goals and left:
        return Outcome()
    goal_fs = [F.resolve_formula(g, b) for _, g, _ in goals]
    goal_labels = [resolve(lab, b) if lab is not None else None for _, _, lab in goals]
    pending: dict[int, Meta] = {}
    for g in goal_fs:
        for m in F.formula_metas(g):
            pending.setdefault(m.ident, m)
    for lab in goal_labels:
        if isinstance(lab, Meta):
            pending.setdefault(lab.ident, lab)
    b = dict(b)
    for m in _node_metas(node):
        if m.ident not in pending and isinstance(resolve(m, b), Meta):
            b[m.ident] = Const(sig.sorted_labels()[0]) if m.sort == "loc" else self.default_witness(m.sort)
    metas_ = sorted(pending.values(), key=lambda m: m.ident)
    choices = [self.candidates_for(m, sig, b) for m in metas_]
    exhausted = False
    for pick in product(*choices):
        gb = dict(b)
        gb.update({m.ident: t for m, t in zip(metas_, pick)})
        try:
            sig2 = _check_locs(sig, node, gb)
            labels = [label_name(resolve(lab, gb)) if lab is not None else None for _, _, lab in goals]
            for lab in labels:
                if lab is not None:
                    sig2 = sig2.admit(lab)
        except SignatureError:
            continue
        fs = [F.resolve_formula(g, gb) for g in goal_fs]

        def allowed(i, it, labels=labels, sig2=sig2):
            if goals[i][0] == "R⇓":
                return True
            return it[0] is not None and sig2.leq(labels[i], it[0])

        for deal in distributions(left, len(goals), allowed):
            subs = []
            for i, g in enumerate(fs):
                share = deal[i]
                if goals[i][0] == "R⇓":
                    k2 = k_make(k_items(shared) + [it for it in share if it[0] is not None])
                    g2 = canon(x for lab, x in share if lab is None)
                else:
                    k2 = k_make(k_items(k_leq(shared, labels[i], sig2)) + list(share))
                    g2 = ()
                out = self.neg(sig2, k2, g2, (g,), depth)
                if out.proof is None:
                    exhausted |= out.exhausted
                    break
                subs.append(out.proof)
            else:
                proof, _ = _build(self, sig2, shared, node, gb, dict(enumerate(deal)), subs, labels)
                return Outcome(proof)
    return Outcome(None, exhausted)


def _check_locs(sig: SubexpSignature, node: Node, b: dict) -> SubexpSignature:
    """Location witnesses must lie below the type of their quantifier."""
    if node.rule == "∃l":
        w = label_name(resolve(node.info[0][1], b))
        ty = label_name(resolve(node.formula.type_label, b))
        sig = sig.admit(w)
        if not sig.leq(w, ty):
            raise SignatureError(f"location {w} is not below {ty}")
    for kid in node.kids:
        sig = _check_locs(sig, kid, b)
    return sig


def _build(self: SellEngine, sig, shared, node: Node, b, shares, subs, labels) -> tuple:
    """Rebuild the positive phase bottom-up; returns (proof, consumed items)."""
    f = F.resolve_formula(node.formula, b)

    def seq(items, **kw):
        k = k_make(k_items(shared) + [it for it in items if it[0] is not None])
        return SellSeq(k, canon(x for lab, x in items if lab is None), **kw)

    if node.rule == "I":
        used = () if node.shared else (node.item,)
        return Proof("I", seq(used, focus=f)), used
    if node.rule == "1":
        return Proof("1", seq((), focus=f)), ()
    if node.rule == "!l" and node.goal is None:
        used = () if node.shared else (node.item,)
        lab = label_name(resolve(f.label, b))
        k_prem = k_make(k_items(k_leq(shared, lab, sig)) + list(used))
        lit = f.body
        close = Proof("I", SellSeq(k_prem, (), focus=lit))
        dec = Proof("D1", SellSeq(k_prem, (lit,), ()), (close,), (("formula", lit),))
        store = Proof("R⇑", SellSeq(k_prem, (), (lit,)), (dec,))
        return Proof("!l", seq(used, focus=f), (store,)), used
    if node.rule in ("R⇓", "!l"):
        share = shares[node.goal]
        return Proof(node.rule, seq(share, focus=f), (subs[node.goal],)), share
    kids = [_build(self, sig, shared, kid, b, shares, subs, labels) for kid in node.kids]
    used = canon(sum((c for _, c in kids), ()))
    info = tuple((k, resolve(v, b)) for k, v in node.info)
    return Proof(node.rule, seq(used, focus=f), tuple(p for p, _ in kids), info), used


def _default_witness(self: SellEngine, sort: str) -> Term:
    pool = getattr(self.pools, sort, ()) if sort in ("term", "world", "form") else ()
    return pool[0] if pool else Const("c")


def _candidates_for(self: SellEngine, m: Meta, sig: SubexpSignature, b: dict) -> list:
    if m.sort == "loc":
        bound = label_name(resolve(m.bound, b)) if m.bound is not None else None
        return [Const(lab) for lab in sig.sorted_labels() if bound is None or sig.leq(lab, bound)]
    eig = sorted(n for n, s in self.eigen_sort.items() if s == m.sort)
    if m.sort == "world":
        return list(world_candidates(self.pools.world, tuple(eig), self.domain, self.slack))
    base = list(getattr(self.pools, m.sort, ()))
    return base + [Const(n) for n in eig if Const(n) not in base]


SellEngine.focus = _focus
SellEngine.probe = _probe
SellEngine.default_witness = _default_witness
SellEngine.candidates_for = _candidates_for


def prove_sell(sig: SubexpSignature, k: Context | dict, gamma: Sequence, goal: Sequence, depth: int, *,
               bias: str = "neg", domain: Domain = NAT, pools: Optional[Pools] = None,
               slack: int = 1) -> SearchResult:
    """Search ``⊢ K : gamma ⇑ goal``; ``k`` maps labels to lists of formulas."""
    if isinstance(k, dict):
        k = k_make([(lab, f) for lab, fs in k.items() for f in fs])
    return SellEngine(sig, depth, bias, domain, pools, slack).prove(k, gamma, goal)


def instantiate_loc(f: F.Formula, witness: str, sig: SubexpSignature) -> F.Formula:
    """Open ``existsloc l:a. B`` at a label whose type lies below ``a``."""
    if not isinstance(f, F.ExistsLoc):
        raise ValueError("instantiate_loc expects an existsloc formula")
    ty = label_name(f.type_label)
    if witness not in sig or not sig.leq(witness, ty):
        raise SignatureError(f"location {witness!r} is not below {ty!r}")
    return F.instantiate(f.body, Const(witness))


# -- replay

def _split(k: Context, gamma: tuple, sig: SubexpSignature) -> tuple:
    """(unbounded part of K, bounded items plus workbench items)."""
    shared = tuple((lab, fs) for lab, fs in k if sig.is_unbounded(lab))
    bounded = canon([(lab, x) for lab, fs in k if not sig.is_unbounded(lab) for x in fs]
                    + [(None, x) for x in gamma])
    return shared, bounded


def _admit_all(sig: SubexpSignature, k: Context) -> SubexpSignature:
    for lab, _ in k:
        sig = sig.admit(lab)
    return sig


def check_sell(p: Proof, sig: SubexpSignature, bias: str = "neg", domain: Domain = NAT) -> None:
    """Re-check every rule instance of a SELLF derivation; raises ReplayError."""
    with using_domain(domain):
        _check(p, _admit_all(sig, p.conclusion.k), bias)


def replay_sell(p: Proof, sig: SubexpSignature, bias: str = "neg", domain: Domain = NAT) -> bool:
    try:
        check_sell(p, sig, bias, domain)
    except (ReplayError, SignatureError):
        return False
    return True


def _need(cond: bool, msg: str, node: Proof) -> None:
    if not cond:
        raise ReplayError(msg, node)


def _prem(p: Proof, n: int) -> list:
    _need(len(p.premises) == n, f"{p.rule} expects {n} premise(s)", p)
    return [q.conclusion for q in p.premises]


def _check(p: Proof, sig: SubexpSignature, bias: str) -> None:
    c = p.conclusion
    _need(isinstance(c, SellSeq), "conclusion is not a SELLF sequent", p)
    kids_sig = [sig] * len(p.premises)
    if c.focus is None and c.up:
        kids_sig = _check_async(p, c, sig)
    elif c.focus is None:
        _check_decide(p, c, sig, bias)
    else:
        kids_sig = _check_sync(p, c, sig, bias)
    for q, s in zip(p.premises, kids_sig):
        _check(q, s, bias)


def _check_async(p: Proof, c: SellSeq, sig) -> list:
    f, rest = c.up[0], c.up[1:]
    same = lambda up, k=c.k, g=c.gamma: SellSeq(k, g, up)
    rule = p.rule
    if rule == "⊤":
        _need(isinstance(f, F.Top), "⊤ on a non-top formula", p)
        _prem(p, 0)
        return []
    if rule == "&":
        _need(isinstance(f, F.With), "& on a non-with formula", p)
        _need(_prem(p, 2) == [same((f.left,) + rest), same((f.right,) + rest)], "bad & premises", p)
        return [sig, sig]
    (q,) = _prem(p, 1)
    if rule == "⊥":
        _need(isinstance(f, F.Bot) and q == same(rest), "bad ⊥", p)
    elif rule == "⅋":
        _need(isinstance(f, F.Par) and q == same((f.left, f.right) + rest), "bad ⅋", p)
    elif rule == "?l":
        _need(isinstance(f, F.Quest), "?l on a non-? formula", p)
        lab = label_name(f.label)
        sig = sig.admit(lab)
        _need(q == SellSeq(k_add(c.k, lab, f.body), c.gamma, rest), "bad ?l", p)
    elif rule in ("∀", "∀l"):
        cls = F.ForallTerm if rule == "∀" else F.ForallLoc
        _need(isinstance(f, cls), f"{rule} on a wrong formula", p)
        e = p.get("eigen")
        _need(isinstance(e, Const), "missing eigenvariable", p)
        _need(e.name not in sig and e not in _seq_consts(c), "eigenvariable is not fresh", p)
        if rule == "∀l":
            sig = sig.with_label(e.name, label_name(f.type_label))
        _need(q == same((F.instantiate(f.body, e),) + rest), f"bad {rule}", p)
    elif rule == "R⇑":
        _need(not isinstance(f, (F.Bot, F.Par, F.Quest, F.Top, F.With, F.ForallTerm, F.ForallLoc)),
              "R⇑ on a negative connective", p)
        _need(q == SellSeq(c.k, canon(c.gamma + (f,)), rest), "bad R⇑", p)
    else:
        raise ReplayError(f"rule {rule} does not apply to an unfocused sequent", p)
    return [sig]


def _seq_consts(c: SellSeq) -> set:
    out = set()
    fs = [f for _, f in k_items(c.k)] + list(c.gamma) + list(c.up or ()) + ([c.focus] if c.focus else [])
    for f in fs:
        for t in F.iter_terms(f):
            out.update(x for x in subterms(t) if isinstance(x, Const))
    return out


def _check_decide(p: Proof, c: SellSeq, sig, bias) -> None:
    (q,) = _prem(p, 1)
    f = p.get("formula")
    _need(f is not None and not is_negative_literal(f, bias), "decide on a negative literal", p)
    if p.rule == "D1":
        _need(f in c.gamma, "D1 formula not in the workbench", p)
        want = SellSeq(c.k, remove_one(c.gamma, f), focus=f)
    elif p.rule == "Dl":
        lab = p.get("label")
        _need(f in k_get(c.k, lab), "Dl formula not stored at its label", p)
        k2 = c.k if sig.is_unbounded(lab) else k_remove(c.k, lab, f)
        want = SellSeq(k2, c.gamma, focus=f)
    else:
        raise ReplayError(f"rule {p.rule} does not apply to a stable sequent", p)
    _need(q == want, f"bad {p.rule} premise", p)


def _check_sync(p: Proof, c: SellSeq, sig, bias) -> list:
    f, rule = c.focus, p.rule
    shared, bounded = _split(c.k, c.gamma, sig)
    if rule == "I":
        _prem(p, 0)
        _need(_positive_literal(f, bias), "I on a non-literal", p)
        dual = F.negate(f)
        ok = [x for _, x in bounded] == [dual] or (
            not bounded and any(dual in fs for _, fs in shared))
        _need(ok, "I: context does not match the literal", p)
        return []
    if rule == "1":
        _need(isinstance(f, F.One) and not bounded, "bad 1", p)
        _prem(p, 0)
        return []
    if rule == "⊗":
        _need(isinstance(f, F.Tensor), "⊗ on a non-tensor", p)
        q1, q2 = _prem(p, 2)
        _need(q1.focus == f.left and q2.focus == f.right, "⊗ premises focus on the wrong parts", p)
        s1, b1 = _split(q1.k, q1.gamma, sig)
        s2, b2 = _split(q2.k, q2.gamma, sig)
        _need(s1 == shared and s2 == shared, "⊗ premises change the unbounded context", p)
        _need(canon(b1 + b2) == bounded, "⊗ premises do not split the context", p)
        return [sig, sig]
    (q,) = _prem(p, 1)
    if rule in ("⊕l", "⊕r"):
        _need(isinstance(f, F.Plus), "⊕ on a non-plus", p)
        part = f.left if rule == "⊕l" else f.right
        _need(q == SellSeq(c.k, c.gamma, focus=part), f"bad {rule}", p)
    elif rule in ("∃", "∃l"):
        cls = F.ExistsTerm if rule == "∃" else F.ExistsLoc
        _need(isinstance(f, cls), f"{rule} on a wrong formula", p)
        w = p.get("witness")
        _need(w is not None and not isinstance(w, Meta), "missing witness", p)
        if rule == "∃l":
            sig = sig.admit(label_name(w))
            _need(sig.leq(label_name(w), label_name(f.type_label)), "location witness above its type", p)
        _need(q == SellSeq(c.k, c.gamma, focus=F.instantiate(f.body, w)), f"bad {rule}", p)
    elif rule == "!l":
        _need(isinstance(f, F.Bang), "!l on a non-bang", p)
        lab = label_name(f.label)
        sig = sig.admit(lab)
        _need(all(x is not None and sig.leq(lab, x) for x, _ in bounded),
              "!l: context holds formulas below the promotion label", p)
        _need(q == SellSeq(k_leq(c.k, lab, sig), (), (f.body,)), "bad !l premise", p)
    elif rule == "R⇓":
        _need(not isinstance(f, F.Atom) and not F.is_positive(f, bias) or is_negative_literal(f, bias),
              "R⇓ on a positive formula", p)
        _need(q == SellSeq(c.k, c.gamma, (f,)), "bad R⇓", p)
    else:
        raise ReplayError(f"rule {rule} does not apply to a focused sequent", p)
    return [sig]
