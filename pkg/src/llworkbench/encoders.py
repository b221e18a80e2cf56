"""HyLL as an object logic: clause theories for LL and SELL plus sequent translations.

Judgments are reified as ``jdg(F, w)`` terms.  ``lft`` marks a judgment on
the left of the HyLL turnstile and ``rgt`` the goal.  In the LL theory
every clause consumes one stored meta-atom and releases the premises; in
the SELL theory each world has its own bounded context and the consumed
meta-atom is reached through a promotion at that world.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import formulas as F
from . import hyll_syntax as H
from .hyll import HyllSequent, prove_hyll
from .llf import Pools, bipole_phases, check_llf, decide_nodes, prove_llf
from .parser import parse_formula
from .proof import Proof, Verdict
from .sellf import check_sell, k_make, prove_sell
from .signature import SubexpSignature
from .terms import Const, is_ground, subterms
from .worlds import NAT, Domain, DomainError, norm, pool_closure, world_key

COPY, INF = "u", "inf"

# name -> (clause text, False when the clause was completed by dualization)
_LL = {
    "⊗R": ("exists C:form. exists D:form. exists w:world. ~rgt(jdg(tensor(C, D), w)) * rgt(jdg(C, w)) * rgt(jdg(D, w))", True),
    "⊗L": ("exists C:form. exists D:form. exists w:world. ~lft(jdg(tensor(C, D), w)) * (lft(jdg(C, w)) | lft(jdg(D, w)))", True),
    "@R": ("exists C:form. exists u:world. exists w:world. ~rgt(jdg(at(C, u), w)) * rgt(jdg(C, u))", True),
    "@L": ("exists C:form. exists u:world. exists w:world. ~lft(jdg(at(C, u), w)) * lft(jdg(C, u))", True),
    "↓R": ("exists A:form. exists w:world. ~rgt(jdg(down(A), w)) * rgt(jdg(inst_world(A, w), w))", True),
    "↓L": ("exists A:form. exists w:world. ~lft(jdg(down(A), w)) * lft(jdg(inst_world(A, w), w))", True),
    "∀R(F)": ("exists B:form. exists u:world. ~rgt(jdg(allx(B), u)) * (forall x. rgt(jdg(inst_term(B, x), u)))", True),
    "∀L(F)": ("exists B:form. exists u:world. ~lft(jdg(allx(B), u)) * (exists x. lft(jdg(inst_term(B, x), u)))", True),
    "∀R(W)": ("exists A:form. exists u:world. ~rgt(jdg(allw(A), u)) * (forall v:world. rgt(jdg(inst_world(A, v), u)))", True),
    "∀L(W)": ("exists A:form. exists u:world. ~lft(jdg(allw(A), u)) * (exists v:world. lft(jdg(inst_world(A, v), u)))", True),
    "!L": ("exists C:form. exists w:world. ~lft(jdg(bang(C), w)) * ?lft(jdg(C, w))", True),
    "Init": ("exists C:form. exists w:world. ~lft(jdg(C, w)) * ~rgt(jdg(C, w))", True),
    "∃R(F)": ("exists B:form. exists u:world. ~rgt(jdg(exx(B), u)) * (exists x. rgt(jdg(inst_term(B, x), u)))", False),
    "∃L(F)": ("exists B:form. exists u:world. ~lft(jdg(exx(B), u)) * (forall x. lft(jdg(inst_term(B, x), u)))", False),
    "∃R(W)": ("exists A:form. exists u:world. ~rgt(jdg(exw(A), u)) * (exists v:world. rgt(jdg(inst_world(A, v), u)))", False),
    "∃L(W)": ("exists A:form. exists u:world. ~lft(jdg(exw(A), u)) * (forall v:world. lft(jdg(inst_world(A, v), u)))", False),
    "⊸R": ("exists C:form. exists D:form. exists w:world. ~rgt(jdg(limp(C, D), w)) * (lft(jdg(C, w)) | rgt(jdg(D, w)))", False),
    "⊸L": ("exists C:form. exists D:form. exists w:world. ~lft(jdg(limp(C, D), w)) * rgt(jdg(C, w)) * lft(jdg(D, w))", False),
    "&R": ("exists C:form. exists D:form. exists w:world. ~rgt(jdg(with(C, D), w)) * (rgt(jdg(C, w)) & rgt(jdg(D, w)))", False),
    "&L": ("exists C:form. exists D:form. exists w:world. ~lft(jdg(with(C, D), w)) * (lft(jdg(C, w)) (+) lft(jdg(D, w)))", False),
    "⊕R": ("exists C:form. exists D:form. exists w:world. ~rgt(jdg(plus(C, D), w)) * (rgt(jdg(C, w)) (+) rgt(jdg(D, w)))", False),
    "⊕L": ("exists C:form. exists D:form. exists w:world. ~lft(jdg(plus(C, D), w)) * (lft(jdg(C, w)) & lft(jdg(D, w)))", False),
    "1R": ("exists w:world. ~rgt(jdg(one, w)) * 1", False),
    "1L": ("exists w:world. ~lft(jdg(one, w)) * bot", False),
    "⊤R": ("exists w:world. ~rgt(jdg(top, w)) * top", False),
    "0L": ("exists w:world. ~lft(jdg(zero, w)) * top", False),
    "!R": ("exists C:form. exists w:world. ~rgt(jdg(bang(C), w)) * !rgt(jdg(C, w))", False),
}

_SELL = {
    "⊗R": ("exists C:form. exists D:form. existsloc w:inf. !^w ~rgt(jdg(tensor(C, D), w)) * ?^w rgt(jdg(C, w)) * ?^w rgt(jdg(D, w))", True),
    "@R": ("exists A:form. existsloc w:inf. existsloc u:inf. !^w ~rgt(jdg(at(A, u), w)) * ?^u rgt(jdg(A, u))", True),
    "@L": ("exists A:form. existsloc w:inf. existsloc u:inf. !^w ~lft(jdg(at(A, u), w)) * ?^u lft(jdg(A, u))", True),
    "↓R": ("exists A:form. existsloc w:inf. !^w ~rgt(jdg(down(A), w)) * ?^w rgt(jdg(inst_world(A, w), w))", True),
    "↓L": ("exists A:form. existsloc w:inf. !^w ~lft(jdg(down(A), w)) * ?^w lft(jdg(inst_world(A, w), w))", True),
    "∀R(F)": ("exists B:form. existsloc w:inf. !^w ~rgt(jdg(allx(B), w)) * (forall x. ?^w rgt(jdg(inst_term(B, x), w)))", True),
    "∀R(W)": ("exists A:form. existsloc w:inf. !^w ~rgt(jdg(allw(A), w)) * (forallloc v:inf. ?^w rgt(jdg(inst_world(A, v), w)))", True),
    "!L": ("exists C:form. existsloc w:inf. !^w ~lft(jdg(bang(C), w)) * ?^u ?^w lft(jdg(C, w))", True),
    "⊗L": ("exists C:form. exists D:form. existsloc w:inf. !^w ~lft(jdg(tensor(C, D), w)) * (?^w lft(jdg(C, w)) | ?^w lft(jdg(D, w)))", False),
    "Init": ("exists C:form. existsloc w:inf. !^w ~lft(jdg(C, w)) * !^w ~rgt(jdg(C, w))", False),
    "∀L(F)": ("exists B:form. existsloc w:inf. !^w ~lft(jdg(allx(B), w)) * (exists x. ?^w lft(jdg(inst_term(B, x), w)))", False),
    "∀L(W)": ("exists A:form. existsloc w:inf. !^w ~lft(jdg(allw(A), w)) * (existsloc v:inf. ?^w lft(jdg(inst_world(A, v), w)))", False),
    "∃R(F)": ("exists B:form. existsloc w:inf. !^w ~rgt(jdg(exx(B), w)) * (exists x. ?^w rgt(jdg(inst_term(B, x), w)))", False),
    "∃L(F)": ("exists B:form. existsloc w:inf. !^w ~lft(jdg(exx(B), w)) * (forall x. ?^w lft(jdg(inst_term(B, x), w)))", False),
    "∃R(W)": ("exists A:form. existsloc w:inf. !^w ~rgt(jdg(exw(A), w)) * (existsloc v:inf. ?^w rgt(jdg(inst_world(A, v), w)))", False),
    "∃L(W)": ("exists A:form. existsloc w:inf. !^w ~lft(jdg(exw(A), w)) * (forallloc v:inf. ?^w lft(jdg(inst_world(A, v), w)))", False),
    "⊸R": ("exists C:form. exists D:form. existsloc w:inf. !^w ~rgt(jdg(limp(C, D), w)) * (?^w lft(jdg(C, w)) | ?^w rgt(jdg(D, w)))", False),
    "⊸L": ("exists C:form. exists D:form. existsloc w:inf. !^w ~lft(jdg(limp(C, D), w)) * ?^w rgt(jdg(C, w)) * ?^w lft(jdg(D, w))", False),
    "&R": ("exists C:form. exists D:form. existsloc w:inf. !^w ~rgt(jdg(with(C, D), w)) * (?^w rgt(jdg(C, w)) & ?^w rgt(jdg(D, w)))", False),
    "&L": ("exists C:form. exists D:form. existsloc w:inf. !^w ~lft(jdg(with(C, D), w)) * (?^w lft(jdg(C, w)) (+) ?^w lft(jdg(D, w)))", False),
    "⊕R": ("exists C:form. exists D:form. existsloc w:inf. !^w ~rgt(jdg(plus(C, D), w)) * (?^w rgt(jdg(C, w)) (+) ?^w rgt(jdg(D, w)))", False),
    "⊕L": ("exists C:form. exists D:form. existsloc w:inf. !^w ~lft(jdg(plus(C, D), w)) * (?^w lft(jdg(C, w)) & ?^w lft(jdg(D, w)))", False),
    "1R": ("existsloc w:inf. !^w ~rgt(jdg(one, w)) * 1", False),
    "1L": ("existsloc w:inf. !^w ~lft(jdg(one, w)) * bot", False),
    "⊤R": ("existsloc w:inf. !^w ~rgt(jdg(top, w)) * top", False),
    "0L": ("existsloc w:inf. !^w ~lft(jdg(zero, w)) * top", False),
    "!R": ("exists C:form. existsloc w:inf. !^w ~rgt(jdg(bang(C), w)) * !^u ?^w rgt(jdg(C, w))", False),
}


@dataclass(frozen=True)
class ClauseTheory:
    clauses: tuple  # (name, formula) pairs, in a fixed order
    target: str  # "LL" or "SELL"
    completed: frozenset = field(default_factory=frozenset)  # clauses not given verbatim upstream

    def formulas(self) -> list:
        return [f for _, f in self.clauses]

    def __getitem__(self, name: str) -> F.Formula:
        return dict(self.clauses)[name]


def _theory(table: dict, target: str) -> ClauseTheory:
    clauses = tuple((name, parse_formula(text)) for name, (text, _) in table.items())
    return ClauseTheory(clauses, target, frozenset(n for n, (_, verbatim) in table.items() if not verbatim))


def build_ll_theory() -> ClauseTheory:
    return _theory(_LL, "LL")


def build_sell_theory() -> ClauseTheory:
    return _theory(_SELL, "SELL")


def lft(j: H.HyllJudgment, domain: Domain = NAT) -> F.Atom:
    return F.Atom("lft", (H.reify(j, domain),))


def rgt(j: H.HyllJudgment, domain: Domain = NAT) -> F.Atom:
    return F.Atom("rgt", (H.reify(j, domain),))


# -- LL

@dataclass(frozen=True)
class LlEncoding:
    classical: tuple
    linear: tuple
    pools: Pools


def _worlds(s: HyllSequent, domain: Domain, slack: int) -> list:
    base = []
    for j in list(s.gamma) + list(s.delta) + [s.goal]:
        base.append(j.world)
        base += [w for w in H.iter_worlds(j.formula) if norm(w, domain).closed]
    return pool_closure(base, domain, slack)


def _pools(s: HyllSequent, domain: Domain, slack: int) -> Pools:
    terms: list = []
    for j in list(s.gamma) + list(s.delta) + [s.goal]:
        for t in H.iter_hterms(j.formula):
            terms += [x for x in subterms(t) if is_ground(x) and x not in terms]
    worlds = tuple(Const(world_key(w, domain)) for w in _worlds(s, domain, slack))
    return Pools(term=tuple(terms) or (Const("c"),), world=worlds)


def encode_hyll_sequent_ll(s: HyllSequent, *, domain: Domain = NAT, slack: int = 1,
                           theory: Optional[ClauseTheory] = None) -> LlEncoding:
    theory = theory or build_ll_theory()
    classical = tuple(theory.formulas()) + tuple(lft(j, domain) for j in s.gamma)
    linear = tuple(lft(j, domain) for j in s.delta) + (rgt(s.goal, domain),)
    return LlEncoding(classical, linear, _pools(s, domain, slack))


# -- SELL

def build_sell_signature(worlds, domain: Domain = NAT) -> SubexpSignature:
    """Flat signature: every world below ``inf``, ``u`` and ``inf`` unbounded."""
    keys = {world_key(w, domain) for w in worlds}
    if keys & {COPY, INF}:
        raise DomainError(f"world names {COPY!r} and {INF!r} are reserved by the SELL encoding")
    labels = keys | {COPY, INF}
    order = [(k, INF) for k in labels if k != INF]
    return SubexpSignature.build(labels, order, {COPY, INF}, auto_type=INF)


@dataclass(frozen=True)
class SellEncoding:
    sig: SubexpSignature
    k: tuple
    pools: Pools


def encode_hyll_sequent_sell(s: HyllSequent, *, domain: Domain = NAT, slack: int = 1,
                             theory: Optional[ClauseTheory] = None) -> SellEncoding:
    theory = theory or build_sell_theory()
    sig = build_sell_signature(_worlds(s, domain, slack), domain)
    entries = [(COPY, f) for f in theory.formulas()]
    for j in s.gamma:
        entries.append((COPY, F.Quest(Const(world_key(j.world, domain)), lft(j, domain))))
    for j in s.delta:
        entries.append((world_key(j.world, domain), lft(j, domain)))
    entries.append((world_key(s.goal.world, domain), rgt(s.goal, domain)))
    return SellEncoding(sig, k_make(entries), _pools(s, domain, slack))


# -- adequacy

def _tri(v: Verdict) -> str:
    return v.value


def clause_bipoles(p: Proof, sell: bool = False) -> bool:
    """Every decide on a theory clause is one positive then one negative phase."""
    return all(bipole_phases(d, promoted_literal_step=sell) for d in decide_nodes(p)
               if not isinstance(d.get("formula"), F.Atom))


def adequacy_crosscheck(s: HyllSequent, depth: int = 2, *, ll_depth: int = 8, sell_depth: int = 8,
                        domain: Domain = NAT, slack: int = 1) -> dict:
    """Run the three engines on ``s`` and its two encodings; report verdicts and agreement."""
    h = prove_hyll(s, depth, domain=domain, slack=slack)
    enc = encode_hyll_sequent_ll(s, domain=domain, slack=slack)
    ll = prove_llf(enc.classical, enc.linear, (), ll_depth, bias="neg", domain=domain, pools=enc.pools,
                   slack=slack)
    senc = encode_hyll_sequent_sell(s, domain=domain, slack=slack)
    sl = prove_sell(senc.sig, senc.k, (), (), sell_depth, bias="neg", domain=domain, pools=senc.pools,
                    slack=slack)
    report = {"hyll": _tri(h.verdict), "ll": _tri(ll.verdict), "sell": _tri(sl.verdict)}
    decided = {r for r in report.values() if r != Verdict.EXHAUSTED.value}
    report["agree"] = len(decided) <= 1
    report["bipoles"] = True
    if ll.proved:
        check_llf(ll.proof, "neg", domain)
        report["bipoles"] &= clause_bipoles(ll.proof)
    if sl.proved:
        check_sell(sl.proof, senc.sig, "neg", domain)
        report["bipoles"] &= clause_bipoles(sl.proof, sell=True)
    report["proofs"] = {"hyll": h.proof, "ll": ll.proof, "sell": sl.proof}
    return report
