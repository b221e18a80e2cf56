"""Proof search for MALL with least and greatest fixed points.

``mu`` is unfolded under a per-branch budget and a cycle check; ``nu`` is
proved by coinduction with an invariant taken from the hints or, failing
that, from an attached synthesizer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from . import formulas as F
from .proof import Proof, ReplayError, SearchResult, Verdict, canon, remove_one, splits


class MissingHint(LookupError):
    """A greatest fixed point was met with no invariant available."""


@dataclass(frozen=True)
class Invariant:
    formula: F.Formula
    provenance: str = "user"  # "user" or "synthesized"
    states: Optional[tuple] = None  # the state set behind a synthesized invariant

    def __post_init__(self):
        if F.free_fix(self.formula):
            raise ValueError("an invariant may not mention free fixed-point variables")


@dataclass(frozen=True)
class MSeq:
    delta: tuple

    def render(self) -> str:
        from .printer import formula_str
        return "⊢ " + ", ".join(formula_str(f) for f in self.delta)

    __str__ = render


@dataclass
class Outcome:
    proof: Optional[Proof] = None
    exhausted: bool = False
    cyclic: bool = False  # some branch was cut by the cycle check


Synthesizer = Callable[[F.Nu], Optional[Invariant]]


class MumallEngine:
    def __init__(self, depth: int, hints: Optional[Mapping] = None, synthesizer: Optional[Synthesizer] = None):
        self.depth = depth
        self.hints = dict(hints or {})
        self.synthesizer = synthesizer
        self.memo: dict = {}
        self.stats = {"unfolds": 0, "nu": 0, "synthesized": 0}

    def invariant(self, f: F.Nu) -> Invariant:
        inv = self.hints.get(f)
        if inv is None and self.synthesizer is not None:
            inv = self.synthesizer(f)
            if inv is not None:
                self.stats["synthesized"] += 1
                self.hints[f] = inv
        if inv is None:
            raise MissingHint(f"no invariant for a greatest fixed point: {MSeq((f,))}")
        return inv if isinstance(inv, Invariant) else Invariant(inv)

    def prove(self, delta: Sequence[F.Formula]) -> SearchResult:
        for f in delta:
            if F.has_exponentials(f) or F.free_fix(f):
                raise ValueError("sequents must be closed and exponential-free")
        out = self.search(canon(delta), (), frozenset())
        if out.proof is not None:
            return SearchResult(Verdict.PROVED, out.proof, self.stats)
        return SearchResult(Verdict.EXHAUSTED if out.exhausted else Verdict.REFUTED, None, self.stats)

    def search(self, delta: tuple, used: tuple, seen: frozenset) -> Outcome:
        hit = self.memo.get(delta)
        if hit is not None:
            return hit
        out = self._search(delta, used, seen)
        if out.proof is not None or not (out.exhausted or out.cyclic):
            self.memo[delta] = out
        return out

    def _search(self, delta, used, seen) -> Outcome:
        s = MSeq(delta)
        for f in delta:
            if isinstance(f, F.Top):
                return Outcome(Proof("⊤", s))
        for f in delta:
            rest = remove_one(delta, f)
            if isinstance(f, F.Par):
                return self._one("⅋", s, canon(rest + (f.left, f.right)), used, seen)
            if isinstance(f, F.Bot):
                return self._one("⊥", s, rest, used, seen)
            if isinstance(f, F.With):
                return self._all("&", s, [canon(rest + (f.left,)), canon(rest + (f.right,))], used, seen)
            if isinstance(f, F.Nu):
                inv = self.invariant(f)
                self.stats["nu"] += 1
                step = F.subst_fix(f.body, inv.formula)
                prems = [canon(rest + (inv.formula,)), canon((step, F.negate(inv.formula)))]
                return self._all("ν", s, prems, used, seen, (("invariant", inv.formula),))
        exhausted = cyclic = False
        for attempt in self._choices(s, delta, used, seen):
            out = attempt()
            if out.proof is not None:
                return out
            exhausted |= out.exhausted
            cyclic |= out.cyclic
        for f in dict.fromkeys(delta):
            if not isinstance(f, F.Mu):
                continue
            if delta in seen:
                cyclic = True
                break
            n = dict(used).get(f, 0)
            if n >= self.depth:
                exhausted = True
                continue
            self.stats["unfolds"] += 1
            nused = canon({**dict(used), f: n + 1}.items())
            out = self._one("μ", s, canon(remove_one(delta, f) + (F.unfold_mu(f),)), nused, seen | {delta},
                            (("formula", f),))
            if out.proof is not None:
                return out
            exhausted |= out.exhausted
            cyclic |= out.cyclic
        return Outcome(None, exhausted, cyclic)

    def _choices(self, s, delta, used, seen):
        if len(delta) == 2 and delta[0] == F.negate(delta[1]) and isinstance(delta[0], F.Atom):
            yield lambda: Outcome(Proof("init", s))
        if delta == (F.ONE,):
            yield lambda: Outcome(Proof("1", s))
        for f in dict.fromkeys(delta):
            rest = remove_one(delta, f)
            if isinstance(f, F.Plus):
                for rule, part in (("⊕l", f.left), ("⊕r", f.right)):
                    yield lambda rule=rule, part=part, rest=rest: self._one(rule, s, canon(rest + (part,)), used, seen)
            elif isinstance(f, F.Tensor):
                for d1, d2 in sorted(splits(rest), key=lambda p: len(p[0])):
                    yield lambda d1=d1, d2=d2, f=f: self._all(
                        "⊗", s, [canon(d1 + (f.left,)), canon(d2 + (f.right,))], used, seen)

    def _one(self, rule, s, delta, used, seen, info=()) -> Outcome:
        sub = self.search(delta, used, seen)
        if sub.proof is None:
            return sub
        return Outcome(Proof(rule, s, (sub.proof,), info))

    def _all(self, rule, s, prems, used, seen, info=()) -> Outcome:
        proofs = []
        for delta in prems:
            sub = self.search(delta, used, seen)
            if sub.proof is None:
                return sub
            proofs.append(sub.proof)
        return Outcome(Proof(rule, s, tuple(proofs), info))


def default_budget(n_states: int, n_rules: int, formula: F.Formula) -> int:
    return n_states * n_rules + F.size(formula)


def prove_mumall(delta: Sequence[F.Formula], hints: Optional[Mapping] = None, depth: Optional[int] = None, *,
                 synthesizer: Optional[Synthesizer] = None) -> SearchResult:
    """Search ``⊢ delta``; ``depth`` bounds the unfoldings of each μ-formula per branch."""
    if depth is None:
        depth = sum(F.size(f) for f in delta)
    return MumallEngine(depth, hints, synthesizer).prove(delta)


def unfold_mu(f: F.Formula) -> F.Formula:
    return F.unfold_mu(f)


# -- replay

def check_mumall(p: Proof) -> None:
    for node in p.nodes():
        _check(node)


def replay_mumall(p: Proof) -> bool:
    try:
        check_mumall(p)
    except ReplayError:
        return False
    return True


def _check(p: Proof) -> None:
    delta = p.conclusion.delta
    prem = [q.conclusion.delta for q in p.premises]

    def need(cond, msg):
        if not cond:
            raise ReplayError(msg, p)

    rule = p.rule
    if rule == "init":
        need(len(delta) == 2 and isinstance(delta[0], F.Atom) and delta[0] == F.negate(delta[1]) and not prem,
             "bad init")
        return
    if rule == "1":
        need(delta == (F.ONE,) and not prem, "bad 1")
        return
    if rule == "⊤":
        need(F.TOP in delta and not prem, "bad ⊤")
        return
    if rule == "ν":
        inv = p.get("invariant")
        cands = [f for f in delta if isinstance(f, F.Nu)]
        need(inv is not None and len(prem) == 2, "ν needs an invariant and two premises")
        ok = any(prem[0] == canon(remove_one(delta, f) + (inv,))
                 and prem[1] == canon((F.subst_fix(f.body, inv), F.negate(inv))) for f in cands)
        need(ok, "ν premises do not match ⊢ Δ, S and ⊢ B S, S^⊥")
        return
    if rule == "μ":
        f = p.get("formula")
        need(isinstance(f, F.Mu) and f in delta and len(prem) == 1, "bad μ")
        need(prem[0] == canon(remove_one(delta, f) + (F.unfold_mu(f),)), "μ premise is not the unfolding")
        return
    if rule == "⊗":
        need(len(prem) == 2, "⊗ needs two premises")
        for f in delta:
            if not isinstance(f, F.Tensor):
                continue
            rest = remove_one(delta, f)
            for a, b in ((prem[0], prem[1]),):
                if f.left in a and f.right in b and canon(remove_one(a, f.left) + remove_one(b, f.right)) == rest:
                    return
        raise ReplayError("⊗ premises do not split the context", p)
    need(len(prem) == (2 if rule == "&" else 1), f"{rule}: wrong number of premises")
    for f in delta:
        rest = remove_one(delta, f)
        if rule == "⅋" and isinstance(f, F.Par) and prem[0] == canon(rest + (f.left, f.right)):
            return
        if rule == "⊥" and isinstance(f, F.Bot) and prem[0] == rest:
            return
        if rule == "&" and isinstance(f, F.With) and prem == [canon(rest + (f.left,)), canon(rest + (f.right,))]:
            return
        if rule in ("⊕l", "⊕r") and isinstance(f, F.Plus):
            if prem[0] == canon(rest + ((f.left if rule == "⊕l" else f.right),)):
                return
    raise ReplayError(f"{rule} does not apply", p)
