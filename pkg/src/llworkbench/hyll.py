"""Bounded proof search for two-sided intuitionistic HyLL.

Invertible rules are applied eagerly; the remaining rules are tried in a
fixed order with backtracking.  Every rule except ``copy`` shrinks the
sequent, so the only bound needed is a per-branch copy budget for each
unbounded judgment.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterable, Optional, Sequence

from . import hyll_syntax as H
from .hyll_syntax import HyllJudgment as J
from .printer import judgment_str
from .proof import Proof, ReplayError, SearchResult, Verdict, canon, msub, remove_one, splits
from .terms import Const, Term, is_ground, subterms
from .worlds import NAT, Domain, Gen, WorldExpr, norm, normalize, pool_closure, world_gens


@dataclass(frozen=True)
class HyllSequent:
    gamma: tuple  # unbounded judgments, a set kept sorted
    delta: tuple  # linear judgments, a sorted multiset
    goal: J

    def render(self) -> str:
        g = ", ".join(judgment_str(j) for j in self.gamma)
        d = ", ".join(judgment_str(j) for j in self.delta)
        return f"{g} ; {d} |- {judgment_str(self.goal)}"

    __str__ = render


def sequent(gamma: Iterable[J], delta: Iterable[J], goal: J, domain: Domain = NAT) -> HyllSequent:
    """Build a sequent with every world normalized."""
    nj = lambda j: H.normalize_judgment(j, domain)
    return HyllSequent(canon(set(map(nj, gamma))), canon(map(nj, delta)), nj(goal))


@dataclass
class Outcome:
    proof: Optional[Proof] = None
    exhausted: bool = False


def _judgments(s: HyllSequent) -> list:
    return list(s.gamma) + list(s.delta) + [s.goal]


class HyllEngine:
    def __init__(self, depth: int, domain: Domain = NAT, slack: int = 1,
                 terms: Sequence[Term] = (), worlds: Sequence[WorldExpr] = ()):
        self.depth = depth
        self.domain = domain
        self.slack = slack
        self.fresh = count(1)
        self.extra_terms = list(terms)
        self.extra_worlds = list(worlds)
        self.memo: dict = {}
        self.stats = {"nodes": 0, "copies": 0}

    # -- witness pools

    def _setup(self, s: HyllSequent) -> None:
        terms, worlds = list(self.extra_terms), list(self.extra_worlds)
        for j in _judgments(s):
            worlds.append(j.world)
            worlds += [w for w in H.iter_worlds(j.formula) if norm(w, self.domain).closed]
            for t in H.iter_hterms(j.formula):
                terms += [x for x in subterms(t) if is_ground(x) and x not in terms]
        self.terms = list(dict.fromkeys(terms)) or [Const("c")]
        self.base_worlds = list(dict.fromkeys(normalize(w, self.domain) for w in worlds))
        self.eigen_terms: list = []
        self.eigen_worlds: list = []
        self._pool_cache: dict = {}

    def world_pool(self) -> list:
        key = len(self.eigen_worlds)
        if key not in self._pool_cache:
            base = self.base_worlds + [Gen(e) for e in self.eigen_worlds]
            self._pool_cache[key] = pool_closure(base, self.domain, self.slack)
        return self._pool_cache[key]

    def term_pool(self) -> list:
        return self.terms + [Const(e) for e in self.eigen_terms]

    def eigen(self, world: bool):
        name = f"%{'w' if world else 't'}{next(self.fresh)}"
        if world:
            self.eigen_worlds.append(name)
            return Gen(name)
        self.eigen_terms.append(name)
        return Const(name)

    # -- search

    def prove(self, s: HyllSequent) -> SearchResult:
        self._setup(s)
        with H.using_domain(self.domain):
            out = self.search(s, ())
        if out.proof is not None:
            return SearchResult(Verdict.PROVED, out.proof, self.stats)
        return SearchResult(Verdict.EXHAUSTED if out.exhausted else Verdict.REFUTED, None, self.stats)

    def nj(self, f: H.HyllFormula, w: WorldExpr) -> J:
        return H.normalize_judgment(J(f, w), self.domain)

    def search(self, s: HyllSequent, used: tuple) -> Outcome:
        key = (s, used, len(self.eigen_terms), len(self.eigen_worlds))
        if key in self.memo:
            return self.memo[key]
        self.stats["nodes"] += 1
        out = self._search(s, used)
        self.memo[key] = out
        return out

    def _one(self, rule, s, prem: HyllSequent, used, info=()) -> Outcome:
        sub = self.search(prem, used)
        if sub.proof is None:
            return sub
        return Outcome(Proof(rule, s, (sub.proof,), info))

    def _all(self, rule, s, prems, used, info=()) -> Outcome:
        proofs = []
        for prem in prems:
            sub = self.search(prem, used)
            if sub.proof is None:
                return sub
            proofs.append(sub.proof)
        return Outcome(Proof(rule, s, tuple(proofs), info))

    def _search(self, s: HyllSequent, used: tuple) -> Outcome:
        inv = self._invertible(s, used)
        if inv is not None:
            return inv
        exhausted = False
        for attempt in self._choices(s, used):
            out = attempt()
            if out.proof is not None:
                return out
            exhausted |= out.exhausted
        for j in s.gamma:
            n = dict(used).get(j, 0)
            if n >= self.depth:
                exhausted = True
                continue
            self.stats["copies"] += 1
            nused = canon({**dict(used), j: n + 1}.items())
            inner = HyllSequent(s.gamma, canon(s.delta + (j,)), s.goal)
            for attempt in self._focused(inner, j, s.delta, nused):
                out = attempt()
                if out.proof is not None:
                    return Outcome(Proof("copy", s, (out.proof,), (("principal", j),)))
                exhausted |= out.exhausted
        return Outcome(None, exhausted)

    def _invertible(self, s: HyllSequent, used: tuple) -> Optional[Outcome]:
        g, d, c = s.gamma, s.delta, s.goal
        for j in d:
            if isinstance(j.formula, H.HZero):
                return Outcome(Proof("0L", s, (), (("principal", j),)))
        for j in d:
            f, u = j.formula, j.world
            rest = remove_one(d, j)
            info = (("principal", j),)
            if isinstance(f, H.HTensor):
                prem = HyllSequent(g, canon(rest + (self.nj(f.left, u), self.nj(f.right, u))), c)
                return self._one("⊗L", s, prem, used, info)
            if isinstance(f, H.HOne):
                return self._one("1L", s, HyllSequent(g, rest, c), used, info)
            if isinstance(f, H.HPlus):
                prems = [HyllSequent(g, canon(rest + (self.nj(x, u),)), c) for x in (f.left, f.right)]
                return self._all("⊕L", s, prems, used, info)
            if isinstance(f, (H.HExistsTerm, H.HExistsWorld)):
                world = isinstance(f, H.HExistsWorld)
                e = self.eigen(world)
                body = H.instantiate_world(f.body, e) if world else H.instantiate_term(f.body, e)
                prem = HyllSequent(g, canon(rest + (self.nj(body, u),)), c)
                return self._one("∃L", s, prem, used, info + (("eigen", e),))
            if isinstance(f, H.HBang):
                prem = HyllSequent(canon(set(g) | {self.nj(f.body, u)}), rest, c)
                return self._one("!L", s, prem, used, info)
            if isinstance(f, H.HAt):
                prem = HyllSequent(g, canon(rest + (self.nj(f.body, f.world),)), c)
                return self._one("@L", s, prem, used, info)
            if isinstance(f, H.HDown):
                prem = HyllSequent(g, canon(rest + (self.nj(H.instantiate_world(f.body, u), u),)), c)
                return self._one("↓L", s, prem, used, info)
        f, w = c.formula, c.world
        if isinstance(f, H.HTop):
            return Outcome(Proof("⊤R", s))
        if isinstance(f, H.HLimp):
            prem = HyllSequent(g, canon(d + (self.nj(f.left, w),)), self.nj(f.right, w))
            return self._one("⊸R", s, prem, used)
        if isinstance(f, H.HWith):
            prems = [HyllSequent(g, d, self.nj(x, w)) for x in (f.left, f.right)]
            return self._all("&R", s, prems, used)
        if isinstance(f, (H.HForallTerm, H.HForallWorld)):
            world = isinstance(f, H.HForallWorld)
            e = self.eigen(world)
            body = H.instantiate_world(f.body, e) if world else H.instantiate_term(f.body, e)
            return self._one("∀R", s, HyllSequent(g, d, self.nj(body, w)), used, (("eigen", e),))
        if isinstance(f, H.HDown):
            return self._one("↓R", s, HyllSequent(g, d, self.nj(H.instantiate_world(f.body, w), w)), used)
        if isinstance(f, H.HAt):
            return self._one("@R", s, HyllSequent(g, d, self.nj(f.body, f.world)), used)
        return None

    def _focused(self, s: HyllSequent, j: J, rest: tuple, used: tuple):
        """Thunks that decompose a freshly copied ``j`` at once.

        A copy permutes up to the first rule that uses it, so nothing is lost;
        ∀L and &L keep the focus on their result.
        """
        g, c = s.gamma, s.goal
        h, u = j.formula, j.world
        info = (("principal", j),)
        if isinstance(h, H.HAtom):
            if not rest and c == j:
                yield lambda: Outcome(Proof("init", s))
        elif isinstance(h, (H.HWith, H.HForallTerm, H.HForallWorld)):
            if isinstance(h, H.HWith):
                steps = [(f"&L{i}", x, ()) for i, x in ((1, h.left), (2, h.right))]
            else:
                world = isinstance(h, H.HForallWorld)
                steps = [("∀L", H.instantiate_world(h.body, t) if world else H.instantiate_term(h.body, t),
                          (("witness", t),)) for t in (self.world_pool() if world else self.term_pool())]
            for rule, body, extra in steps:
                nj = self.nj(body, u)
                prem = HyllSequent(g, canon(rest + (nj,)), c)
                for attempt in self._focused(prem, nj, rest, used):
                    yield lambda attempt=attempt, rule=rule, prem=prem, extra=extra: self._wrap(
                        rule, s, attempt(), info + extra)
        elif isinstance(h, H.HLimp):
            for d1, d2 in splits(rest):
                yield lambda d1=d1, d2=d2: self._all(
                    "⊸L", s, [HyllSequent(g, d1, self.nj(h.left, u)),
                              HyllSequent(g, canon(d2 + (self.nj(h.right, u),)), c)], used, info)
        else:
            yield lambda: self.search(s, used)

    @staticmethod
    def _wrap(rule, s, sub: Outcome, info) -> Outcome:
        if sub.proof is None:
            return sub
        return Outcome(Proof(rule, s, (sub.proof,), info))

    def _choices(self, s: HyllSequent, used: tuple):
        """Thunks for the non-invertible rules, in the order they are tried."""
        g, d, c = s.gamma, s.delta, s.goal
        f, w = c.formula, c.world
        if isinstance(f, H.HAtom) and d == (c,):
            yield lambda: Outcome(Proof("init", s))
        if isinstance(f, H.HOne) and not d:
            yield lambda: Outcome(Proof("1R", s))
        if isinstance(f, H.HBang) and not d:
            yield lambda: self._one("!R", s, HyllSequent(g, (), self.nj(f.body, w)), used)
        if isinstance(f, H.HPlus):
            for i, x in ((1, f.left), (2, f.right)):
                yield lambda x=x, i=i: self._one(f"⊕R{i}", s, HyllSequent(g, d, self.nj(x, w)), used)
        if isinstance(f, (H.HExistsTerm, H.HExistsWorld)):
            world = isinstance(f, H.HExistsWorld)
            for t in (self.world_pool() if world else self.term_pool()):
                body = H.instantiate_world(f.body, t) if world else H.instantiate_term(f.body, t)
                yield lambda body=body, t=t: self._one("∃R", s, HyllSequent(g, d, self.nj(body, w)), used,
                                                       (("witness", t),))
        if isinstance(f, H.HTensor):
            for d1, d2 in splits(d):
                yield lambda d1=d1, d2=d2: self._all(
                    "⊗R", s, [HyllSequent(g, d1, self.nj(f.left, w)), HyllSequent(g, d2, self.nj(f.right, w))],
                    used)
        for j in dict.fromkeys(d):
            h, u = j.formula, j.world
            rest = remove_one(d, j)
            info = (("principal", j),)
            if isinstance(h, H.HWith):
                for i, x in ((1, h.left), (2, h.right)):
                    yield lambda x=x, i=i, rest=rest, u=u, info=info: self._one(
                        f"&L{i}", s, HyllSequent(g, canon(rest + (self.nj(x, u),)), c), used, info)
            elif isinstance(h, (H.HForallTerm, H.HForallWorld)):
                world = isinstance(h, H.HForallWorld)
                for t in (self.world_pool() if world else self.term_pool()):
                    body = H.instantiate_world(h.body, t) if world else H.instantiate_term(h.body, t)
                    yield lambda body=body, t=t, rest=rest, u=u, info=info: self._one(
                        "∀L", s, HyllSequent(g, canon(rest + (self.nj(body, u),)), c), used,
                        info + (("witness", t),))
            elif isinstance(h, H.HLimp):
                for d1, d2 in splits(rest):
                    yield lambda d1=d1, d2=d2, h=h, u=u, info=info: self._all(
                        "⊸L", s, [HyllSequent(g, d1, self.nj(h.left, u)),
                                  HyllSequent(g, canon(d2 + (self.nj(h.right, u),)), c)], used, info)


def prove_hyll(s: HyllSequent, depth: int, *, domain: Domain = NAT, slack: int = 1,
               terms: Sequence[Term] = (), worlds: Sequence[WorldExpr] = ()) -> SearchResult:
    """Search for a proof of ``s`` copying each unbounded judgment at most ``depth`` times per branch.

    Budgets are tried in increasing order; a search that never hit its
    budget is final.
    """
    for d in range(depth + 1):
        res = HyllEngine(d, domain, slack, terms, worlds).prove(s)
        if res.verdict is not Verdict.EXHAUSTED:
            return res
    return res


# -- replay

RULES = frozenset({"init", "copy", "⊗R", "⊗L", "1R", "1L", "⊸R", "⊸L", "⊤R", "0L", "&R", "&L1", "&L2",
                   "⊕R1", "⊕R2", "⊕L", "∀R", "∀L", "∃R", "∃L", "!R", "!L", "@R", "@L", "↓R", "↓L"})


def check_hyll(p: Proof, domain: Domain = NAT, extra: Iterable[str] = ()) -> None:
    """Re-check a HyLL derivation.  ``extra`` may enable ``0'L`` and ``cut``."""
    allowed = RULES | frozenset(extra)
    with H.using_domain(domain):
        for node in p.nodes():
            if node.rule not in allowed:
                raise ReplayError(f"rule {node.rule} is not allowed here", node)
            _check_node(node, domain)


def replay_hyll(p: Proof, domain: Domain = NAT, extra: Iterable[str] = ()) -> bool:
    try:
        check_hyll(p, domain, extra)
    except ReplayError:
        return False
    return True


def _need(cond: bool, msg: str, node: Proof) -> None:
    if not cond:
        raise ReplayError(msg, node)


def _names(s: HyllSequent) -> set:
    out = set()
    for j in _judgments(s):
        for w in list(H.iter_worlds(j.formula)) + [j.world]:
            out |= world_gens(w)
        for t in H.iter_hterms(j.formula):
            out |= {x.name for x in subterms(t) if isinstance(x, Const)}
    return out


def _check_node(p: Proof, domain: Domain) -> None:
    s: HyllSequent = p.conclusion
    prem = [q.conclusion for q in p.premises]
    nj = lambda f, w: H.normalize_judgment(J(f, w), domain)
    g, d, c = s.gamma, s.delta, s.goal
    f, w = c.formula, c.world
    rule = p.rule
    arity = {"init": 0, "1R": 0, "⊤R": 0, "0L": 0, "0'L": 0, "&R": 2, "⊗R": 2, "⊸L": 2, "⊕L": 2, "cut": 2}
    _need(len(prem) == arity.get(rule, 1), f"{rule}: wrong number of premises", p)
    _need(all(q.gamma == g or rule == "!L" for q in prem), f"{rule}: unbounded context changed", p)

    def same(delta, goal):
        return HyllSequent(g, canon(delta), goal)

    if rule == "init":
        _need(isinstance(f, H.HAtom) and d == (c,), "init needs exactly the goal atom", p)
    elif rule == "copy":
        j = p.get("principal")
        _need(j in g and prem[0] == same(d + (j,), c), "bad copy", p)
    elif rule in ("0L", "0'L"):
        j = p.get("principal")
        _need(j in d and isinstance(j.formula, H.HZero), f"{rule} needs 0 on the left", p)
        _need(rule == "0L" or j.world == w, "0'L needs 0 in the goal world", p)
    elif rule == "1R":
        _need(isinstance(f, H.HOne) and not d, "bad 1R", p)
    elif rule == "⊤R":
        _need(isinstance(f, H.HTop), "bad ⊤R", p)
    elif rule == "⊗R":
        _need(isinstance(f, H.HTensor), "⊗R on a non-tensor", p)
        _need(prem[0].goal == nj(f.left, w) and prem[1].goal == nj(f.right, w), "bad ⊗R goals", p)
        _need(canon(prem[0].delta + prem[1].delta) == d, "⊗R premises do not split the context", p)
    elif rule == "⊸R":
        _need(isinstance(f, H.HLimp) and prem[0] == same(d + (nj(f.left, w),), nj(f.right, w)), "bad ⊸R", p)
    elif rule == "&R":
        _need(isinstance(f, H.HWith) and prem == [same(d, nj(f.left, w)), same(d, nj(f.right, w))], "bad &R", p)
    elif rule in ("⊕R1", "⊕R2"):
        _need(isinstance(f, H.HPlus), "⊕R on a non-plus", p)
        _need(prem[0] == same(d, nj(f.left if rule == "⊕R1" else f.right, w)), f"bad {rule}", p)
    elif rule in ("∀R", "∃R", "↓R", "@R", "!R"):
        _check_right(p, s, prem[0], nj, same)
    elif rule == "cut":
        a = p.get("cut")
        _need(a is not None and prem[0].goal == a and prem[1].goal == c, "bad cut goals", p)
        rest = msub(prem[1].delta, (a,))
        _need(rest is not None and canon(prem[0].delta + rest) == d, "cut premises do not split the context", p)
    else:
        _check_left(p, s, prem, nj, same)


def _check_right(p, s, q, nj, same) -> None:
    f, w, d = s.goal.formula, s.goal.world, s.delta
    rule = p.rule
    if rule == "!R":
        _need(isinstance(f, H.HBang) and not d and q == same((), nj(f.body, w)), "bad !R", p)
    elif rule == "@R":
        _need(isinstance(f, H.HAt) and q == same(d, nj(f.body, f.world)), "bad @R", p)
    elif rule == "↓R":
        _need(isinstance(f, H.HDown) and q == same(d, nj(H.instantiate_world(f.body, w), w)), "bad ↓R", p)
    elif rule == "∀R":
        _need(isinstance(f, (H.HForallTerm, H.HForallWorld)), "∀R on a non-universal", p)
        e = p.get("eigen")
        name = e.name if isinstance(e, (Const, Gen)) else None
        _need(name is not None and name not in _names(s), "∀R eigenvariable is not fresh", p)
        body = _open(f, e)
        _need(q == same(d, nj(body, w)), "bad ∀R", p)
    else:
        _need(isinstance(f, (H.HExistsTerm, H.HExistsWorld)), "∃R on a non-existential", p)
        t = p.get("witness")
        _need(t is not None and q == same(d, nj(_open(f, t), w)), "bad ∃R", p)


def _open(f, t):
    world = isinstance(f, (H.HForallWorld, H.HExistsWorld))
    if world != isinstance(t, WorldExpr):
        raise ReplayError("witness of the wrong sort")
    return H.instantiate_world(f.body, t) if world else H.instantiate_term(f.body, t)


def _check_left(p, s, prem, nj, same) -> None:
    rule, d, c = p.rule, s.delta, s.goal
    j = p.get("principal")
    _need(j is not None and j in d, f"{rule}: principal judgment not in the linear context", p)
    h, u = j.formula, j.world
    rest = remove_one(d, j)
    q = prem[0]
    if rule == "⊗L":
        _need(isinstance(h, H.HTensor) and q == same(rest + (nj(h.left, u), nj(h.right, u)), c), "bad ⊗L", p)
    elif rule == "1L":
        _need(isinstance(h, H.HOne) and q == same(rest, c), "bad 1L", p)
    elif rule == "⊕L":
        _need(isinstance(h, H.HPlus) and prem == [same(rest + (nj(h.left, u),), c),
                                                  same(rest + (nj(h.right, u),), c)], "bad ⊕L", p)
    elif rule in ("&L1", "&L2"):
        _need(isinstance(h, H.HWith), "&L on a non-with", p)
        _need(q == same(rest + (nj(h.left if rule == "&L1" else h.right, u),), c), f"bad {rule}", p)
    elif rule == "⊸L":
        _need(isinstance(h, H.HLimp) and prem[0].goal == nj(h.left, u) and prem[1].goal == c, "bad ⊸L goals", p)
        left = msub(prem[1].delta, (nj(h.right, u),))
        _need(left is not None and canon(prem[0].delta + left) == rest, "⊸L premises do not split the context", p)
    elif rule == "∀L":
        _need(isinstance(h, (H.HForallTerm, H.HForallWorld)), "∀L on a non-universal", p)
        t = p.get("witness")
        _need(t is not None and q == same(rest + (nj(_open(h, t), u),), c), "bad ∀L", p)
    elif rule == "∃L":
        _need(isinstance(h, (H.HExistsTerm, H.HExistsWorld)), "∃L on a non-existential", p)
        e = p.get("eigen")
        name = e.name if isinstance(e, (Const, Gen)) else None
        _need(name is not None and name not in _names(s), "∃L eigenvariable is not fresh", p)
        _need(q == same(rest + (nj(_open(h, e), u),), c), "bad ∃L", p)
    elif rule == "!L":
        _need(isinstance(h, H.HBang), "!L on a non-bang", p)
        _need(q == HyllSequent(canon(set(s.gamma) | {nj(h.body, u)}), rest, c), "bad !L", p)
    elif rule == "@L":
        _need(isinstance(h, H.HAt) and q == same(rest + (nj(h.body, h.world),), c), "bad @L", p)
    elif rule == "↓L":
        _need(isinstance(h, H.HDown) and q == same(rest + (nj(H.instantiate_world(h.body, u), u),), c), "bad ↓L", p)
    else:
        raise ReplayError(f"unknown rule {rule}", p)


def check_cut_instance(d1: Proof, d2: Proof, depth: int, *, domain: Domain = NAT,
                       slack: int = 1) -> SearchResult:
    """Search a cut-free proof of the sequent obtained by cutting ``d1`` against ``d2``."""
    s1, s2 = d1.conclusion, d2.conclusion
    if s1.gamma != s2.gamma:
        raise ValueError("cut premises must share the unbounded context")
    rest = msub(s2.delta, (s1.goal,))
    if rest is None:
        raise ValueError("the cut judgment does not occur in the second premise")
    return prove_hyll(HyllSequent(s1.gamma, canon(s1.delta + rest), s2.goal), depth, domain=domain, slack=slack)


def cut(d1: Proof, d2: Proof) -> Proof:
    """The (non-analytic) cut of two derivations, as a single proof node."""
    s1, s2 = d1.conclusion, d2.conclusion
    rest = msub(s2.delta, (s1.goal,))
    if rest is None or s1.gamma != s2.gamma:
        raise ValueError("derivations do not fit together")
    concl = HyllSequent(s1.gamma, canon(s1.delta + rest), s2.goal)
    return Proof("cut", concl, (d1, d2), (("cut", s1.goal),))


def zero_admissibility(delta: Sequence[J], f: H.HyllFormula, w: WorldExpr, v: WorldExpr,
                       gamma: Sequence[J] = (), domain: Domain = NAT) -> Proof:
    """0L at ``Δ, 0@w ⊢ F@v`` rebuilt from the world-local 0'L, @L and one cut.

    The left cut premise keeps Δ; the right one works in the empty linear context.
    """
    nj = lambda g, x: H.normalize_judgment(J(g, x), domain)
    zero_at = nj(H.HAt(H.H_ZERO, v), w)
    left = Proof("0'L", sequent(gamma, list(delta) + [nj(H.H_ZERO, w)], zero_at, domain), (),
                 (("principal", nj(H.H_ZERO, w)),))
    inner = Proof("0'L", sequent(gamma, [nj(H.H_ZERO, v)], nj(f, v), domain), (),
                  (("principal", nj(H.H_ZERO, v)),))
    right = Proof("@L", sequent(gamma, [zero_at], nj(f, v), domain), (inner,), (("principal", zero_at),))
    return cut(left, right)
