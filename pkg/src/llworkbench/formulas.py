"""Formulas of classical linear logic, SELLF and muMALL.

One AST covers the three object systems.  Term and location binders share a
single de Bruijn index space (``terms.Var``); fixed-point binders use their
own (``FixVar``).  Subexponential labels are terms, so that location
variables can also occur inside atom arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

from .terms import Const, Meta, Term, Var, free_vars, memo_hash, metas, resolve, subst_var

CLASSICAL = Const("ll")  # the single exponential label of plain linear logic


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple = ()
    negated: bool = False


@dataclass(frozen=True)
class One(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Zero(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Par(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Plus(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class With(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Bang(Formula):
    label: Term
    body: Formula


@dataclass(frozen=True)
class Quest(Formula):
    label: Term
    body: Formula


@dataclass(frozen=True)
class ForallTerm(Formula):
    body: Formula
    sort: str = "term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class ExistsTerm(Formula):
    body: Formula
    sort: str = "term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class ForallLoc(Formula):
    type_label: Term
    body: Formula
    name: str = field(default="l", compare=False)


@dataclass(frozen=True)
class ExistsLoc(Formula):
    type_label: Term
    body: Formula
    name: str = field(default="l", compare=False)


@dataclass(frozen=True)
class Mu(Formula):
    body: Formula
    name: str = field(default="Y", compare=False)


@dataclass(frozen=True)
class Nu(Formula):
    body: Formula
    name: str = field(default="Y", compare=False)


@dataclass(frozen=True)
class FixVar(Formula):
    index: int
    name: str = field(default="Y", compare=False)


ONE, BOT, ZERO, TOP = One(), Bot(), Zero(), Top()


for _cls in Formula.__subclasses__():
    memo_hash(_cls)


_BINARY_DUAL = {Tensor: Par, Par: Tensor, Plus: With, With: Plus}
_UNIT_DUAL = {One: BOT, Bot: ONE, Zero: TOP, Top: ZERO}


def negate(f: Formula) -> Formula:
    """De Morgan dual."""
    if isinstance(f, Atom):
        return Atom(f.pred, f.args, not f.negated)
    t = type(f)
    if t in _UNIT_DUAL:
        return _UNIT_DUAL[t]
    if t in _BINARY_DUAL:
        return _BINARY_DUAL[t](negate(f.left), negate(f.right))
    if isinstance(f, Bang):
        return Quest(f.label, negate(f.body))
    if isinstance(f, Quest):
        return Bang(f.label, negate(f.body))
    if isinstance(f, ForallTerm):
        return ExistsTerm(negate(f.body), f.sort, f.name)
    if isinstance(f, ExistsTerm):
        return ForallTerm(negate(f.body), f.sort, f.name)
    if isinstance(f, ForallLoc):
        return ExistsLoc(f.type_label, negate(f.body), f.name)
    if isinstance(f, ExistsLoc):
        return ForallLoc(f.type_label, negate(f.body), f.name)
    if isinstance(f, Mu):
        return Nu(negate(f.body), f.name)
    if isinstance(f, Nu):
        return Mu(negate(f.body), f.name)
    if isinstance(f, FixVar):
        return f
    raise TypeError(f)


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


_POSITIVE = (Tensor, One, Plus, Zero, ExistsTerm, ExistsLoc, Bang, Mu)


def polarity(f: Formula, bias: str = "neg") -> Polarity:
    """Atoms are negative under the default bias; ``bias='pos'`` swaps literals."""
    if isinstance(f, Atom):
        positive = f.negated if bias == "neg" else not f.negated
        return Polarity.POSITIVE if positive else Polarity.NEGATIVE
    if isinstance(f, _POSITIVE):
        return Polarity.POSITIVE
    return Polarity.NEGATIVE


def is_positive(f: Formula, bias: str = "neg") -> bool:
    return polarity(f, bias) is Polarity.POSITIVE


class Shape(Enum):
    MONOPOLE = "monopole"
    BIPOLE = "bipole"
    NEITHER = "neither"


def _quest_chain_atomic(f: Formula, sell: bool) -> bool:
    if isinstance(f, Atom):
        return not f.negated
    return sell and isinstance(f, Quest) and _quest_chain_atomic(f.body, sell)


def is_monopole(f: Formula, sell: bool = False) -> bool:
    if isinstance(f, Atom):
        return not f.negated
    if isinstance(f, (Bot, Top)):
        return True
    if isinstance(f, (Par, With)):
        return is_monopole(f.left, sell) and is_monopole(f.right, sell)
    if isinstance(f, (ForallTerm, ForallLoc)):
        return is_monopole(f.body, sell)
    if isinstance(f, Quest):
        return _quest_chain_atomic(f.body, sell)
    return False


def is_bipole(f: Formula, sell: bool = False) -> bool:
    if isinstance(f, Atom) and f.negated:
        return True
    if is_monopole(f, sell):
        return True
    if isinstance(f, (One, Zero)):
        return True
    if isinstance(f, (Tensor, Plus)):
        return is_bipole(f.left, sell) and is_bipole(f.right, sell)
    if isinstance(f, (ExistsTerm, ExistsLoc)):
        return is_bipole(f.body, sell)
    if isinstance(f, Bang):
        if is_monopole(f.body, sell):
            return True
        # SELL clauses guard a negated meta-atom with !^w; its proof is forced
        return sell and isinstance(f.body, Atom) and f.body.negated
    return False


def classify(f: Formula, sell: bool = False) -> Shape:
    """Monopole, bipole or neither.  ``sell=True`` admits the labelled shapes
    ``?^a ?^b A`` and ``!^w A^bot`` used by subexponential clause theories."""
    if is_monopole(f, sell):
        return Shape.MONOPOLE
    if is_positive(f) and is_bipole(f, sell):
        return Shape.BIPOLE
    return Shape.NEITHER


# -- traversal helpers

def map_terms(f: Formula, fn: Callable[[Term, int], Term], depth: int = 0) -> Formula:
    """Rebuild ``f`` applying ``fn(term, binder_depth)`` to every atom argument and label."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(fn(a, depth) for a in f.args), f.negated)
    if isinstance(f, (One, Bot, Zero, Top, FixVar)):
        return f
    if isinstance(f, (Tensor, Par, Plus, With)):
        return type(f)(map_terms(f.left, fn, depth), map_terms(f.right, fn, depth))
    if isinstance(f, (Bang, Quest)):
        return type(f)(fn(f.label, depth), map_terms(f.body, fn, depth))
    if isinstance(f, (ForallTerm, ExistsTerm)):
        return type(f)(map_terms(f.body, fn, depth + 1), f.sort, f.name)
    if isinstance(f, (ForallLoc, ExistsLoc)):
        return type(f)(fn(f.type_label, depth), map_terms(f.body, fn, depth + 1), f.name)
    if isinstance(f, (Mu, Nu)):
        return type(f)(map_terms(f.body, fn, depth), f.name)
    raise TypeError(f)


def iter_terms(f: Formula) -> Iterator[Term]:
    if isinstance(f, Atom):
        yield from f.args
    elif isinstance(f, (Tensor, Par, Plus, With)):
        yield from iter_terms(f.left)
        yield from iter_terms(f.right)
    elif isinstance(f, (Bang, Quest)):
        yield f.label
        yield from iter_terms(f.body)
    elif isinstance(f, (ForallLoc, ExistsLoc)):
        yield f.type_label
        yield from iter_terms(f.body)
    elif isinstance(f, (ForallTerm, ExistsTerm, Mu, Nu)):
        yield from iter_terms(f.body)


def instantiate(f: Formula, value: Term) -> Formula:
    """Open the outermost term/location binder body with a closed ``value``.

    Meta-level applications that become ground are evaluated on the spot.
    """
    return map_terms(f, lambda t, d: resolve(subst_var(t, d, value), {}))


def evaluate(f: Formula) -> Formula:
    return map_terms(f, lambda t, d: resolve(t, {}))


def resolve_formula(f: Formula, b) -> Formula:
    if not b:
        return f
    return map_terms(f, lambda t, d: resolve(t, b))


def formula_metas(f: Formula) -> list[Meta]:
    seen: dict[int, Meta] = {}
    for t in iter_terms(f):
        for m in metas(t):
            seen.setdefault(m.ident, m)
    return list(seen.values())


def is_closed_terms(f: Formula) -> bool:
    def walk(g: Formula, depth: int) -> bool:
        if isinstance(g, Atom):
            return all(not free_vars(a, depth) for a in g.args)
        if isinstance(g, (Tensor, Par, Plus, With)):
            return walk(g.left, depth) and walk(g.right, depth)
        if isinstance(g, (Bang, Quest)):
            return not free_vars(g.label, depth) and walk(g.body, depth)
        if isinstance(g, (ForallTerm, ExistsTerm)):
            return walk(g.body, depth + 1)
        if isinstance(g, (ForallLoc, ExistsLoc)):
            return not free_vars(g.type_label, depth) and walk(g.body, depth + 1)
        if isinstance(g, (Mu, Nu)):
            return walk(g.body, depth)
        return True

    return walk(f, 0)


def subst_fix(f: Formula, value: Formula, depth: int = 0) -> Formula:
    """Replace ``FixVar(depth)`` by the closed ``value`` (indices above drop by one)."""
    if isinstance(f, FixVar):
        if f.index == depth:
            return value
        return FixVar(f.index - 1, f.name) if f.index > depth else f
    if isinstance(f, (Atom, One, Bot, Zero, Top)):
        return f
    if isinstance(f, (Tensor, Par, Plus, With)):
        return type(f)(subst_fix(f.left, value, depth), subst_fix(f.right, value, depth))
    if isinstance(f, (Bang, Quest)):
        return type(f)(f.label, subst_fix(f.body, value, depth))
    if isinstance(f, (ForallTerm, ExistsTerm)):
        return type(f)(subst_fix(f.body, value, depth), f.sort, f.name)
    if isinstance(f, (ForallLoc, ExistsLoc)):
        return type(f)(f.type_label, subst_fix(f.body, value, depth), f.name)
    if isinstance(f, (Mu, Nu)):
        return type(f)(subst_fix(f.body, value, depth + 1), f.name)
    raise TypeError(f)


def free_fix(f: Formula, depth: int = 0) -> set:
    if isinstance(f, FixVar):
        return {f.index - depth} if f.index >= depth else set()
    if isinstance(f, (Tensor, Par, Plus, With)):
        return free_fix(f.left, depth) | free_fix(f.right, depth)
    if isinstance(f, (Bang, Quest, ForallTerm, ExistsTerm, ForallLoc, ExistsLoc)):
        return free_fix(f.body, depth)
    if isinstance(f, (Mu, Nu)):
        return free_fix(f.body, depth + 1)
    return set()


def has_exponentials(f: Formula) -> bool:
    if isinstance(f, (Bang, Quest)):
        return True
    if isinstance(f, (Tensor, Par, Plus, With)):
        return has_exponentials(f.left) or has_exponentials(f.right)
    if isinstance(f, (ForallTerm, ExistsTerm, ForallLoc, ExistsLoc, Mu, Nu)):
        return has_exponentials(f.body)
    return False


def unfold_mu(f: Formula) -> Formula:
    if not isinstance(f, Mu):
        raise ValueError("unfold_mu expects a mu-formula")
    return subst_fix(f.body, f)


def size(f: Formula) -> int:
    if isinstance(f, (Tensor, Par, Plus, With)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, (Bang, Quest, ForallTerm, ExistsTerm, ForallLoc, ExistsLoc, Mu, Nu)):
        return 1 + size(f.body)
    return 1


def big(op, items, unit: Formula) -> Formula:
    """Right-nested n-ary connective; the unit for an empty list."""
    items = list(items)
    if not items:
        return unit
    out = items[-1]
    for it in reversed(items[:-1]):
        out = op(it, out)
    return out


def lit(pred: str, *args: Term, neg: bool = False) -> Atom:
    return Atom(pred, tuple(args), neg)


def is_atom(f: Formula) -> bool:
    """Non-negated atom (the shape excluded from decide)."""
    return isinstance(f, Atom) and not f.negated
