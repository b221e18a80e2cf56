"""HyLL formulas, judgments, and their reification as first-order terms.

Term variables and world variables live in separate de Bruijn spaces: term
binders are ``HForallTerm``/``HExistsTerm``; world binders are ``HDown``,
``HForallWorld`` and ``HExistsWorld``.
"""
from __future__ import annotations

import contextlib
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterator

from .terms import App, Const, Term, Var, memo_hash, subst_var
from .worlds import NAT, Domain, Dot, WorldExpr, normalize, parse_key, subst_world, world_key


class HyllFormula:
    __slots__ = ()


@dataclass(frozen=True)
class HAtom(HyllFormula):
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class HTensor(HyllFormula):
    left: HyllFormula
    right: HyllFormula


@dataclass(frozen=True)
class HLimp(HyllFormula):
    left: HyllFormula
    right: HyllFormula


@dataclass(frozen=True)
class HWith(HyllFormula):
    left: HyllFormula
    right: HyllFormula


@dataclass(frozen=True)
class HPlus(HyllFormula):
    left: HyllFormula
    right: HyllFormula


@dataclass(frozen=True)
class HOne(HyllFormula):
    pass


@dataclass(frozen=True)
class HTop(HyllFormula):
    pass


@dataclass(frozen=True)
class HZero(HyllFormula):
    pass


@dataclass(frozen=True)
class HBang(HyllFormula):
    body: HyllFormula


@dataclass(frozen=True)
class HForallTerm(HyllFormula):
    body: HyllFormula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class HExistsTerm(HyllFormula):
    body: HyllFormula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class HAt(HyllFormula):
    body: HyllFormula
    world: WorldExpr


@dataclass(frozen=True)
class HDown(HyllFormula):
    body: HyllFormula
    name: str = field(default="u", compare=False)


@dataclass(frozen=True)
class HForallWorld(HyllFormula):
    body: HyllFormula
    name: str = field(default="w", compare=False)


@dataclass(frozen=True)
class HExistsWorld(HyllFormula):
    body: HyllFormula
    name: str = field(default="w", compare=False)


@dataclass(frozen=True)
class HyllJudgment:
    formula: HyllFormula
    world: WorldExpr


for _cls in (*HyllFormula.__subclasses__(), HyllJudgment):
    memo_hash(_cls)

H_ONE, H_TOP, H_ZERO = HOne(), HTop(), HZero()
_BIN = (HTensor, HLimp, HWith, HPlus)
_TERM_BINDERS = (HForallTerm, HExistsTerm)
_WORLD_BINDERS = (HDown, HForallWorld, HExistsWorld)

_domain: ContextVar[Domain] = ContextVar("world_domain", default=NAT)


def current_domain() -> Domain:
    return _domain.get()


@contextlib.contextmanager
def using_domain(domain: Domain):
    """Fix the constraint domain used when reified bodies are instantiated."""
    token = _domain.set(domain)
    try:
        yield
    finally:
        _domain.reset(token)


# -- substitution and normalization

def map_worlds(f: HyllFormula, fn, depth: int = 0) -> HyllFormula:
    """Apply ``fn(world, world_binder_depth)`` to every world expression."""
    if isinstance(f, HAt):
        return HAt(map_worlds(f.body, fn, depth), fn(f.world, depth))
    if isinstance(f, _BIN):
        return type(f)(map_worlds(f.left, fn, depth), map_worlds(f.right, fn, depth))
    if isinstance(f, HBang):
        return HBang(map_worlds(f.body, fn, depth))
    if isinstance(f, _TERM_BINDERS):
        return type(f)(map_worlds(f.body, fn, depth), f.name)
    if isinstance(f, _WORLD_BINDERS):
        return type(f)(map_worlds(f.body, fn, depth + 1), f.name)
    return f


def map_hterms(f: HyllFormula, fn, depth: int = 0) -> HyllFormula:
    """Apply ``fn(term, term_binder_depth)`` to every atom argument."""
    if isinstance(f, HAtom):
        return HAtom(f.pred, tuple(fn(a, depth) for a in f.args))
    if isinstance(f, HAt):
        return HAt(map_hterms(f.body, fn, depth), f.world)
    if isinstance(f, _BIN):
        return type(f)(map_hterms(f.left, fn, depth), map_hterms(f.right, fn, depth))
    if isinstance(f, HBang):
        return HBang(map_hterms(f.body, fn, depth))
    if isinstance(f, _TERM_BINDERS):
        return type(f)(map_hterms(f.body, fn, depth + 1), f.name)
    if isinstance(f, _WORLD_BINDERS):
        return type(f)(map_hterms(f.body, fn, depth), f.name)
    return f


def instantiate_world(body: HyllFormula, w: WorldExpr, domain: Domain | None = None) -> HyllFormula:
    domain = domain or current_domain()
    return normalize_formula(map_worlds(body, lambda x, d: subst_world(x, d, w)), domain)


def instantiate_term(body: HyllFormula, t: Term) -> HyllFormula:
    return map_hterms(body, lambda a, d: subst_var(a, d, t))


def normalize_formula(f: HyllFormula, domain: Domain = NAT) -> HyllFormula:
    return map_worlds(f, lambda w, d: normalize(w, domain))


def normalize_judgment(j: HyllJudgment, domain: Domain = NAT) -> HyllJudgment:
    return HyllJudgment(normalize_formula(j.formula, domain), normalize(j.world, domain))


def iter_worlds(f: HyllFormula) -> Iterator[WorldExpr]:
    if isinstance(f, HAt):
        yield f.world
        yield from iter_worlds(f.body)
    elif isinstance(f, _BIN):
        yield from iter_worlds(f.left)
        yield from iter_worlds(f.right)
    elif isinstance(f, (HBang,) + _TERM_BINDERS + _WORLD_BINDERS):
        yield from iter_worlds(f.body)


def iter_hterms(f: HyllFormula) -> Iterator[Term]:
    if isinstance(f, HAtom):
        yield from f.args
    elif isinstance(f, _BIN):
        yield from iter_hterms(f.left)
        yield from iter_hterms(f.right)
    elif isinstance(f, (HAt, HBang) + _TERM_BINDERS + _WORLD_BINDERS):
        yield from iter_hterms(f.body)


def hsize(f: HyllFormula) -> int:
    if isinstance(f, _BIN):
        return 1 + hsize(f.left) + hsize(f.right)
    if isinstance(f, (HAt, HBang) + _TERM_BINDERS + _WORLD_BINDERS):
        return 1 + hsize(f.body)
    return 1


def is_hybrid_free(f: HyllFormula) -> bool:
    if isinstance(f, (HAt,) + _WORLD_BINDERS):
        return False
    if isinstance(f, _BIN):
        return is_hybrid_free(f.left) and is_hybrid_free(f.right)
    if isinstance(f, (HBang,) + _TERM_BINDERS):
        return is_hybrid_free(f.body)
    return True


# -- reification

RESERVED = frozenset({"tensor", "one", "limp", "with", "top", "plus", "zero", "bang",
                      "allx", "exx", "at", "down", "allw", "exw", "jdg", "#tv"})
_HEADS = {HTensor: "tensor", HLimp: "limp", HWith: "with", HPlus: "plus"}
_UNITS = {HOne: "one", HTop: "top", HZero: "zero"}
_BINDER_HEADS = {HForallTerm: "allx", HExistsTerm: "exx", HDown: "down",
                 HForallWorld: "allw", HExistsWorld: "exw"}
_FROM_HEAD = {v: k for k, v in {**_HEADS, **_BINDER_HEADS}.items()}
_FROM_UNIT = {v: k() for k, v in _UNITS.items()}


class ReifyError(ValueError):
    pass


def _reify_term(t: Term) -> Term:
    if isinstance(t, Var):
        return App("#tv", (Const(str(t.index)),))
    if isinstance(t, App):
        if t.fun in RESERVED:
            raise ReifyError(f"function symbol {t.fun!r} is reserved")
        return App(t.fun, tuple(_reify_term(a) for a in t.args))
    if isinstance(t, Const):
        return t
    raise ReifyError(f"cannot reify term {t!r}")


def _unreify_term(t: Term) -> Term:
    if isinstance(t, App):
        if t.fun == "#tv":
            return Var(int(t.args[0].name))
        return App(t.fun, tuple(_unreify_term(a) for a in t.args))
    return t


def reify_formula(f: HyllFormula, domain: Domain | None = None) -> Term:
    domain = domain or current_domain()
    if isinstance(f, HAtom):
        if f.pred in RESERVED:
            raise ReifyError(f"predicate {f.pred!r} is reserved")
        if not f.args:
            return Const(f.pred)
        return App(f.pred, tuple(_reify_term(a) for a in f.args))
    t = type(f)
    if t in _UNITS:
        return Const(_UNITS[t])
    if t in _HEADS:
        return App(_HEADS[t], (reify_formula(f.left, domain), reify_formula(f.right, domain)))
    if isinstance(f, HBang):
        return App("bang", (reify_formula(f.body, domain),))
    if isinstance(f, HAt):
        return App("at", (reify_formula(f.body, domain), Const(world_key(f.world, domain))))
    if t in _BINDER_HEADS:
        return App(_BINDER_HEADS[t], (reify_formula(f.body, domain),))
    raise TypeError(f)


def unreify_formula(t: Term) -> HyllFormula:
    if isinstance(t, Const):
        if t.name in _FROM_UNIT:
            return _FROM_UNIT[t.name]
        if t.name in RESERVED:
            raise ReifyError(f"not a reified formula: {t}")
        return HAtom(t.name)
    if not isinstance(t, App):
        raise ReifyError(f"not a reified formula: {t}")
    if t.fun == "at":
        return HAt(unreify_formula(t.args[0]), parse_key(t.args[1].name))
    if t.fun == "bang":
        return HBang(unreify_formula(t.args[0]))
    cls = _FROM_HEAD.get(t.fun)
    if cls in _BINDER_HEADS:
        return cls(unreify_formula(t.args[0]))
    if cls is not None:
        return cls(unreify_formula(t.args[0]), unreify_formula(t.args[1]))
    if t.fun in RESERVED:
        raise ReifyError(f"not a reified formula: {t}")
    return HAtom(t.fun, tuple(_unreify_term(a) for a in t.args))


def reify(j: HyllJudgment, domain: Domain | None = None) -> Term:
    domain = domain or current_domain()
    return App("jdg", (reify_formula(normalize_formula(j.formula, domain), domain),
                       Const(world_key(j.world, domain))))


def unreify(t: Term) -> HyllJudgment:
    if not (isinstance(t, App) and t.fun == "jdg" and len(t.args) == 2):
        raise ReifyError(f"not a reified judgment: {t}")
    return HyllJudgment(unreify_formula(t.args[0]), parse_key(t.args[1].name))


def world_of_term(t: Term) -> WorldExpr:
    if not isinstance(t, Const):
        raise ReifyError(f"not a world: {t}")
    return parse_key(t.name)


def world_term(w: WorldExpr, domain: Domain | None = None) -> Const:
    return Const(world_key(w, domain or current_domain()))


def apply_reified(fn: Term, arg: Term, sort: str) -> Term:
    """Evaluate the meta-level application ``(fn arg)`` of a reified binder body."""
    domain = current_domain()
    body = unreify_formula(fn)
    if sort == "world":
        out = instantiate_world(body, world_of_term(arg), domain)
    elif sort == "term":
        out = instantiate_term(body, _unreify_term(arg))
    else:
        raise ValueError(f"unknown binder sort {sort!r}")
    return reify_formula(out, domain)


def dot(*ws: WorldExpr) -> WorldExpr:
    out = ws[0]
    for w in ws[1:]:
        out = Dot(out, w)
    return out

