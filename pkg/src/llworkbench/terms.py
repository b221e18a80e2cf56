"""First-order terms shared by every engine.

Bound variables are de Bruijn indices (``Var``).  ``Meta`` is a logic
variable created during proof search for an existential witness and bound
by matching; ``Inst`` is a pending meta-level application of a reified
binder body to an argument (the ``(A w)`` of the framework clauses).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    fun: str
    args: tuple


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Meta(Term):
    ident: int
    sort: str = "term"
    # upper bound for location metas (the ``a`` of ``existsloc l:a``)
    bound: Optional[Term] = None


@dataclass(frozen=True)
class Inst(Term):
    fn: Term
    arg: Term
    sort: str  # "world" or "term": the sort of the object binder being opened


Bindings = Mapping[int, Term]


def memo_hash(cls):
    # deep frozen trees are hashed constantly as multiset and memo keys
    raw = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = raw(self)
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    return cls


for _cls in Term.__subclasses__():
    memo_hash(_cls)


class UnsupportedMatch(Exception):
    """Raised when matching meets an ``Inst`` whose function is still unbound."""


def is_ground(t: Term) -> bool:
    if isinstance(t, Const):
        return True
    if isinstance(t, App):
        return all(is_ground(a) for a in t.args)
    return False


def metas(t: Term) -> Iterator[Meta]:
    if isinstance(t, Meta):
        yield t
    elif isinstance(t, App):
        for a in t.args:
            yield from metas(a)
    elif isinstance(t, Inst):
        yield from metas(t.fn)
        yield from metas(t.arg)


def resolve(t: Term, b: Bindings) -> Term:
    """Apply bindings and evaluate every ``Inst`` whose parts became ground."""
    if isinstance(t, Const) or isinstance(t, Var):
        return t
    if isinstance(t, Meta):
        v = b.get(t.ident)
        return t if v is None else resolve(v, b)
    if isinstance(t, App):
        args = tuple(resolve(a, b) for a in t.args)
        return t if args == t.args else App(t.fun, args)
    if isinstance(t, Inst):
        fn, arg = resolve(t.fn, b), resolve(t.arg, b)
        if is_ground(fn) and is_ground(arg):
            from .hyll_syntax import apply_reified

            return apply_reified(fn, arg, t.sort)
        return Inst(fn, arg, t.sort)
    raise TypeError(t)


def match(pat: Term, ground: Term, b: Bindings) -> Optional[dict]:
    """One-way matching of ``pat`` against a ground term; returns new bindings."""
    pat = resolve(pat, b)
    if isinstance(pat, Meta):
        nb = dict(b)
        nb[pat.ident] = ground
        return nb
    if isinstance(pat, Const):
        return dict(b) if pat == ground else None
    if isinstance(pat, App):
        if not isinstance(ground, App) or ground.fun != pat.fun or len(ground.args) != len(pat.args):
            return None
        cur: Optional[dict] = dict(b)
        for p, g in zip(pat.args, ground.args):
            cur = match(p, g, cur)
            if cur is None:
                return None
        return cur
    if isinstance(pat, Inst):
        raise UnsupportedMatch(f"cannot match against unevaluated {pat}")
    return None


def subst_var(t: Term, depth: int, value: Term) -> Term:
    """Replace ``Var(depth)`` by the closed ``value``; indices above ``depth`` drop by one."""
    if isinstance(t, Var):
        if t.index == depth:
            return value
        return Var(t.index - 1) if t.index > depth else t
    if isinstance(t, App):
        return App(t.fun, tuple(subst_var(a, depth, value) for a in t.args))
    if isinstance(t, Inst):
        return Inst(subst_var(t.fn, depth, value), subst_var(t.arg, depth, value), t.sort)
    return t


def free_vars(t: Term, depth: int = 0) -> set:
    if isinstance(t, Var):
        return {t.index - depth} if t.index >= depth else set()
    if isinstance(t, App):
        return set().union(*(free_vars(a, depth) for a in t.args)) if t.args else set()
    if isinstance(t, Inst):
        return free_vars(t.fn, depth) | free_vars(t.arg, depth)
    return set()


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def consts(t: Term) -> Iterator[str]:
    if isinstance(t, Const):
        yield t.name
    elif isinstance(t, App):
        for a in t.args:
            yield from consts(a)
    elif isinstance(t, Inst):
        yield from consts(t.fn)
        yield from consts(t.arg)
