"""Hypothesis strategies for well-scoped ASTs of every grammar."""
from functools import lru_cache

from hypothesis import strategies as st

from llworkbench import ctl as C
from llworkbench import formulas as F
from llworkbench import hyll_syntax as H
from llworkbench.terms import App, Const, Var
from llworkbench.worlds import Dot, Nat, WVar

NAMES = ("a", "b", "c")
PREDS = ("p", "q", "r")
LABELS = ("a", "b")


@lru_cache(maxsize=None)
def terms(scope: int, depth: int = 1):
    leaf = st.sampled_from([Const(n) for n in NAMES])
    if scope:
        leaf = leaf | st.integers(0, scope - 1).map(Var)
    if depth == 0:
        return leaf
    return leaf | st.builds(lambda f, xs: App(f, tuple(xs)), st.sampled_from(("f", "g")),
                            st.lists(terms(scope, depth - 1), min_size=1, max_size=2))


@lru_cache(maxsize=None)
def _args(scope):
    return st.lists(terms(scope), max_size=2).map(tuple)


@lru_cache(maxsize=None)
def ll_formulas(depth: int = 3, scope: int = 0, fix: int = 0, locs: tuple = ()):
    leaves = [st.builds(F.Atom, st.sampled_from(PREDS), _args(scope), st.booleans()),
              st.sampled_from([F.ONE, F.BOT, F.ZERO, F.TOP])]
    if fix:
        leaves.append(st.integers(0, fix - 1).map(F.FixVar))
    leaf = st.one_of(leaves)
    if depth == 0:
        return leaf
    sub = lambda **kw: ll_formulas(depth - 1, **{"scope": scope, "fix": fix, "locs": locs, **kw})
    label = st.sampled_from([Const(n) for n in LABELS] + [Var(i) for i in locs])
    bound = lambda: sub(scope=scope + 1, locs=tuple(i + 1 for i in locs))
    return st.one_of(
        leaf,
        *[st.builds(cls, sub(), sub()) for cls in (F.Tensor, F.Par, F.Plus, F.With)],
        st.builds(F.Bang, label, sub()),
        st.builds(F.Quest, label, sub()),
        st.builds(F.ForallTerm, bound(), st.sampled_from(("term", "form", "world"))),
        st.builds(F.ExistsTerm, bound(), st.sampled_from(("term", "form", "world"))),
        st.builds(F.ForallLoc, st.sampled_from([Const(n) for n in LABELS]),
                  sub(scope=scope + 1, locs=(0,) + tuple(i + 1 for i in locs))),
        st.builds(F.ExistsLoc, st.sampled_from([Const(n) for n in LABELS]),
                  sub(scope=scope + 1, locs=(0,) + tuple(i + 1 for i in locs))),
        st.builds(F.Mu, sub(fix=fix + 1)),
        st.builds(F.Nu, sub(fix=fix + 1)),
    )


@lru_cache(maxsize=None)
def mall_formulas(depth: int = 3, fix: int = 0):
    """Closed, exponential-free, quantifier-free formulas (the muMALL fragment)."""
    leaves = [st.builds(F.Atom, st.sampled_from(PREDS), st.just(()), st.booleans()),
              st.sampled_from([F.ONE, F.BOT, F.ZERO, F.TOP])]
    if fix:
        leaves.append(st.integers(0, fix - 1).map(F.FixVar))
    leaf = st.one_of(leaves)
    if depth == 0:
        return leaf
    sub = lambda f=fix: mall_formulas(depth - 1, f)
    return st.one_of(leaf, *[st.builds(cls, sub(), sub()) for cls in (F.Tensor, F.Par, F.Plus, F.With)],
                     st.builds(F.Mu, sub(fix + 1)), st.builds(F.Nu, sub(fix + 1)))


@lru_cache(maxsize=None)
def worlds(wscope: int, depth: int = 1):
    leaf = st.integers(0, 3).map(Nat)
    if wscope:
        leaf = leaf | st.integers(0, wscope - 1).map(WVar)
    if depth == 0:
        return leaf
    return leaf | st.builds(Dot, worlds(wscope, depth - 1), worlds(wscope, depth - 1))


@lru_cache(maxsize=None)
def hyll_formulas(depth: int = 3, scope: int = 0, wscope: int = 0, modal: bool = True):
    leaf = st.one_of(st.builds(H.HAtom, st.sampled_from(PREDS), _args(scope)),
                     st.sampled_from([H.H_ONE, H.H_TOP, H.H_ZERO]))
    if depth == 0:
        return leaf
    sub = lambda s=scope, w=wscope: hyll_formulas(depth - 1, s, w, modal)
    options = [leaf, *[st.builds(cls, sub(), sub()) for cls in (H.HTensor, H.HLimp, H.HWith, H.HPlus)],
               st.builds(H.HBang, sub()),
               st.builds(H.HForallTerm, sub(s=scope + 1)), st.builds(H.HExistsTerm, sub(s=scope + 1))]
    if modal:
        options += [st.builds(H.HAt, sub(), worlds(wscope)),
                    *[st.builds(cls, sub(w=wscope + 1)) for cls in (H.HDown, H.HForallWorld, H.HExistsWorld)]]
    return st.one_of(options)


@lru_cache(maxsize=None)
def ctl_formulas(vars_=("a", "b"), depth: int = 3):
    leaf = st.builds(lambda x, v: C.Prop(((x, v),)), st.sampled_from(vars_), st.booleans())
    if depth == 0:
        return leaf
    sub = lambda: ctl_formulas(vars_, depth - 1)
    return st.one_of(leaf, st.builds(C.And, sub(), sub()), st.builds(C.Or, sub(), sub()),
                     st.builds(C.Temporal, st.sampled_from("AE"), st.sampled_from("XFG"), sub()),
                     st.builds(C.Until, st.sampled_from("AE"), sub(), sub()))


@st.composite
def systems(draw):
    n = draw(st.integers(1, 3))
    vars_ = ("a", "b", "c")[:n]
    states = [C.State(tuple(zip(vars_, bits))) for bits in
              [tuple(draw(st.booleans()) for _ in vars_) for _ in range(4)]]
    k = draw(st.integers(0, 3))
    rules = tuple(C.Rule(f"r{i}", draw(st.sampled_from(states)), draw(st.sampled_from(states)))
                  for i in range(k))
    init = draw(st.one_of(st.none(), st.sampled_from(states)))
    return C.TransitionSystem(vars_, rules, init)
