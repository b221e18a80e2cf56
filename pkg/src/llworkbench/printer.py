"""Pretty-printing in the workbench text grammar (inverse of ``parser``)."""
from __future__ import annotations

import re

from . import formulas as F
from . import hyll_syntax as H
from .terms import App, Const, Inst, Meta, Term, Var, consts
from .worlds import Dot, Gen, Iota, Nat, WorldExpr, WVar

KEYWORDS = frozenset({
    "forall", "exists", "forallloc", "foralloc", "existsloc", "mu", "nu", "down", "at",
    "top", "bot", "iota", "true", "world", "term", "form", "inst_world", "inst_term",
    "EX", "AX", "EF", "AF", "EG", "AG", "E", "A", "U",
})
_IDENT = re.compile(r"^[A-Za-z_%][A-Za-z0-9_%]*$|^[0-9]+$")

# binary precedence, lowest first; all binary operators associate to the right
PREC = {F.Par: 2, F.Plus: 3, F.With: 4, F.Tensor: 5,
        H.HLimp: 1, H.HPlus: 3, H.HWith: 4, H.HTensor: 5}
SYMBOL = {F.Par: "|", F.Plus: "(+)", F.With: "&", F.Tensor: "*",
          H.HLimp: "-o", H.HPlus: "(+)", H.HWith: "&", H.HTensor: "*"}
BINDER_PREC = 0
AT_PREC = 6
PREFIX_PREC = 7


def name_token(name: str) -> str:
    if _IDENT.match(name) and name not in KEYWORDS and not name.isdigit():
        return name
    if name.isdigit():
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def pred_token(name: str) -> str:
    """Predicate names that look like numerals must be quoted in formula position."""
    return "'" + name + "'" if name.isdigit() else name_token(name)


def _fresh(hint: str, taken: set) -> str:
    base = hint if _IDENT.match(hint) and hint not in KEYWORDS and not hint[0].isdigit() else "x"
    base = base.rstrip("0123456789") or "x"
    cand, k = base, 0
    while cand in taken:
        k += 1
        cand = f"{base}{k}"
    return cand


def term_str(t: Term, scope: list | tuple = ()) -> str:
    if isinstance(t, Const):
        return name_token(t.name)
    if isinstance(t, Var):
        if t.index < len(scope):
            return scope[-1 - t.index]
        return f"'#free{t.index}'"
    if isinstance(t, App):
        inner = ", ".join(term_str(a, scope) for a in t.args)
        return f"{name_token(t.fun)}({inner})"
    if isinstance(t, Inst):
        return f"inst_{t.sort}({term_str(t.fn, scope)}, {term_str(t.arg, scope)})"
    if isinstance(t, Meta):
        return f"'?{t.sort}{t.ident}'"
    raise TypeError(t)


# -- LL / SELL / muMALL formulas

def _formula_names(f: F.Formula) -> set:
    names = set()
    for t in F.iter_terms(f):
        names.update(consts(t))
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, F.Atom):
            names.add(g.pred)
        for attr in ("left", "right", "body"):
            sub = getattr(g, attr, None)
            if isinstance(sub, F.Formula):
                stack.append(sub)
    return names


def formula_str(f: F.Formula) -> str:
    return _Fp(_formula_names(f)).show(f, [], [], 0)


class _Fp:
    def __init__(self, taken: set):
        self.taken = taken

    def show(self, f, scope, fixes, ctx) -> str:
        out, prec = self.raw(f, scope, fixes)
        return f"({out})" if prec < ctx else out

    def raw(self, f, scope, fixes):
        if isinstance(f, F.Atom):
            s = pred_token(f.pred)
            if f.args:
                s += "(" + ", ".join(term_str(a, scope) for a in f.args) + ")"
            return ("~" + s if f.negated else s), 9
        for cls, txt in ((F.One, "1"), (F.Bot, "bot"), (F.Zero, "0"), (F.Top, "top")):
            if isinstance(f, cls):
                return txt, 9
        if isinstance(f, F.FixVar):
            return (fixes[-1 - f.index] if f.index < len(fixes) else f"'#fix{f.index}'"), 9
        t = type(f)
        if t in PREC:
            p = PREC[t]
            left = self.show(f.left, scope, fixes, p + 1)
            right = self.show(f.right, scope, fixes, p)
            return f"{left} {SYMBOL[t]} {right}", p
        if isinstance(f, (F.Bang, F.Quest)):
            op = "!" if isinstance(f, F.Bang) else "?"
            if f.label != F.CLASSICAL:
                op += "^" + term_str(f.label, scope)
                # a label token followed directly by the body needs a separator
                op += " "
            return op + self.show(f.body, scope, fixes, PREFIX_PREC), PREFIX_PREC
        if isinstance(f, (F.ForallTerm, F.ExistsTerm)):
            kw = "forall" if isinstance(f, F.ForallTerm) else "exists"
            n = _fresh(f.name, self.taken | set(scope))
            sort = "" if f.sort == "term" else f":{f.sort}"
            return f"{kw} {n}{sort}. {self.show(f.body, scope + [n], fixes, BINDER_PREC)}", BINDER_PREC
        if isinstance(f, (F.ForallLoc, F.ExistsLoc)):
            kw = "forallloc" if isinstance(f, F.ForallLoc) else "existsloc"
            n = _fresh(f.name, self.taken | set(scope))
            ty = term_str(f.type_label, scope)
            return f"{kw} {n}:{ty}. {self.show(f.body, scope + [n], fixes, BINDER_PREC)}", BINDER_PREC
        if isinstance(f, (F.Mu, F.Nu)):
            kw = "mu" if isinstance(f, F.Mu) else "nu"
            n = _fresh(f.name if f.name[:1].isupper() else "Y", self.taken | set(fixes) | set(scope))
            return f"{kw} {n}. {self.show(f.body, scope, fixes + [n], BINDER_PREC)}", BINDER_PREC
        raise TypeError(f)


# -- worlds and HyLL

def world_str(w: WorldExpr, scope: list | tuple = ()) -> str:
    if isinstance(w, Iota):
        return "iota"
    if isinstance(w, Nat):
        return str(w.n)
    if isinstance(w, Gen):
        return name_token(w.name)
    if isinstance(w, WVar):
        return scope[-1 - w.index] if w.index < len(scope) else f"'#w{w.index}'"
    if isinstance(w, Dot):
        left = world_str(w.left, scope)
        if isinstance(w.left, Dot):
            left = f"({left})"
        return f"{left}.{world_str(w.right, scope)}"
    raise TypeError(w)


def _hyll_names(f: H.HyllFormula) -> set:
    names = set()
    for t in H.iter_hterms(f):
        names.update(consts(t))
    for w in H.iter_worlds(f):
        stack = [w]
        while stack:
            x = stack.pop()
            if isinstance(x, Gen):
                names.add(x.name)
            elif isinstance(x, Dot):
                stack += [x.left, x.right]
    return names


def hyll_str(f: H.HyllFormula) -> str:
    return _Hp(_hyll_names(f)).show(f, [], [], 0)


def judgment_str(j: H.HyllJudgment) -> str:
    return f"{hyll_str(j.formula)} @ {world_str(j.world)}"


class _Hp:
    def __init__(self, taken: set):
        self.taken = taken

    def show(self, f, ts, ws, ctx) -> str:
        out, prec = self.raw(f, ts, ws)
        return f"({out})" if prec < ctx else out

    def raw(self, f, ts, ws):
        if isinstance(f, H.HAtom):
            s = pred_token(f.pred)
            if f.args:
                s += "(" + ", ".join(term_str(a, ts) for a in f.args) + ")"
            return s, 9
        for cls, txt in ((H.HOne, "1"), (H.HZero, "0"), (H.HTop, "top")):
            if isinstance(f, cls):
                return txt, 9
        t = type(f)
        if t in PREC:
            p = PREC[t]
            return f"{self.show(f.left, ts, ws, p + 1)} {SYMBOL[t]} {self.show(f.right, ts, ws, p)}", p
        if isinstance(f, H.HBang):
            return "!" + self.show(f.body, ts, ws, PREFIX_PREC), PREFIX_PREC
        if isinstance(f, H.HAt):
            return f"{self.show(f.body, ts, ws, AT_PREC)} at {self._world(f.world, ws)}", AT_PREC
        taken = self.taken | set(ts) | set(ws)
        if isinstance(f, (H.HForallTerm, H.HExistsTerm)):
            kw = "forall" if isinstance(f, H.HForallTerm) else "exists"
            n = _fresh(f.name, taken)
            return f"{kw} {n}. {self.show(f.body, ts + [n], ws, BINDER_PREC)}", BINDER_PREC
        if isinstance(f, H.HDown):
            n = _fresh(f.name, taken)
            return f"down {n}. {self.show(f.body, ts, ws + [n], BINDER_PREC)}", BINDER_PREC
        if isinstance(f, (H.HForallWorld, H.HExistsWorld)):
            kw = "forall" if isinstance(f, H.HForallWorld) else "exists"
            n = _fresh(f.name, taken)
            return f"{kw} {n}:world. {self.show(f.body, ts, ws + [n], BINDER_PREC)}", BINDER_PREC
        raise TypeError(f)

    @staticmethod
    def _world(w, ws) -> str:
        return world_str(w, ws)
