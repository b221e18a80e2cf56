"""Recursive-descent parser for the workbench text grammar."""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import formulas as F
from . import hyll_syntax as H
from .terms import App, Const, Inst, Term, Var
from .worlds import IOTA, Dot, Gen, Nat, WorldExpr, WVar


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


@dataclass(frozen=True)
class Tok:
    kind: str  # ident, num, quoted, op, eof
    text: str
    pos: int


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<quoted>'(?:\\.|[^'\\])*')
  | (?P<op>\(\+\)|-o|\|-|:=|[()\[\],.:^~!?*|&@;+\-])
  | (?P<num>[0-9]+(?![A-Za-z_%]))
  | (?P<ident>[A-Za-z_%][A-Za-z0-9_%]*)
""", re.VERBOSE)


def tokenize(text: str) -> list[Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "quoted":
                val = re.sub(r"\\(.)", r"\1", val[1:-1])
            out.append(Tok(kind, val, pos))
        pos = m.end()
    out.append(Tok("eof", "", len(text)))
    return out


class _Base:
    def __init__(self, text: str, line: int = 1):
        self.toks = tokenize(text)
        self.i = 0
        self.line = line

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str):
        raise ParseError(f"{msg} (at {self.tok.text!r})" if self.tok.kind != "eof" else f"{msg} (at end)",
                         self.line, self.tok.pos + 1)

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def at_kw(self, *kws: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text in kws

    def take(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def expect_op(self, op: str) -> None:
        if not self.at_op(op):
            self.error(f"expected {op!r}")
        self.i += 1

    def expect_end(self) -> None:
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")

    def name(self) -> str:
        if self.tok.kind in ("ident", "quoted", "num"):
            return self.take().text
        self.error("expected a name")

    def term(self, scope: list) -> Term:
        t = self.tok
        if t.kind not in ("ident", "quoted", "num"):
            self.error("expected a term")
        self.i += 1
        if self.at_op("("):
            self.i += 1
            args = [self.term(scope)]
            while self.at_op(","):
                self.i += 1
                args.append(self.term(scope))
            self.expect_op(")")
            if t.kind == "ident" and t.text in ("inst_world", "inst_term") and len(args) == 2:
                return Inst(args[0], args[1], t.text[5:])
            return App(t.text, tuple(args))
        if t.kind == "ident" and t.text in scope:
            return Var(_lookup(scope, t.text))
        return Const(t.text)


def _lookup(scope: list, name: str) -> int:
    """de Bruijn index of the innermost binder called ``name``."""
    return scope[::-1].index(name)


class FormulaParser(_Base):
    """LL / SELL / muMALL formulas."""

    BIN = {"|": (2, F.Par), "(+)": (3, F.Plus), "&": (4, F.With), "*": (5, F.Tensor)}

    def parse(self) -> F.Formula:
        f = self.formula([], [], 0)
        self.expect_end()
        return f

    def formula(self, scope, fixes, minp) -> F.Formula:
        left = self.prefix(scope, fixes)
        while self.tok.kind == "op" and self.tok.text in self.BIN:
            p, cls = self.BIN[self.tok.text]
            if p < minp:
                break
            self.i += 1
            right = self.formula(scope, fixes, p)
            left = cls(left, right)
        return left

    def label(self, scope) -> Term:
        if not self.at_op("^"):
            return F.CLASSICAL
        self.i += 1
        t = self.tok
        if t.kind not in ("ident", "quoted", "num"):
            self.error("expected a subexponential label")
        self.i += 1  # a bare name: "!^a (B)" must not read as an application
        if t.kind == "ident" and t.text in scope:
            return Var(_lookup(scope, t.text))
        return Const(t.text)

    def prefix(self, scope, fixes) -> F.Formula:
        t = self.tok
        if self.at_op("("):
            self.i += 1
            f = self.formula(scope, fixes, 0)
            self.expect_op(")")
            return f
        if self.at_op("~"):
            self.i += 1
            a = self.atom(scope, fixes)
            if not isinstance(a, F.Atom):
                self.error("'~' applies to atoms only")
            return F.Atom(a.pred, a.args, True)
        if self.at_op("!", "?"):
            self.i += 1
            lab = self.label(scope)
            body = self.prefix(scope, fixes)
            return F.Bang(lab, body) if t.text == "!" else F.Quest(lab, body)
        if self.at_kw("forall", "exists"):
            self.i += 1
            n = self.name()
            sort = "term"
            if self.at_op(":"):
                self.i += 1
                sort = self.name()
                if sort not in ("term", "world", "form"):
                    self.error(f"unknown binder sort {sort!r}")
            self.expect_op(".")
            body = self.formula(scope + [n], fixes, 0)
            cls = F.ForallTerm if t.text == "forall" else F.ExistsTerm
            return cls(body, sort, n)
        if self.at_kw("forallloc", "foralloc", "existsloc"):
            self.i += 1
            n = self.name()
            self.expect_op(":")
            ty = self.term(scope)
            self.expect_op(".")
            body = self.formula(scope + [n], fixes, 0)
            cls = F.ExistsLoc if t.text == "existsloc" else F.ForallLoc
            return cls(ty, body, n)
        if self.at_kw("mu", "nu"):
            self.i += 1
            n = self.name()
            self.expect_op(".")
            body = self.formula(scope, fixes + [n], 0)
            return F.Mu(body, n) if t.text == "mu" else F.Nu(body, n)
        return self.atom(scope, fixes)

    def atom(self, scope, fixes) -> F.Formula:
        t = self.tok
        if t.kind == "num" and t.text in ("0", "1"):
            self.i += 1
            return F.ZERO if t.text == "0" else F.ONE
        if self.at_kw("top", "bot"):
            self.i += 1
            return F.TOP if t.text == "top" else F.BOT
        if t.kind == "ident" and t.text in fixes:
            self.i += 1
            return F.FixVar(_lookup(fixes, t.text), t.text)
        if t.kind not in ("ident", "quoted"):
            self.error("expected a formula")
        self.i += 1
        args: list = []
        if self.at_op("("):
            self.i += 1
            args.append(self.term(scope))
            while self.at_op(","):
                self.i += 1
                args.append(self.term(scope))
            self.expect_op(")")
        return F.Atom(t.text, tuple(args))


class HyllParser(_Base):
    """HyLL formulas, worlds and judgments."""

    BIN = {"-o": (1, H.HLimp), "(+)": (3, H.HPlus), "&": (4, H.HWith), "*": (5, H.HTensor)}

    def parse(self) -> H.HyllFormula:
        f = self.formula([], [], 0)
        self.expect_end()
        return f

    def judgment(self, ts=None, ws=None) -> H.HyllJudgment:
        f = self.formula(ts or [], ws or [], 0)
        self.expect_op("@")
        return H.HyllJudgment(f, self.world(ws or []))

    def formula(self, ts, ws, minp) -> H.HyllFormula:
        left = self.postfix(ts, ws)
        while self.tok.kind == "op" and self.tok.text in self.BIN:
            p, cls = self.BIN[self.tok.text]
            if p < minp:
                break
            self.i += 1
            left = cls(left, self.formula(ts, ws, p))
        return left

    def postfix(self, ts, ws) -> H.HyllFormula:
        f = self.prefix(ts, ws)
        while self.at_kw("at"):
            self.i += 1
            f = H.HAt(f, self.world(ws))
        return f

    def prefix(self, ts, ws) -> H.HyllFormula:
        t = self.tok
        if self.at_op("("):
            self.i += 1
            f = self.formula(ts, ws, 0)
            self.expect_op(")")
            return f
        if self.at_op("!"):
            self.i += 1
            return H.HBang(self.prefix(ts, ws))
        if self.at_kw("down"):
            self.i += 1
            n = self.name()
            self.expect_op(".")
            return H.HDown(self.formula(ts, ws + [n], 0), n)
        if self.at_kw("forall", "exists"):
            self.i += 1
            n = self.name()
            world = False
            if self.at_op(":"):
                self.i += 1
                sort = self.name()
                if sort not in ("world", "term"):
                    self.error(f"unknown binder sort {sort!r}")
                world = sort == "world"
            self.expect_op(".")
            if world:
                body = self.formula(ts, ws + [n], 0)
                return (H.HForallWorld if t.text == "forall" else H.HExistsWorld)(body, n)
            body = self.formula(ts + [n], ws, 0)
            return (H.HForallTerm if t.text == "forall" else H.HExistsTerm)(body, n)
        if t.kind == "num" and t.text in ("0", "1"):
            self.i += 1
            return H.H_ZERO if t.text == "0" else H.H_ONE
        if self.at_kw("top"):
            self.i += 1
            return H.H_TOP
        if t.kind not in ("ident", "quoted"):
            self.error("expected a HyLL formula")
        self.i += 1
        args: list = []
        if self.at_op("("):
            self.i += 1
            args.append(self.term(ts))
            while self.at_op(","):
                self.i += 1
                args.append(self.term(ts))
            self.expect_op(")")
        return H.HAtom(t.text, tuple(args))

    def world(self, ws) -> WorldExpr:
        left = self.world_atom(ws)
        nxt = self.toks[self.i + 1] if self.at_op(".") else None
        if nxt is not None and (nxt.kind in ("ident", "num", "quoted") or nxt.text == "("):
            self.i += 1
            return Dot(left, self.world(ws))
        return left

    def world_atom(self, ws) -> WorldExpr:
        t = self.tok
        if self.at_op("("):
            self.i += 1
            w = self.world(ws)
            self.expect_op(")")
            return w
        if t.kind == "num":
            self.i += 1
            return Nat(int(t.text))
        if self.at_kw("iota"):
            self.i += 1
            return IOTA
        if t.kind == "ident" and t.text in ws:
            self.i += 1
            return WVar(_lookup(ws, t.text), t.text)
        if t.kind in ("ident", "quoted"):
            self.i += 1
            return Gen(t.text)
        self.error("expected a world")


def parse_formula(text: str, line: int = 1) -> F.Formula:
    return FormulaParser(text, line).parse()


def parse_hyll(text: str, line: int = 1) -> H.HyllFormula:
    return HyllParser(text, line).parse()


def parse_world(text: str, line: int = 1) -> WorldExpr:
    p = HyllParser(text, line)
    w = p.world([])
    p.expect_end()
    return w


def parse_judgment(text: str, line: int = 1) -> H.HyllJudgment:
    p = HyllParser(text, line)
    j = p.judgment()
    p.expect_end()
    return j


def parse_term(text: str, line: int = 1) -> Term:
    p = _Base(text, line)
    t = p.term([])
    p.expect_end()
    return t
