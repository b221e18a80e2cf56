"""World expressions over a commutative constraint domain.

Two domains are supported: ``<N, +, 0>`` and the free commutative monoid
over a finite set of generators.  In the natural-number domain generator
names act as world parameters.  Names starting with ``%`` are eigenvariables
created during search and are accepted in both domains.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .terms import memo_hash


class DomainError(ValueError):
    pass


class WorldExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Iota(WorldExpr):
    pass


@dataclass(frozen=True)
class Gen(WorldExpr):
    name: str


@dataclass(frozen=True)
class WVar(WorldExpr):
    index: int
    name: str = field(default="u", compare=False)


@dataclass(frozen=True)
class Dot(WorldExpr):
    left: WorldExpr
    right: WorldExpr


@dataclass(frozen=True)
class Nat(WorldExpr):
    n: int


for _cls in WorldExpr.__subclasses__():
    memo_hash(_cls)

IOTA = Iota()


@dataclass(frozen=True)
class Domain:
    kind: str = "nat"  # "nat" or "free"
    generators: tuple = ()

    def check_generator(self, name: str) -> None:
        if self.kind == "free" and not name.startswith("%") and name not in self.generators:
            raise DomainError(f"generator {name!r} not declared in free domain {self.generators}")


NAT = Domain("nat")


@dataclass(frozen=True)
class NormWorld:
    """Canonical form: a numeral, a sorted multiset of generators and of bound variables."""

    n: int = 0
    gens: tuple = ()
    vars: tuple = ()

    @property
    def closed(self) -> bool:
        return not self.vars

    def times(self, other: "NormWorld") -> "NormWorld":
        return NormWorld(self.n + other.n, tuple(sorted(self.gens + other.gens)),
                         tuple(sorted(self.vars + other.vars)))

    def size(self) -> int:
        return self.n + len(self.gens) + len(self.vars)


def _collect(w: WorldExpr, domain: Domain, acc: list) -> None:
    if isinstance(w, Iota):
        return
    if isinstance(w, Nat):
        if w.n < 0:
            raise DomainError("negative world")
        if domain.kind == "free" and w.n != 0:
            raise DomainError(f"numeral world {w.n} in free commutative domain")
        acc[0] += w.n
    elif isinstance(w, Gen):
        domain.check_generator(w.name)
        acc[1].append(w.name)
    elif isinstance(w, WVar):
        acc[2].append(w.index)
    elif isinstance(w, Dot):
        _collect(w.left, domain, acc)
        _collect(w.right, domain, acc)
    else:
        raise TypeError(w)


def norm(w: WorldExpr, domain: Domain = NAT) -> NormWorld:
    acc = [0, [], []]
    _collect(w, domain, acc)
    return NormWorld(acc[0], tuple(sorted(acc[1])), tuple(sorted(acc[2])))


def to_expr(nw: NormWorld, domain: Domain = NAT) -> WorldExpr:
    parts: list[WorldExpr] = []
    if nw.n:
        parts.append(Nat(nw.n))
    parts += [Gen(g) for g in nw.gens]
    parts += [WVar(i) for i in nw.vars]
    if not parts:
        return Nat(0) if domain.kind == "nat" else IOTA
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Dot(p, out)
    return out


def normalize(w: WorldExpr, domain: Domain = NAT) -> WorldExpr:
    return to_expr(norm(w, domain), domain)


def world_reachable(u: WorldExpr, w: WorldExpr, domain: Domain = NAT) -> bool:
    """``u <= w`` iff some ``v`` has ``u.v = w``."""
    nu, nw = norm(u, domain), norm(w, domain)
    if not (nu.closed and nw.closed):
        raise DomainError("reachability is defined on closed worlds")
    if nu.n > nw.n:
        return False
    have = Counter(nw.gens)
    have.subtract(Counter(nu.gens))
    return all(c >= 0 for c in have.values())


def subst_world(w: WorldExpr, depth: int, value: WorldExpr) -> WorldExpr:
    if isinstance(w, WVar):
        if w.index == depth:
            return value
        return WVar(w.index - 1, w.name) if w.index > depth else w
    if isinstance(w, Dot):
        return Dot(subst_world(w.left, depth, value), subst_world(w.right, depth, value))
    return w


def world_vars(w: WorldExpr) -> set:
    if isinstance(w, WVar):
        return {w.index}
    if isinstance(w, Dot):
        return world_vars(w.left) | world_vars(w.right)
    return set()


def world_gens(w: WorldExpr) -> set:
    if isinstance(w, Gen):
        return {w.name}
    if isinstance(w, Dot):
        return world_gens(w.left) | world_gens(w.right)
    return set()


# -- canonical keys: the string form used when a world is carried inside a term

def world_key(w: WorldExpr, domain: Domain = NAT) -> str:
    nw = norm(w, domain)
    parts = ([str(nw.n)] if nw.n else []) + list(nw.gens) + [f"#{i}" for i in nw.vars]
    if not parts:
        return "0" if domain.kind == "nat" else "iota"
    return ".".join(parts)


_KEY_PART = re.compile(r"^(\d+|#\d+|[^.#\d][^.]*)$")


def parse_key(key: str) -> WorldExpr:
    if key == "iota":
        return IOTA
    parts = key.split(".")
    exprs: list[WorldExpr] = []
    for p in parts:
        if not _KEY_PART.match(p):
            raise DomainError(f"bad world key {key!r}")
        if p.isdigit():
            exprs.append(Nat(int(p)))
        elif p.startswith("#"):
            exprs.append(WVar(int(p[1:])))
        else:
            exprs.append(IOTA if p == "iota" else Gen(p))
    out = exprs[-1]
    for e in reversed(exprs[:-1]):
        out = Dot(e, out)
    return out


def unit_of(domain: Domain) -> WorldExpr:
    return Nat(0) if domain.kind == "nat" else IOTA


def pool_closure(base: Iterable[WorldExpr], domain: Domain, slack: int) -> list[WorldExpr]:
    """Closed worlds of ``base`` multiplied by every monomial of size <= ``slack``.

    For ``<N,+,0>`` the monomials are the numerals ``0..slack``; for a free
    domain they are products of at most ``slack`` declared generators.
    """
    norms = {norm(b, domain) for b in base}
    norms.add(NormWorld())
    norms = {n for n in norms if n.closed}
    if domain.kind == "nat":
        monos = [NormWorld(k) for k in range(slack + 1)]
    else:
        monos = [NormWorld()]
        frontier = [NormWorld()]
        for _ in range(slack):
            frontier = [m.times(NormWorld(0, (g,))) for m in frontier for g in domain.generators]
            monos += frontier
    out = {b.times(m) for b in norms for m in monos}
    return sorted((to_expr(n, domain) for n in out), key=lambda e: (norm(e, domain).size(), world_key(e, domain)))
