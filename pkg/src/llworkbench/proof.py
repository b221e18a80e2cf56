"""Derivation trees, search verdicts and proof serialization."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence


class Verdict(Enum):
    PROVED = "proved"
    REFUTED = "not-provable"
    EXHAUSTED = "depth-exhausted"

    @property
    def exit_code(self) -> int:
        return {"proved": 0, "not-provable": 1, "depth-exhausted": 2}[self.value]


@dataclass(frozen=True)
class Proof:
    """One rule application; ``conclusion`` is an engine-specific sequent snapshot.

    ``info`` carries rule parameters needed by replay: the witness of an
    existential, the eigenvariable of a universal, the index of a chosen
    disjunct and so on.
    """

    rule: str
    conclusion: Any
    premises: tuple = ()
    info: tuple = ()

    def get(self, key: str, default=None):
        for k, v in self.info:
            if k == key:
                return v
        return default

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def nodes(self) -> Iterator["Proof"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def count(self, *rules: str) -> int:
        return sum(1 for n in self.nodes() if n.rule in rules)


def serialize(p: Proof, render: Callable[[Any], str] = str, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}(rule {p.rule} (seq {render(p.conclusion)})"
    if not p.premises:
        return head + ")"
    inner = "\n".join(serialize(q, render, indent + 1) for q in p.premises)
    return f"{head}\n{inner})"


@dataclass
class SearchResult:
    verdict: Verdict
    proof: Optional[Proof] = None
    stats: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.verdict is Verdict.PROVED


class ReplayError(Exception):
    """Raised by replay checkers; carries the offending node."""

    def __init__(self, msg: str, node: Optional[Proof] = None):
        super().__init__(msg)
        self.node = node


# -- multisets

@lru_cache(maxsize=None)
def skey(x) -> str:
    """Stable sort key for hashable syntax objects."""
    return repr(x)


def canon(items: Iterable) -> tuple:
    return tuple(sorted(items, key=skey))


def msub(big: Sequence, small: Sequence) -> Optional[tuple]:
    """Multiset difference ``big - small``, or None if ``small`` is not contained."""
    c = Counter(big)
    c.subtract(Counter(small))
    if any(v < 0 for v in c.values()):
        return None
    return canon(c.elements())


def remove_one(items: Sequence, x) -> tuple:
    i = list(items).index(x)
    return tuple(items[:i]) + tuple(items[i + 1:])


def distributions(items: Sequence, k: int,
                  allowed: Callable[[int, Any], bool] = lambda i, x: True) -> Iterator[tuple]:
    """All ways of dealing ``items`` (a multiset) into ``k`` ordered bins.

    Each result is a tuple of ``k`` canonical tuples.  Duplicate items do not
    produce duplicate results.
    """
    items = canon(items)
    if k == 0:
        if not items:
            yield ()
        return
    choices = [[i for i in range(k) if allowed(i, x)] for x in items]
    seen = set()
    for pick in product(*choices):
        bins = [[] for _ in range(k)]
        for x, i in zip(items, pick):
            bins[i].append(x)
        out = tuple(tuple(b) for b in bins)
        if out not in seen:
            seen.add(out)
            yield out


def splits(items: Sequence) -> Iterator[tuple]:
    """All ordered pairs of sub-multisets partitioning ``items``."""
    for left, right in distributions(items, 2):
        yield left, right
