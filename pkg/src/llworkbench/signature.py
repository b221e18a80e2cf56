"""Subexponential signatures <I, <=, U>."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional


class SignatureError(ValueError):
    pass


def _closure(labels: frozenset, pairs: Iterable[tuple]) -> frozenset:
    above = {a: {a} for a in labels}
    for a, b in pairs:
        above[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in labels:
            extra = set().union(*(above[b] for b in above[a])) - above[a]
            if extra:
                above[a] |= extra
                changed = True
    return frozenset((a, b) for a in labels for b in above[a])


@dataclass(frozen=True)
class SubexpSignature:
    """Labels, a preorder given by generating pairs ``a <= b``, and the unbounded set.

    ``auto_type`` names a label under which unknown labels met during search
    are admitted on demand (used by the flat world signature, whose world
    labels include products and eigenvariables created mid-proof).
    """

    labels: frozenset
    order: frozenset = frozenset()
    unbounded: frozenset = frozenset()
    auto_type: Optional[str] = None
    _leq: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = frozenset(self.labels)
        object.__setattr__(self, "labels", labels)
        for a, b in self.order:
            for x in (a, b):
                if x not in labels:
                    raise SignatureError(f"order mentions undeclared label {x!r}")
        unknown = set(self.unbounded) - labels
        if unknown:
            raise SignatureError(f"unbounded labels not declared: {sorted(unknown)}")
        if self.auto_type is not None and self.auto_type not in labels:
            raise SignatureError(f"auto type {self.auto_type!r} not declared")
        leq = _closure(labels, self.order)
        object.__setattr__(self, "_leq", leq)
        object.__setattr__(self, "unbounded", frozenset(self.unbounded))
        for a, b in leq:
            if a in self.unbounded and b not in self.unbounded:
                raise SignatureError(f"unbounded set not upward closed: {a} <= {b} but {b} is bounded")

    @classmethod
    def build(cls, labels, order=(), unbounded=(), auto_type=None) -> "SubexpSignature":
        return cls(frozenset(labels), frozenset(order), frozenset(unbounded), auto_type)

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self._leq

    def is_unbounded(self, a: str) -> bool:
        return a in self.unbounded

    def __contains__(self, a: str) -> bool:
        return a in self.labels

    def sorted_labels(self) -> list:
        return sorted(self.labels)

    def with_label(self, name: str, type_label: str) -> "SubexpSignature":
        """Add a bounded label whose only relations are those forced by ``name <= type_label``."""
        if name in self.labels:
            raise SignatureError(f"label {name!r} already declared")
        if type_label not in self.labels:
            raise SignatureError(f"unknown type label {type_label!r}")
        return SubexpSignature(self.labels | {name}, self.order | {(name, type_label)},
                               self.unbounded, self.auto_type)

    def admit(self, name: str) -> "SubexpSignature":
        """Return a signature containing ``name``, adding it under ``auto_type`` if allowed."""
        if name in self.labels:
            return self
        if self.auto_type is None:
            raise SignatureError(f"unknown subexponential label {name!r}")
        return self.with_label(name, self.auto_type)


def classical_signature() -> SubexpSignature:
    """The one-label signature of plain linear logic."""
    return SubexpSignature.build({"ll"}, (), {"ll"})
