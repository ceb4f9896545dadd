"""Dependency paths: parsing, inversion and reduced concatenation.

A path is a sequence of edges. An edge is a relation label travelled either
head-to-dependent (forward) or dependent-to-head (inverse). In text an
inverse edge carries a leading underscore and edges are joined with dots,
so ``"_amod._dobj"`` climbs an ``amod`` edge and then a ``dobj`` edge.
The empty path is the empty string.
"""

from __future__ import annotations

import re
from functools import lru_cache, partial
from typing import Iterable, NamedTuple

__all__ = [
    "Edge",
    "DepPath",
    "EMPTY",
    "PathSyntaxError",
    "parse_path",
    "to_string",
    "invert",
    "concat_reduce",
    "reduce_path",
    "join_cancel",
    "is_canonical",
    "validate_relation",
]

_ILLEGAL = re.compile(r"[.:^\s]")


class PathSyntaxError(ValueError):
    """Raised for a malformed path string or relation label."""


def validate_relation(label: str) -> str:
    if not label:
        raise PathSyntaxError("empty relation label")
    if label.startswith("_") or _ILLEGAL.search(label):
        raise PathSyntaxError(f"illegal relation label {label!r}")
    return label


class Edge(NamedTuple):
    relation: str
    inverse: bool = False

    def flip(self) -> "Edge":
        return Edge(self.relation, not self.inverse)

    def __str__(self) -> str:
        return ("_" if self.inverse else "") + self.relation


class DepPath(tuple):
    """Immutable sequence of :class:`Edge`.

    Construction does not reduce; use :func:`reduce_path` or
    :func:`concat_reduce` for canonical forms.
    """

    __slots__ = ()

    def __new__(cls, edges: Iterable[Edge] = ()):
        return super().__new__(cls, edges)

    @property
    def order(self) -> int:
        return len(self)

    def __str__(self) -> str:
        return ".".join(map(str, self))

    def __repr__(self) -> str:
        return f"DepPath({str(self)!r})"

    # Tuple concatenation would silently return a plain tuple.
    def __add__(self, other):
        return DepPath(tuple.__add__(self, other))


EMPTY = DepPath()
_new_path = partial(tuple.__new__, DepPath)


@lru_cache(maxsize=1 << 16)
def parse_path(text: str) -> DepPath:
    """Parse ``text`` into a :class:`DepPath` without reducing it."""
    if text == "":
        return EMPTY
    edges = []
    for segment in text.split("."):
        inverse = segment.startswith("_")
        label = segment[1:] if inverse else segment
        try:
            validate_relation(label)
        except PathSyntaxError:
            raise PathSyntaxError(f"malformed path segment {segment!r} in {text!r}") from None
        edges.append(Edge(label, inverse))
    return DepPath(edges)


def to_string(p: DepPath) -> str:
    return str(p)


def invert(p: DepPath) -> DepPath:
    return DepPath(e.flip() for e in reversed(p))


def _cancels(a: Edge, b: Edge) -> bool:
    return a.relation == b.relation and a.inverse != b.inverse


def reduce_path(p: Iterable[Edge]) -> DepPath:
    """Cancel adjacent inverse pairs until none remain.

    Free reduction is confluent, so a single left-to-right stack pass
    reaches the same normal form as any other cancellation order.
    """
    stack: list = []
    for e in p:
        # edges are (relation, inverse) pairs; index access keeps this loop cheap
        if stack:
            top = stack[-1]
            if top[0] == e[0] and top[1] != e[1]:
                del stack[-1]
                continue
        stack.append(e)
    return _new_path(stack)


def concat_reduce(p: DepPath, q: DepPath) -> DepPath:
    return reduce_path((*p, *q))


def is_canonical(p: DepPath) -> bool:
    return all(not _cancels(a, b) for a, b in zip(p, p[1:]))


def join_cancel(p: DepPath, q: DepPath) -> DepPath:
    """Concatenate ``p`` and ``q``, cancelling only across the join.

    Agrees with :func:`concat_reduce` whenever both arguments are canonical,
    but leaves cancellable pairs inside ``q`` alone (extracted co-modifier
    paths such as ``_amod.amod`` keep their shape).
    """
    i, j = len(p), 0
    while i > 0 and j < len(q) and _cancels(p[i - 1], q[j]):
        i -= 1
        j += 1
    if i == len(p) and j == 0:
        if not p:
            return q if isinstance(q, DepPath) else DepPath(q)
        if not q:
            return p
    return DepPath(tuple(p[:i]) + tuple(q[j:]))
