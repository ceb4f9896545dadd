"""Anchored packed trees as sparse typed co-occurrence counts.

An :class:`Apt` maps ``(path, lexeme)`` pairs to positive counts. Paths are
measured from the anchor, so offsetting only rewrites the path keys.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Tuple, Union

from .paths import EMPTY, DepPath, join_cancel, parse_path

__all__ = [
    "Lexeme",
    "OffsetView",
    "Apt",
    "MERGE_OPS",
    "offset",
    "merge",
    "total_count",
    "feature_string",
    "parse_feature",
    "parse_label",
]

Number = Union[int, float]
Key = Tuple[DepPath, str]

MERGE_OPS = ("add", "min", "max", "mult")


@dataclass(frozen=True)
class Lexeme:
    text: str
    pos: Optional[str] = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("lexeme text must be non-empty")

    def __str__(self) -> str:
        return self.text if self.pos is None else f"{self.text}/{self.pos}"

    @classmethod
    def parse(cls, label: str) -> "Lexeme":
        text, sep, pos = label.rpartition("/")
        if sep and text and pos:
            return cls(text, pos)
        return cls(label)


@dataclass(frozen=True)
class OffsetView:
    base: str
    offset: DepPath = EMPTY

    def __str__(self) -> str:
        return f"{self.base}^{self.offset}" if self.offset else self.base


def parse_label(label: str) -> OffsetView:
    """Parse ``"white/J"`` or ``"white/J^amod"`` into an :class:`OffsetView`."""
    base, sep, path = label.rpartition("^")
    if not sep:
        return OffsetView(label, EMPTY)
    if not base:
        raise ValueError(f"missing lexeme in label {label!r}")
    return OffsetView(base, parse_path(path))


def feature_string(path: DepPath, lexeme: str) -> str:
    return f"{path}:{lexeme}"


@lru_cache(maxsize=1 << 18)
def parse_feature(feature: str) -> Key:
    path, sep, lexeme = feature.partition(":")
    if not sep or not lexeme:
        raise ValueError(f"malformed feature {feature!r}")
    return parse_path(path), lexeme


class Apt(Mapping):
    """Immutable sparse map from ``(DepPath, lexeme label)`` to a positive count.

    Non-positive values passed to the constructor are discarded.
    """

    __slots__ = ("_entries", "_total")

    def __init__(self, entries=None):
        if entries is None:
            items: Iterable = ()
        elif isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        self._entries = {k: v for k, v in items if v > 0}
        self._total = None

    @classmethod
    def _wrap(cls, d: dict) -> "Apt":
        # d is trusted: positive values only, owned by the new Apt
        apt = cls.__new__(cls)
        apt._entries = d
        apt._total = None
        return apt

    @classmethod
    def from_features(cls, features: Mapping) -> "Apt":
        """Build from ``{"path:lexeme": count}``."""
        return cls((parse_feature(f), c) for f, c in features.items())

    def __getitem__(self, key: Key) -> Number:
        return self._entries[key]

    def get(self, key, default=0):
        return self._entries.get(key, default)

    def __iter__(self) -> Iterator[Key]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, Apt):
            return self._entries == other._entries
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        shown = ", ".join(f"{f!r}: {c!r}" for f, c in sorted(self.features()))
        return f"Apt({{{shown}}})"

    def features(self) -> Iterator[Tuple[str, Number]]:
        for (p, lex), c in self._entries.items():
            yield feature_string(p, lex), c

    def total(self) -> Number:
        if self._total is None:
            self._total = sum(self._entries.values())
        return self._total

    def scaled(self, factor: float) -> "Apt":
        return Apt((k, v * factor) for k, v in self._entries.items())

    def offset(self, path: DepPath, max_order: Optional[int] = None) -> "Apt":
        return offset(self, path, max_order)

    def order(self) -> int:
        return max((len(p) for p, _ in self._entries), default=0)


def offset(a: Apt, path: DepPath, max_order: Optional[int] = None, *, report: bool = False):
    """Shift the anchor of ``a`` along ``path``.

    Each key ``(q, lex)`` becomes ``(path . q, lex)`` with cancellation at the
    join. Keys whose new path is longer than ``max_order`` are dropped; with
    ``report=True`` the dropped mass is returned alongside the result.
    """
    if not path and (max_order is None or a.order() <= max_order):
        return (a, 0) if report else a
    out: dict = {}
    dropped = 0
    for (q, lex), c in a.items():
        r = join_cancel(path, q)
        if max_order is not None and len(r) > max_order:
            dropped += c
            continue
        key = (r, lex)
        out[key] = out.get(key, 0) + c
    result = Apt._wrap(out)
    return (result, dropped) if report else result


def merge(a: Apt, b: Apt, op: str = "add") -> Apt:
    """Pointwise combination over the union of keys, absent keys read as 0."""
    if op == "add":
        out = dict(a.items())
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return Apt._wrap(out)
    if op == "max":
        out = dict(a.items())
        for k, v in b.items():
            if v > out.get(k, 0):
                out[k] = v
        return Apt._wrap(out)
    if op == "min":
        small, large = (a, b) if len(a) <= len(b) else (b, a)
        return Apt._wrap({k: min(v, large[k]) for k, v in small.items() if k in large})
    if op == "mult":
        small, large = (a, b) if len(a) <= len(b) else (b, a)
        return Apt((k, v * large[k]) for k, v in small.items() if k in large)
    raise ValueError(f"unknown merge operator {op!r}; expected one of {MERGE_OPS}")


def total_count(a: Apt) -> Number:
    return a.total()
