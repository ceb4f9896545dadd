"""Phrase composition over aligned APTs.

Dependents are offset by the relation path from the head so that their
features line up with the head's; the aligned APTs are then merged by union
(pointwise addition) or intersection (pointwise min or product).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from .apt import Apt, merge, offset
from .inference import InferenceConfig, offset_inference
from .lexicon import Lexicon
from .paths import EMPTY, DepPath, Edge, concat_reduce, validate_relation
from .similarity import LexemeNotFound, ppmi_apt


class PhraseSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PhraseTree:
    root: str
    children: Tuple[Tuple[str, "PhraseTree"], ...] = ()

    def __post_init__(self):
        for rel, _ in self.children:
            validate_relation(rel)

    def walk(self, path: DepPath = EMPTY) -> Iterator[Tuple[str, DepPath]]:
        """Pre-order ``(lexeme, path from the root)`` pairs."""
        yield self.root, path
        for rel, child in self.children:
            yield from child.walk(concat_reduce(path, DepPath([Edge(rel)])))

    def __str__(self) -> str:
        parts = [self.root]
        for rel, child in self.children:
            sub = str(child)
            parts.append(f"{rel}:{sub}" if not child.children else f"{rel}:({sub})")
        return " ".join(parts)


def parse_phrase(text: str) -> PhraseTree:
    """Parse ``"head rel:dep ..."`` or a JSON tree into a :class:`PhraseTree`."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return _tree_from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise PhraseSyntaxError(f"bad JSON phrase tree: {e}") from None
    words = text.split()
    if not words:
        raise PhraseSyntaxError("empty phrase")
    if ":" in words[0]:
        raise PhraseSyntaxError(f"phrase must start with a head lexeme, got {words[0]!r}")
    children = []
    for w in words[1:]:
        rel, sep, dep = w.partition(":")
        if not sep or not rel or not dep:
            raise PhraseSyntaxError(f"dependent {w!r} is not of the form rel:lexeme")
        children.append((rel, PhraseTree(dep)))
    try:
        return PhraseTree(words[0], tuple(children))
    except ValueError as e:
        raise PhraseSyntaxError(str(e)) from None


def _tree_from_json(obj) -> PhraseTree:
    if not isinstance(obj, dict) or not isinstance(obj["lexeme"], str) or not obj["lexeme"]:
        raise PhraseSyntaxError(f"tree node needs a non-empty 'lexeme': {obj!r}")
    children = tuple((c["rel"], _tree_from_json(c["tree"])) for c in obj.get("children", ()))
    try:
        return PhraseTree(obj["lexeme"], children)
    except ValueError as e:
        raise PhraseSyntaxError(str(e)) from None


@dataclass(frozen=True)
class CompositionConfig:
    mode: str = "intersection"
    intersection_op: str = "min"
    inference: Optional[InferenceConfig] = None
    max_order: Optional[int] = 2
    space: str = "raw"
    incremental: bool = False

    def __post_init__(self):
        if self.mode not in ("union", "intersection"):
            raise ValueError("mode must be 'union' or 'intersection'")
        if self.intersection_op not in ("min", "mult"):
            raise ValueError("intersection_op must be 'min' or 'mult'")
        if self.space not in ("raw", "ppmi"):
            raise ValueError("space must be 'raw' or 'ppmi'")

    @property
    def op(self) -> str:
        return "add" if self.mode == "union" else self.intersection_op


def constituent(M: Lexicon, lexeme: str, path: DepPath, cfg: CompositionConfig) -> Apt:
    """One lexeme offset by ``path``, enriched first when inference is on."""
    if lexeme not in M:
        raise LexemeNotFound(lexeme)
    if cfg.inference is not None:
        return offset_inference(M, lexeme, path, cfg.inference)
    apt = offset(M[lexeme], path, cfg.max_order)
    if cfg.space == "ppmi":
        apt = ppmi_apt(apt, M.marginals)
    return apt


def compose_pair(M: Lexicon, head: str, dep: str, rel: str,
                 cfg: CompositionConfig = CompositionConfig()) -> Apt:
    validate_relation(rel)
    return merge(constituent(M, str(head), EMPTY, cfg),
                 constituent(M, str(dep), DepPath([Edge(rel)]), cfg), cfg.op)


def compose_tree(M: Lexicon, t: PhraseTree, cfg: CompositionConfig = CompositionConfig()) -> Apt:
    """Compose a whole phrase, anchored at its root.

    By default every node is offset independently by its path from the root
    and the results are folded root first, children in pre-order. With
    ``cfg.incremental`` each subtree is composed first and then offset by the
    relation linking it to its parent.
    """
    if cfg.incremental:
        return _compose_incremental(M, t, cfg)
    nodes = t.walk()
    root, _ = next(nodes)
    acc = constituent(M, root, EMPTY, cfg)
    for lexeme, path in nodes:
        acc = merge(acc, constituent(M, lexeme, path, cfg), cfg.op)
    return acc


def _compose_incremental(M: Lexicon, t: PhraseTree, cfg: CompositionConfig) -> Apt:
    acc = constituent(M, t.root, EMPTY, cfg)
    for rel, child in t.children:
        sub = _compose_incremental(M, child, cfg)
        acc = merge(acc, offset(sub, DepPath([Edge(rel)]), cfg.max_order), cfg.op)
    return acc
