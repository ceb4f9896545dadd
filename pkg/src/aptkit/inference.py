"""Offset inference: enrich an offset view with its distributional neighbours.

With an empty offset path this is plain distributional inference over the
un-offset lexeme.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Union

from .apt import MERGE_OPS, Apt, OffsetView, merge
from .lexicon import Lexicon
from .paths import EMPTY, DepPath, parse_path, reduce_path
from .similarity import CandidateSpec, LexemeNotFound, index_for

log = logging.getLogger(__name__)

NEIGHBOUR_WEIGHTINGS = ("uniform", "similarity")


@dataclass(frozen=True)
class InferenceConfig:
    k: int = 10
    merge_op: str = "add"
    neighbour_weighting: str = "similarity"
    space: str = "ppmi"
    candidates: CandidateSpec = field(default_factory=CandidateSpec)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.merge_op not in MERGE_OPS:
            raise ValueError(f"merge_op must be one of {MERGE_OPS}")
        if self.neighbour_weighting not in NEIGHBOUR_WEIGHTINGS:
            raise ValueError(f"neighbour_weighting must be one of {NEIGHBOUR_WEIGHTINGS}")
        if self.space not in ("ppmi", "raw"):
            raise ValueError("space must be 'ppmi' or 'raw'")

    @property
    def retrieval(self) -> CandidateSpec:
        return replace(self.candidates, weighting=self.space)


def offset_inference(M: Lexicon, w, p: Union[DepPath, str] = EMPTY,
                     cfg: InferenceConfig = InferenceConfig()) -> Apt:
    """Offset ``w`` by ``p`` and merge in the representations of its ``k`` neighbours.

    The accumulator starts as the offset view itself, in the configured space.
    Neighbours are merged in rank order; with similarity weighting each one
    is scaled by its cosine score first.
    """
    w = str(w)
    if w not in M:
        raise LexemeNotFound(w)
    if isinstance(p, str):
        p = parse_path(p)
    label = str(OffsetView(w, reduce_path(p)))
    index = index_for(M, cfg.retrieval)
    result = index.representation(label)
    found = index.query(label, cfg.k)
    if len(found) < cfg.k:
        log.warning("only %d candidates available for %s (k=%d)", len(found), label, cfg.k)
    for n in found:
        rep = index.representation(n.label)
        if cfg.neighbour_weighting == "similarity":
            rep = rep.scaled(n.score)
        result = merge(result, rep, cfg.merge_op)
    return result


def standard_di(M: Lexicon, w, cfg: InferenceConfig = InferenceConfig()) -> Apt:
    return offset_inference(M, w, EMPTY, cfg)
