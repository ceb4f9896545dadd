"""Anchored packed tree (APT) distributional semantics.

Typed co-occurrence spaces built from dependency-parsed corpora, offset
views along dependency paths, offset inference and phrase composition.
"""

from .apt import Apt, Lexeme, OffsetView, merge, offset, parse_label, total_count
from .composition import CompositionConfig, PhraseTree, compose_pair, compose_tree, parse_phrase
from .conllu import ReadStats, Sentence, Token, read_conllu
from .inference import InferenceConfig, offset_inference, standard_di
from .lexicon import BuildConfig, Lexicon, build, extract, load, save
from .paths import EMPTY, DepPath, Edge, concat_reduce, invert, parse_path, reduce_path, to_string
from .similarity import (
    CandidateSpec,
    NeighbourIndex,
    WeightedVector,
    cosine,
    neighbours,
    ppmi_weight,
    vectorize,
)

__all__ = [
    "Apt",
    "build",
    "BuildConfig",
    "CandidateSpec",
    "compose_pair",
    "compose_tree",
    "CompositionConfig",
    "concat_reduce",
    "cosine",
    "DepPath",
    "Edge",
    "EMPTY",
    "extract",
    "InferenceConfig",
    "invert",
    "Lexeme",
    "Lexicon",
    "load",
    "merge",
    "NeighbourIndex",
    "neighbours",
    "offset",
    "offset_inference",
    "OffsetView",
    "parse_label",
    "parse_path",
    "parse_phrase",
    "PhraseTree",
    "ppmi_weight",
    "read_conllu",
    "ReadStats",
    "reduce_path",
    "save",
    "Sentence",
    "standard_di",
    "to_string",
    "Token",
    "total_count",
    "vectorize",
    "WeightedVector",
]

__version__ = "0.1.0"
