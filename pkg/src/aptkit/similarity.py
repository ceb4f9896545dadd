"""PPMI weighting, cosine similarity and exact neighbour retrieval.

The candidate space holds plain lexemes above a frequency floor plus their
offset views along a configured list of paths. Offset views are materialised
lazily by offsetting the lexeme's count APT and weighting the result against
the marginals of the plain lexicon.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .apt import Apt, OffsetView, offset, parse_label
from .lexicon import Lexicon, Marginals
from .paths import parse_path, reduce_path

log = logging.getLogger(__name__)

WEIGHTINGS = ("ppmi", "raw")


class WeightedVector(Mapping):
    """Sparse ``feature string -> weight`` map; zero weights are not stored."""

    __slots__ = ("weights", "owner", "_sq")

    def __init__(self, weights=None, owner: str = ""):
        items = weights.items() if isinstance(weights, Mapping) else (weights or ())
        self.weights: Dict[str, float] = {f: w for f, w in items if w > 0}
        self.owner = owner
        self._sq = None

    def __getitem__(self, f):
        return self.weights[f]

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)

    def __eq__(self, other):
        if isinstance(other, WeightedVector):
            return self.weights == other.weights
        if isinstance(other, Mapping):
            return self.weights == dict(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"WeightedVector({self.weights!r}, owner={self.owner!r})"

    def squared_norm(self) -> float:
        if self._sq is None:
            self._sq = math.fsum(w * w for w in self.weights.values())
        return self._sq

    def scaled(self, alpha: float) -> "WeightedVector":
        return WeightedVector({f: w * alpha for f, w in self.weights.items()}, self.owner)


def vectorize(a: Apt, owner: str = "") -> WeightedVector:
    return WeightedVector(dict(a.features()), owner)


def ppmi_weight(v: Mapping, marginals: Marginals, owner_total=None) -> WeightedVector:
    """Positive PMI of each feature of the raw count vector ``v``.

    ``owner_total`` defaults to the sum of ``v``. Features missing from the
    marginals get no weight.
    """
    n = marginals.grand_total
    if not n:
        raise ValueError("cannot weight against an empty model (grand total is 0)")
    cw = owner_total if owner_total is not None else sum(v.values())
    ft = marginals.feature_totals
    out = {}
    for f, c in v.items():
        cf = ft.get(f)
        if not cf or c <= 0:
            continue
        pmi = math.log((c * n) / (cw * cf))
        if pmi > 0:
            out[f] = pmi
    return WeightedVector(out, getattr(v, "owner", ""))


def ppmi_apt(a: Apt, marginals: Marginals) -> Apt:
    """PPMI-weighted copy of ``a`` as an :class:`Apt` (weights as counts)."""
    return Apt.from_features(ppmi_weight(vectorize(a), marginals).weights)


def cosine(u: Mapping, v: Mapping) -> float:
    if not u or not v:
        return 0.0
    if len(u) > len(v):
        u, v = v, u
    dot = math.fsum(w * v[f] for f, w in u.items() if f in v)
    if dot == 0:
        return 0.0
    su = u.squared_norm() if isinstance(u, WeightedVector) else math.fsum(w * w for w in u.values())
    sv = v.squared_norm() if isinstance(v, WeightedVector) else math.fsum(w * w for w in v.values())
    return min(1.0, max(0.0, dot / math.sqrt(su * sv)))


@dataclass(frozen=True)
class CandidateSpec:
    offset_paths: Tuple[str, ...] = ("amod", "nsubj", "dobj")
    min_frequency: float = 10
    weighting: str = "ppmi"
    max_order: Optional[int] = 2

    def __post_init__(self):
        paths = tuple(dict.fromkeys(str(reduce_path(parse_path(p))) for p in self.offset_paths))
        object.__setattr__(self, "offset_paths", paths)
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}, not {self.weighting!r}")
        if self.max_order is not None and self.max_order < 1:
            raise ValueError("max_order must be positive or None")


class Neighbour(NamedTuple):
    label: str
    score: float


class LexemeNotFound(KeyError):
    def __str__(self):
        return f"unknown lexeme {self.args[0]!r}"


def canonical_label(query) -> str:
    """Normalise a lexeme label, ``OffsetView`` or ``"lex^path"`` string."""
    view = query if isinstance(query, OffsetView) else parse_label(str(query))
    return str(OffsetView(view.base, reduce_path(view.offset)))


class NeighbourIndex:
    """Exact top-k cosine search over one lexicon's candidate space.

    An inverted index over features restricts scoring to candidates that
    share at least one feature with the query; every other candidate scores
    exactly 0, so results equal exhaustive scoring.
    """

    def __init__(self, lexicon: Lexicon, spec: CandidateSpec = CandidateSpec()):
        self.lexicon = lexicon
        self.spec = spec
        self._cache: Dict[str, Tuple[Apt, WeightedVector]] = {}
        self._weighted: Dict[str, Apt] = {}
        self._candidates: Optional[List[str]] = None
        self._postings: Optional[Dict[str, List[int]]] = None

    def _materialise(self, label: str) -> Tuple[Apt, WeightedVector]:
        hit = self._cache.get(label)
        if hit is not None:
            return hit
        view = parse_label(label)
        if view.base not in self.lexicon.entries:
            raise LexemeNotFound(view.base)
        counts = offset(self.lexicon.entries[view.base], view.offset, self.spec.max_order)
        raw = vectorize(counts, label)
        if self.spec.weighting == "ppmi":
            vec = ppmi_weight(raw, self.lexicon.marginals)
            vec.owner = label
        else:
            vec = raw
        self._cache[label] = (counts, vec)
        return counts, vec

    def counts(self, query) -> Apt:
        return self._materialise(canonical_label(query))[0]

    def vector(self, query) -> WeightedVector:
        return self._materialise(canonical_label(query))[1]

    def representation(self, query) -> Apt:
        """The query as an :class:`Apt` in this index's weighting space."""
        label = canonical_label(query)
        if self.spec.weighting == "raw":
            return self._materialise(label)[0]
        rep = self._weighted.get(label)
        if rep is None:
            rep = self._weighted[label] = Apt.from_features(self._materialise(label)[1].weights)
        return rep

    @property
    def candidates(self) -> List[str]:
        if self._candidates is None:
            labels = []
            totals = self.lexicon.marginals.lexeme_totals
            for base in sorted(self.lexicon.entries):
                if totals[base] < self.spec.min_frequency:
                    continue
                for p in ("",) + tuple(p for p in self.spec.offset_paths if p):
                    label = f"{base}^{p}" if p else base
                    if len(self._materialise(label)[1]):
                        labels.append(label)
            self._candidates = labels
        return self._candidates

    def _index(self) -> Dict[str, List[int]]:
        if self._postings is None:
            postings: Dict[str, List[int]] = {}
            for i, label in enumerate(self.candidates):
                for f in self._materialise(label)[1]:
                    postings.setdefault(f, []).append(i)
            self._postings = postings
        return self._postings

    def score_all(self, qvec: Mapping, exclude: Iterable[str] = ()) -> List[Neighbour]:
        """Every candidate with its cosine to ``qvec``, best first."""
        postings = self._index()
        cands = self.candidates
        touched = set()
        for f in qvec:
            touched.update(postings.get(f, ()))
        excluded = set(exclude)
        scored = []
        for i, label in enumerate(cands):
            if label in excluded:
                continue
            score = cosine(qvec, self._materialise(label)[1]) if i in touched else 0.0
            scored.append(Neighbour(label, score))
        scored.sort(key=lambda n: (-n.score, n.label))
        return scored

    def query_vector(self, qvec: Mapping, k: int, exclude: Iterable[str] = ()) -> List[Neighbour]:
        if k <= 0:
            return []
        return self.score_all(qvec, exclude)[:k]

    def query(self, query, k: int) -> List[Neighbour]:
        label = canonical_label(query)
        if k <= 0:
            self._materialise(label)
            return []
        return self.query_vector(self._materialise(label)[1], k, exclude=(label,))


def index_for(lexicon: Lexicon, spec: CandidateSpec = CandidateSpec()) -> NeighbourIndex:
    """Shared :class:`NeighbourIndex` for ``(lexicon, spec)``."""
    idx = lexicon._indexes.get(spec)
    if idx is None:
        idx = lexicon._indexes[spec] = NeighbourIndex(lexicon, spec)
    return idx


def neighbours(lexicon: Lexicon, query, k: int, candidates: CandidateSpec = CandidateSpec()) -> List[Neighbour]:
    """Top-``k`` neighbours of a lexeme or offset view, excluding itself.

    Ties are broken by label. Raises :class:`LexemeNotFound` when the
    query's base lexeme is not in the lexicon.
    """
    return index_for(lexicon, candidates).query(query, k)
