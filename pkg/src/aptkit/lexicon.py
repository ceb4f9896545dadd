"""Typed co-occurrence extraction and the aggregated lexicon.

Every token co-occurs with itself at the empty path, and with every other
token of its sentence reachable through at most ``max_order`` dependency
edges. The path climbs inverse edges to the lowest common ancestor and then
descends forward edges.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import logging
import re
import zlib
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .apt import Apt, Lexeme, feature_string, parse_feature
from .conllu import Sentence
from .paths import EMPTY, DepPath, Edge, PathSyntaxError, parse_path, validate_relation

log = logging.getLogger(__name__)

FORMAT_VERSION = "v1"
_HEADER = re.compile(r"#apt-lexicon (\S+) ([0-9a-f]+)")

# UPOS -> coarse tag; tags not listed keep their first letter
COARSE_POS = {
    "ADJ": "J",
    "NOUN": "N",
    "PROPN": "N",
    "VERB": "V",
    "AUX": "V",
    "ADV": "R",
}


@dataclass(frozen=True)
class BuildConfig:
    max_order: int = 2
    key: str = "lemma"  # or "form"
    with_pos: bool = True
    lowercase: bool = True
    stoplist: FrozenSet[str] = frozenset({"punct"})

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be positive")
        if self.key not in ("lemma", "form"):
            raise ValueError(f"key must be 'lemma' or 'form', not {self.key!r}")
        object.__setattr__(self, "stoplist", frozenset(self.stoplist))

    def fingerprint(self) -> str:
        blob = json.dumps(
            {
                "max_order": self.max_order,
                "key": self.key,
                "with_pos": self.with_pos,
                "lowercase": self.lowercase,
                "stoplist": sorted(self.stoplist),
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def coarse_pos(upos: str, xpos: str = "_") -> Optional[str]:
    tag = upos if upos not in ("", "_") else xpos
    if tag in ("", "_"):
        return None
    return COARSE_POS.get(tag, tag[0].upper())


def lexeme_label(token, config: BuildConfig) -> str:
    text = token.lemma if config.key == "lemma" and token.lemma not in ("", "_") else token.form
    if config.lowercase:
        text = text.lower()
    # whitespace would break the record format, '^' the offset-view syntax
    text = re.sub(r"[\s^]", "_", text) or "_"
    pos = coarse_pos(token.upos, token.xpos) if config.with_pos else None
    return str(Lexeme(text, pos))


def relation_label(deprel: str) -> Optional[str]:
    rel = deprel.replace(":", "-")
    try:
        return validate_relation(rel)
    except PathSyntaxError:
        return None


def extract(s: Sentence, config: BuildConfig = BuildConfig()) -> List[Tuple[str, DepPath, str, int]]:
    """List every typed co-occurrence ``(w, path, w', 1)`` in ``s``."""
    labels = [lexeme_label(t, config) for t in s.tokens]
    n = len(labels)
    adj: List[List[Tuple[int, Edge]]] = [[] for _ in range(n)]
    for t in s.tokens:
        if t.head == 0 or t.deprel in config.stoplist:
            continue
        rel = relation_label(t.deprel)
        if rel is None or rel in config.stoplist:
            continue
        child, head = t.index - 1, t.head - 1
        adj[child].append((head, Edge(rel, True)))
        adj[head].append((child, Edge(rel, False)))

    out = []
    for start in range(n):
        out.append((labels[start], EMPTY, labels[start], 1))
        seen = {start}
        queue = deque([(start, ())])
        while queue:
            node, path = queue.popleft()
            if len(path) == config.max_order:
                continue
            for nxt, edge in adj[node]:
                if nxt in seen:
                    continue
                seen.add(nxt)
                p = path + (edge,)
                out.append((labels[start], DepPath(p), labels[nxt], 1))
                queue.append((nxt, p))
    return out


def _count(sentences: Iterable[Sentence], config: BuildConfig) -> Dict[str, Dict[tuple, int]]:
    counts: Dict[str, Dict[tuple, int]] = {}
    for s in sentences:
        for w, path, ctx, c in extract(s, config):
            apt = counts.setdefault(w, {})
            key = (path, ctx)
            apt[key] = apt.get(key, 0) + c
    return counts


def _count_shard(sentences: List[Sentence], config: BuildConfig) -> Dict[str, Dict[tuple, int]]:
    # path objects pickle slowly; ship their string form back to the parent
    return {w: {(str(p), ctx): c for (p, ctx), c in apt.items()}
            for w, apt in _count(sentences, config).items()}


def _add_into(total: Dict[str, Dict[tuple, int]], part: Mapping[str, Mapping[tuple, int]]) -> None:
    for w, apt in part.items():
        dst = total.setdefault(w, {})
        for (p, ctx), c in apt.items():
            key = (parse_path(p), ctx)
            dst[key] = dst.get(key, 0) + c


@dataclass
class Marginals:
    lexeme_totals: Dict[str, int] = field(default_factory=dict)
    feature_totals: Dict[str, int] = field(default_factory=dict)
    grand_total: int = 0


class Lexicon:
    """Lexeme label -> :class:`Apt`, with cached marginal totals.

    Treat instances as read-only once built.
    """

    def __init__(self, entries: Mapping[str, Apt] = None, fingerprint: str = ""):
        self.entries: Dict[str, Apt] = {w: a for w, a in (entries or {}).items() if len(a)}
        self.fingerprint = fingerprint
        self.marginals = self.compute_marginals()
        self._indexes: dict = {}

    def compute_marginals(self) -> Marginals:
        m = Marginals()
        for w, apt in self.entries.items():
            m.lexeme_totals[w] = apt.total()
            ft = m.feature_totals
            for f, c in apt.features():
                ft[f] = ft.get(f, 0) + c
        m.grand_total = sum(m.lexeme_totals.values())
        return m

    def __contains__(self, label) -> bool:
        return str(label) in self.entries

    def __getitem__(self, label) -> Apt:
        return self.entries[str(label)]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self.fingerprint == other.fingerprint and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        return f"Lexicon({len(self.entries)} lexemes, fingerprint={self.fingerprint!r})"

    def n_features(self) -> int:
        return len(self.marginals.feature_totals)


def build(corpus: Iterable[Sentence], config: BuildConfig = BuildConfig(), workers: int = 1,
          shard_size: int = 2000) -> Lexicon:
    """Aggregate typed co-occurrences of ``corpus`` into a :class:`Lexicon`.

    With ``workers > 1`` shards are counted in separate processes and summed;
    the result is identical to a sequential build.
    """
    if workers <= 1:
        counts = _count(corpus, config)
    else:
        sentences = list(corpus)
        shards = [sentences[i:i + shard_size] for i in range(0, len(sentences), shard_size)]
        counts = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_shard, shards, [config] * len(shards)):
                _add_into(counts, part)
    if not counts:
        log.warning("empty corpus: building an empty lexicon")
    return Lexicon({w: Apt._wrap(apt) for w, apt in counts.items()}, config.fingerprint())


class LexiconFormatError(ValueError):
    pass


def format_count(c) -> str:
    if isinstance(c, int):
        return str(c)
    if float(c).is_integer() and abs(c) < 2 ** 53:
        return str(int(c))
    return repr(float(c))


def _parse_count(text: str):
    if text.isdigit():
        return int(text)
    return float(text)


def format_record(label: str, apt: Apt) -> str:
    feats = sorted(apt.features())
    return label + "\t" + " ".join(f"{f}:{format_count(c)}" for f, c in feats)


def parse_record_features(text: str) -> Apt:
    feats = {}
    for item in text.split(" "):
        f, sep, c = item.rpartition(":")
        if not sep or not f:
            raise ValueError(f"bad feature item {item!r}")
        if f in feats:
            raise ValueError(f"duplicate feature {f!r}")
        value = _parse_count(c)
        if not value > 0:
            raise ValueError(f"non-positive count in {item!r}")
        feats[f] = value
    return Apt.from_features(feats)


def dumps(lex: Lexicon) -> bytes:
    lines = [f"#apt-lexicon {FORMAT_VERSION} {lex.fingerprint or '0'}"]
    for label in sorted(lex.entries):
        lines.append(format_record(label, lex.entries[label]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def loads(data: bytes, expect_fingerprint: Optional[str] = None) -> Lexicon:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise LexiconFormatError(f"lexicon is not valid UTF-8: {e}") from None
    lines = text.split("\n")
    m = _HEADER.fullmatch(lines[0])
    if m is None:
        raise LexiconFormatError(f"bad header line {lines[0][:80]!r}")
    version, fingerprint = m.groups()
    if version != FORMAT_VERSION:
        raise LexiconFormatError(f"unsupported lexicon version {version} (expected {FORMAT_VERSION})")
    if expect_fingerprint is not None and fingerprint != expect_fingerprint:
        raise LexiconFormatError(
            f"config fingerprint mismatch: lexicon has {fingerprint}, config gives {expect_fingerprint}")
    if lines[-1] != "":
        raise LexiconFormatError("lexicon does not end with a newline (truncated?)")
    entries = {}
    for lineno, line in enumerate(lines[1:-1], 2):
        label, sep, body = line.partition("\t")
        if not sep or not label or not body:
            raise LexiconFormatError(f"malformed record at line {lineno}: {line[:80]!r}")
        if label in entries:
            raise LexiconFormatError(f"duplicate record {label!r} at line {lineno}")
        try:
            entries[label] = parse_record_features(body)
        except ValueError as e:
            raise LexiconFormatError(f"malformed record {label!r} at line {lineno}: {e}") from None
    return Lexicon(entries, "" if fingerprint == "0" else fingerprint)


def save(lex: Lexicon, path) -> None:
    payload = gzip.compress(dumps(lex), compresslevel=6, mtime=0)
    with open(path, "wb") as f:
        f.write(payload)


def load(path, expect_fingerprint: Optional[str] = None) -> Lexicon:
    with open(path, "rb") as f:
        raw = f.read()
    try:
        data = gzip.decompress(raw)
    except (OSError, EOFError, zlib.error) as e:
        raise LexiconFormatError(f"{path}: corrupt or truncated gzip stream ({e})") from None
    return loads(data, expect_fingerprint)


__all__ = [
    "BuildConfig",
    "Lexicon",
    "LexiconFormatError",
    "Marginals",
    "build",
    "coarse_pos",
    "dumps",
    "extract",
    "feature_string",
    "format_record",
    "lexeme_label",
    "load",
    "loads",
    "parse_feature",
    "parse_record_features",
    "save",
]
