"""Minimal CoNLL-U reader with dependency-tree validation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, TextIO, Tuple

log = logging.getLogger(__name__)

ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL = range(8)


class MalformedLineError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str
    xpos: str = "_"


@dataclass(frozen=True)
class Sentence:
    tokens: Tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class ReadStats:
    sentences: int = 0
    skipped: int = 0
    errors: List[MalformedLineError] = field(default_factory=list)


def tree_error(tokens) -> Optional[str]:
    """Return why ``tokens`` do not form a single-rooted tree, or None."""
    n = len(tokens)
    if [t.index for t in tokens] != list(range(1, n + 1)):
        return "token ids are not 1..n"
    roots = [t for t in tokens if t.head == 0]
    if len(roots) != 1:
        return f"expected one root, found {len(roots)}"
    for t in tokens:
        if t.head == t.index:
            return f"token {t.index} heads itself"
        if not 0 <= t.head <= n:
            return f"token {t.index} has head {t.head} out of range"
    state = [0] * (n + 1)  # 0 unseen, 1 on current walk, 2 reaches root
    state[0] = 2
    for t in tokens:
        walk = []
        i = t.index
        while state[i] == 0:
            state[i] = 1
            walk.append(i)
            i = tokens[i - 1].head
        if state[i] == 1:
            return f"cycle through token {i}"
        for j in walk:
            state[j] = 2
    return None


def _parse_line(line: str, lineno: int) -> Optional[Token]:
    cols = line.split("\t")
    if len(cols) < 8:
        raise MalformedLineError(lineno, f"expected at least 8 columns, got {len(cols)}")
    if "-" in cols[ID] or "." in cols[ID]:
        return None
    try:
        index = int(cols[ID])
        head = int(cols[HEAD])
    except ValueError:
        raise MalformedLineError(lineno, "non-integer ID or HEAD") from None
    return Token(index, cols[FORM], cols[LEMMA], cols[UPOS], head, cols[DEPREL], cols[XPOS])


def read_conllu(stream: TextIO, stats: Optional[ReadStats] = None) -> Iterator[Sentence]:
    """Yield validated sentences from ``stream``.

    Sentences with malformed lines or broken trees are skipped and counted in
    ``stats``; I/O errors from the stream propagate.
    """
    if stats is None:
        stats = ReadStats()
    tokens: list = []
    bad = False

    def finish():
        if bad:
            stats.skipped += 1
            return None
        reason = tree_error(tokens)
        if reason is not None:
            log.debug("skipping sentence: %s", reason)
            stats.skipped += 1
            return None
        stats.sentences += 1
        return Sentence(tuple(tokens))

    for lineno, line in enumerate(stream, 1):
        line = line.rstrip("\r\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if tokens or bad:
                s = finish()
                if s is not None:
                    yield s
            tokens, bad = [], False
            continue
        if bad:
            continue
        try:
            tok = _parse_line(line, lineno)
        except MalformedLineError as e:
            log.warning("%s", e)
            stats.errors.append(e)
            bad = True
            continue
        if tok is not None:
            tokens.append(tok)
    if tokens or bad:
        s = finish()
        if s is not None:
            yield s
