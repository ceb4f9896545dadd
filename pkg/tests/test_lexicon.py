import gzip
import io

import pytest
from hypothesis import given, settings, strategies as st

from aptkit.apt import Apt
from aptkit.conllu import read_conllu
from aptkit.lexicon import (
    BuildConfig,
    Lexicon,
    LexiconFormatError,
    build,
    dumps,
    extract,
    load,
    loads,
    save,
)
from aptkit.paths import EMPTY, invert, parse_path

from corpora import toy_corpus, sent, svo, template_corpus, to_conllu

P = parse_path
WHITE_CLOTHES = sent(("white", "white", "ADJ", 2, "amod"), ("clothes", "clothes", "NOUN", 0, "root"))
CHAIN = svo("she", "prefer", "clothes", adj="white")


def triples(s, **kw):
    return {(w, str(p), c) for w, p, c, _ in extract(s, BuildConfig(**kw))}


def test_extract_white_clothes():
    assert triples(WHITE_CLOTHES) == {
        ("white/J", "", "white/J"), ("white/J", "_amod", "clothes/N"),
        ("clothes/N", "", "clothes/N"), ("clothes/N", "amod", "white/J"),
    }


def test_extract_chain_order_two():
    got = triples(CHAIN)
    assert ("white/J", "_amod._dobj", "prefer/V") in got
    assert ("clothes/N", "_dobj", "prefer/V") in got
    assert ("white/J", "_amod._dobj.nsubj", "she/N") not in got


def test_extract_order_cutoff():
    got = triples(CHAIN, max_order=1)
    assert not any(w == "white/J" and c == "prefer/V" for w, _, c in got)


def test_extract_co_modifier_paths_kept_raw():
    s = sent(("black", "black", "ADJ", 3, "amod"), ("white", "white", "ADJ", 3, "amod"),
             ("shoes", "shoes", "NOUN", 0, "root"))
    assert ("white/J", "_amod.amod", "black/J") in triples(s)


def test_extract_key_modes_and_subtypes():
    s = sent(("Laws", "law", "NOUN", 2, "nsubj:pass"), ("broken", "break", "VERB", 0, "root"),
             ("!", "!", "PUNCT", 2, "punct"))
    got = triples(s, key="form", with_pos=False)
    assert ("laws", "_nsubj-pass", "broken") in got
    # punct edge excluded from paths, the token itself still counted
    assert ("!", "", "!") in got
    assert not any(c == "!" for w, _, c in got if w != "!")


def test_extract_emits_self_once_per_token():
    s = toy_corpus()[6]
    out = extract(s)
    assert sum(1 for _, p, _, _ in out if p == EMPTY) == len(s)


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_extract_symmetry(seed):
    s = template_corpus(5, seed)[0]
    got = {(w, p, c) for w, p, c, _ in extract(s, BuildConfig(max_order=3))}
    for w, p, c in got:
        assert (c, invert(p), w) in got
        # ascend (inverse edges) first, then descend
        dirs = [e.inverse for e in p]
        assert dirs == sorted(dirs, reverse=True)


def test_build_additivity():
    one = build([CHAIN])
    two = build([CHAIN, CHAIN])
    for w, a in one.entries.items():
        assert two[w] == a.scaled(2)


def test_build_figure1_support():
    M = build(toy_corpus())
    feats = dict(M["white/J"].features())
    assert {"_amod:clothes/N", "_amod:shoes/N"} <= set(feats)


def test_marginals_consistent():
    M = build(toy_corpus())
    m = M.compute_marginals()
    assert m == M.marginals
    assert m.grand_total == sum(m.lexeme_totals.values()) == sum(m.feature_totals.values())


def test_self_entries_equal_token_count():
    corpus = template_corpus(200)
    M = build(corpus)
    eps = sum(c for a in M.entries.values() for (p, _), c in a.items() if p == EMPTY)
    assert eps == sum(len(s) for s in corpus)


def test_empty_corpus(caplog):
    M = build([])
    assert len(M) == 0 and M.marginals.grand_total == 0
    assert "empty corpus" in caplog.text


def test_build_from_conllu_text():
    corpus = list(read_conllu(io.StringIO(to_conllu(toy_corpus()))))
    assert build(corpus) == build(toy_corpus())


def test_parallel_equals_sequential():
    corpus = template_corpus(600)
    assert build(corpus, workers=3, shard_size=97) == build(corpus)


def test_fingerprint_depends_on_config():
    assert BuildConfig().fingerprint() == BuildConfig().fingerprint()
    assert BuildConfig().fingerprint() != BuildConfig(max_order=3).fingerprint()
    assert BuildConfig(stoplist={"punct", "det"}).fingerprint() == BuildConfig(stoplist=["det", "punct"]).fingerprint()


# persistence


def test_record_format():
    M = build([WHITE_CLOTHES])
    text = dumps(M).decode()
    assert text == (f"#apt-lexicon v1 {BuildConfig().fingerprint()}\n"
                    "clothes/N\t:clothes/N:1 amod:white/J:1\n"
                    "white/J\t:white/J:1 _amod:clothes/N:1\n")


@pytest.mark.parametrize("lex", [Lexicon(), build(toy_corpus())], ids=["empty", "figure1"])
def test_round_trip(tmp_path, lex):
    f1, f2 = tmp_path / "a.lex.gz", tmp_path / "b.lex.gz"
    save(lex, f1)
    again = load(f1)
    assert again == lex
    save(again, f2)
    assert f1.read_bytes() == f2.read_bytes()


def test_fractional_counts_round_trip():
    lex = Lexicon({"x": Apt({(P(""), "x"): 0.1, (P("amod"), "y"): 2.5, (P("dobj"), "z"): 1e-07})})
    assert loads(dumps(lex)) == lex
    assert dumps(loads(dumps(lex))) == dumps(lex)


def test_truncated_file(tmp_path):
    f = tmp_path / "t.gz"
    save(build(toy_corpus()), f)
    f.write_bytes(f.read_bytes()[:-12])
    with pytest.raises(LexiconFormatError):
        load(f)


def test_checksum_mismatch(tmp_path):
    f = tmp_path / "c.gz"
    save(build(toy_corpus()), f)
    raw = bytearray(f.read_bytes())
    raw[-8] ^= 0xFF  # gzip CRC32 trailer
    f.write_bytes(bytes(raw))
    with pytest.raises(LexiconFormatError):
        load(f)


def test_version_mismatch(tmp_path):
    f = tmp_path / "v.gz"
    f.write_bytes(gzip.compress(b"#apt-lexicon v2 abc\n"))
    with pytest.raises(LexiconFormatError, match="version"):
        load(f)


def test_fingerprint_mismatch():
    data = dumps(build([WHITE_CLOTHES]))
    with pytest.raises(LexiconFormatError, match="fingerprint"):
        loads(data, expect_fingerprint=BuildConfig(max_order=3).fingerprint())


@pytest.mark.parametrize("record", [
    "white/J\t:white/J:x",
    "white/J",
    "white/J\t:white/J:0",
    "white/J\tnofeature",
    "white/J\t.bad:x:1",
])
def test_malformed_record_named(record):
    data = f"#apt-lexicon v1 00\n{record}\n".encode()
    with pytest.raises(LexiconFormatError, match="line 2"):
        loads(data)
