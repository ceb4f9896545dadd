import random

import pytest
from hypothesis import given, settings, strategies as st

from aptkit.apt import Apt, merge, offset
from aptkit.inference import InferenceConfig, offset_inference, standard_di
from aptkit.lexicon import build
from aptkit.paths import parse_path
from aptkit.similarity import CandidateSpec, LexemeNotFound, NeighbourIndex, ppmi_apt

from corpora import toy_corpus, random_lexicon
from oracles import brute_neighbours, brute_offset, brute_ppmi, feature

P = parse_path
TOY_SPEC = CandidateSpec(min_frequency=1)


@pytest.fixture(scope="module")
def toy():
    return build(toy_corpus())


def test_k0_is_offset_view_raw(toy):
    cfg = InferenceConfig(k=0, space="raw", candidates=TOY_SPEC)
    assert offset_inference(toy, "white/J", "amod", cfg) == offset(toy["white/J"], P("amod"), 2)


def test_k0_is_offset_view_ppmi(toy):
    cfg = InferenceConfig(k=0, candidates=TOY_SPEC)
    got = offset_inference(toy, "white/J", "amod", cfg)
    assert got == ppmi_apt(offset(toy["white/J"], P("amod"), 2), toy.marginals)


def test_empty_path_is_standard_di(toy):
    cfg = InferenceConfig(k=3, candidates=TOY_SPEC)
    assert offset_inference(toy, "clothes/N", "", cfg) == standard_di(toy, "clothes/N", cfg)


def test_white_amod_k1_by_hand(toy):
    """k=1, add, uniform, PPMI space: the offset view plus its single
    nearest candidate, recomputed from scratch."""
    cfg = InferenceConfig(k=1, merge_op="add", neighbour_weighting="uniform", candidates=TOY_SPEC)
    got = offset_inference(toy, "white/J", "amod", cfg)

    entries = {w: dict(a.items()) for w, a in toy.entries.items()}
    paths = [P(p) for p in TOY_SPEC.offset_paths]
    [(nearest, _)] = brute_neighbours(entries, "white/J", P("amod"), 1, paths, 1, 2)
    assert nearest == "noise/N"

    ft = toy.marginals.feature_totals
    n = toy.marginals.grand_total
    own = brute_ppmi({feature(p, l): c for (p, l), c in brute_offset(entries["white/J"].items(), P("amod")).items()},
                     ft, n)
    nb = brute_ppmi({feature(p, l): c for (p, l), c in entries["noise/N"].items()}, ft, n)
    expected = {f: own.get(f, 0) + nb.get(f, 0) for f in set(own) | set(nb)}
    assert dict(got.features()) == pytest.approx(expected, abs=1e-12)
    assert set(dict(got.features())) == set(expected)


def test_white_amod_k1_raw_space(toy):
    cfg = InferenceConfig(k=1, merge_op="add", neighbour_weighting="uniform", space="raw",
                          candidates=TOY_SPEC)
    nearest = NeighbourIndex(toy, CandidateSpec(min_frequency=1, weighting="raw")).query("white/J^amod", 1)[0]
    expected = merge(offset(toy["white/J"], P("amod"), 2),
                     NeighbourIndex(toy, CandidateSpec(min_frequency=1, weighting="raw")).counts(nearest.label))
    assert offset_inference(toy, "white/J", "amod", cfg) == expected


def test_similarity_scaling(toy):
    base = InferenceConfig(k=2, merge_op="add", neighbour_weighting="uniform", candidates=TOY_SPEC)
    scaled = InferenceConfig(k=2, merge_op="add", neighbour_weighting="similarity", candidates=TOY_SPEC)
    idx = NeighbourIndex(toy, TOY_SPEC)
    acc = idx.representation("white/J^amod")
    for n in idx.query("white/J^amod", 2):
        acc = merge(acc, idx.representation(n.label).scaled(n.score))
    assert offset_inference(toy, "white/J", "amod", scaled) == acc
    assert offset_inference(toy, "white/J", "amod", scaled) != offset_inference(toy, "white/J", "amod", base)


def test_unknown_lexeme(toy):
    with pytest.raises(LexemeNotFound):
        offset_inference(toy, "purple/J", "amod")


def test_k_beyond_candidates_warns(toy, caplog):
    cfg = InferenceConfig(k=10_000, candidates=TOY_SPEC)
    offset_inference(toy, "white/J", "amod", cfg)
    assert "candidates available" in caplog.text


def test_config_validation():
    with pytest.raises(ValueError):
        InferenceConfig(k=-1)
    with pytest.raises(ValueError):
        InferenceConfig(merge_op="avg")


configs = st.builds(
    InferenceConfig,
    k=st.integers(0, 6),
    merge_op=st.sampled_from(["add", "min", "max", "mult"]),
    neighbour_weighting=st.sampled_from(["uniform", "similarity"]),
    space=st.sampled_from(["ppmi", "raw"]),
    candidates=st.just(CandidateSpec(min_frequency=0)),
)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1000), configs)
def test_specialisation_property(seed, cfg):
    M = random_lexicon(random.Random(seed), n_lexemes=10)
    w = random.Random(seed).choice(sorted(M))
    assert offset_inference(M, w, "", cfg) == standard_di(M, w, cfg)


def support(a):
    return set(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.sampled_from(["", "amod", "_dobj"]), st.integers(0, 5))
def test_support_behaviour(seed, path, k):
    M = random_lexicon(random.Random(seed), n_lexemes=10)
    w = sorted(M)[seed % len(M)]
    spec = CandidateSpec(min_frequency=0)
    idx = NeighbourIndex(M, spec)
    label = w + ("^" + path if path else "")
    own = idx.representation(label)
    nbrs = idx.query(label, k)

    added = offset_inference(M, w, path, InferenceConfig(k, "add", "uniform", candidates=spec))
    expected = support(own).union(*(support(idx.representation(n.label)) for n in nbrs))
    assert support(added) == expected

    filtered = offset_inference(M, w, path, InferenceConfig(k, "min", "uniform", candidates=spec))
    assert support(filtered) <= support(own)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.sampled_from(["", "amod", "nsubj"]))
def test_monotone_in_k(seed, path):
    M = random_lexicon(random.Random(seed), n_lexemes=10)
    w = sorted(M)[seed % len(M)]
    prev = None
    for k in range(6):
        cur = offset_inference(M, w, path, InferenceConfig(k, "add", "uniform", space="raw",
                                                            candidates=CandidateSpec(min_frequency=0)))
        if prev is not None:
            assert all(cur.get(key, 0) >= c for key, c in prev.items())
        prev = cur


def test_deterministic(toy):
    cfg = InferenceConfig(k=4, merge_op="mult", candidates=TOY_SPEC)
    assert offset_inference(toy, "white/J", "amod", cfg) == offset_inference(build(toy_corpus()), "white/J",
                                                                               "amod", cfg)


def test_offset_neighbours_contribute_offset_representation(toy):
    cfg = InferenceConfig(k=8, merge_op="add", neighbour_weighting="uniform", space="raw", candidates=TOY_SPEC)
    idx = NeighbourIndex(toy, CandidateSpec(min_frequency=1, weighting="raw"))
    nbrs = idx.query("white/J^amod", 8)
    views = [n.label for n in nbrs if "^" in n.label]
    assert views, "expected some offset views among the neighbours"
    acc = offset(toy["white/J"], P("amod"), 2)
    for n in nbrs:
        base, _, p = n.label.partition("^")
        acc = merge(acc, offset(toy[base], P(p), 2))
    assert offset_inference(toy, "white/J", "amod", cfg) == acc
    assert isinstance(acc, Apt)
