"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from typing import List, Optional

from .apt import Apt, OffsetView, parse_label
from .composition import PhraseSyntaxError, PhraseTree, compose_tree, parse_phrase
from .config import AppConfig, ConfigError
from .conllu import ReadStats, read_conllu
from .inference import offset_inference
from .lexicon import Lexicon, LexiconFormatError, build, format_record, load, save
from .paths import PathSyntaxError, parse_path, reduce_path
from .similarity import LexemeNotFound, cosine, index_for, ppmi_weight, vectorize

log = logging.getLogger("aptkit")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def resolve(M: Lexicon, query: str) -> str:
    """Map a user query to a lexicon label, accepting ``white`` for ``white/J``."""
    try:
        view = parse_label(query)
    except (ValueError, PathSyntaxError) as e:
        raise UsageError(f"bad query {query!r}: {e}") from None
    base = view.base
    if base not in M:
        matches = [w for w in M.entries if w.rpartition("/")[0] == base]
        if len(matches) == 1:
            base = matches[0]
        elif len(matches) > 1:
            raise DataError(f"ambiguous lexeme {base!r}: {', '.join(sorted(matches))}")
        else:
            raise DataError(f"unknown lexeme {base!r}")
    return str(OffsetView(base, reduce_path(view.offset)))


def _resolve_tree(M: Lexicon, t: PhraseTree) -> PhraseTree:
    return PhraseTree(resolve(M, t.root), tuple((rel, _resolve_tree(M, c)) for rel, c in t.children))


def _config(args) -> AppConfig:
    cfg = AppConfig.load(args.config) if args.config else AppConfig()
    overrides = {}
    for name in ("max_order", "k", "merge_op", "neighbour_weighting", "weighting", "min_frequency",
                 "composition_mode", "intersection_op", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "offset_paths", None) is not None:
        overrides["offset_paths"] = tuple(p for p in args.offset_paths.split(",") if p)
    if getattr(args, "no_pos", False):
        overrides["with_pos"] = False
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _open_lexicon(path: str, cfg: AppConfig) -> Lexicon:
    return load(path, expect_fingerprint=cfg.build_config().fingerprint())


def _write_tsv(out, neighbours) -> None:
    for rank, (label, score) in enumerate(neighbours, 1):
        out.write(f"{rank}\t{label}\t{score:.6f}\n")


def cmd_build(args, cfg: AppConfig, out) -> int:
    stats = ReadStats()
    sentences = []
    for path in args.corpus:
        if path == "-":
            sentences.extend(read_conllu(sys.stdin, stats))
        else:
            with open(path, encoding="utf-8") as f:
                sentences.extend(read_conllu(f, stats))
    lex = build(sentences, cfg.build_config(), workers=cfg.workers)
    save(lex, args.output)
    if not len(lex):
        log.warning("no sentences accepted; wrote an empty lexicon")
    print(f"sentences={stats.sentences} skipped={stats.skipped} lexemes={len(lex)} "
          f"features={lex.n_features()}", file=sys.stderr)
    return EXIT_OK


def cmd_neighbours(args, cfg: AppConfig, out) -> int:
    M = _open_lexicon(args.lexicon, cfg)
    label = resolve(M, args.query)
    _write_tsv(out, index_for(M, cfg.candidate_spec()).query(label, cfg.k))
    return EXIT_OK


def cmd_offset(args, cfg: AppConfig, out) -> int:
    M = _open_lexicon(args.lexicon, cfg)
    label = resolve(M, args.query)
    out.write(format_record(label, index_for(M, cfg.candidate_spec()).counts(label)) + "\n")
    return EXIT_OK


def cmd_vector(args, cfg: AppConfig, out) -> int:
    M = _open_lexicon(args.lexicon, cfg)
    label = resolve(M, args.query)
    vec = index_for(M, cfg.candidate_spec()).vector(label)
    out.write(format_record(label, Apt.from_features(vec.weights)) + "\n")
    return EXIT_OK


def cmd_sim(args, cfg: AppConfig, out) -> int:
    M = _open_lexicon(args.lexicon, cfg)
    index = index_for(M, cfg.candidate_spec())
    a, b = resolve(M, args.a), resolve(M, args.b)
    out.write(f"{cosine(index.vector(a), index.vector(b)):.6f}\n")
    return EXIT_OK


def cmd_infer(args, cfg: AppConfig, out) -> int:
    M = _open_lexicon(args.lexicon, cfg)
    base = resolve(M, args.lexeme)
    try:
        path = reduce_path(parse_path(args.path))
    except PathSyntaxError as e:
        raise UsageError(str(e)) from None
    rep = offset_inference(M, base, path, cfg.inference_config())
    out.write(format_record(str(OffsetView(base, path)), rep) + "\n")
    return EXIT_OK


def cmd_compose(args, cfg: AppConfig, out) -> int:
    try:
        tree = parse_phrase(args.phrase)
    except (PhraseSyntaxError, PathSyntaxError) as e:
        raise UsageError(str(e)) from None
    M = _open_lexicon(args.lexicon, cfg)
    tree = _resolve_tree(M, tree)
    ccfg = cfg.composition_config(inference=args.infer)
    if args.incremental:
        ccfg = dataclasses.replace(ccfg, incremental=True)
    apt = compose_tree(M, tree, ccfg)
    if args.neighbours is None:
        out.write(format_record(str(tree), apt) + "\n")
        return EXIT_OK
    index = index_for(M, cfg.candidate_spec())
    vec = vectorize(apt)
    if cfg.weighting == "ppmi" and not args.infer:
        vec = ppmi_weight(vec, M.marginals)
    _write_tsv(out, index.query_vector(vec, args.neighbours))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aptkit", description="Anchored packed tree distributional models.")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, lexicon=True):
        if lexicon:
            sp.add_argument("lexicon", help="lexicon file written by 'build'")
        sp.add_argument("--max-order", type=int, dest="max_order")
        sp.add_argument("--weighting", choices=("ppmi", "raw"))
        sp.add_argument("--min-frequency", type=float, dest="min_frequency")
        sp.add_argument("--offset-paths", dest="offset_paths", help="comma-separated candidate offsets")
        sp.add_argument("-k", type=int)
        sp.add_argument("--no-pos", action="store_true", dest="no_pos", help="lexicon was built with --no-pos")

    b = sub.add_parser("build", help="build a lexicon from CoNLL-U")
    b.add_argument("corpus", nargs="+", help="CoNLL-U files, '-' for stdin")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--max-order", type=int, dest="max_order")
    b.add_argument("--no-pos", action="store_true", dest="no_pos")
    b.add_argument("--workers", type=int)
    b.set_defaults(func=cmd_build)

    n = sub.add_parser("neighbours", help="nearest neighbours of a lexeme or offset view")
    common(n)
    n.add_argument("query", help="lexeme or lexeme^path")
    n.set_defaults(func=cmd_neighbours)

    o = sub.add_parser("offset", help="print the offset count representation")
    common(o)
    o.add_argument("query")
    o.set_defaults(func=cmd_offset)

    v = sub.add_parser("vector", help="print the weighted vector")
    common(v)
    v.add_argument("query")
    v.set_defaults(func=cmd_vector)

    s = sub.add_parser("sim", help="cosine similarity of two lexemes or views")
    common(s)
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_sim)

    i = sub.add_parser("infer", help="offset inference")
    common(i)
    i.add_argument("lexeme")
    i.add_argument("--path", default="", help="offset path, empty for standard inference")
    i.add_argument("--merge", choices=("add", "min", "max", "mult"), dest="merge_op")
    i.add_argument("--neighbour-weighting", choices=("uniform", "similarity"), dest="neighbour_weighting")
    i.set_defaults(func=cmd_infer)

    c = sub.add_parser("compose", help="compose a phrase")
    common(c)
    c.add_argument("phrase", help="'head rel:dep ...' or a JSON tree")
    c.add_argument("--mode", choices=("union", "intersection"), dest="composition_mode")
    c.add_argument("--intersection-op", choices=("min", "mult"), dest="intersection_op")
    c.add_argument("--infer", action="store_true", help="enrich constituents by offset inference first")
    c.add_argument("--incremental", action="store_true", help="compose subtrees before offsetting")
    c.add_argument("--neighbours", type=int, metavar="K", help="print K neighbours instead of the APT")
    c.set_defaults(func=cmd_compose)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if out is None:
        out = sys.stdout
        if hasattr(out, "reconfigure"):
            out.reconfigure(encoding="utf-8", newline="\n")
    try:
        cfg = _config(args)
        return args.func(args, cfg, out)
    except (UsageError, ConfigError) as e:
        print(f"aptkit: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, LexiconFormatError, LexemeNotFound) as e:
        print(f"aptkit: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"aptkit: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"aptkit: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
