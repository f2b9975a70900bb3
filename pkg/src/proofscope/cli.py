"""Command-line entry point: parse -> features -> cluster -> graphs and reports."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, sample_corpus_path
from .clustering import (
    MAX_GRANULARITY, MIN_GRANULARITY, ClusteringError, cluster_proofs, nested_partitions,
    nested_proof_partitions, recurrent_cluster,
)
from .corpus import CorpusError, parse_corpus
from .depgraph import GraphError, build_dg1, build_dg2, emit_dep_dot
from .features import (
    DEFAULT_D, DEFAULT_L, Encoder, FeatureError, matrix_csv, statement_matrix, statement_tree,
    statement_vectors,
)
from .proof_features import DEFAULT_G, TacticTable, entry_proof_matrix, proof_csv
from .report import ReportError, automaton_dot, build_automaton, similarity_dot, text_report
from .term_tree import UnboundVariable, tree_dot, tree_text

DOMAIN_ERRORS = (CorpusError, FeatureError, ClusteringError, GraphError, ReportError,
                 UnboundVariable, OSError, KeyError, ValueError)

GRANULARITIES = range(MIN_GRANULARITY, MAX_GRANULARITY + 1)


class UsageError(Exception):
    pass


def _write(text: str, dest):
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _load(path):
    if path is None:
        return parse_corpus(sample_corpus_path().read_text(encoding="utf-8"))
    return parse_corpus(Path(path).read_text(encoding="utf-8"))


def _tactics(args) -> TacticTable:
    table = TacticTable.default()
    return table.extended(args.tactics) if args.tactics else table


def _entry(corpus, name):
    try:
        return corpus.entry(name)
    except KeyError:
        raise KeyError(f"no entry named {name!r}") from None


# --- subcommands ---------------------------------------------------------------

def cmd_validate(args):
    corpus = _load(args.path or args.corpus)
    n_proofs = sum(1 for e in corpus.entries if e.proof)
    print(f"ok: {len(corpus.libraries)} libraries, {len(corpus.primitives)} primitives, "
          f"{len(corpus.entries)} entries ({n_proofs} with proofs)")


def cmd_termtree(args):
    corpus = _load(args.corpus)
    tree = statement_tree(_entry(corpus, args.name), corpus)
    if args.dot is not None:
        _write(tree_dot(tree, args.name), args.dot)
    else:
        sys.stdout.write(tree_text(tree))


def _final_encoder(corpus, args) -> Encoder:
    """Constant codes after recurrent term clustering at the requested granularity."""
    return recurrent_cluster(corpus, args.granularity, args.iters, args.seed, args.D, args.L,
                             args.normalize).encoder


def cmd_features(args):
    corpus = _load(args.corpus)
    entry = _entry(corpus, args.entry)
    encoder = _final_encoder(corpus, args) if args.clustered else Encoder.initial(corpus)
    _write(matrix_csv(statement_matrix(entry, corpus, encoder, args.D, args.L)), args.csv)


def cmd_proof_features(args):
    corpus = _load(args.corpus)
    entry = _entry(corpus, args.entry)
    encoder = _final_encoder(corpus, args) if args.clustered else Encoder.initial(corpus)
    matrix = entry_proof_matrix(entry, corpus, encoder, _tactics(args), args.G,
                                args.allow_unknown_tactics)
    for d in matrix.diagnostics:
        _diag(args, d)
    _write(proof_csv(matrix), args.csv)


def _cluster(corpus, args, kind, granularity):
    """(partition, converged, passes) for one clustering run."""
    result = recurrent_cluster(corpus, granularity, args.iters, args.seed, args.D, args.L,
                               args.normalize)
    if kind == "terms":
        return result.partition, result.converged, result.passes
    part = cluster_proofs(corpus, result.encoder, granularity, args.seed, args.G,
                          _tactics(args), args.allow_unknown_tactics, args.normalize)
    return part, True, 1


def cmd_cluster(args):
    corpus = _load(args.corpus)
    part, converged, passes = _cluster(corpus, args, args.kind, args.granularity)
    for d in part.diagnostics:
        _diag(args, d)
    if not converged:
        _diag(args, f"recurrent clustering did not converge within {passes} passes")
    _write(part.to_json(converged, passes), args.out)


def cmd_depgraph(args):
    corpus = _load(args.corpus)
    if args.root is None and not args.all:
        raise UsageError("depgraph needs a root name or --all")
    graph = build_dg1(corpus, None if args.all else args.root)
    _write(emit_dep_dot(graph), args.dot)


def cmd_libgraph(args):
    corpus = _load(args.corpus)
    _write(emit_dep_dot(build_dg2(corpus)), args.dot)


def _partitions(corpus, args):
    """Base partition and, when --nested is given, the finer one cut from the same tree."""
    if args.nested is None:
        part, _, _ = _cluster(corpus, args, args.kind, args.granularity)
        return part, None
    gs = [args.granularity, args.nested]
    result = recurrent_cluster(corpus, args.granularity, args.iters, args.seed, args.D, args.L,
                               args.normalize)
    if args.kind == "terms":
        vectors = statement_vectors(corpus, result.encoder, args.D, args.L)
        outer, inner = nested_partitions(vectors, gs, args.seed, args.normalize)
    else:
        outer, inner = nested_proof_partitions(corpus, result.encoder, gs, args.seed, args.G,
                                               _tactics(args), args.allow_unknown_tactics,
                                               args.normalize)
    return outer, inner


def cmd_report(args):
    corpus = _load(args.corpus)
    outer, inner = _partitions(corpus, args)
    if args.format == "text":
        text = text_report(outer, corpus, f"{args.kind} clusters at granularity {args.granularity}")
        if inner is not None:
            text += "\n" + text_report(inner, corpus,
                                       f"{args.kind} clusters at granularity {args.nested}")
    elif args.format == "dot":
        text = similarity_dot(outer, inner if inner is not None else outer, f"{args.kind}_similarity")
    else:
        tactics = _tactics(args)
        chunks = []
        for i, members in enumerate((inner or outer).clusters, start=1):
            traces = {m: corpus.entry(m).proof for m in members if corpus.entry(m).proof}
            if not traces:
                continue
            auto = build_automaton(traces, tactics, args.allow_unknown_tactics)
            chunks.append(automaton_dot(auto, f"cluster_{i}"))
        text = "".join(chunks)
    _write(text, args.out)


# --- argument handling ------------------------------------------------------------

def _diag(args, message):
    if getattr(args, "json_diagnostics", False):
        print(json.dumps({"level": "warning", "message": str(message)}), file=sys.stderr)
    else:
        print(f"proofscope: warning: {message}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", help="corpus file (default: the bundled sample)")
    common.add_argument("--D", type=int, default=DEFAULT_D, help="term grid depth")
    common.add_argument("--L", type=int, default=DEFAULT_L, help="term grid width")
    common.add_argument("--G", type=int, default=DEFAULT_G, help="proof goal rows")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--iters", type=int, default=10, help="max recurrent passes")
    common.add_argument("--normalize", action="store_true", help="min-max scale features")
    common.add_argument("--allow-unknown-tactics", action="store_true")
    common.add_argument("--tactics", help="JSON file extending the tactic table")
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("--json-diagnostics", action="store_true")

    p = argparse.ArgumentParser(prog="proofscope", description=__doc__)
    p.add_argument("--version", action="version", version=f"proofscope {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and check a corpus")
    s.add_argument("path", nargs="?")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("termtree", parents=[common], help="show the term-tree of a statement")
    s.add_argument("name")
    s.add_argument("--dot", nargs="?", const="-", help="emit DOT (to a file if given)")
    s.set_defaults(func=cmd_termtree)

    for name, func, help_ in (("features", cmd_features, "term feature matrix as CSV"),
                              ("proof-features", cmd_proof_features, "proof feature table as CSV")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("entry")
        s.add_argument("--csv", nargs="?", const="-", default="-", help="output file")
        s.add_argument("--clustered", action="store_true",
                       help="use constant codes from recurrent clustering")
        s.add_argument("--granularity", type=int, choices=GRANULARITIES, default=3)
        s.set_defaults(func=func)

    s = sub.add_parser("cluster", parents=[common], help="cluster statements or proofs")
    s.add_argument("--kind", choices=("terms", "proofs"), default="terms")
    s.add_argument("--granularity", type=int, choices=GRANULARITIES, default=3)
    s.add_argument("--out", help="partition.json path (default: stdout)")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("depgraph", parents=[common], help="uses graph of a result (DOT)")
    s.add_argument("root", nargs="?")
    s.add_argument("--all", action="store_true", help="whole corpus instead of one root")
    s.add_argument("--dot", nargs="?", const="-", default="-", help="output file")
    s.set_defaults(func=cmd_depgraph)

    s = sub.add_parser("libgraph", parents=[common], help="library import graph (DOT)")
    s.add_argument("--dot", nargs="?", const="-", default="-", help="output file")
    s.set_defaults(func=cmd_libgraph)

    s = sub.add_parser("report", parents=[common], help="hint reports, similarity graphs, automata")
    s.add_argument("--kind", choices=("terms", "proofs"), default="terms")
    s.add_argument("--granularity", type=int, choices=GRANULARITIES, default=3)
    s.add_argument("--nested", type=int, choices=GRANULARITIES)
    s.add_argument("--format", choices=("text", "dot", "automaton"), default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_report)
    return p


def _apply_config(parser, argv):
    """Re-parse with defaults taken from --config so explicit flags still win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {args.config}: {exc}")
    if not isinstance(raw, dict):
        parser.error("config must be a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in raw.items()}
    known = vars(args)
    unknown = sorted(set(defaults) - set(known))
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**defaults)
    args = parser.parse_args(argv)
    for flag in ("granularity", "nested"):
        value = getattr(args, flag, None)
        if value is not None and value not in GRANULARITIES:
            parser.error(f"{flag} must be between 1 and 5")
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = _apply_config(parser, argv)
    if getattr(args, "nested", None) is not None and args.nested <= args.granularity:
        parser.error("--nested must be greater than --granularity")
    for flag in ("D", "L", "G", "iters"):
        if getattr(args, flag) < 1:
            parser.error(f"--{flag} must be positive")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DOMAIN_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if args.json_diagnostics:
            diags = [str(d) for d in getattr(exc, "diagnostics", None) or []]
            print(json.dumps({"level": "error", "message": message, "diagnostics": diags,
                              "line": getattr(exc, "line", None)}), file=sys.stderr)
        else:
            print(f"proofscope: error: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
