"""Command-line interface: ``dialogsim {distmat,query,eval,report,validate}``."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from pathlib import Path

from .corpus import FORMATS, CorpusError, Corpus, load_corpus, load_stopwords
from .evalx import (
    DEFAULT_TOP_TERMS,
    SWAP_SCOPES,
    feature_report,
    format_feature_table,
    term_intersection,
    term_profile,
)
from .fusion import ShapeMismatch, ranking_matrix, top_k_similar
from .pipeline import MODES, compute_similarity, evaluation_report
from .structsim import DEFAULT_TAU, features_to_csv, structure_distance_matrix
from .textsim import text_distance_matrix

log = logging.getLogger("dialogsim")


class UsageError(Exception):
    pass


def _tau(value: str) -> float:
    tau = float(value)
    if not 0 < tau <= 1:
        raise argparse.ArgumentTypeError(f"--tau must be in (0, 1], got {value}")
    return tau


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="corpus file")
    common.add_argument("--format", choices=FORMATS, default=None,
                        help="corpus format (default: from file extension, .jsonl or transcript)")
    common.add_argument("--stopwords", type=Path, help="stopword file, one term per line")
    common.add_argument("--tau", type=_tau, default=DEFAULT_TAU, help="cycle similarity threshold")
    common.add_argument("--top-terms", type=_positive, default=DEFAULT_TOP_TERMS)
    common.add_argument("--k", type=_positive, default=10, help="neighbours listed by query")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="dialogsim", description="Dialog similarity from text and structure.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distmat", parents=[common], help="write distance and ranking matrices")
    p.add_argument("--mode", choices=MODES, default="combined")

    p = sub.add_parser("query", parents=[common], help="list the most similar dialogs")
    p.add_argument("--id", required=True, dest="dialog_id")
    p.add_argument("--mode", choices=MODES, default="combined")

    p = sub.add_parser("eval", parents=[common], help="ranking MSEs and perturbation baseline")
    p.add_argument("--swap-scope", choices=SWAP_SCOPES, default="matrix")
    p.add_argument("--baseline", choices=("random", "ordered"), default="random")
    p.add_argument("--case", action="append", default=[], metavar="ID",
                   help="add nearest-dialog term intersections for this dialog (repeatable)")

    p = sub.add_parser("report", parents=[common], help="structural features and term intersections")
    p.add_argument("--ids", nargs="+", required=True)
    p.add_argument("--csv", type=Path, help="also write the feature table as CSV")

    sub.add_parser("validate", parents=[common], help="parse and summarize a corpus")
    return parser


def _load(args) -> tuple[Corpus, frozenset[str] | None]:
    corpus = load_corpus(args.input, args.format)
    stoplist = load_stopwords(args.stopwords) if args.stopwords else None
    log.info("loaded %d dialogs from %s", len(corpus), args.input)
    return corpus, stoplist


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def _check_ids(corpus: Corpus, ids) -> None:
    missing = [i for i in ids if i not in set(corpus.ids)]
    if missing:
        raise UsageError(f"unknown dialog id(s): {', '.join(missing)}")


def cmd_distmat(args) -> int:
    corpus, stoplist = _load(args)
    out = args.out
    if args.mode == "text":
        D = text_distance_matrix(corpus, stoplist=stoplist, threads=args.threads)
        _write(out / "D_T.csv", D.to_csv())
        _write(out / "R_T.csv", ranking_matrix(D).to_csv())
    elif args.mode == "structure":
        D = structure_distance_matrix(corpus, args.tau, stoplist, threads=args.threads)
        _write(out / "D_S.csv", D.to_csv())
        _write(out / "R_S.csv", ranking_matrix(D).to_csv())
    else:
        sim = compute_similarity(corpus, args.tau, stoplist, args.threads)
        _write(out / "R_T.csv", sim.R_T.to_csv())
        _write(out / "R_S.csv", sim.R_S.to_csv())
        _write(out / "D_B.csv", sim.D_B.to_csv())
        _write(out / "R_B.csv", sim.R_B.to_csv())
    return 0


def cmd_query(args) -> int:
    corpus, stoplist = _load(args)
    _check_ids(corpus, [args.dialog_id])
    if len(corpus) < 2:
        raise UsageError("query needs a corpus with at least two dialogs")
    if args.mode == "text":
        R = ranking_matrix(text_distance_matrix(corpus, stoplist=stoplist, threads=args.threads))
    elif args.mode == "structure":
        R = ranking_matrix(structure_distance_matrix(corpus, args.tau, stoplist, threads=args.threads))
    else:
        R = compute_similarity(corpus, args.tau, stoplist, args.threads).R_B
    k = min(args.k, len(corpus) - 1)
    for dialog_id, rank in top_k_similar(R, args.dialog_id, k):
        print(f"{dialog_id}\t{rank}")
    return 0


def cmd_eval(args) -> int:
    corpus, stoplist = _load(args)
    _check_ids(corpus, args.case)
    if args.case and len(corpus) < 2:
        raise UsageError("case studies need at least two dialogs")
    sim = compute_similarity(corpus, args.tau, stoplist, args.threads)
    report = evaluation_report(
        corpus, sim, seed=args.seed, swap_scope=args.swap_scope, baseline=args.baseline,
        case_ids=args.case, top_terms=args.top_terms, stoplist=stoplist,
    )
    _write(args.out / "eval.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    _write(args.out / "curve.csv", "swaps,mse\n" + "".join(f"{k},{m:.6f}\n" for k, m in report["curve"]))
    return 0


def cmd_report(args) -> int:
    corpus, stoplist = _load(args)
    _check_ids(corpus, args.ids)
    rows = feature_report(corpus, args.ids, args.tau, stoplist)
    print(format_feature_table(rows), end="")
    if args.csv:
        _write(args.csv, features_to_csv(rows))
    profiles = {i: term_profile(corpus.get(i), args.top_terms, stoplist) for i in args.ids}
    if len(profiles) >= 2:
        print()
        print("term intersections")
        for a, b in itertools.combinations(args.ids, 2):
            print(f"{a} & {b}: {', '.join(sorted(term_intersection([profiles[a], profiles[b]])))}")
        if len(profiles) > 2:
            print(f"all: {', '.join(sorted(term_intersection(profiles.values())))}")
    return 0


def cmd_validate(args) -> int:
    corpus, _ = _load(args)
    turns = [len(d) for d in corpus]
    print(f"{len(corpus)} dialogs, {sum(turns)} turns (min {min(turns)}, max {max(turns)})")
    return 0


COMMANDS = {
    "distmat": cmd_distmat,
    "query": cmd_query,
    "eval": cmd_eval,
    "report": cmd_report,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (CorpusError, UsageError, ShapeMismatch, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"dialogsim: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
