"""Command-line surface: corpus indexing, training, querying, evaluation,
and result explanation.

Exit codes: 0 success, 1 domain error, 2 I/O error, 3 bad flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import SearchConfig
from .embedding import (
    EmbeddingError,
    TrainConfig,
    index_build,
    load_index,
    load_model,
    save_index,
    save_model,
    train_model,
)
from .engine import (
    EngineError,
    dump_result_document,
    explain_candidate,
    load_result_document,
    make_lookup,
    query as run_engine_query,
    result_document,
)
from .evaluation import (
    CoverageError,
    GroundTruthNotFoundError,
    IdealFormatError,
    classify_document_entry,
    load_ideal,
)
from .extract import ParseError, parse_source
from .model import (
    InterchangeError,
    InvalidDescriptorError,
    load_interchange,
    save_interchange,
)
from .tokens import class_tokens

log = logging.getLogger("cfind")

MODEL_FILE = "model.cfem"
INDEX_FILE = "index.cfix"
CLASSES_FILE = "classes.jsonl"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2
EXIT_FLAGS = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad flags exit with 3, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


class DomainError(Exception):
    pass


def default_home() -> Path:
    return Path(os.environ.get("CF_HOME", Path.cwd() / "cf-home"))


def _add_config_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("search configuration")
    g.add_argument("--tt", type=float, default=0.8, help="type similarity threshold (default 0.8)")
    g.add_argument("--ft", type=float, default=0.5, help="field similarity threshold (default 0.5)")
    g.add_argument("--mt", type=float, default=0.5, help="method similarity threshold (default 0.5)")
    g.add_argument("--fw", type=float, default=0.5, help="field embedding weight (default 0.5)")
    g.add_argument("--mw", type=float, default=0.5, help="method embedding weight (default 0.5)")
    g.add_argument("--inline-depth", type=int, default=5, help="method inlining depth (default 5)")
    g.add_argument("--candidates", type=int, default=1000, help="prefilter size (default 1000)")
    g.add_argument("--top", type=int, default=10, help="results to keep (default 10)")
    g.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    g.add_argument("--jobs", type=int, default=1, help="mapping workers (default 1)")
    g.add_argument("--inherit-depth", type=int, default=3,
                   help="levels of inherited members to merge (default 3)")
    g.add_argument("--include-constructors", action="store_true",
                   help="map constructors like ordinary public methods")
    g.add_argument("--include-own-name", action="store_true",
                   help="add a method's own name to its token bag")
    g.add_argument("--strict-static", action="store_true",
                   help="forbid static/instance method pairs")
    g.add_argument("--strict-return", action="store_true",
                   help="require cast-compatible return types")


def _config_from(args) -> SearchConfig:
    cfg = SearchConfig(
        tt=args.tt, ft=args.ft, mt=args.mt, fw=args.fw, mw=args.mw,
        inline_depth=args.inline_depth, candidates=args.candidates,
        top=args.top, seed=args.seed, jobs=args.jobs,
        inherit_depth=args.inherit_depth,
        include_constructors=args.include_constructors,
        include_own_name=args.include_own_name,
        strict_static=args.strict_static,
        strict_return=args.strict_return,
    )
    cfg.validate()
    return cfg


def _add_train_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("embedding training")
    g.add_argument("--dim", type=int, default=150, help="embedding dimension (default 150)")
    g.add_argument("--window", type=int, default=5, help="context window (default 5)")
    g.add_argument("--negatives", type=int, default=5, help="negative samples (default 5)")
    g.add_argument("--epochs", type=int, default=10, help="training epochs (default 10)")
    g.add_argument("--lr", type=float, default=0.05, help="learning rate (default 0.05)")
    g.add_argument("--min-count", type=int, default=1, help="token count floor (default 1)")
    g.add_argument("--ngram-min", type=int, default=3, help="smallest subword n-gram (default 3)")
    g.add_argument("--ngram-max", type=int, default=6, help="largest subword n-gram (default 6)")
    g.add_argument("--buckets", type=int, default=1 << 21,
                   help="subword hash buckets (default 2^21)")


def _train_config_from(args) -> TrainConfig:
    return TrainConfig(
        dimension=args.dim, window=args.window, negatives=args.negatives,
        epochs=args.epochs, learning_rate=args.lr, min_count=args.min_count,
        ngram_min=args.ngram_min, ngram_max=args.ngram_max,
        buckets=args.buckets, seed=args.seed,
    )


def _ingest(paths: list[str], pattern: str) -> tuple[list, int]:
    """Collect descriptors from source trees and interchange files."""
    classes: list = []
    skipped = 0
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.rglob(pattern)))
            files.extend(sorted(p.rglob("*.jsonl")))
        else:
            files.append(p)
    for f in files:
        data = f.read_bytes()
        if f.suffix == ".jsonl":
            try:
                classes.extend(load_interchange(data))
            except InterchangeError as e:
                log.warning("skipped %s: %s", f, e)
                skipped += 1
            continue
        try:
            classes.extend(parse_source(data.decode("utf-8", "replace"), str(f)))
        except ParseError as e:
            log.warning("skipped %s: %s", f, e)
            classes.extend(e.partial)
            skipped += 1
    return classes, skipped


def cmd_index(args) -> int:
    out = Path(args.out) if args.out else default_home()
    classes, skipped = _ingest(args.sources, args.glob)
    if not classes:
        print("no classes ingested", file=sys.stderr)
        return EXIT_DOMAIN
    tc = _train_config_from(args)
    sentences = [class_tokens(c) for c in classes]
    model = train_model(sentences, tc)
    index = index_build(classes, model)
    out.mkdir(parents=True, exist_ok=True)
    (out / MODEL_FILE).write_bytes(save_model(model))
    (out / INDEX_FILE).write_bytes(save_index(index))
    (out / CLASSES_FILE).write_bytes(save_interchange(classes))
    print(f"indexed {len(classes)} classes ({skipped} files skipped) -> {out}")
    return EXIT_OK


def cmd_train(args) -> int:
    out = Path(args.out) if args.out else default_home()
    classes, skipped = _ingest(args.sources, args.glob)
    if not classes:
        print("no classes ingested", file=sys.stderr)
        return EXIT_DOMAIN
    tc = _train_config_from(args)
    model = train_model([class_tokens(c) for c in classes], tc)
    out.mkdir(parents=True, exist_ok=True)
    (out / MODEL_FILE).write_bytes(save_model(model))
    print(f"trained on {len(classes)} classes ({skipped} files skipped) -> {out / MODEL_FILE}")
    return EXIT_OK


def _load_home(index_dir: str | None):
    home = Path(index_dir) if index_dir else default_home()
    model = load_model((home / MODEL_FILE).read_bytes())
    index = load_index((home / INDEX_FILE).read_bytes())
    corpus = load_interchange((home / CLASSES_FILE).read_bytes())
    return home, model, index, corpus


def _resolve_query(spec: str, corpus) -> object:
    lookup = make_lookup(corpus)
    if spec in lookup:
        return lookup[spec]
    p = Path(spec)
    if p.exists():
        parsed = parse_source(p.read_text("utf-8"), str(p))
        if not parsed:
            raise DomainError(f"no classes in {spec}")
        return parsed[0]
    raise DomainError(f"query '{spec}' is neither a corpus class nor a readable file")


def _print_result_table(doc: dict):
    print(f"query: {doc['query']}")
    header = f"{'rank':>4}  {'class':<44} {'methods':>9} {'score':>8} {'fields':>7} {'ER':>5}"
    print(header)
    print("-" * len(header))
    for r in doc["results"]:
        total = len(r["alpha"])
        print(
            f"{r['rank']:>4}  {r['class']:<44} "
            f"{r['mapped_methods']:>4}/{total:<4} "
            f"{r['method_score_total']:>8.3f} {r['mapped_fields']:>7} "
            f"{r['embedding_rank']:>5}"
        )


def cmd_query(args) -> int:
    _, model, index, corpus = _load_home(args.index)
    cfg = _config_from(args)
    q = _resolve_query(args.query, corpus)
    results = run_engine_query(q, index, corpus, model, cfg)
    doc = result_document(q, results, cfg)
    payload = dump_result_document(doc)
    if args.output:
        Path(args.output).write_bytes(payload)
    if args.format == "structured":
        sys.stdout.write(payload.decode("utf-8"))
    else:
        _print_result_table(doc)
        if args.output:
            print(f"result document -> {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    from .report import (
        render_quality_figure,
        render_rank_figure,
        write_category_table,
        write_summary_table,
    )

    doc = load_result_document(Path(args.results).read_bytes())
    ideal = load_ideal(Path(args.ideal).read_bytes())
    by_class = {r["class"]: r for r in doc["results"]}
    query_name = doc["query"]

    summary_rows = []
    category_rows = []
    breakdowns = []
    ranks = []
    for (q_name, candidate), mapping in ideal.items():
        if q_name != query_name:
            continue
        if candidate not in by_class:
            raise GroundTruthNotFoundError(
                f"candidate '{candidate}' not present in the result document"
            )
        r = by_class[candidate]
        categories, breakdown = classify_document_entry(r["alpha"], mapping)
        breakdowns.append((candidate, breakdown))
        ranks.append((candidate, r["embedding_rank"], r["rank"]))
        summary_rows.append(
            {
                "query": query_name,
                "candidate": candidate,
                "final_rank": r["rank"],
                "embedding_rank": r["embedding_rank"],
                **breakdown.counts(),
                "total": breakdown.total,
                "P": f"{breakdown.replaceable_fraction:.4f}",
                "C": f"{breakdown.correct_fraction:.4f}",
            }
        )
        for method, cat in sorted(categories.items()):
            category_rows.append(
                (
                    query_name, candidate, method, cat,
                    r["alpha"][method]["to"] or "-",
                    mapping.get(method) or "-",
                )
            )
    if not summary_rows:
        raise DomainError(
            f"ideal file has no entries for query '{query_name}'"
        )

    header = (
        f"{'candidate':<44} {'final':>5} {'ER':>5} "
        f"{'C1':>4} {'C2':>4} {'E1':>4} {'E2':>4} {'E3':>4} {'P':>7} {'C':>7}"
    )
    print(header)
    print("-" * len(header))
    for row in summary_rows:
        print(
            f"{row['candidate']:<44} {row['final_rank']:>5} {row['embedding_rank']:>5} "
            f"{row['C1']:>4} {row['C2']:>4} {row['E1']:>4} {row['E2']:>4} {row['E3']:>4} "
            f"{row['P']:>7} {row['C']:>7}"
        )

    out_dir = Path(args.out_dir) if args.out_dir else Path(args.results).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    write_summary_table(out_dir / "eval_summary.tsv", summary_rows)
    write_category_table(out_dir / "method_categories.tsv", category_rows)
    written = [out_dir / "eval_summary.tsv", out_dir / "method_categories.tsv"]
    if args.figures:
        render_quality_figure(out_dir / "quality_breakdown.png", breakdowns)
        render_rank_figure(out_dir / "rank_refinement.png", ranks)
        written += [out_dir / "quality_breakdown.png", out_dir / "rank_refinement.png"]
    print("report files: " + ", ".join(str(w) for w in written))
    return EXIT_OK


def cmd_explain(args) -> int:
    _, model, index, corpus = _load_home(args.index)
    cfg = _config_from(args)
    q = _resolve_query(args.query, corpus)
    lookup = make_lookup(corpus)
    cand = lookup.get(args.candidate)
    if cand is None:
        raise DomainError(f"candidate '{args.candidate}' not found in the corpus")
    detail = explain_candidate(q, cand, index, model, cfg, corpus)
    if args.json:
        json.dump(detail, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return EXIT_OK
    print(f"query {detail['query']} vs candidate {detail['candidate']}")
    print("\nfield score components:")
    for row in detail["field_components"]:
        print(
            f"  {row['query_field']:<20} -> {row['candidate_field']:<20} "
            f"usage={row['usage_score']:+.3f} type={row['type_score']:+.3f} "
            f"blended={row['blended']:+.3f}"
        )
    print("\nfield map:")
    for f, info in detail["sigma"].items():
        print(f"  {f:<20} -> {info['to']:<20} score={info['score']:+.3f}")
    print("\nmethod score components:")
    for row in detail["method_components"]:
        print(
            f"  {row['query_method']:<28} -> {row['candidate_method']:<28} "
            f"emb={row['embedding_score']:+.3f} par={row['parameter_score']:+.3f} "
            f"blended={row['blended']:+.3f}"
        )
    print("\nmethod map:")
    for key, info in detail["alpha"].items():
        target = info["to"] if info["to"] is not None else "(none)"
        score = f"{info['score']:+.3f}" if info["score"] is not None else "  -  "
        print(f"  {key:<28} -> {target:<28} score={score}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfind", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cfind {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="ingest sources, train, and build the index")
    p.add_argument("sources", nargs="+", help="source directories, .java or .jsonl files")
    p.add_argument("--out", help="output directory (default $CF_HOME or ./cf-home)")
    p.add_argument("--glob", default="*.java", help="source filename filter (default *.java)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    _add_train_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("train", help="train the embedding model only")
    p.add_argument("sources", nargs="+")
    p.add_argument("--out", help="output directory (default $CF_HOME or ./cf-home)")
    p.add_argument("--glob", default="*.java")
    p.add_argument("--seed", type=int, default=42)
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("query", help="search for replacement classes")
    p.add_argument("query", help="qualified class name in the corpus, or a source file")
    p.add_argument("--index", help="index directory (default $CF_HOME or ./cf-home)")
    p.add_argument("--output", help="write the structured result document here")
    p.add_argument("--format", choices=("table", "structured"), default="table")
    _add_config_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="score a result document against an ideal mapping")
    p.add_argument("--results", required=True, help="result document from 'query'")
    p.add_argument("--ideal", required=True, help="cf-ideal mapping file")
    p.add_argument("--out-dir", help="where to write tables and figures")
    p.add_argument("--no-figures", dest="figures", action="store_false",
                   help="skip figure rendering")
    p.set_defaults(func=cmd_eval, figures=True)

    p = sub.add_parser("explain", help="dump score components for one candidate")
    p.add_argument("query")
    p.add_argument("candidate")
    p.add_argument("--index", help="index directory (default $CF_HOME or ./cf-home)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    _add_config_flags(p)
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (
        DomainError,
        EngineError,
        EmbeddingError,
        ParseError,
        CoverageError,
        GroundTruthNotFoundError,
        IdealFormatError,
        InterchangeError,
        InvalidDescriptorError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
