"""Command-line surface: validate, stats, emit-bio, emit-re, prompt,
score-ner, score-re, synthesize, report.

Reports go to the path given by --out ('-' for standard output); one-line
summaries and logs go to standard error. Exit codes: 0 success, 1 data or
validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .evaluate import (
    MatchMode,
    MetricReport,
    CategoryScore,
    ScoringError,
    corpus_to_relation_keys,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    score_ner,
    score_re,
)
from .model import validate_document
from .preprocess import (
    PromptError,
    bio_to_record,
    build_fewshot_prompt,
    emit_bio,
    generate_re_instances,
    instances_to_jsonl,
    window_reachability,
)
from .pubtator import PubTatorParseError, corpus_stats, read_pubtator
from .synthesis import (
    ReferenceLoadError,
    SourceKind,
    aggregate_findings,
    load_findings,
    load_reference_table,
    match_findings,
)

DEFAULT_SEED = 42


class DataError(Exception):
    """Input data problem: reported on stderr, exit code 1."""


def _write_out(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _read_corpus(path: str):
    try:
        return read_pubtator(path)
    except FileNotFoundError:
        raise DataError(f"no such file: {path}")
    except PubTatorParseError as exc:
        raise DataError(f"{path}: {exc}")


def _render_report(report: MetricReport, fmt: str) -> str:
    if fmt == "csv":
        return report_to_csv(report)
    if fmt == "md":
        return report_to_markdown(report)
    return report_to_json(report)


# --- subcommands ---------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    corpus = _read_corpus(args.input)
    n_errors = n_warnings = 0
    lines = []
    for doc in corpus.documents:
        rep = validate_document(doc, strict=args.strict)
        n_errors += len(rep.errors)
        n_warnings += len(rep.warnings)
        for issue in rep.errors:
            lines.append(f"{doc.doc_id}\terror\t{issue}")
        for issue in rep.warnings:
            lines.append(f"{doc.doc_id}\twarning\t{issue}")
    _write_out("".join(line + "\n" for line in lines), args.out)
    _log(
        f"validate: {len(corpus.documents)} documents, "
        f"{n_errors} errors, {n_warnings} warnings"
    )
    return 1 if n_errors else 0


def cmd_stats(args: argparse.Namespace) -> int:
    named = []
    for item in args.splits.split(","):
        if "=" in item:
            name, path = item.split("=", 1)
        else:
            name, path = Path(item).stem, item
        named.append((name, _read_corpus(path)))
    table = corpus_stats(named, case_sensitive=not args.casefold_unique)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "md":
        text = table.to_markdown()
    else:
        text = table.to_json()
    _write_out(text, args.out)
    total = sum(s.abstracts for name, s in table.splits.items() if name != "total")
    _log(f"stats: {len(named)} split(s), {total} abstracts")
    return 0


def _bio_record(doc, split_punct=False):
    return bio_to_record(emit_bio(doc, split_punct=split_punct))


def cmd_emit_bio(args: argparse.Namespace) -> int:
    corpus = _read_corpus(args.input)
    docs = sorted(corpus.documents, key=lambda d: d.doc_id)
    worker = functools.partial(_bio_record, split_punct=args.punct)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(worker, docs))
    else:
        records = [worker(d) for d in docs]
    text = "".join(json.dumps(r) + "\n" for r in records)
    _write_out(text, args.out)
    _log(f"emit-bio: {len(records)} documents")
    return 0


def _re_instances(doc, window=1, context=1, negative_ratio=None, seed=DEFAULT_SEED):
    return generate_re_instances(
        doc, window=window, context=context, negative_ratio=negative_ratio, seed=seed
    )


def cmd_emit_re(args: argparse.Namespace) -> int:
    corpus = _read_corpus(args.input)
    docs = sorted(corpus.documents, key=lambda d: d.doc_id)
    worker = functools.partial(
        _re_instances,
        window=args.window,
        context=args.context,
        negative_ratio=args.negative_ratio,
        seed=args.seed,
    )
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(worker, docs))
    else:
        chunks = [worker(d) for d in docs]
    instances = [inst for chunk in chunks for inst in chunk]
    _write_out(instances_to_jsonl(instances), args.out)
    reach = window_reachability(docs, window=args.window, context=args.context)
    positives = sum(1 for i in instances if i.label is not None)
    _log(
        f"emit-re: {len(instances)} instances ({positives} positive) from "
        f"{len(docs)} documents; gold relations reachable at window="
        f"{args.window}: {reach.reachable}/{reach.total} ({reach.fraction:.4f})"
    )
    return 0


def cmd_prompt(args: argparse.Namespace) -> int:
    examples = _read_corpus(args.examples)
    queries = _read_corpus(args.queries)
    if len(examples.documents) < 5:
        raise DataError(f"{args.examples}: need at least 5 example documents")
    example_docs = list(examples.documents[:5])
    query_docs = list(queries.documents)
    batches = [query_docs[i : i + 5] for i in range(0, len(query_docs), 5)] or [[]]
    try:
        if len(batches) == 1:
            bundle = build_fewshot_prompt(example_docs, batches[0])
            _write_out(bundle.rendered, args.out)
        else:
            for n, batch in enumerate(batches, start=1):
                bundle = build_fewshot_prompt(example_docs, batch)
                if args.out == "-":
                    sys.stdout.write(bundle.rendered)
                else:
                    path = Path(args.out)
                    target = path.with_name(f"{path.stem}.{n:03d}{path.suffix}")
                    target.write_text(bundle.rendered, encoding="utf-8")
    except PromptError as exc:
        raise DataError(str(exc))
    _log(f"prompt: {len(batches)} batch(es), {len(query_docs)} query documents")
    return 0


def cmd_score_ner(args: argparse.Namespace) -> int:
    gold = _read_corpus(args.gold)
    pred = _read_corpus(args.pred)
    try:
        report = score_ner(gold, pred, MatchMode(args.mode))
    except ScoringError as exc:
        raise DataError(str(exc))
    _write_out(_render_report(report, args.format), args.out)
    overall = report.categories["overall"]
    _log(f"score-ner[{args.mode}]: overall F1 {overall.f1:.4f}")
    return 0


def cmd_score_re(args: argparse.Namespace) -> int:
    gold = _read_corpus(args.gold)
    pred = _read_corpus(args.pred)
    keys = corpus_to_relation_keys(pred)
    try:
        report = score_re(gold, keys, label_sensitive=not args.pair_only)
    except ScoringError as exc:
        raise DataError(str(exc))
    _write_out(_render_report(report, args.format), args.out)
    overall = report.categories["overall"]
    _log(f"score-re: overall F1 {overall.f1:.4f}")
    return 0


def cmd_synthesize(args: argparse.Namespace) -> int:
    try:
        with open(args.reference, encoding="utf-8") as fh:
            if args.synonyms:
                with open(args.synonyms, encoding="utf-8") as syn:
                    reference = load_reference_table(fh, syn)
            else:
                reference = load_reference_table(fh)
        if args.findings:
            with open(args.findings, encoding="utf-8") as fh:
                findings = load_findings(fh)
        else:
            name_map = {}
            if args.name_map:
                name_map = json.loads(Path(args.name_map).read_text(encoding="utf-8"))
            corpus = _read_corpus(args.pred)
            findings = aggregate_findings(
                [corpus], name_map=name_map, source_kind=SourceKind(args.source_kind)
            )
    except FileNotFoundError as exc:
        raise DataError(str(exc))
    except ReferenceLoadError as exc:
        raise DataError(str(exc))
    report = match_findings(reference, findings)
    text = report.to_json() if args.format == "json" else report.to_markdown()
    _write_out(text, args.out)
    _log(
        f"synthesize: matched {report.matched_count}/{report.total} "
        f"(coverage {report.coverage:.4f})"
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    try:
        payload = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DataError(str(exc))
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.input}: not valid JSON ({exc})")
    if "categories" in payload:
        report = MetricReport(
            categories={
                name: CategoryScore(c["tp"], c["fp"], c["fn"])
                for name, c in payload["categories"].items()
            }
        )
        _write_out(_render_report(report, args.format), args.out)
    elif "rows" in payload:
        if args.format == "json":
            _write_out(json.dumps(payload, indent=2) + "\n", args.out)
        elif args.format == "csv":
            lines = ["index,finding,source_kind,matched"]
            for row in payload["rows"]:
                finding = str(row["finding"]).replace('"', '""')
                lines.append(
                    f"{row['index']},\"{finding}\",{row['source_kind']},"
                    f"{str(row['matched']).lower()}"
                )
            _write_out("\n".join(lines) + "\n", args.out)
        else:
            lines = ["| # | Finding | Source | Matched |", "|---|---|---|---|"]
            for row in payload["rows"]:
                mark = "✓" if row["matched"] else ""
                lines.append(
                    f"| {row['index']} | {row['finding']} | {row['source_kind']} | {mark} |"
                )
            lines.append("")
            lines.append(f"Matched {payload['matched']} of {payload['total']}")
            _write_out("\n".join(lines) + "\n", args.out)
    else:
        raise DataError(f"{args.input}: unrecognized report shape")
    _log("report: rendered")
    return 0


# --- parser ---------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, formats=("csv", "json", "md")) -> None:
    sub.add_argument("--out", default="-", help="output path, '-' for stdout")
    sub.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biolit",
        description="Parse, preprocess, score, and synthesize biomedical abstract annotations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a PubTator file for data problems")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--strict", action="store_true", help="surface mismatches are errors")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics per split")
    p.add_argument(
        "--splits",
        required=True,
        help="comma-separated paths, optionally name=path pairs",
    )
    p.add_argument(
        "--casefold-unique",
        action="store_true",
        help="count unique mentions case-insensitively",
    )
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("emit-bio", help="token/tag sequences as JSON lines")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--punct", action="store_true", help="split edge punctuation")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_emit_bio)

    p = sub.add_parser("emit-re", help="relation instances as JSON lines")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--window", type=int, default=1, help="max sentence distance")
    p.add_argument("--context", type=int, default=1, help="extra sentences each side")
    p.add_argument("--negative-ratio", type=float, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_emit_re)

    p = sub.add_parser("prompt", help="few-shot annotation prompt(s)")
    p.add_argument("--examples", required=True, help="PubTator file with >= 5 annotated docs")
    p.add_argument("--queries", required=True, help="PubTator file with documents to annotate")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("score-ner", help="strict/relaxed NER metrics per entity type")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    _add_common(p)
    p.set_defaults(func=cmd_score_ner)

    p = sub.add_parser("score-re", help="document-level RE metrics per entity pair")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--pair-only", action="store_true", help="ignore relation labels")
    _add_common(p)
    p.set_defaults(func=cmd_score_re)

    p = sub.add_parser("synthesize", help="coverage of findings against a reference table")
    p.add_argument("--reference", required=True, help="reference CSV")
    p.add_argument("--synonyms", default=None, help="synonyms CSV (alias,canonical)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--findings", help="findings CSV")
    group.add_argument("--pred", help="predicted PubTator corpus")
    p.add_argument("--name-map", default=None, help="JSON file: concept id -> display name")
    p.add_argument("--source-kind", choices=["P", "A"], default="P")
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["md", "json"], default="md")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("--in", dest="input", required=True)
    _add_common(p, formats=("md", "csv", "json"))
    p.set_defaults(func=cmd_report)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        _log(f"error: {exc}")
        return 1


def main() -> None:
    sys.exit(run())
