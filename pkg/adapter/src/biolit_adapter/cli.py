"""Command line: run a configured model over a PubTator file.

    biolit-adapter run --config config.json --in docs.pubtator --out pred.pubtator
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AdapterConfig
from .encoder import AdapterError, run_encoder_ner
from .llm import run_llm_ner
from .pubtator_lite import read


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biolit-adapter")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="annotate documents with the configured model")
    p.add_argument("--config", required=True, help="adapter config JSON")
    p.add_argument("--in", dest="input", required=True, help="PubTator input file")
    p.add_argument("--out", required=True, help="PubTator prediction output file")
    p.add_argument("--report", default=None, help="write run accounting JSON here")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = AdapterConfig.from_json(args.config)
        docs = read(args.input)
        if config.mode == "encoder-ner":
            output = run_encoder_ner(docs, config)
            accounting = {"documents": len(docs)}
        else:
            report = run_llm_ner(docs, config)
            output = report.output
            accounting = report.to_dict()
        Path(args.out).write_text(output, encoding="utf-8")
        if args.report:
            Path(args.report).write_text(
                json.dumps(accounting, indent=2) + "\n", encoding="utf-8"
            )
    except (AdapterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"annotated {len(docs)} documents -> {args.out}", file=sys.stderr)
    return 0


def main() -> None:
    sys.exit(run())
