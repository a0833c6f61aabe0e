"""Command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 pattern compile error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import knowledge
from .evaluation import EvalError, annotate_gold, compute_metrics, load_gold, report_table
from .matcher import CompileError, match_sentence
from .pipeline import annotate_conllu, annotate_text, serialize_verdicts
from .preprocess import preprocess_document
from .textmodel import ParseError, ValidationError, document_from_rows

EXIT_OK = 0
EXIT_IO = 1
EXIT_COMPILE = 2


def _load_library(patterns_dir, paper_faithful):
    if patterns_dir:
        return knowledge.load_library_from_dir(patterns_dir, paper_faithful)
    return knowledge.load_default_library(paper_faithful)


def _cmd_annotate(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            payload = fh.read()
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        lib = _load_library(args.patterns, args.paper_faithful)
    except CompileError as exc:
        print(f"pattern compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    except OSError as exc:
        print(f"error: cannot read patterns: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.format == "conllu":
            _, verdicts = annotate_conllu(payload, lib)
        else:
            _, verdicts = annotate_text(payload, lib)
    except (ParseError, ValidationError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_IO

    rendered = serialize_verdicts(verdicts)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        except OSError as exc:
            print(f"error: cannot write output: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    mapping = None
    if args.mapping:
        try:
            with open(args.mapping, encoding="utf-8") as fh:
                mapping = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read mapping: {exc}", file=sys.stderr)
            return EXIT_IO
    try:
        lib = _load_library(args.patterns, args.paper_faithful)
    except CompileError as exc:
        print(f"pattern compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    try:
        gold = load_gold(args.gold, mapping)
        verdicts = annotate_gold(gold, lib)
        report = compute_metrics(gold, verdicts)
    except (OSError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(report_table(report))
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(report.to_json() + "\n")
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def _cmd_patterns(args) -> int:
    try:
        lib = _load_library(args.patterns, args.paper_faithful)
    except CompileError as exc:
        print(f"pattern compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    except OSError as exc:
        print(f"error: cannot read patterns: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.action == "hash":
        print(lib.version)
        return EXIT_OK

    if args.action == "lint":
        findings = knowledge.lint(lib)
        for f in findings:
            where = f.rule_id or f.lexicon or "-"
            print(f"{f.severity:<8} {f.code:<12} {where:<28} {f.message}")
        if not findings:
            print("clean: no findings")
        return EXIT_IO if any(f.severity == knowledge.SEVERITY_ERROR for f in findings) else EXIT_OK

    # action == "test": the bundled group-exemplar suite must be fully covered.
    failures = []
    for case in knowledge.exemplar_cases():
        doc = preprocess_document(document_from_rows([case["text"]]))
        matches = match_sentence(doc.sentences[0], lib, groups=(case["group"],))
        if not any(case["span"] in m.matched_text for m in matches):
            failures.append(case)
    for case in failures:
        print(f"UNCOVERED {case['group']:<18} {case['span']!r} in: {case['text']}")
    print(f"{len(knowledge.exemplar_cases()) - len(failures)}/{len(knowledge.exemplar_cases())} exemplar spans covered")
    return EXIT_IO if failures else EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        host=args.host,
        port=args.port,
        patterns_dir=args.patterns,
        paper_faithful=args.paper_faithful,
    )
    try:
        app = create_app(config)
    except CompileError as exc:
        print(f"pattern compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    uvicorn.run(app, host=config.host, port=config.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sciuncert",
                                     description="Annotate scientific uncertainty in scholarly text.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--patterns", default=os.environ.get("SCIUNCERT_PATTERNS"),
                        help="directory of pattern asset files (default: bundled library)")
    common.add_argument("--paper-faithful", action="store_true",
                        help="drop the post-error-analysis rules")

    p = sub.add_parser("annotate", parents=[common], help="annotate a file, one verdict per sentence")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("conllu", "text"), default="conllu")
    p.add_argument("--output", help="write line-delimited verdict records here (default: stdout)")
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("evaluate", parents=[common], help="score the pipeline against a gold corpus")
    p.add_argument("--gold", required=True)
    p.add_argument("--mapping", help="JSON column-mapping config")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("patterns", parents=[common], help="pattern asset maintenance")
    p.add_argument("action", choices=("lint", "test", "hash"))
    p.set_defaults(func=_cmd_patterns)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default=os.environ.get("SCIUNCERT_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(os.environ.get("SCIUNCERT_PORT", "8000")))
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
