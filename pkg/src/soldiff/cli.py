"""Command-line entry points: single-pair diff, corpus runs, summaries.

Exit codes for ``diff``: 0 success, 2 parse error (diagnostic on stderr
names the file and byte position), 1 internal error. ``corpus`` exits 1
when the manifest is unreadable; individual pair failures become report
rows. ``summarize`` exits 1 on a malformed report CSV.

The default transform rules can be overridden with ``--rules FILE`` or the
``SOLDIFF_RULES`` environment variable (the flag wins).
"""

from __future__ import annotations

import argparse
import os
import sys

from .harness import (
    ManifestError,
    PairManifest,
    ReportCsvError,
    run_corpus,
    summarize_csv,
    summary_text,
    write_report_csv,
)
from .editscript import edit_distance, generate_edit_script, serialize
from .lexer import ParseError
from .linediff import unified_diff
from .matcher import MatcherConfig, match_trees
from .parser import GRAMMAR_VERSION, parse_solidity
from .transforms import RuleFileError, TransformRuleSet, apply_transforms, default_solidity_rules, load_rules

RULES_ENV_VAR = "SOLDIFF_RULES"


def _add_matcher_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--min-height", type=int, default=2, metavar="N")
    parser.add_argument("--min-dice", type=float, default=0.5, metavar="X")
    parser.add_argument("--max-recovery-size", type=int, default=100, metavar="N")
    parser.add_argument("--rules", metavar="FILE", help="transform rule file")


def _resolve_rules(args: argparse.Namespace) -> TransformRuleSet:
    path = args.rules or os.environ.get(RULES_ENV_VAR)
    if path:
        return load_rules(path)
    return default_solidity_rules()


def _resolve_config(args: argparse.Namespace) -> MatcherConfig:
    return MatcherConfig(
        min_height=args.min_height,
        min_dice=args.min_dice,
        max_recovery_size=args.max_recovery_size,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soldiff",
        description="Structural differencing for Solidity smart contracts",
    )
    parser.add_argument(
        "--grammar-version",
        action="store_true",
        help="print the Solidity grammar version and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p_diff = sub.add_parser("diff", help="diff two Solidity files")
    p_diff.add_argument("before")
    p_diff.add_argument("after")
    p_diff.add_argument(
        "--format",
        choices=["xml", "json", "text", "unified"],
        default="xml",
        help="edit-script format, or 'unified' for the line-diff baseline",
    )
    p_diff.add_argument("--dump-tree", action="store_true", help="print pruned ASTs")
    _add_matcher_flags(p_diff)

    p_corpus = sub.add_parser("corpus", help="diff every pair in a manifest")
    p_corpus.add_argument("manifest")
    p_corpus.add_argument("--jobs", type=int, default=os.cpu_count() or 1, metavar="N")
    p_corpus.add_argument(
        "--verify",
        action="store_true",
        help="check apply(script) isomorphism for every ok pair",
    )
    p_corpus.add_argument("--out", default="report.csv", metavar="FILE")
    _add_matcher_flags(p_corpus)

    p_sum = sub.add_parser("summarize", help="summary statistics over a report CSV")
    p_sum.add_argument("report")
    p_sum.add_argument(
        "--group-by",
        choices=["none", "category", "mutationCount"],
        default="none",
    )
    return parser


def cmd_diff(args: argparse.Namespace) -> int:
    try:
        rules = _resolve_rules(args)
        cfg = _resolve_config(args)
    except (RuleFileError, ValueError, OSError) as exc:
        print(f"soldiff: {exc}", file=sys.stderr)
        return 1

    sources = []
    for path in (args.before, args.after):
        try:
            with open(path, encoding="utf-8") as fh:
                sources.append(fh.read())
        except OSError as exc:
            print(f"soldiff: cannot read {path}: {exc}", file=sys.stderr)
            return 1

    if args.format == "unified":
        sys.stdout.write(unified_diff(sources[0], sources[1], args.before, args.after))
        return 0

    trees = []
    for path, source in zip((args.before, args.after), sources):
        try:
            trees.append(apply_transforms(parse_solidity(source), rules))
        except ParseError as exc:
            print(f"soldiff: {path}: {exc}", file=sys.stderr)
            return 2

    before_ast, after_ast = trees
    try:
        mapping = match_trees(before_ast, after_ast, cfg)
        script = generate_edit_script(before_ast, after_ast, mapping)
        script.source_tree_id = args.before
        script.dest_tree_id = args.after
    except Exception as exc:  # an internal failure, not a user error
        print(f"soldiff: internal error: {exc}", file=sys.stderr)
        return 1

    if args.dump_tree:
        sys.stdout.write(f"== {args.before} (grammar {GRAMMAR_VERSION})\n")
        sys.stdout.write(before_ast.dump())
        sys.stdout.write(f"== {args.after} (grammar {GRAMMAR_VERSION})\n")
        sys.stdout.write(after_ast.dump())
        sys.stdout.write(f"== edit script ({edit_distance(script)} actions)\n")
    sys.stdout.write(serialize(script, args.format))
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        rules = _resolve_rules(args)
        cfg = _resolve_config(args)
        manifest = PairManifest.load(args.manifest)
    except (ManifestError, RuleFileError, ValueError, OSError) as exc:
        print(f"soldiff: {exc}", file=sys.stderr)
        return 1
    reports = run_corpus(manifest, rules, cfg, jobs=args.jobs, verify=args.verify)
    write_report_csv(args.out, reports)
    sys.stdout.write(summary_text(reports))
    sys.stdout.write(f"report written to {args.out}\n")
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    try:
        sys.stdout.write(summarize_csv(args.report, args.group_by))
    except (ReportCsvError, ValueError) as exc:
        print(f"soldiff: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.grammar_version:
        print(GRAMMAR_VERSION)
        return 0
    if args.command == "diff":
        return cmd_diff(args)
    if args.command == "corpus":
        return cmd_corpus(args)
    if args.command == "summarize":
        return cmd_summarize(args)
    parser.print_help()
    return 0


if __name__ == "__main__":
    sys.exit(main())
