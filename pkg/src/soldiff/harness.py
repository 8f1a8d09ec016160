"""Batch differencing over a manifest of contract pairs.

The manifest is a CSV with header ``pairId,before,after,category,
mutationCount`` (the last two columns optional). Each pair produces one
report row; failures of individual pairs become status rows and never
abort the run. Pairs are processed by a worker pool, but rows are written
in manifest order, so report content is independent of scheduling (the
``ms`` timing field is measured wall time and is the only
run-to-run-variable column).
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .editscript import apply_edit_script, edit_distance, generate_edit_script
from .lexer import ParseError
from .linediff import line_diff, line_edit_distance
from .matcher import MatcherConfig, match_trees
from .parser import parse_solidity
from .transforms import TransformRuleSet, apply_transforms, default_solidity_rules
from .tree import SyntaxTree, isomorphic

CSV_COLUMNS = [
    "pairId",
    "status",
    "editDistance",
    "inserts",
    "deletes",
    "updates",
    "moves",
    "lineEditDistance",
    "ms",
    "minHeight",
    "minDice",
    "maxRecoverySize",
    "category",
    "mutationCount",
]

STATUS_OK = "ok"
STATUS_PARSE_ERROR_BEFORE = "parse_error_before"
STATUS_PARSE_ERROR_AFTER = "parse_error_after"
STATUS_INTERNAL_ERROR = "internal_error"


class ManifestError(Exception):
    """The manifest file is unreadable or malformed."""


@dataclass(frozen=True)
class ManifestEntry:
    pair_id: str
    before: str
    after: str
    category: str = ""
    mutation_count: str = ""


@dataclass(frozen=True)
class PairManifest:
    entries: tuple[ManifestEntry, ...]

    @classmethod
    def load(cls, path: str) -> "PairManifest":
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                fields = reader.fieldnames or []
                missing = {"pairId", "before", "after"} - set(fields)
                if missing:
                    raise ManifestError(f"manifest missing columns: {sorted(missing)}")
                entries = []
                for row in reader:
                    entries.append(
                        ManifestEntry(
                            pair_id=row["pairId"],
                            before=row["before"],
                            after=row["after"],
                            category=row.get("category") or "",
                            mutation_count=row.get("mutationCount") or "",
                        )
                    )
        except OSError as exc:
            raise ManifestError(f"cannot read manifest: {exc}") from exc
        ids = [e.pair_id for e in entries]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ManifestError(f"duplicate pairIds: {dupes[:5]}")
        return cls(tuple(entries))

    @staticmethod
    def write(path: str, entries: list[ManifestEntry]) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pairId", "before", "after", "category", "mutationCount"])
            for e in entries:
                writer.writerow([e.pair_id, e.before, e.after, e.category, e.mutation_count])


@dataclass(frozen=True)
class DiffReport:
    """Per-pair outcome; metric fields are None unless status is ``ok``."""

    pair_id: str
    status: str
    edit_distance: int | None
    inserts: int | None
    deletes: int | None
    updates: int | None
    moves: int | None
    line_edit_distance: int | None
    ms: float
    config: MatcherConfig
    category: str = ""
    mutation_count: str = ""

    def row(self) -> list[str]:
        def cell(value) -> str:
            return "" if value is None else str(value)

        return [
            self.pair_id,
            self.status,
            cell(self.edit_distance),
            cell(self.inserts),
            cell(self.deletes),
            cell(self.updates),
            cell(self.moves),
            cell(self.line_edit_distance),
            f"{self.ms:.3f}",
            str(self.config.min_height),
            str(self.config.min_dice),
            str(self.config.max_recovery_size),
            self.category,
            self.mutation_count,
        ]


def diff_pair(
    before_source: str,
    after_source: str,
    rules: TransformRuleSet | None = None,
    cfg: MatcherConfig | None = None,
):
    """Run the full pipeline on two sources; returns (script, before AST, after AST)."""
    rules = rules if rules is not None else default_solidity_rules()
    cfg = cfg or MatcherConfig()
    before_ast = apply_transforms(parse_solidity(before_source), rules)
    after_ast = apply_transforms(parse_solidity(after_source), rules)
    mapping = match_trees(before_ast, after_ast, cfg)
    script = generate_edit_script(before_ast, after_ast, mapping)
    return script, before_ast, after_ast


def run_pair(
    entry: ManifestEntry,
    rules: TransformRuleSet,
    cfg: MatcherConfig,
    verify: bool = False,
) -> DiffReport:
    """Diff one manifest entry; all failures land in the status field."""
    started = time.perf_counter()

    def report(status: str, **kwargs) -> DiffReport:
        ms = (time.perf_counter() - started) * 1000.0
        return DiffReport(
            pair_id=entry.pair_id,
            status=status,
            edit_distance=kwargs.get("edit_distance"),
            inserts=kwargs.get("inserts"),
            deletes=kwargs.get("deletes"),
            updates=kwargs.get("updates"),
            moves=kwargs.get("moves"),
            line_edit_distance=kwargs.get("line_edit_distance"),
            ms=ms,
            config=cfg,
            category=entry.category,
            mutation_count=entry.mutation_count,
        )

    try:
        with open(entry.before, encoding="utf-8") as fh:
            before_source = fh.read()
        with open(entry.after, encoding="utf-8") as fh:
            after_source = fh.read()
    except OSError:
        return report(STATUS_INTERNAL_ERROR)

    line_distance = line_edit_distance(line_diff(before_source, after_source))
    try:
        before_ast = apply_transforms(parse_solidity(before_source), rules)
    except ParseError:
        return report(STATUS_PARSE_ERROR_BEFORE, line_edit_distance=line_distance)
    try:
        after_ast = apply_transforms(parse_solidity(after_source), rules)
    except ParseError:
        return report(STATUS_PARSE_ERROR_AFTER, line_edit_distance=line_distance)

    try:
        mapping = match_trees(before_ast, after_ast, cfg)
        script = generate_edit_script(before_ast, after_ast, mapping)
        if verify:
            result = apply_edit_script(before_ast, script)
            if not isomorphic(result.root, after_ast.root):
                return report(STATUS_INTERNAL_ERROR, line_edit_distance=line_distance)
        counts = script.counts()
    except Exception:
        return report(STATUS_INTERNAL_ERROR, line_edit_distance=line_distance)

    return report(
        STATUS_OK,
        edit_distance=edit_distance(script),
        inserts=counts["insert"],
        deletes=counts["delete"],
        updates=counts["update"],
        moves=counts["move"],
        line_edit_distance=line_distance,
    )


def _worker(args: tuple[ManifestEntry, TransformRuleSet, MatcherConfig, bool]) -> DiffReport:
    entry, rules, cfg, verify = args
    try:
        return run_pair(entry, rules, cfg, verify)
    except Exception:
        # Crash isolation: a failure in any single pair is that pair's row.
        return DiffReport(
            pair_id=entry.pair_id,
            status=STATUS_INTERNAL_ERROR,
            edit_distance=None,
            inserts=None,
            deletes=None,
            updates=None,
            moves=None,
            line_edit_distance=None,
            ms=0.0,
            config=cfg,
            category=entry.category,
            mutation_count=entry.mutation_count,
        )


def run_corpus(
    manifest: PairManifest,
    rules: TransformRuleSet | None = None,
    cfg: MatcherConfig | None = None,
    jobs: int = 1,
    verify: bool = False,
) -> list[DiffReport]:
    """Diff every manifest entry; row order equals manifest order."""
    rules = rules if rules is not None else default_solidity_rules()
    cfg = cfg or MatcherConfig()
    tasks = [(entry, rules, cfg, verify) for entry in manifest.entries]
    if jobs <= 1 or len(tasks) <= 1:
        return [_worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(tasks) // (jobs * 8))
        return list(pool.map(_worker, tasks, chunksize=chunk))


def write_report_csv(path: str, reports: list[DiffReport]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            writer.writerow(report.row())


def summary_text(reports: list[DiffReport]) -> str:
    """Success rate plus edit-distance statistics, per the corpus protocol."""
    total = len(reports)
    ok = [r for r in reports if r.status == STATUS_OK]
    lines = [
        f"pairs: {total}",
        f"ok: {len(ok)}",
        f"success rate: {100.0 * len(ok) / total:.2f}%" if total else "success rate: n/a",
    ]
    if ok:
        dists = [r.edit_distance for r in ok]
        ldists = [r.line_edit_distance for r in ok if r.line_edit_distance is not None]
        lines.append(
            f"edit distance: mean {statistics.mean(dists):.2f}"
            f"  median {statistics.median(dists):g}  max {max(dists)}"
        )
        if ldists:
            lines.append(
                f"line edit distance: mean {statistics.mean(ldists):.2f}"
                f"  median {statistics.median(ldists):g}  max {max(ldists)}"
            )
        by_category: dict[str, list[int]] = {}
        for r in ok:
            if r.category:
                by_category.setdefault(r.category, []).append(r.edit_distance)
        if by_category:
            lines.append("mean edit distance by category:")
            for cat in sorted(by_category):
                values = by_category[cat]
                lines.append(f"  {cat}: {statistics.mean(values):.2f} (n={len(values)})")
    return "\n".join(lines) + "\n"


class ReportCsvError(Exception):
    """The report CSV is unreadable or not a corpus report."""


def summarize_csv(path: str, group_by: str = "none") -> str:
    """Per-group count/mean/median/max table over a corpus report CSV."""
    if group_by not in ("none", "category", "mutationCount"):
        raise ValueError(f"unknown group key {group_by!r}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            if not set(CSV_COLUMNS) <= set(fields):
                raise ReportCsvError("not a corpus report: missing columns")
            rows = list(reader)
    except OSError as exc:
        raise ReportCsvError(f"cannot read report: {exc}") from exc

    groups: dict[str, list[tuple[int, int | None]]] = {}
    totals: dict[str, int] = {}
    for row in rows:
        key = "all" if group_by == "none" else (row[group_by] or "<none>")
        totals[key] = totals.get(key, 0) + 1
        if row["status"] != STATUS_OK:
            continue
        try:
            dist = int(row["editDistance"])
            ldist = int(row["lineEditDistance"]) if row["lineEditDistance"] else None
        except ValueError as exc:
            raise ReportCsvError(f"malformed row for pair {row.get('pairId')}") from exc
        groups.setdefault(key, []).append((dist, ldist))

    header = f"{'group':<20} {'rows':>6} {'ok':>6} " + " ".join(
        f"{h:>10}"
        for h in ["ed.mean", "ed.median", "ed.max", "ld.mean", "ld.median", "ld.max"]
    )
    lines = [header, "-" * len(header)]
    for key in sorted(totals):
        oks = groups.get(key, [])
        dists = [d for d, _ in oks]
        ldists = [l for _, l in oks if l is not None]

        def stats(values: list[int]) -> list[str]:
            if not values:
                return ["-"] * 3
            return [
                f"{statistics.mean(values):.2f}",
                f"{statistics.median(values):g}",
                f"{max(values)}",
            ]

        cells = stats(dists) + stats(ldists)
        lines.append(
            f"{key:<20} {totals[key]:>6} {len(oks):>6} "
            + " ".join(f"{c:>10}" for c in cells)
        )
    return "\n".join(lines) + "\n"
