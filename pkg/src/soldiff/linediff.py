"""Minimal line differencing (Myers): the Git-style comparison baseline.

Lines are split on ``\\n`` with a trailing newline-less final line counted
as a line and no whitespace normalization. The diff is LCS-optimal:
``added + removed`` equals ``len(a) + len(b) - 2 * LCS(a, b)``, the
smallest total over all line alignments. Hunks replay to both inputs
byte-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DiffLine:
    """One diff row: ``op`` is ``keep``, ``remove``, or ``add``.

    ``old_lineno``/``new_lineno`` are 1-based and None on the side the line
    does not exist on.
    """

    op: str
    text: str
    old_lineno: int | None
    new_lineno: int | None


@dataclass(frozen=True)
class LineDiffResult:
    added_lines: int
    removed_lines: int
    hunks: tuple[DiffLine, ...]
    a_ends_newline: bool
    b_ends_newline: bool

    def restore_a(self) -> str:
        lines = [h.text for h in self.hunks if h.op in ("keep", "remove")]
        return "\n".join(lines) + ("\n" if self.a_ends_newline else "")

    def restore_b(self) -> str:
        lines = [h.text for h in self.hunks if h.op in ("keep", "add")]
        return "\n".join(lines) + ("\n" if self.b_ends_newline else "")


def split_lines(text: str) -> list[str]:
    if text == "":
        return []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def line_diff(a: str, b: str) -> LineDiffResult:
    """LCS-minimal line diff with deterministic hunk ordering."""
    a_lines = split_lines(a)
    b_lines = split_lines(b)
    ops = _myers(a_lines, b_lines)
    hunks: list[DiffLine] = []
    added = removed = 0
    old_no = new_no = 0
    for op, text in ops:
        if op == "keep":
            old_no += 1
            new_no += 1
            hunks.append(DiffLine("keep", text, old_no, new_no))
        elif op == "remove":
            old_no += 1
            removed += 1
            hunks.append(DiffLine("remove", text, old_no, None))
        else:
            new_no += 1
            added += 1
            hunks.append(DiffLine("add", text, None, new_no))
    return LineDiffResult(
        added_lines=added,
        removed_lines=removed,
        hunks=tuple(hunks),
        a_ends_newline=a.endswith("\n"),
        b_ends_newline=b.endswith("\n"),
    )


def line_edit_distance(result: LineDiffResult) -> int:
    """The baseline metric: total lines marked to remove plus to add."""
    return result.added_lines + result.removed_lines


def _myers(a: list[str], b: list[str]) -> list[tuple[str, str]]:
    """Greedy O(ND) shortest edit script with removals emitted first.

    Lines are interned to ints so comparisons inside the inner loop are
    cheap. The backtrack prefers deletion over insertion at equal cost,
    which fixes the hunk ordering.
    """
    table: dict[str, int] = {}
    xs = [table.setdefault(line, len(table)) for line in a]
    ys = [table.setdefault(line, len(table)) for line in b]
    n, m = len(xs), len(ys)
    if n == 0 and m == 0:
        return []
    max_d = n + m
    # V maps diagonal k -> furthest x; trace keeps V per step for backtrack.
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    found_d = -1
    for d in range(max_d + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, -1) < v.get(k + 1, -1)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and xs[x] == ys[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found_d = d
                break
        if found_d >= 0:
            break
    assert found_d >= 0

    # Backtrack from (n, m) through the stored V snapshots.
    ops_rev: list[tuple[str, str]] = []
    x, y = n, m
    for d in range(found_d, 0, -1):
        vd = trace[d]
        k = x - y
        if k == -d or (k != d and vd.get(k - 1, -1) < vd.get(k + 1, -1)):
            prev_k = k + 1  # insertion
        else:
            prev_k = k - 1  # deletion
        prev_x = vd.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            x -= 1
            y -= 1
            ops_rev.append(("keep", a[x]))
        if prev_k == k + 1:
            y -= 1
            ops_rev.append(("add", b[y]))
        else:
            x -= 1
            ops_rev.append(("remove", a[x]))
    while x > 0 and y > 0:
        x -= 1
        y -= 1
        ops_rev.append(("keep", a[x]))

    ops = list(reversed(ops_rev))
    # Normalize runs so removals precede additions inside each change block.
    normalized: list[tuple[str, str]] = []
    pending_adds: list[tuple[str, str]] = []
    for op in ops:
        if op[0] == "add":
            pending_adds.append(op)
        elif op[0] == "remove":
            normalized.append(op)
        else:
            normalized.extend(pending_adds)
            pending_adds.clear()
            normalized.append(op)
    normalized.extend(pending_adds)
    return normalized


def unified_diff(a: str, b: str, a_name: str = "a", b_name: str = "b", context: int = 3) -> str:
    """Render the minimal diff in unified format for manual inspection."""
    result = line_diff(a, b)
    rows = result.hunks
    if result.added_lines == 0 and result.removed_lines == 0:
        return ""
    changed = [i for i, row in enumerate(rows) if row.op != "keep"]
    blocks: list[tuple[int, int]] = []
    lo = max(changed[0] - context, 0)
    hi = min(changed[0] + context + 1, len(rows))
    for i in changed[1:]:
        if i - context <= hi:
            hi = min(i + context + 1, len(rows))
        else:
            blocks.append((lo, hi))
            lo, hi = max(i - context, 0), min(i + context + 1, len(rows))
    blocks.append((lo, hi))

    out = [f"--- {a_name}", f"+++ {b_name}"]
    for lo, hi in blocks:
        window = rows[lo:hi]
        old_start = next((r.old_lineno for r in window if r.old_lineno), 1)
        new_start = next((r.new_lineno for r in window if r.new_lineno), 1)
        old_count = sum(1 for r in window if r.op in ("keep", "remove"))
        new_count = sum(1 for r in window if r.op in ("keep", "add"))
        out.append(f"@@ -{old_start},{old_count} +{new_start},{new_count} @@")
        marker = {"keep": " ", "remove": "-", "add": "+"}
        out.extend(marker[r.op] + r.text for r in window)
    return "\n".join(out) + "\n"
