"""CST-to-AST optimization: flatten, alias, and ignore rules.

The concrete trees the parser emits carry every token. Diffing wants a
smaller tree: literals collapsed to single leaves carrying their source
text, grammar-variant node names unified, and formatting-only tokens
dropped. A :class:`TransformRuleSet` declares which node types get which
treatment; :func:`apply_transforms` rebuilds the tree accordingly, keeping
source spans intact.

Rule files are plain text with three sections::

    flatten:
      number_literal
    alias:
      constructor_definition -> function_definition
    ignore:
      comment
      ;

Blank lines and ``#`` comments are allowed. Sections may appear in any
order; missing sections mean empty rule lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tree import SyntaxNode, SyntaxTree


class RuleFileError(Exception):
    """Malformed rule file; ``line`` is 1-based."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class TransformRuleSet:
    """Declarative flatten/alias/ignore rules keyed by node type name.

    The three collections must be pairwise disjoint over node type names,
    and the alias map may not contain chains (no alias target is itself an
    alias source).
    """

    flatten_types: frozenset[str] = field(default_factory=frozenset)
    alias_map: dict[str, str] = field(default_factory=dict)
    ignore_types: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        alias_sources = set(self.alias_map)
        overlaps = (
            (self.flatten_types & alias_sources)
            | (self.flatten_types & self.ignore_types)
            | (alias_sources & self.ignore_types)
        )
        if overlaps:
            raise ValueError(f"rule collections overlap on {sorted(overlaps)}")
        chained = [t for t in self.alias_map.values() if t in alias_sources]
        if chained:
            raise ValueError(f"alias chains through {sorted(set(chained))}")


def default_solidity_rules() -> TransformRuleSet:
    """The shipped Solidity rule set.

    Flattens literal nodes and primitive type names into single leaves,
    unifies the function-definition grammar variants under one name, and
    drops comments plus pure delimiter tokens. The exact list is this
    package's calibration for the grammar in :mod:`soldiff.parser`;
    override it with a rule file when the grammar changes.
    """
    return TransformRuleSet(
        flatten_types=frozenset(
            {
                "number_literal",
                "string_literal",
                "hex_string_literal",
                "boolean_literal",
                "primitive_type",
                "pragma_value",
            }
        ),
        alias_map={
            "constructor_definition": "function_definition",
            "fallback_definition": "function_definition",
            "receive_definition": "function_definition",
            "unchecked_block": "block",
        },
        ignore_types=frozenset({"comment", ";", ",", "{", "}", "(", ")"}),
    )


def apply_transforms(cst: SyntaxTree, rules: TransformRuleSet) -> SyntaxTree:
    """Rebuild ``cst`` with the rules applied; spans are preserved.

    Per node, top down: ignored types are removed with their subtrees,
    then the type is aliased, then (checking the post-alias name) flatten
    collapses the node to a leaf labeled with the exact source text of its
    span. Rules naming unknown node types are inert. The root node is never
    removed. The result is a fresh tree; the input is untouched.
    """
    source_bytes = cst.source_text.encode("utf-8")

    def rebuild(node: SyntaxNode) -> SyntaxNode:
        node_type = rules.alias_map.get(node.node_type, node.node_type)
        if node_type in rules.flatten_types:
            if node.span is not None:
                label = source_bytes[node.span.start : node.span.end].decode("utf-8")
            else:
                label = node.label
            return SyntaxNode(node_type, label, [], node.span)
        children = [
            rebuild(c) for c in node.children if c.node_type not in rules.ignore_types
        ]
        return SyntaxNode(node_type, node.label, children, node.span)

    return SyntaxTree(rebuild(cst.root), cst.source_text)


def parse_rules(text: str) -> TransformRuleSet:
    """Parse rule-file text; raises :class:`RuleFileError` with line info."""
    flatten: dict[str, int] = {}
    alias: dict[str, tuple[str, int]] = {}
    ignore: dict[str, int] = {}
    section: str | None = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("flatten:", "alias:", "ignore:"):
            section = line[:-1]
            continue
        if line.endswith(":"):
            raise RuleFileError(lineno, f"unknown section {line!r}")
        if section is None:
            raise RuleFileError(lineno, "entry before any section header")
        if section == "alias":
            if "->" not in line:
                raise RuleFileError(lineno, "alias entry must be 'source -> target'")
            source, _, target = line.partition("->")
            source, target = source.strip(), target.strip()
            if not source or not target:
                raise RuleFileError(lineno, "alias entry must be 'source -> target'")
            alias[source] = (target, lineno)
        elif "->" in line:
            raise RuleFileError(lineno, f"'->' is only valid in the alias section")
        elif section == "flatten":
            flatten.setdefault(line, lineno)
        else:
            ignore.setdefault(line, lineno)

    for name, (target, lineno) in alias.items():
        if target in alias:
            raise RuleFileError(lineno, f"alias chain: {name} -> {target} -> {alias[target][0]}")
    for name, lineno in flatten.items():
        if name in alias or name in ignore:
            raise RuleFileError(lineno, f"{name!r} appears in more than one section")
    for name, (_, lineno) in alias.items():
        if name in ignore:
            raise RuleFileError(lineno, f"{name!r} appears in more than one section")

    return TransformRuleSet(
        flatten_types=frozenset(flatten),
        alias_map={k: v for k, (v, _) in alias.items()},
        ignore_types=frozenset(ignore),
    )


def load_rules(path: str) -> TransformRuleSet:
    """Load a rule file; enforces the ruleset invariants at load time."""
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def dump_rules(rules: TransformRuleSet) -> str:
    """Serialize a ruleset to the rule-file format (sorted, round-trips)."""
    lines = ["flatten:"]
    lines += [f"  {name}" for name in sorted(rules.flatten_types)]
    lines.append("alias:")
    lines += [f"  {src} -> {dst}" for src, dst in sorted(rules.alias_map.items())]
    lines.append("ignore:")
    lines += [f"  {name}" for name in sorted(rules.ignore_types)]
    return "\n".join(lines) + "\n"


def save_rules(rules: TransformRuleSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_rules(rules))
