"""Ordered labeled trees with source spans.

The same tree type carries both concrete syntax trees (every token a leaf)
and the pruned, diff-optimized form produced by the transform rules. Trees
are immutable after construction: ``SyntaxTree`` assigns preorder ids,
parent links, and per-node structural metrics (height, size, hash) once,
then everything downstream treats nodes as read-only values.

Spans are half-open byte ranges over the UTF-8 encoded source. Nodes
synthesized by edit-script application have no source position; they carry
``span=None`` and render as ``[-1,-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

# Fixed seed/prime pair for the structural hash (FNV-1a, 64 bit). The hash
# must be stable across processes: corpus workers compare hashes computed in
# different interpreters, so Python's salted str hash is not usable here.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range ``[start, end)`` into the UTF-8 source text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start},{self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def render(self) -> str:
        return f"[{self.start},{self.end}]"


# Rendering used for synthesized nodes, which have no source position.
_SYNTHETIC_SPAN = "[-1,-1]"


class SyntaxNode:
    """A node of an ordered labeled tree.

    ``node_type`` is the grammar symbol name (``identifier``, ``visibility``,
    ...); ``label`` is the string value the node carries, empty for purely
    structural nodes. Children order is significant.

    ``id``, ``parent``, ``height``, ``size`` and ``structural_hash`` are
    assigned by :class:`SyntaxTree` and are only valid once the node is part
    of a constructed tree.
    """

    __slots__ = (
        "node_type",
        "label",
        "children",
        "span",
        "id",
        "parent",
        "height",
        "size",
        "structural_hash",
    )

    def __init__(
        self,
        node_type: str,
        label: str = "",
        children: list["SyntaxNode"] | None = None,
        span: SourceSpan | None = None,
    ) -> None:
        self.node_type = node_type
        self.label = label
        self.children: list[SyntaxNode] = children if children is not None else []
        self.span = span
        self.id: int = -1
        self.parent: SyntaxNode | None = None
        self.height: int = 0
        self.size: int = 0
        self.structural_hash: int = 0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SyntaxNode({self.node_type!r}, {self.label!r}, id={self.id})"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def ref(self) -> str:
        """Render the ``nodeType: label [start,end]`` reference form."""
        span = self.span.render() if self.span is not None else _SYNTHETIC_SPAN
        return f"{self.node_type}: {self.label} {span}"

    def preorder(self) -> Iterator["SyntaxNode"]:
        """This node followed by all descendants, depth first."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def postorder(self) -> Iterator["SyntaxNode"]:
        """All descendants then this node, children before parents."""
        stack: list[tuple[SyntaxNode, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                yield node
            else:
                stack.append((node, True))
                stack.extend((c, False) for c in reversed(node.children))


def descendants(node: SyntaxNode) -> list[SyntaxNode]:
    """Strict descendants of ``node`` in preorder (``node`` excluded)."""
    out: list[SyntaxNode] = []
    stack = list(reversed(node.children))
    while stack:
        n = stack.pop()
        out.append(n)
        stack.extend(reversed(n.children))
    return out


def height(node: SyntaxNode) -> int:
    """Height with leaves at 1; computed, not the cached annotation."""
    result = 0
    stack = [(node, 1)]
    while stack:
        n, depth = stack.pop()
        if not n.children:
            result = max(result, depth)
        else:
            stack.extend((c, depth + 1) for c in n.children)
    return result


def _mix(h: int, value: int) -> int:
    h ^= value & _MASK64
    return (h * _FNV_PRIME) & _MASK64


def _hash_bytes(h: int, data: bytes) -> int:
    for b in data:
        h = _mix(h, b)
    return h


def structural_hash(node: SyntaxNode) -> int:
    """Deterministic hash of (node_type, label, ordered child hashes).

    Independent of spans and ids, equal for isomorphic subtrees. Collisions
    are tolerated: the matcher re-verifies candidates with ``isomorphic``.
    """
    memo: dict[int, int] = {}
    for n in node.postorder():
        h = _FNV_OFFSET
        h = _hash_bytes(h, n.node_type.encode("utf-8"))
        h = _mix(h, 0x1F)  # separator between type and label
        h = _hash_bytes(h, n.label.encode("utf-8"))
        for child in n.children:
            h = _mix(h, memo[id(child)])
        memo[id(n)] = h
    return memo[id(node)]


def isomorphic(a: SyntaxNode, b: SyntaxNode) -> bool:
    """Structural equality: types, labels, and child shapes, ignoring spans."""
    if a is b:
        return True
    # Cached hashes give a sound fast reject once trees are constructed.
    if a.structural_hash and b.structural_hash and a.structural_hash != b.structural_hash:
        return False
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x.node_type != y.node_type or x.label != y.label:
            return False
        if len(x.children) != len(y.children):
            return False
        stack.extend(zip(x.children, y.children))
    return True


class SyntaxTree:
    """An immutable tree: root, source text, and an id -> node index.

    Construction assigns preorder ids (deterministic for a given input),
    parent links, and bottom-up metrics. ``node_count`` equals the number of
    nodes reachable from the root, each of which appears exactly once in
    ``node_index``.
    """

    __slots__ = ("root", "source_text", "node_index", "node_count")

    def __init__(self, root: SyntaxNode, source_text: str = "") -> None:
        self.root = root
        self.source_text = source_text
        self.node_index: dict[int, SyntaxNode] = {}
        next_id = 0
        for node in root.preorder():
            node.id = next_id
            self.node_index[next_id] = node
            next_id += 1
            for child in node.children:
                child.parent = node
        root.parent = None
        self.node_count = next_id
        self._annotate()

    def _annotate(self) -> None:
        hash_memo: dict[int, int] = {}
        for node in self.root.postorder():
            if node.children:
                node.height = 1 + max(c.height for c in node.children)
                node.size = 1 + sum(c.size for c in node.children)
            else:
                node.height = 1
                node.size = 1
            h = _FNV_OFFSET
            h = _hash_bytes(h, node.node_type.encode("utf-8"))
            h = _mix(h, 0x1F)
            h = _hash_bytes(h, node.label.encode("utf-8"))
            for child in node.children:
                h = _mix(h, hash_memo[id(child)])
            hash_memo[id(node)] = h
            node.structural_hash = h

    def node(self, node_id: int) -> SyntaxNode:
        return self.node_index[node_id]

    def preorder(self) -> Iterator[SyntaxNode]:
        return self.root.preorder()

    def postorder(self) -> Iterator[SyntaxNode]:
        return self.root.postorder()

    def dump(self) -> str:
        """Debug text form: one node per line, indentation = depth.

        Each line is ``nodeType: label [start,end]`` indented two spaces per
        tree level. Synthesized nodes print ``[-1,-1]``.
        """
        lines: list[str] = []
        stack: list[tuple[SyntaxNode, int]] = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            lines.append("  " * depth + node.ref())
            stack.extend((c, depth + 1) for c in reversed(node.children))
        return "\n".join(lines) + "\n"


def clone_subtree(node: SyntaxNode) -> SyntaxNode:
    """Deep copy of a subtree, keeping types, labels, and spans only."""
    copy = SyntaxNode(node.node_type, node.label, span=node.span)
    copy.children = [clone_subtree(c) for c in node.children]
    return copy
