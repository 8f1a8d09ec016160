"""Edit scripts: derive from a mapping, apply, measure, serialize.

A script is an ordered list of insert/delete/update/move actions that
transforms the source tree into one isomorphic to the destination tree.
Generation follows the classic change-detection recipe: walk the
destination in preorder emitting inserts, label updates, and moves (moves
of kept siblings are minimized via a longest increasing subsequence), then
delete leftover source nodes in postorder. Two accounting rules keep the
distance metric meaningful:

- inserting a subtree none of whose nodes are mapped is one action;
- symmetrically, deleting a maximal unmapped source subtree is one action.

Both rules collapse whole blocks of new or removed code into single script
entries; a node that is both relabeled and relocated costs two actions.

Application re-executes a script mechanically against a working copy and
is the verification inverse of generation: ``apply_edit_script(src,
generate_edit_script(src, dst, m))`` is isomorphic to ``dst``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .matcher import MappingStore, _longest_increasing
from .tree import SourceSpan, SyntaxNode, SyntaxTree, clone_subtree

KINDS = ("insert", "delete", "update", "move")


class InvalidMapping(Exception):
    """The mapping handed to the generator violates its invariants."""


class ApplyError(Exception):
    """A script action could not be applied."""

    def __init__(self, action_index: int, reason: str) -> None:
        super().__init__(f"action {action_index}: {reason}")
        self.action_index = action_index
        self.reason = reason


@dataclass(frozen=True)
class NodeRef:
    """A serializable reference to a tree node.

    ``origin`` is ``"src"`` for nodes of the source tree and ``"dst"`` for
    nodes synthesized from the destination (inserted material). Destination
    spans are never source positions, so dst refs render ``[-1,-1]``.
    """

    origin: str
    node_id: int
    node_type: str
    label: str
    span: SourceSpan | None

    def render(self) -> str:
        span = self.span.render() if self.origin == "src" and self.span else "[-1,-1]"
        return f"{self.node_type}: {self.label} {span}"

    def span_list(self) -> list[int]:
        if self.origin == "src" and self.span is not None:
            return [self.span.start, self.span.end]
        return [-1, -1]


def _src_ref(node: SyntaxNode) -> NodeRef:
    return NodeRef("src", node.id, node.node_type, node.label, node.span)


def _dst_ref(node: SyntaxNode) -> NodeRef:
    return NodeRef("dst", node.id, node.node_type, node.label, node.span)


@dataclass(frozen=True)
class EditAction:
    """One edit operation.

    insert: ``node`` (the inserted subtree root), ``parent``, ``position``,
    ``subtree`` (the material to graft; a bare node for single-node
    inserts). delete: ``node``. update: ``node``, ``new_label``.
    move: ``node``, ``parent``, ``position``.
    """

    kind: str
    node: NodeRef
    parent: NodeRef | None = None
    position: int | None = None
    new_label: str | None = None
    subtree: SyntaxNode | None = None


@dataclass
class EditScript:
    actions: list[EditAction] = field(default_factory=list)
    source_tree_id: str = "src"
    dest_tree_id: str = "dst"

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def counts(self) -> dict[str, int]:
        out = {kind: 0 for kind in KINDS}
        for action in self.actions:
            out[action.kind] += 1
        return out


def edit_distance(script: EditScript) -> int:
    """Number of actions; a collapsed subtree insert or delete counts once."""
    return len(script.actions)


# -- generation ---------------------------------------------------------------


class _WNode:
    """Mutable working-tree node used while generating or applying."""

    __slots__ = ("node_type", "label", "children", "parent", "span", "in_order")

    def __init__(self, node_type: str, label: str, span: SourceSpan | None) -> None:
        self.node_type = node_type
        self.label = label
        self.children: list[_WNode] = []
        self.parent: _WNode | None = None
        self.span = span
        self.in_order = False

    def attach(self, child: "_WNode", position: int) -> None:
        child.parent = self
        self.children.insert(position, child)

    def detach(self) -> None:
        if self.parent is not None:
            self.parent.children.remove(self)
            self.parent = None

    def index(self) -> int:
        assert self.parent is not None
        return self.parent.children.index(self)


def _build_working(root: SyntaxNode, registry: dict[int, _WNode]) -> _WNode:
    w = _WNode(root.node_type, root.label, root.span)
    registry[root.id] = w
    for child in root.children:
        cw = _build_working(child, registry)
        cw.parent = w
        w.children.append(cw)
    return w


def generate_edit_script(
    src: SyntaxTree, dst: SyntaxTree, m: MappingStore
) -> EditScript:
    """Derive the edit script turning ``src`` into ``dst`` under mapping ``m``.

    Action order is valid for sequential application: inserts, updates,
    and moves follow destination preorder (sibling-reorder moves are
    emitted when the displaced node is visited), deletes come last in
    source postorder. Raises :class:`InvalidMapping` when ``m`` is not a
    mapping between these two trees.
    """
    _check_mapping(src, dst, m)
    actions: list[EditAction] = []

    wnodes: dict[int, _WNode] = {}
    wroot = _build_working(src.root, wnodes)
    super_root = _WNode("<virtual>", "", None)
    super_root.attach(wroot, 0)

    # Destination-side correspondence: dst id -> working node.
    cmap: dict[int, _WNode] = {}
    for s_node, d_node in m.pairs():
        cmap[d_node.id] = wnodes[s_node.id]

    dst_in_order: dict[int, bool] = {}
    # Per mapped parent pair: dst child ids that keep their relative order.
    stay: set[int] = set()

    def find_pos(d: SyntaxNode, parent_w: _WNode) -> int:
        """Chawathe's FindPos: after the rightmost in-order left sibling."""
        siblings = d.parent.children if d.parent is not None else [d]
        anchor = None
        for sib in siblings:
            if sib is d:
                break
            if dst_in_order.get(sib.id):
                anchor = sib
        if anchor is None:
            return 0
        anchor_w = cmap[anchor.id]
        return anchor_w.index() + 1

    def compute_stays(d: SyntaxNode) -> None:
        """Mark the LIS of kept children so only the minority moves."""
        w = cmap.get(d.id)
        if w is None:
            return
        kept: list[tuple[int, SyntaxNode]] = []  # (current working index, dst child)
        for child in d.children:
            cw = cmap.get(child.id)
            if cw is not None and cw.parent is w:
                kept.append((cw.index(), child))
        indices = [idx for idx, _ in kept]
        for pos in _longest_increasing(indices):
            stay.add(kept[pos][1].id)

    def is_fully_unmapped(d: SyntaxNode) -> bool:
        if m.has_dst(d):
            return False
        return all(not m.has_dst(x) for x in _strict_descendants(d))

    # Destination preorder walk; collapsed inserts skip their subtree.
    stack: list[SyntaxNode] = [dst.root]
    while stack:
        d = stack.pop()
        parent_ref: NodeRef | None
        if d.parent is None:
            parent_w = super_root
            parent_ref = None
        else:
            parent_w = cmap[d.parent.id]
            parent_ref = _wref(d.parent, m)

        if not m.has_dst(d):
            pos = find_pos(d, parent_w)
            if is_fully_unmapped(d):
                subtree = clone_subtree(d)
                actions.append(
                    EditAction("insert", _dst_ref(d), parent_ref, pos, subtree=subtree)
                )
                new_w = _build_wsubtree(subtree)
                parent_w.attach(new_w, pos)
                cmap[d.id] = new_w
                dst_in_order[d.id] = True
                new_w.in_order = True
                continue  # collapsed: do not walk into the subtree
            node_only = SyntaxNode(d.node_type, d.label, [], d.span)
            actions.append(
                EditAction("insert", _dst_ref(d), parent_ref, pos, subtree=node_only)
            )
            new_w = _WNode(d.node_type, d.label, None)
            parent_w.attach(new_w, pos)
            cmap[d.id] = new_w
            dst_in_order[d.id] = True
            new_w.in_order = True
        else:
            s_node = m.src_of(d)
            w = cmap[d.id]
            if s_node.label != d.label:
                actions.append(
                    EditAction("update", _src_ref(s_node), new_label=d.label)
                )
                w.label = d.label
            if w.parent is not parent_w:
                w.detach()
                pos = find_pos(d, parent_w)
                actions.append(EditAction("move", _src_ref(s_node), parent_ref, pos))
                parent_w.attach(w, pos)
            elif d.parent is not None and d.id not in stay:
                w.detach()
                pos = find_pos(d, parent_w)
                actions.append(EditAction("move", _src_ref(s_node), parent_ref, pos))
                parent_w.attach(w, pos)
            dst_in_order[d.id] = True
            w.in_order = True
            compute_stays(d)
        stack.extend(reversed(d.children))

    # Deletes: maximal unmapped source subtrees, source postorder.
    for s_node in src.postorder():
        if m.has_src(s_node):
            continue
        parent = s_node.parent
        if parent is not None and not m.has_src(parent):
            continue  # dies with its nearest unmapped ancestor
        actions.append(EditAction("delete", _src_ref(s_node)))
        wnodes[s_node.id].detach()

    return EditScript(actions)


def _wref(d_parent: SyntaxNode, m: MappingStore) -> NodeRef:
    s_parent = m.src_of(d_parent)
    if s_parent is not None:
        return _src_ref(s_parent)
    return _dst_ref(d_parent)


def _strict_descendants(node: SyntaxNode):
    stack = list(node.children)
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.children)


def _build_wsubtree(node: SyntaxNode) -> _WNode:
    w = _WNode(node.node_type, node.label, None)
    for child in node.children:
        cw = _build_wsubtree(child)
        cw.parent = w
        w.children.append(cw)
    return w


def _check_mapping(src: SyntaxTree, dst: SyntaxTree, m: MappingStore) -> None:
    if m.src is not src or m.dst is not dst:
        raise InvalidMapping("mapping was built over different trees")
    try:
        m.validate()
    except AssertionError as exc:
        raise InvalidMapping(str(exc)) from None


# -- application --------------------------------------------------------------


def apply_edit_script(src: SyntaxTree, script: EditScript) -> SyntaxTree:
    """Apply ``script`` to ``src``, returning the resulting tree.

    The script must have been generated against a tree isomorphic to
    ``src`` (node ids are preorder-deterministic, so references resolve on
    any re-parse of the same source). Nodes synthesized by inserts carry no
    source span. Raises :class:`ApplyError` when a referenced node is
    absent or a position is out of range.
    """
    wnodes: dict[int, _WNode] = {}
    wroot = _build_working(src.root, wnodes)
    super_root = _WNode("<virtual>", "", None)
    super_root.attach(wroot, 0)
    inserted: dict[int, _WNode] = {}

    def resolve(ref: NodeRef, index: int) -> _WNode:
        table = wnodes if ref.origin == "src" else inserted
        node = table.get(ref.node_id)
        if node is None:
            raise ApplyError(index, f"no such node: {ref.render()}")
        return node

    for index, action in enumerate(script.actions):
        if action.kind == "insert":
            parent = super_root if action.parent is None else resolve(action.parent, index)
            assert action.subtree is not None and action.position is not None
            if not 0 <= action.position <= len(parent.children):
                raise ApplyError(index, f"insert position {action.position} out of range")
            new_w = _build_wsubtree(action.subtree)
            parent.attach(new_w, action.position)
            inserted[action.node.node_id] = new_w
        elif action.kind == "update":
            node = resolve(action.node, index)
            assert action.new_label is not None
            node.label = action.new_label
        elif action.kind == "move":
            node = resolve(action.node, index)
            parent = super_root if action.parent is None else resolve(action.parent, index)
            probe = parent
            while probe is not None:
                if probe is node:
                    raise ApplyError(index, "move would create a cycle")
                probe = probe.parent
            node.detach()
            assert action.position is not None
            if not 0 <= action.position <= len(parent.children):
                raise ApplyError(index, f"move position {action.position} out of range")
            parent.attach(node, action.position)
        elif action.kind == "delete":
            node = resolve(action.node, index)
            node.detach()
        else:
            raise ApplyError(index, f"unknown action kind {action.kind!r}")

    if len(super_root.children) != 1:
        raise ApplyError(
            len(script.actions) - 1,
            f"script left {len(super_root.children)} roots behind",
        )
    return SyntaxTree(_freeze(super_root.children[0]))


def _freeze(w: _WNode) -> SyntaxNode:
    node = SyntaxNode(w.node_type, w.label, span=w.span)
    node.children = [_freeze(c) for c in w.children]
    return node


# -- serialization ------------------------------------------------------------


def _attr(value: str) -> str:
    return escape(value, {'"': "&quot;"})


def serialize(script: EditScript, format: str = "xml") -> str:
    """Render a script as ``xml``, ``json``, or ``text``.

    XML emits one element per action named ``<kind>-node`` with a ``tree``
    attribute holding the subject reference; updates add ``label``,
    inserts and moves add ``parent``/``at``. Identical scripts serialize
    to identical bytes in every format.
    """
    if format == "xml":
        lines = []
        for action in script.actions:
            parts = [f'<{action.kind}-node tree="{_attr(action.node.render())}"']
            if action.kind == "update":
                parts.append(f' label="{_attr(action.new_label or "")}"')
            if action.kind in ("insert", "move"):
                if action.parent is not None:
                    parts.append(f' parent="{_attr(action.parent.render())}"')
                parts.append(f' at="{action.position}"')
            parts.append("/>")
            lines.append("".join(parts))
        return "\n".join(lines) + ("\n" if lines else "")
    if format == "json":
        records = []
        for action in script.actions:
            records.append(
                {
                    "kind": action.kind,
                    "nodeType": action.node.node_type,
                    "oldLabel": action.node.label,
                    "span": action.node.span_list(),
                    "newLabel": action.new_label,
                    "parent": action.parent.render() if action.parent else None,
                    "position": action.position,
                }
            )
        return json.dumps(records, indent=2) + "\n"
    if format == "text":
        lines = []
        for action in script.actions:
            if action.kind == "update":
                lines.append(f"update {action.node.render()} -> {action.new_label}")
            elif action.kind == "delete":
                lines.append(f"delete {action.node.render()}")
            else:
                where = action.parent.render() if action.parent else "<root>"
                lines.append(f"{action.kind} {action.node.render()} into {where} at {action.position}")
        return "\n".join(lines) + ("\n" if lines else "")
    raise ValueError(f"unknown format {format!r}")
