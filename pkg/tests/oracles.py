"""Independent reference implementations used to check the product code.

Nothing here imports from the modules under test beyond the plain tree
type. The script-length counter re-derives the documented accounting from
scratch; the brute-force searcher enumerates every bijective type-consistent
mapping; the LCS oracle is the textbook quadratic recurrence.
"""

from __future__ import annotations

from soldiff.tree import SyntaxNode, SyntaxTree

INF = 1 << 30


def lcs_length(a: list[str], b: list[str]) -> int:
    """Quadratic LCS table; the reference for minimal line diffs."""
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[len(b)]


def _lis_length(values: list[int]) -> int:
    if not values:
        return 0
    best = [1] * len(values)
    for i in range(len(values)):
        for j in range(i):
            if values[j] < values[i]:
                best[i] = max(best[i], best[j] + 1)
    return max(best)


def script_length(src: SyntaxTree, dst: SyntaxTree, s2d: dict[int, int]) -> int:
    """Actions implied by a mapping, derived from the documented rules.

    updates: mapped pairs with differing labels. moves: mapped pairs whose
    parents do not correspond, plus kept children outside a longest
    increasing subsequence per mapped parent pair. inserts: one per maximal
    fully-unmapped destination subtree, one per other unmapped destination
    node. deletes: one per unmapped source node whose parent is mapped or
    absent.
    """
    d2s = {d: s for s, d in s2d.items()}
    cost = 0

    for s_id, d_id in s2d.items():
        x, y = src.node(s_id), dst.node(d_id)
        if x.label != y.label:
            cost += 1
        px, py = x.parent, y.parent
        if px is None and py is None:
            continue
        if px is None or py is None or s2d.get(px.id) != py.id:
            cost += 1

    # Order moves under each mapped parent pair.
    for s_id, d_id in s2d.items():
        x, y = src.node(s_id), dst.node(d_id)
        if not x.children or not y.children:
            continue
        src_pos = {c.id: i for i, c in enumerate(x.children)}
        kept = []
        for c in y.children:
            partner = d2s.get(c.id)
            if partner is not None and partner in src_pos:
                kept.append(src_pos[partner])
        cost += len(kept) - _lis_length(kept)

    # Inserts over the destination tree.
    def fully_unmapped(n: SyntaxNode) -> bool:
        if n.id in d2s:
            return False
        return all(fully_unmapped(c) for c in n.children)

    stack = [dst.root]
    while stack:
        n = stack.pop()
        if n.id not in d2s:
            if fully_unmapped(n):
                cost += 1
                continue
            cost += 1
        stack.extend(n.children)

    # Deletes over the source tree.
    for n in src.preorder():
        if n.id in s2d:
            continue
        if n.parent is None or n.parent.id in s2d:
            cost += 1
    return cost


def best_mapping_cost(src: SyntaxTree, dst: SyntaxTree) -> int:
    """Exhaustive minimum of :func:`script_length` over valid mappings.

    Enumerates every assignment of source nodes to unused, type-equal
    destination nodes (or to nothing), with a cheap admissible bound to
    skip hopeless branches.
    """
    src_nodes = list(src.preorder())
    dst_by_type: dict[str, list[SyntaxNode]] = {}
    for n in dst.preorder():
        dst_by_type.setdefault(n.node_type, []).append(n)

    best = [INF]
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def bound_updates() -> int:
        count = 0
        for s_id, d_id in assignment.items():
            if src.node(s_id).label != dst.node(d_id).label:
                count += 1
        return count

    def dfs(index: int) -> None:
        if bound_updates() >= best[0]:
            return
        if index == len(src_nodes):
            cost = script_length(src, dst, assignment)
            if cost < best[0]:
                best[0] = cost
            return
        node = src_nodes[index]
        for cand in dst_by_type.get(node.node_type, []):
            if cand.id in used:
                continue
            used.add(cand.id)
            assignment[node.id] = cand.id
            dfs(index + 1)
            del assignment[node.id]
            used.discard(cand.id)
        dfs(index + 1)

    dfs(0)
    return best[0]


def parse_dump(text: str) -> SyntaxNode:
    """Rebuild a tree from the debug dump format (indent = depth)."""
    root: SyntaxNode | None = None
    stack: list[tuple[int, SyntaxNode]] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        depth = (len(line) - len(line.lstrip(" "))) // 2
        body = line.strip()
        head, _, _ = body.rpartition(" [")
        node_type, _, label = head.partition(": ")
        node = SyntaxNode(node_type, label)
        if depth == 0:
            root = node
        else:
            while stack and stack[-1][0] >= depth:
                stack.pop()
            stack[-1][1].children.append(node)
        stack.append((depth, node))
    assert root is not None
    return root


def dump_height(node: SyntaxNode) -> int:
    """Straightforward recursive height over a reconstructed dump tree."""
    if not node.children:
        return 1
    return 1 + max(dump_height(c) for c in node.children)
