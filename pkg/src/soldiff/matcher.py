"""Two-phase tree matching: greedy top-down anchors, bottom-up containers.

Top-down pairs large isomorphic subtrees first (largest height first,
ambiguities resolved by parent similarity, then smallest preorder id) and
maps each accepted anchor wholesale. Bottom-up then matches container
nodes whose descendants are substantially mapped (dice similarity over the
current mapping) and recovers remaining descendant pairs inside each
matched container:

- small leftovers get an exact minimum-edit-cost alignment (branch and
  bound over all type-consistent assignments, crossings allowed);
- mid-size containers get an ordered tree alignment (Selkow-style DP whose
  delete/insert costs collapse whole unmapped subtrees to one action,
  mirroring how the edit-script generator counts);
- containers above the recovery size limit get their children aligned by a
  longest common subsequence over (type, structural hash).

Everything is a pure function over immutable trees; repeated runs produce
identical mappings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree import SyntaxNode, SyntaxTree, descendants, isomorphic

_INF = 1 << 30

# Remnant-size gate and search budget for the exact recovery tier.
_EXACT_REMNANT_LIMIT = 8
_EXACT_SEARCH_BUDGET = 60_000


@dataclass(frozen=True)
class MatcherConfig:
    """Thresholds of the two matching phases.

    ``min_height`` is the smallest subtree height top-down matching
    considers; ``min_dice`` the container-similarity threshold of the
    bottom-up phase; ``max_recovery_size`` the largest per-side subtree
    size still eligible for alignment-based recovery (larger containers
    fall back to child-level LCS).
    """

    min_height: int = 2
    min_dice: float = 0.5
    max_recovery_size: int = 100

    def __post_init__(self) -> None:
        if self.min_height < 1:
            raise ValueError("min_height must be >= 1")
        if not 0.0 <= self.min_dice <= 1.0:
            raise ValueError("min_dice must be within [0, 1]")
        if self.max_recovery_size < 0:
            raise ValueError("max_recovery_size must be >= 0")


class MappingStore:
    """Bijective, type-consistent node correspondence between two trees."""

    def __init__(self, src: SyntaxTree, dst: SyntaxTree) -> None:
        self.src = src
        self.dst = dst
        self._s2d: dict[int, int] = {}
        self._d2s: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._s2d)

    def add(self, s: SyntaxNode, d: SyntaxNode) -> None:
        if s.node_type != d.node_type:
            raise ValueError(f"type mismatch: {s.node_type} vs {d.node_type}")
        if s.id in self._s2d or d.id in self._d2s:
            raise ValueError(f"node already mapped: src {s.id} / dst {d.id}")
        self._s2d[s.id] = d.id
        self._d2s[d.id] = s.id

    def add_subtree(self, s: SyntaxNode, d: SyntaxNode) -> None:
        """Map ``s`` and ``d`` plus all descendants pairwise (isomorphic)."""
        pairs = list(zip(s.preorder(), d.preorder()))
        if len(pairs) != s.size or s.size != d.size:
            raise ValueError("add_subtree requires isomorphic subtrees")
        for x, y in pairs:
            self.add(x, y)

    def has_src(self, s: SyntaxNode) -> bool:
        return s.id in self._s2d

    def has_dst(self, d: SyntaxNode) -> bool:
        return d.id in self._d2s

    def dst_of(self, s: SyntaxNode) -> SyntaxNode | None:
        d_id = self._s2d.get(s.id)
        return None if d_id is None else self.dst.node(d_id)

    def src_of(self, d: SyntaxNode) -> SyntaxNode | None:
        s_id = self._d2s.get(d.id)
        return None if s_id is None else self.src.node(s_id)

    def dst_id_of(self, s_id: int) -> int | None:
        return self._s2d.get(s_id)

    def src_id_of(self, d_id: int) -> int | None:
        return self._d2s.get(d_id)

    def pairs(self) -> list[tuple[SyntaxNode, SyntaxNode]]:
        return [(self.src.node(s), self.dst.node(d)) for s, d in self._s2d.items()]

    def copy(self) -> "MappingStore":
        clone = MappingStore(self.src, self.dst)
        clone._s2d = dict(self._s2d)
        clone._d2s = dict(self._d2s)
        return clone

    def validate(self) -> None:
        """Re-check bijectivity and type consistency (test support)."""
        assert len(self._s2d) == len(self._d2s)
        for s_id, d_id in self._s2d.items():
            assert self._d2s[d_id] == s_id
            assert self.src.node(s_id).node_type == self.dst.node(d_id).node_type


def dice_similarity(a: SyntaxNode, b: SyntaxNode, m: MappingStore) -> float:
    """2 * mapped descendant pairs / (|desc a| + |desc b|); 1 when both empty."""
    da, db = a.size - 1, b.size - 1
    if da == 0 and db == 0:
        return 1.0
    if da == 0 or db == 0:
        return 0.0
    count = 0
    if da <= db:
        lo, hi = b.id, b.id + b.size - 1
        for x in descendants(a):
            y_id = m.dst_id_of(x.id)
            if y_id is not None and lo < y_id <= hi:
                count += 1
    else:
        lo, hi = a.id, a.id + a.size - 1
        for y in descendants(b):
            x_id = m.src_id_of(y.id)
            if x_id is not None and lo < x_id <= hi:
                count += 1
    return 2.0 * count / (da + db)


class _HeightQueue:
    """Open list of subtrees keyed by height, popped tallest first."""

    def __init__(self, root: SyntaxNode) -> None:
        self._by_height: dict[int, list[SyntaxNode]] = {root.height: [root]}
        self.max_height = root.height

    def _settle(self) -> None:
        while self.max_height > 0 and not self._by_height.get(self.max_height):
            self.max_height -= 1

    def pop_max(self) -> list[SyntaxNode]:
        nodes = self._by_height.pop(self.max_height, [])
        self._settle()
        return nodes

    def open_node(self, node: SyntaxNode) -> None:
        for child in node.children:
            self._by_height.setdefault(child.height, []).append(child)
            self.max_height = max(self.max_height, child.height)


def match_top_down(src: SyntaxTree, dst: SyntaxTree, cfg: MatcherConfig) -> MappingStore:
    """Anchor isomorphic subtrees of height >= ``cfg.min_height``.

    Candidate subtrees are processed in decreasing height order. A subtree
    isomorphic to exactly one counterpart is mapped wholesale immediately;
    ambiguous groups are resolved afterwards, preferring pairs whose
    parents have the greatest dice similarity over the anchors mapped so
    far, then smallest preorder ids.
    """
    m = MappingStore(src, dst)
    qa, qb = _HeightQueue(src.root), _HeightQueue(dst.root)
    ambiguous: list[tuple[SyntaxNode, SyntaxNode]] = []

    while qa.max_height >= cfg.min_height and qb.max_height >= cfg.min_height:
        if qa.max_height > qb.max_height:
            for node in qa.pop_max():
                qa.open_node(node)
            continue
        if qb.max_height > qa.max_height:
            for node in qb.pop_max():
                qb.open_node(node)
            continue
        a_nodes, b_nodes = qa.pop_max(), qb.pop_max()
        groups: dict[int, tuple[list[SyntaxNode], list[SyntaxNode]]] = {}
        for node in a_nodes:
            groups.setdefault(node.structural_hash, ([], []))[0].append(node)
        for node in b_nodes:
            groups.setdefault(node.structural_hash, ([], []))[1].append(node)
        for la, lb in groups.values():
            # Split hash groups into true isomorphism classes; the hash is
            # only a pre-screen and collisions must not leak into anchors.
            classes: list[tuple[SyntaxNode, list[SyntaxNode], list[SyntaxNode]]] = []
            for node in la:
                for rep, ca, _ in classes:
                    if isomorphic(rep, node):
                        ca.append(node)
                        break
                else:
                    classes.append((node, [node], []))
            for node in lb:
                for rep, _, cb in classes:
                    if isomorphic(rep, node):
                        cb.append(node)
                        break
                else:
                    classes.append((node, [], [node]))
            for _, ca, cb in classes:
                if len(ca) == 1 and len(cb) == 1:
                    m.add_subtree(ca[0], cb[0])
                elif ca and cb:
                    ambiguous.extend((x, y) for x in ca for y in cb)
                else:
                    for node in ca:
                        qa.open_node(node)
                    for node in cb:
                        qb.open_node(node)

    def parent_dice(pair: tuple[SyntaxNode, SyntaxNode]) -> float:
        pa, pb = pair[0].parent, pair[1].parent
        if pa is None or pb is None:
            return 0.0
        return dice_similarity(pa, pb, m)

    ambiguous.sort(key=lambda pair: (-parent_dice(pair), pair[0].id, pair[1].id))
    for s, d in ambiguous:
        if not m.has_src(s) and not m.has_dst(d):
            m.add_subtree(s, d)
    return m


def match_bottom_up(
    src: SyntaxTree, dst: SyntaxTree, anchors: MappingStore, cfg: MatcherConfig
) -> MappingStore:
    """Extend ``anchors`` with container matches and recovered descendants.

    Source nodes are visited in postorder; an unmapped node with at least
    one mapped descendant is matched to the unmapped destination node of
    the same type with the greatest dice similarity, provided it reaches
    ``cfg.min_dice`` (ties fall to the smallest preorder id). The two tree
    roots are always considered a candidate pair regardless of dice. Every
    matched container pair gets descendant recovery. Never removes a pair
    present in ``anchors``.
    """
    m = anchors.copy()

    # Incremental mapped-descendant counters keyed by node id.
    src_counts: dict[int, int] = {}
    dst_counts: dict[int, int] = {}

    def bump(node: SyntaxNode, counts: dict[int, int]) -> None:
        cur = node.parent
        while cur is not None:
            counts[cur.id] = counts.get(cur.id, 0) + 1
            cur = cur.parent

    for s_node, d_node in m.pairs():
        bump(s_node, src_counts)
        bump(d_node, dst_counts)

    def add_pair(s: SyntaxNode, d: SyntaxNode) -> None:
        m.add(s, d)
        bump(s, src_counts)
        bump(d, dst_counts)

    def candidates_for(s: SyntaxNode) -> list[SyntaxNode]:
        # The destination root is reserved for the source root (the roots
        # are always a candidate pair of their own), so it is not up for
        # grabs by inner containers.
        seen: set[int] = set()
        found: list[SyntaxNode] = []
        for x in descendants(s):
            d = m.dst_of(x)
            if d is None:
                continue
            anc = d.parent
            while anc is not None and anc.id not in seen:
                seen.add(anc.id)
                if (
                    anc is not dst.root
                    and anc.node_type == s.node_type
                    and not m.has_dst(anc)
                ):
                    found.append(anc)
                anc = anc.parent
        found.sort(key=lambda n: n.id)
        return found

    for s in src.postorder():
        if s is src.root or m.has_src(s):
            continue
        if not src_counts.get(s.id):
            continue
        best: SyntaxNode | None = None
        best_dice = -1.0
        for cand in candidates_for(s):
            score = dice_similarity(s, cand, m)
            if score > best_dice:
                best, best_dice = cand, score
        if best is not None and best_dice >= cfg.min_dice:
            add_pair(s, best)
            _recover(s, best, m, cfg, add_pair)

    if (
        not m.has_src(src.root)
        and not m.has_dst(dst.root)
        and src.root.node_type == dst.root.node_type
    ):
        add_pair(src.root, dst.root)
        _recover(src.root, dst.root, m, cfg, add_pair)
    return _refine_small(src, dst, anchors, m)


def _refine_small(
    src: SyntaxTree, dst: SyntaxTree, anchors: MappingStore, m: MappingStore
) -> MappingStore:
    """Revisit the bottom-up phase's own picks on small inputs.

    Greedy container choices can be led astray by a single anchor-dense
    subtree. When few nodes remain unmapped beyond the input anchors, an
    exact alignment over those remnants is affordable; the candidate
    mapping replaces the greedy one only when it implies a shorter script.
    Input anchors are kept either way.
    """
    if m.dst_of(src.root) is not dst.root:
        return m
    rem_src = [
        x for x in src.preorder() if x is not src.root and not anchors.has_src(x)
    ]
    rem_dst = [
        y for y in dst.preorder() if y is not dst.root and not anchors.has_dst(y)
    ]
    if len(rem_src) > _EXACT_REMNANT_LIMIT or len(rem_dst) > _EXACT_REMNANT_LIMIT:
        return m
    if anchors.has_src(src.root) or anchors.has_dst(dst.root):
        return m
    candidate = anchors.copy()
    candidate.add(src.root, dst.root)
    pairs = _exact_alignment(src.root, dst.root, rem_src, rem_dst, candidate)
    if pairs is None:
        return m
    for x, y in pairs:
        candidate.add(x, y)
    if _script_cost(src.root, dst.root, candidate, {}) < _script_cost(
        src.root, dst.root, m, {}
    ):
        return candidate
    return m


def match_trees(
    src: SyntaxTree, dst: SyntaxTree, cfg: MatcherConfig | None = None
) -> MappingStore:
    """Full two-phase matching; deterministic for fixed inputs and config."""
    cfg = cfg or MatcherConfig()
    return match_bottom_up(src, dst, match_top_down(src, dst, cfg), cfg)


# -- descendant recovery ----------------------------------------------------


def _recover(s: SyntaxNode, d: SyntaxNode, m: MappingStore, cfg: MatcherConfig, add_pair) -> None:
    if max(s.size, d.size) > cfg.max_recovery_size:
        _recover_lcs(s, d, m, add_pair)
        return
    rem_src = [x for x in descendants(s) if not m.has_src(x)]
    rem_dst = [y for y in descendants(d) if not m.has_dst(y)]
    if not rem_src or not rem_dst:
        return
    pairs = None
    if len(rem_src) <= _EXACT_REMNANT_LIMIT and len(rem_dst) <= _EXACT_REMNANT_LIMIT:
        pairs = _exact_alignment(s, d, rem_src, rem_dst, m)
    if pairs is None:
        pairs = _ordered_alignment(s, d, m)
    for x, y in pairs:
        if not m.has_src(x) and not m.has_dst(y):
            add_pair(x, y)


def _recover_lcs(s: SyntaxNode, d: SyntaxNode, m: MappingStore, add_pair) -> None:
    """Map isomorphic child subtrees via LCS over (type, structural hash)."""
    xs, ys = s.children, d.children
    rows = len(xs) + 1
    cols = len(ys) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(len(xs) - 1, -1, -1):
        for j in range(len(ys) - 1, -1, -1):
            if (
                xs[i].node_type == ys[j].node_type
                and xs[i].structural_hash == ys[j].structural_hash
            ):
                table[i][j] = table[i + 1][j + 1] + 1
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])
    i = j = 0
    while i < len(xs) and j < len(ys):
        x, y = xs[i], ys[j]
        if x.node_type == y.node_type and x.structural_hash == y.structural_hash:
            if not m.has_src(x) and not m.has_dst(y) and isomorphic(x, y):
                m.add_subtree(x, y)
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1


def _longest_increasing(values: list[int]) -> set[int]:
    """Indices of one deterministic longest strictly increasing subsequence."""
    n = len(values)
    if n == 0:
        return set()
    best_len = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            if values[j] < values[i] and best_len[j] + 1 > best_len[i]:
                best_len[i] = best_len[j] + 1
                prev[i] = j
    end = max(range(n), key=lambda i: (best_len[i], -i))
    keep: set[int] = set()
    while end != -1:
        keep.add(end)
        end = prev[end]
    return keep


def _exact_alignment(
    s: SyntaxNode,
    d: SyntaxNode,
    rem_src: list[SyntaxNode],
    rem_dst: list[SyntaxNode],
    m: MappingStore,
) -> list[tuple[SyntaxNode, SyntaxNode]] | None:
    """Minimum-edit-cost assignment of the unmapped remnants, crossings allowed.

    Branch-and-bound over all type-consistent assignments; cost model is
    the edit-script accounting (label updates, parent/order moves, collapsed
    subtree inserts and deletes). Returns None when the search budget runs
    out, in which case the caller falls back to the ordered alignment.
    """
    by_type: dict[str, list[SyntaxNode]] = {}
    for y in rem_dst:
        by_type.setdefault(y.node_type, []).append(y)

    budget = [_EXACT_SEARCH_BUDGET]
    best_cost = [_INF]
    best_assign: list[dict[int, SyntaxNode] | None] = [None]

    def evaluate(assign: dict[int, SyntaxNode]) -> int:
        return _script_cost(s, d, m, assign)

    taken: set[int] = set()
    current: dict[int, SyntaxNode] = {}

    def dfs(i: int) -> None:
        if budget[0] <= 0:
            return
        budget[0] -= 1
        if i == len(rem_src):
            cost = evaluate(current)
            if cost < best_cost[0]:
                best_cost[0] = cost
                best_assign[0] = dict(current)
            return
        x = rem_src[i]
        for y in by_type.get(x.node_type, []):
            if y.id in taken:
                continue
            taken.add(y.id)
            current[x.id] = y
            dfs(i + 1)
            del current[x.id]
            taken.discard(y.id)
        dfs(i + 1)  # leave x unmapped

    dfs(0)
    if budget[0] <= 0 or best_assign[0] is None:
        return None
    return [(m.src.node(s_id), y) for s_id, y in best_assign[0].items()]


def _script_cost(
    s: SyntaxNode, d: SyntaxNode, m: MappingStore, extra: dict[int, SyntaxNode]
) -> int:
    """Edit actions implied inside container pair (s, d) by ``m`` + ``extra``.

    Mirrors the generator's accounting: one action per label update, per
    displaced mapped node (wrong parent or outside the kept-children LIS),
    per maximal fully-unmapped destination subtree or unmapped destination
    node with mapped descendants, and per maximal unmapped source node.
    """
    extra_rev = {y.id: s_id for s_id, y in extra.items()}

    def dst_partner_id(x: SyntaxNode) -> int | None:
        if x.id in extra:
            return extra[x.id].id
        return m.dst_id_of(x.id)

    def src_partner_id(y: SyntaxNode) -> int | None:
        if y.id in extra_rev:
            return extra_rev[y.id]
        return m.src_id_of(y.id)

    cost = 0
    src_nodes = [s] + descendants(s)

    # Updates and parent moves, from the source side.
    for x in src_nodes:
        y_id = dst_partner_id(x)
        if y_id is None:
            if x is not s:
                px = x.parent
                if px is not None and dst_partner_id(px) is not None:
                    cost += 1  # delete (maximal unmapped source node)
            continue
        y = m.dst.node(y_id)
        if x.label != y.label:
            cost += 1
        if x is s:
            continue
        px, py = x.parent, y.parent
        expected = None if px is None else dst_partner_id(px)
        if expected is None or py is None or expected != py.id:
            cost += 1  # move to a different parent

    # Inserts, from the destination side.
    def fully_unmapped(y: SyntaxNode) -> bool:
        if src_partner_id(y) is not None:
            return False
        return all(src_partner_id(c) is None for c in descendants(y))

    stack = [d]
    while stack:
        y = stack.pop()
        if y is not d and src_partner_id(y) is None:
            if fully_unmapped(y):
                cost += 1  # collapsed subtree insert
                continue
            cost += 1  # per-node insert
        stack.extend(y.children)

    # Order moves: kept children outside the LIS, per mapped parent pair.
    for x in src_nodes:
        y_id = dst_partner_id(x)
        if y_id is None or not x.children:
            continue
        y = m.dst.node(y_id)
        kept: list[int] = []  # src child index sequence in destination order
        src_index = {c.id: i for i, c in enumerate(x.children)}
        for c_dst in y.children:
            c_src_id = src_partner_id(c_dst)
            if c_src_id is not None and c_src_id in src_index:
                kept.append(src_index[c_src_id])
        if kept:
            cost += len(kept) - len(_longest_increasing(kept))
    return cost


def _ordered_alignment(
    s: SyntaxNode, d: SyntaxNode, m: MappingStore
) -> list[tuple[SyntaxNode, SyntaxNode]]:
    """Non-crossing alignment minimizing collapsed edit cost (Selkow-style DP).

    Matching two nodes requires equal types and recursively aligns their
    child forests; skipping a subtree costs one collapsed action (plus one
    per boundary between mapped and unmapped regions inside it, so that
    regions containing already-mapped nodes are priced as the moves and
    splits they will cause). Already-mapped nodes only match their partner.
    """
    # Memo keys carry the tree side: node ids repeat across the two trees.
    region_memo: dict[tuple[str, int], int] = {}

    def region_cost(t: SyntaxNode, side: str, mapped) -> int:
        key = (side, t.id)
        if key in region_memo:
            return region_memo[key]
        if mapped(t):
            cost = 1  # its pair survives elsewhere: one move
        else:
            cost = 1
            if _has_mapped_descendant(t, mapped):
                cost += sum(region_cost(c, side, mapped) for c in t.children)
        region_memo[key] = cost
        return cost

    src_mapped = m.has_src
    dst_mapped = m.has_dst

    tree_memo: dict[tuple[int, int], tuple[int, list]] = {}

    def tree_dist(x: SyntaxNode, y: SyntaxNode) -> tuple[int, list]:
        key = (x.id, y.id)
        if key in tree_memo:
            return tree_memo[key]
        if src_mapped(x) or dst_mapped(y):
            if m.dst_id_of(x.id) == y.id:
                result = (0, [])
            else:
                result = (_INF, [])
        elif x.node_type != y.node_type:
            result = (_INF, [])
        else:
            cost, pairs = forest_dist(x.children, y.children)
            if cost >= _INF:
                result = (_INF, [])
            else:
                label_cost = 1 if x.label != y.label else 0
                result = (label_cost + cost, [(x, y)] + pairs)
        tree_memo[key] = result
        return result

    def forest_dist(xs: list[SyntaxNode], ys: list[SyntaxNode]) -> tuple[int, list]:
        rows, cols = len(xs) + 1, len(ys) + 1
        cost = [[0] * cols for _ in range(rows)]
        choice = [[0] * cols for _ in range(rows)]  # 1=del, 2=ins, 3=match
        for i in range(1, rows):
            cost[i][0] = cost[i - 1][0] + region_cost(xs[i - 1], "s", src_mapped)
            choice[i][0] = 1
        for j in range(1, cols):
            cost[0][j] = cost[0][j - 1] + region_cost(ys[j - 1], "d", dst_mapped)
            choice[0][j] = 2
        for i in range(1, rows):
            for j in range(1, cols):
                del_cost = cost[i - 1][j] + region_cost(xs[i - 1], "s", src_mapped)
                ins_cost = cost[i][j - 1] + region_cost(ys[j - 1], "d", dst_mapped)
                match_cost = _INF
                sub = tree_dist(xs[i - 1], ys[j - 1])
                if sub[0] < _INF:
                    match_cost = cost[i - 1][j - 1] + sub[0]
                best = min(match_cost, del_cost, ins_cost)
                cost[i][j] = best
                choice[i][j] = 3 if best == match_cost else (1 if best == del_cost else 2)
        pairs: list = []
        i, j = len(xs), len(ys)
        while i > 0 or j > 0:
            c = choice[i][j]
            if c == 3:
                pairs.extend(tree_dist(xs[i - 1], ys[j - 1])[1])
                i, j = i - 1, j - 1
            elif c == 1 or (c == 0 and i > 0):
                i -= 1
            else:
                j -= 1
        return cost[len(xs)][len(ys)], pairs

    _, pairs = forest_dist(s.children, d.children)
    return [(x, y) for x, y in pairs]


def _has_mapped_descendant(t: SyntaxNode, mapped) -> bool:
    return any(mapped(x) for x in descendants(t))
