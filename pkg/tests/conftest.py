"""Shared fixtures: golden contract pair and random-tree utilities."""

from __future__ import annotations

import random

import pytest

from soldiff.tree import SyntaxNode, SyntaxTree

# The SimpleStorage pair. STORAGE_BEFORE is the variant whose pruned AST
# spans line up with the published edit script (it already contains reset);
# STORAGE_BEFORE_NO_RESET is the variant shown in the line-diff rendition,
# where reset first appears in the modified contract.
STORAGE_BEFORE = """contract SimpleStorage {
    uint256 public num;

    function set(uint256 _num) public {
        num = _num;
    }

    function increment() public {
        num += 1;
    }

    function get() public view returns (uint256) {
        return num;
    }

    function reset() public {
        num = 0;
    }
}
"""

STORAGE_BEFORE_NO_RESET = """contract SimpleStorage {
    uint256 public num;

    function set(uint256 _num) public {
        num = _num;
    }

    function increment() public {
        num += 1;
    }

    function get() public view returns (uint256) {
        return num;
    }
}
"""

STORAGE_AFTER = """contract SimpleStorage{
    uint256    private counter;

    function set(uint256 _num) public
    {
        counter = _num;
     }
    function increment() public{
        counter += 1;
     }
    function get( ) public view returns(uint256){
        return counter;
     }
    function reset() public{
       counter = 0;
     }

}
"""

EXPECTED_UPDATE_ELEMENTS = {
    '<update-node tree="visibility: public [37,43]" label="private"/>',
    '<update-node tree="identifier: num [44,47]" label="counter"/>',
    '<update-node tree="identifier: num [242,245]" label="counter"/>',
    '<update-node tree="identifier: num [98,101]" label="counter"/>',
    '<update-node tree="identifier: num [159,162]" label="counter"/>',
    '<update-node tree="identifier: num [292,295]" label="counter"/>',
}


@pytest.fixture
def storage_pair() -> tuple[str, str]:
    return STORAGE_BEFORE, STORAGE_AFTER


@pytest.fixture
def storage_pair_no_reset() -> tuple[str, str]:
    return STORAGE_BEFORE_NO_RESET, STORAGE_AFTER


# -- random labeled trees -----------------------------------------------------

TYPE_ALPHABET = ["alpha", "beta", "gamma", "delta"]
LABEL_ALPHABET = ["", "x", "y", "z"]


def random_tree(rng: random.Random, size: int) -> SyntaxTree:
    """A uniformly grown ordered tree with random types and labels."""
    nodes = [SyntaxNode(rng.choice(TYPE_ALPHABET), rng.choice(LABEL_ALPHABET))]
    for _ in range(size - 1):
        child = SyntaxNode(rng.choice(TYPE_ALPHABET), rng.choice(LABEL_ALPHABET))
        parent = rng.choice(nodes)
        parent.children.append(child)
        nodes.append(child)
    return SyntaxTree(nodes[0])


def _clone(node: SyntaxNode) -> SyntaxNode:
    out = SyntaxNode(node.node_type, node.label)
    out.children = [_clone(c) for c in node.children]
    return out


def mutate_tree(
    tree: SyntaxTree,
    rng: random.Random,
    operations: int,
    fresh: list[int],
    allow_leaf_moves: bool = True,
) -> SyntaxTree:
    """Apply ``operations`` random type-preserving edits and rebuild.

    Edits: relabel to a fresh label, insert a fresh-labeled leaf, delete a
    subtree, relocate a subtree. ``fresh`` is a one-element counter list so
    labels never collide across calls.
    """
    root = _clone(tree.root)

    def all_nodes(n: SyntaxNode) -> list[SyntaxNode]:
        out = [n]
        for c in n.children:
            out.extend(all_nodes(c))
        return out

    def in_subtree(node: SyntaxNode, top: SyntaxNode) -> bool:
        stack = [top]
        while stack:
            cur = stack.pop()
            if cur is node:
                return True
            stack.extend(cur.children)
        return False

    for _ in range(operations):
        nodes = all_nodes(root)
        op = rng.choice(["relabel", "insert", "delete", "move"])
        if op == "relabel":
            target = rng.choice(nodes)
            fresh[0] += 1
            target.label = f"new{fresh[0]}"
        elif op == "insert":
            parent = rng.choice(nodes)
            fresh[0] += 1
            leaf = SyntaxNode(rng.choice(TYPE_ALPHABET), f"new{fresh[0]}")
            parent.children.insert(rng.randrange(len(parent.children) + 1), leaf)
        elif op == "delete" and len(nodes) > 1:
            target = rng.choice(nodes[1:])
            parent = next(n for n in nodes if target in n.children)
            parent.children.remove(target)
        elif op == "move" and len(nodes) > 2:
            candidates = nodes[1:]
            if not allow_leaf_moves:
                candidates = [n for n in candidates if n.children]
            if not candidates:
                continue
            target = rng.choice(candidates)
            parent = next(n for n in nodes if target in n.children)
            parent.children.remove(target)
            homes = [n for n in all_nodes(root) if not in_subtree(n, target)]
            home = rng.choice(homes)
            home.children.insert(rng.randrange(len(home.children) + 1), target)
    return SyntaxTree(root)
