"""Tree substrate: heights, hashing, isomorphism, traversal, dump format."""

from __future__ import annotations

import random

import pytest

from conftest import STORAGE_BEFORE, random_tree
from oracles import dump_height, parse_dump

from soldiff.parser import parse_solidity
from soldiff.transforms import apply_transforms, default_solidity_rules
from soldiff.tree import (
    SourceSpan,
    SyntaxNode,
    SyntaxTree,
    descendants,
    height,
    isomorphic,
    structural_hash,
)


def leaf(node_type: str = "leaf", label: str = "", span: SourceSpan | None = None) -> SyntaxNode:
    return SyntaxNode(node_type, label, span=span)


def test_span_validation():
    assert len(SourceSpan(3, 7)) == 4
    with pytest.raises(ValueError):
        SourceSpan(-1, 0)
    with pytest.raises(ValueError):
        SourceSpan(5, 2)


def test_height_base_cases():
    single = SyntaxTree(leaf())
    assert height(single.root) == 1
    root = SyntaxNode("root", children=[leaf(), leaf()])
    assert height(SyntaxTree(root).root) == 2


def test_height_of_pruned_storage_matches_dump_walk():
    tree = apply_transforms(parse_solidity(STORAGE_BEFORE), default_solidity_rules())
    rebuilt = parse_dump(tree.dump())
    assert height(tree.root) == dump_height(rebuilt)
    assert tree.root.height == height(tree.root)


def test_height_monotone_along_edges():
    rng = random.Random(7)
    for _ in range(50):
        tree = random_tree(rng, rng.randrange(1, 30))
        for node in tree.preorder():
            for child in node.children:
                assert node.height > child.height


def test_hash_ignores_spans():
    a = leaf("identifier", "num", SourceSpan(10, 13))
    b = leaf("identifier", "num", SourceSpan(90, 93))
    assert structural_hash(a) == structural_hash(b)


def test_hash_differs_on_label():
    assert structural_hash(leaf("identifier", "num")) != structural_hash(
        leaf("identifier", "counter")
    )


def test_hash_agrees_with_isomorphism_on_random_trees():
    rng = random.Random(42)
    trees = [random_tree(rng, rng.randrange(1, 8)) for _ in range(1000)]
    sample = [(rng.choice(trees), rng.choice(trees)) for _ in range(1000)]
    for ta, tb in sample:
        iso = isomorphic(ta.root, tb.root)
        hashes_equal = ta.root.structural_hash == tb.root.structural_hash
        if iso:
            assert hashes_equal
        if not hashes_equal:
            assert not iso


def test_isomorphic_reflexive_and_label_sensitive():
    tree = random_tree(random.Random(3), 12)
    assert isomorphic(tree.root, tree.root)
    other = random_tree(random.Random(3), 12)
    assert isomorphic(tree.root, other.root)
    # flip one leaf label
    leaf_node = next(n for n in other.preorder() if not n.children)
    changed = SyntaxNode(leaf_node.node_type, leaf_node.label + "!", [])
    parent = leaf_node.parent
    if parent is None:
        changed_tree = SyntaxTree(changed)
    else:
        parent.children[parent.children.index(leaf_node)] = changed
        changed_tree = SyntaxTree(other.root)
    assert not isomorphic(tree.root, changed_tree.root)


def test_descendants_order_and_count():
    a, b, c = leaf("t", "a"), leaf("t", "b"), leaf("t", "c")
    mid = SyntaxNode("mid", children=[b, c])
    root = SyntaxNode("root", children=[a, mid])
    tree = SyntaxTree(root)
    assert descendants(tree.root) == [a, mid, b, c]
    assert descendants(a) == []
    rng = random.Random(11)
    for _ in range(25):
        tree = random_tree(rng, rng.randrange(1, 40))
        for node in tree.preorder():
            assert len(descendants(node)) == node.size - 1


def test_preorder_ids_deterministic_and_index_complete():
    t1 = parse_solidity(STORAGE_BEFORE)
    t2 = parse_solidity(STORAGE_BEFORE)
    assert [n.id for n in t1.preorder()] == [n.id for n in t2.preorder()]
    assert t1.node_count == len(t1.node_index)
    visited = {n.id for n in t1.preorder()}
    assert visited == set(t1.node_index)
    assert [n.id for n in t1.preorder()] == sorted(visited)


def test_span_nesting_and_sibling_order():
    tree = parse_solidity(STORAGE_BEFORE)
    for node in tree.preorder():
        for child in node.children:
            assert node.span.start <= child.span.start
            assert child.span.end <= node.span.end
        starts = [c.span.start for c in node.children]
        assert starts == sorted(starts)


def test_dump_round_trip_structure():
    tree = apply_transforms(parse_solidity(STORAGE_BEFORE), default_solidity_rules())
    rebuilt = parse_dump(tree.dump())

    def shape(node):
        return (node.node_type, node.label, tuple(shape(c) for c in node.children))

    assert shape(tree.root) == shape(rebuilt)


def test_dump_line_format():
    tree = apply_transforms(parse_solidity(STORAGE_BEFORE), default_solidity_rules())
    lines = tree.dump().splitlines()
    assert lines[0] == "source_file:  [0,309]"
    # depth 4: source_file / contract / body / state variable / visibility
    assert "        visibility: public [37,43]" in lines
