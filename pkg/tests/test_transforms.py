"""Transform rules: flatten/alias/ignore semantics and the rule-file format."""

from __future__ import annotations

import pytest

from conftest import STORAGE_AFTER, STORAGE_BEFORE

from soldiff.parser import parse_solidity
from soldiff.transforms import (
    RuleFileError,
    TransformRuleSet,
    apply_transforms,
    default_solidity_rules,
    dump_rules,
    load_rules,
    parse_rules,
    save_rules,
)
from soldiff.tree import isomorphic


def count_types(tree, wanted: str) -> int:
    return sum(1 for n in tree.preorder() if n.node_type == wanted)


def test_ruleset_disjointness_enforced():
    with pytest.raises(ValueError):
        TransformRuleSet(
            flatten_types=frozenset({"number_literal"}),
            ignore_types=frozenset({"number_literal"}),
        )


def test_ruleset_alias_chain_rejected():
    with pytest.raises(ValueError):
        TransformRuleSet(alias_map={"a": "b", "b": "c"})


def test_empty_ruleset_is_identity():
    cst = parse_solidity(STORAGE_BEFORE)
    out = apply_transforms(cst, TransformRuleSet())
    assert isomorphic(cst.root, out.root)


def test_flatten_literal_node():
    cst = parse_solidity("contract C { uint256 x = 1 ether; }")
    rules = default_solidity_rules()
    out = apply_transforms(cst, rules)
    prim = next(n for n in out.preorder() if n.node_type == "primitive_type")
    assert prim.label == "uint256" and not prim.children
    num = next(n for n in out.preorder() if n.node_type == "number_literal")
    assert num.label == "1 ether" and not num.children


def test_flatten_label_is_exact_source_slice():
    cst = parse_solidity(STORAGE_AFTER)
    out = apply_transforms(cst, default_solidity_rules())
    for node in out.preorder():
        if node.node_type in default_solidity_rules().flatten_types:
            assert node.label == STORAGE_AFTER[node.span.start : node.span.end]
            assert not node.children


def test_ignore_removes_subtree_and_count_matches():
    source = "contract C {\n// one\nuint256 x; /* two */\n// three\n}\n"
    cst = parse_solidity(source)
    rules = TransformRuleSet(ignore_types=frozenset({"comment"}))
    before_comments = count_types(cst, "comment")
    assert before_comments == 3
    out = apply_transforms(cst, rules)
    assert count_types(out, "comment") == 0
    assert out.node_count == cst.node_count - before_comments


def test_ignore_completeness_and_alias_totality():
    rules = default_solidity_rules()
    out = apply_transforms(parse_solidity(STORAGE_AFTER), rules)
    for node in out.preorder():
        assert node.node_type not in rules.ignore_types
        assert node.node_type not in rules.alias_map


def test_alias_renames_constructor():
    source = "contract C { constructor() {} function f() public {} }"
    out = apply_transforms(parse_solidity(source), default_solidity_rules())
    assert count_types(out, "function_definition") == 2
    assert count_types(out, "constructor_definition") == 0


def test_transform_idempotent():
    rules = default_solidity_rules()
    once = apply_transforms(parse_solidity(STORAGE_AFTER), rules)
    twice = apply_transforms(once, rules)
    assert isomorphic(once.root, twice.root)


def test_spans_preserved_from_cst():
    cst = parse_solidity(STORAGE_BEFORE)
    out = apply_transforms(cst, default_solidity_rules())
    vis = next(n for n in out.preorder() if n.node_type == "visibility")
    assert (vis.span.start, vis.span.end) == (37, 43)


def test_unknown_rule_names_are_inert():
    rules = TransformRuleSet(
        flatten_types=frozenset({"no_such_type"}),
        alias_map={"missing": "gone"},
        ignore_types=frozenset({"also_absent"}),
    )
    cst = parse_solidity(STORAGE_BEFORE)
    out = apply_transforms(cst, rules)
    assert isomorphic(cst.root, out.root)


def test_default_rules_content():
    rules = default_solidity_rules()
    assert "number_literal" in rules.flatten_types
    assert "comment" in rules.ignore_types
    assert ";" in rules.ignore_types


def test_rule_file_round_trip(tmp_path):
    rules = default_solidity_rules()
    path = tmp_path / "rules.txt"
    save_rules(rules, str(path))
    assert load_rules(str(path)) == rules


def test_rule_file_minimal():
    rules = parse_rules("flatten:\n  number_literal\n")
    assert rules.flatten_types == frozenset({"number_literal"})
    assert not rules.alias_map and not rules.ignore_types


def test_rule_file_alias_chain_error():
    text = "alias:\n  A -> B\n  B -> C\n"
    with pytest.raises(RuleFileError) as err:
        parse_rules(text)
    assert err.value.line in (2, 3)


def test_rule_file_bad_entries():
    with pytest.raises(RuleFileError):
        parse_rules("entry_without_section\n")
    with pytest.raises(RuleFileError):
        parse_rules("bogus:\n  x\n")
    with pytest.raises(RuleFileError):
        parse_rules("alias:\n  nothing_to_see\n")
    with pytest.raises(RuleFileError):
        parse_rules("flatten:\n  x -> y\n")
    with pytest.raises(RuleFileError):
        parse_rules("flatten:\n  q\nignore:\n  q\n")


def test_dump_rules_deterministic():
    assert dump_rules(default_solidity_rules()) == dump_rules(default_solidity_rules())
