"""Frontend: tokenization, CST shape, spans, determinism, error reporting."""

from __future__ import annotations

import pytest

from conftest import STORAGE_AFTER, STORAGE_BEFORE_NO_RESET

from soldiff.lexer import ParseError, tokenize
from soldiff.parser import GRAMMAR_VERSION, SolidityParser, parse_solidity
from soldiff.tree import isomorphic


def node_types(tree):
    return [n.node_type for n in tree.preorder()]


def test_minimal_contract():
    tree = parse_solidity("contract C {}")
    types = node_types(tree)
    assert "contract_declaration" in types
    body = next(n for n in tree.preorder() if n.node_type == "contract_body")
    assert [c.node_type for c in body.children] == ["{", "}"]


def test_storage_contract_member_counts():
    tree = parse_solidity(STORAGE_BEFORE_NO_RESET)
    types = node_types(tree)
    assert types.count("function_definition") == 3
    assert types.count("state_variable_declaration") == 1


def test_parse_error_on_unclosed_parameter_list():
    with pytest.raises(ParseError) as err:
        parse_solidity("contract C { function f( {}")
    assert err.value.position > 0


def test_parse_determinism_same_spans():
    t1 = parse_solidity(STORAGE_AFTER)
    t2 = parse_solidity(STORAGE_AFTER)
    assert isomorphic(t1.root, t2.root)
    spans1 = [(n.span.start, n.span.end) for n in t1.preorder()]
    spans2 = [(n.span.start, n.span.end) for n in t2.preorder()]
    assert spans1 == spans2


def test_leaves_tile_source_with_whitespace_gaps():
    source = STORAGE_AFTER
    tree = parse_solidity(source)
    pos = 0
    for leaf in (n for n in tree.preorder() if not n.children):
        assert leaf.span.start >= pos
        assert source[pos : leaf.span.start].strip() == ""
        pos = leaf.span.end
    assert source[pos:].strip() == ""


def test_comments_are_nodes_and_positioned():
    source = "// header\ncontract C {\n    uint256 x; // trailing\n    /* blk */ uint256 y;\n}\n"
    tree = parse_solidity(source)
    comments = [n for n in tree.preorder() if n.node_type == "comment"]
    assert [c.label for c in comments] == ["// header", "// trailing", "/* blk */"]
    pos = 0
    for leaf in (n for n in tree.preorder() if not n.children):
        assert leaf.span.start >= pos
        pos = leaf.span.end


def test_error_position_is_earliest_failure():
    source = "contract C {\n    uint256 x;\n    function f() public {\n        x = ;\n    }\n}\n"
    with pytest.raises(ParseError) as err:
        parse_solidity(source)
    assert source[err.value.position] == ";"


def test_unterminated_string_and_comment():
    with pytest.raises(ParseError):
        tokenize('contract C { string s = "abc; }')
    with pytest.raises(ParseError):
        tokenize("/* never closed")


def test_number_and_string_tokens():
    toks = tokenize('x = 0x1F + 1_000 * 2e10; s = "a\\"b" hex"00ff";')
    texts = [t.text for t in toks if t.kind in ("number", "string", "hex_string")]
    assert texts == ["0x1F", "1_000", "2e10", '"a\\"b"', 'hex"00ff"']


def test_visibility_and_identifier_are_labeled_leaves():
    tree = parse_solidity("contract C { uint256 public num; }")
    vis = next(n for n in tree.preorder() if n.node_type == "visibility")
    assert vis.label == "public" and not vis.children
    ident = next(n for n in tree.preorder() if n.node_type == "identifier" and n.label == "num")
    assert not ident.children


def test_grammar_version_exposed():
    parser = SolidityParser()
    assert parser.grammar_version == GRAMMAR_VERSION
    assert GRAMMAR_VERSION


def test_non_ascii_comment_gets_byte_offsets():
    source = "// café\ncontract C {}\n"
    tree = parse_solidity(source)
    comment = next(n for n in tree.preorder() if n.node_type == "comment")
    raw = source.encode("utf-8")
    assert raw[comment.span.start : comment.span.end].decode("utf-8") == "// café"
    contract = next(n for n in tree.preorder() if n.node_type == "contract_declaration")
    assert raw[contract.span.start : contract.span.start + 8] == b"contract"


def test_expression_precedence_shape():
    tree = parse_solidity(
        "contract C { function f(uint256 a, uint256 b) public pure returns (uint256) {"
        " return a + b * 2 ** 3 ** 1; } }"
    )
    # a + (b * (2 ** (3 ** 1))): the top binary node's operator is '+'.
    top = next(n for n in tree.preorder() if n.node_type == "binary_expression")
    ops = [c.node_type for c in top.children if not c.children and c.label == ""]
    assert "+" in ops


def test_tuple_and_destructuring_statements():
    tree = parse_solidity(
        "contract C { function f() public { (uint256 a, , uint256 c) = g(); (a, c) = (c, a); } }"
    )
    types = node_types(tree)
    assert "variable_declaration_tuple" in types
    assert "tuple_expression" in types


def test_assembly_block_token_soup():
    tree = parse_solidity(
        'contract C { function f() public { assembly { let x := add(1, 2) { mstore(x, 0) } } } }'
    )
    types = node_types(tree)
    assert types.count("yul_block") == 2
    assert "assembly_statement" in types
