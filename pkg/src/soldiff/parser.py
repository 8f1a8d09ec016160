"""Recursive-descent parser producing concrete syntax trees for Solidity.

Covers the practical core of the 0.8-era grammar: pragmas, imports,
contract/interface/library declarations, state variables, functions with
the full header soup (visibility, mutability, virtual/override, modifier
invocations), structs, enums, events, errors, using-directives, statements
incl. try/catch and unchecked blocks, expressions with full operator
precedence, and inline assembly captured as a token-level subtree.

Every token of the input, comments and punctuation included, appears as a
leaf of the concrete tree; spans of the leaves tile the source text up to
whitespace. Parse failures raise :class:`ParseError` carrying the earliest
byte offset at which no grammar rule could continue.

The parser is deliberately pluggable: anything with a ``parse(source)``
method and a ``grammar_version`` attribute can stand in for
:class:`SolidityParser` so the grammar can be upgraded without touching the
diff core.
"""

from __future__ import annotations

import re

from .lexer import (
    COMMENT,
    EOF,
    HEX_STRING,
    IDENT,
    NUMBER,
    PUNCT,
    STRING,
    ParseError,
    Token,
    tokenize,
)
from .tree import SourceSpan, SyntaxNode, SyntaxTree

GRAMMAR_VERSION = "solidity-rd-0.8/1"

_PRIMITIVE_RE = re.compile(
    r"^(bool|string|address|bytes|byte|int(\d+)?|uint(\d+)?|bytes([1-9]|[12]\d|3[0-2])"
    r"|fixed(\d+x\d+)?|ufixed(\d+x\d+)?)$"
)
_VISIBILITY = {"public", "private", "internal", "external"}
_MUTABILITY = {"pure", "view", "payable", "constant"}
_LOCATIONS = {"memory", "storage", "calldata"}
_NUMBER_UNITS = {"wei", "gwei", "ether", "seconds", "minutes", "hours", "days", "weeks"}
_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}
_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
]
_UNARY_OPS = {"!", "~", "-", "+", "++", "--", "delete"}


def _is_primitive(word: str) -> bool:
    return bool(_PRIMITIVE_RE.match(word))


def _cover(children: list[SyntaxNode]) -> SourceSpan:
    return SourceSpan(children[0].span.start, children[-1].span.end)  # type: ignore[union-attr]


def _node(node_type: str, children: list[SyntaxNode]) -> SyntaxNode:
    return SyntaxNode(node_type, "", children, _cover(children))


class _Parser:
    def __init__(self, tokens: list[Token], source: str) -> None:
        self.toks = tokens
        self.pos = 0
        self.source = source
        self.furthest = ParseError(0, "empty input")

    # -- token plumbing ------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.toks) - 1)
        return self.toks[i]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in (PUNCT, IDENT)

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != EOF:
            self.pos += 1
        return t

    def error(self, message: str) -> ParseError:
        err = ParseError(self.peek().start, message)
        if err.position >= self.furthest.position:
            self.furthest = err
        return err

    def expect(self, text: str) -> SyntaxNode:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.peek().text!r}")
        return self.tok_node(self.advance())

    def expect_ident(self) -> SyntaxNode:
        if not self.at_kind(IDENT):
            raise self.error(f"expected identifier, found {self.peek().text!r}")
        t = self.advance()
        return SyntaxNode("identifier", t.text, span=SourceSpan(t.start, t.end))

    def attempt(self, fn):
        """Run ``fn``, rolling the cursor back and returning None on failure."""
        mark = self.pos
        try:
            return fn()
        except ParseError as err:
            if err.position >= self.furthest.position:
                self.furthest = err
            self.pos = mark
            return None

    # -- leaf builders -------------------------------------------------

    def tok_node(self, t: Token) -> SyntaxNode:
        return SyntaxNode(t.text, "", span=SourceSpan(t.start, t.end))

    def _labeled(self, node_type: str, t: Token) -> SyntaxNode:
        return SyntaxNode(node_type, t.text, span=SourceSpan(t.start, t.end))

    # -- top level -----------------------------------------------------

    def parse_source_file(self) -> SyntaxNode:
        items: list[SyntaxNode] = []
        while not self.at_kind(EOF):
            items.append(self.parse_source_item())
        root = SyntaxNode("source_file", "", items, SourceSpan(0, len(self.source)))
        return root

    def parse_source_item(self) -> SyntaxNode:
        word = self.peek().text
        if word == "pragma":
            return self.parse_pragma()
        if word == "import":
            return self.parse_import()
        if word in ("contract", "interface", "library", "abstract"):
            return self.parse_contract_like()
        return self.parse_contract_member()

    def parse_pragma(self) -> SyntaxNode:
        children = [self.expect("pragma")]
        children.append(self.expect_ident())
        value_toks: list[SyntaxNode] = []
        while not self.at(";") and not self.at_kind(EOF):
            t = self.advance()
            if t.kind == IDENT:
                value_toks.append(self._labeled("identifier", t))
            elif t.kind == NUMBER:
                value_toks.append(self._labeled("number", t))
            else:
                value_toks.append(self.tok_node(t))
        if value_toks:
            children.append(_node("pragma_value", value_toks))
        children.append(self.expect(";"))
        return _node("pragma_directive", children)

    def parse_import(self) -> SyntaxNode:
        children = [self.expect("import")]
        if self.at("{"):
            children.append(self.expect("{"))
            while not self.at("}"):
                children.append(self.expect_ident())
                if self.at("as"):
                    children.append(self.expect("as"))
                    children.append(self.expect_ident())
                if self.at(","):
                    children.append(self.expect(","))
            children.append(self.expect("}"))
            children.append(self.expect("from"))
            children.append(self.parse_string_literal())
        elif self.at("*"):
            children.append(self.expect("*"))
            children.append(self.expect("as"))
            children.append(self.expect_ident())
            children.append(self.expect("from"))
            children.append(self.parse_string_literal())
        else:
            children.append(self.parse_string_literal())
            if self.at("as"):
                children.append(self.expect("as"))
                children.append(self.expect_ident())
        children.append(self.expect(";"))
        return _node("import_directive", children)

    def parse_contract_like(self) -> SyntaxNode:
        children: list[SyntaxNode] = []
        if self.at("abstract"):
            children.append(self.expect("abstract"))
        kind = self.peek().text
        if kind not in ("contract", "interface", "library"):
            raise self.error("expected contract, interface, or library")
        children.append(self.tok_node(self.advance()))
        children.append(self.expect_ident())
        if self.at("is"):
            children.append(self.expect("is"))
            while True:
                spec_children = [self.parse_user_type()]
                if self.at("("):
                    spec_children.append(self.parse_call_argument_list())
                children.append(_node("inheritance_specifier", spec_children))
                if self.at(","):
                    children.append(self.expect(","))
                else:
                    break
        children.append(self.parse_contract_body())
        return _node(f"{kind}_declaration", children)

    def parse_contract_body(self) -> SyntaxNode:
        children = [self.expect("{")]
        while not self.at("}"):
            if self.at_kind(EOF):
                raise self.error("unexpected end of input inside contract body")
            children.append(self.parse_contract_member())
        children.append(self.expect("}"))
        return _node("contract_body", children)

    def parse_contract_member(self) -> SyntaxNode:
        word = self.peek().text
        if word == "using":
            return self.parse_using()
        if word == "struct":
            return self.parse_struct()
        if word == "enum":
            return self.parse_enum()
        if word == "event":
            return self.parse_event()
        if word == "error" and self.peek(1).kind == IDENT:
            return self.parse_error_declaration()
        if word == "modifier":
            return self.parse_modifier_definition()
        if word == "function":
            return self.parse_function_like("function")
        if word == "constructor":
            return self.parse_function_like("constructor")
        if word in ("fallback", "receive") and self.peek(1).text == "(":
            return self.parse_function_like(word)
        return self.parse_state_variable()

    def parse_using(self) -> SyntaxNode:
        children = [self.expect("using")]
        if self.at("{"):
            children.append(self.expect("{"))
            while not self.at("}"):
                children.append(self.parse_user_type())
                if self.at("as"):
                    children.append(self.expect("as"))
                    children.append(self.tok_node(self.advance()))
                if self.at(","):
                    children.append(self.expect(","))
            children.append(self.expect("}"))
        else:
            children.append(self.parse_user_type())
        children.append(self.expect("for"))
        if self.at("*"):
            children.append(self.expect("*"))
        else:
            children.append(self.parse_type_name())
        if self.at("global"):
            children.append(self.expect("global"))
        children.append(self.expect(";"))
        return _node("using_directive", children)

    def parse_struct(self) -> SyntaxNode:
        children = [self.expect("struct"), self.expect_ident(), self.expect("{")]
        while not self.at("}"):
            member = [self.parse_type_name()]
            member.append(self.expect_ident())
            member.append(self.expect(";"))
            children.append(_node("struct_member", member))
        children.append(self.expect("}"))
        return _node("struct_declaration", children)

    def parse_enum(self) -> SyntaxNode:
        children = [self.expect("enum"), self.expect_ident(), self.expect("{")]
        while not self.at("}"):
            children.append(self.expect_ident())
            if self.at(","):
                children.append(self.expect(","))
        children.append(self.expect("}"))
        return _node("enum_declaration", children)

    def parse_event(self) -> SyntaxNode:
        children = [self.expect("event"), self.expect_ident(), self.parse_parameter_list()]
        if self.at("anonymous"):
            children.append(self.expect("anonymous"))
        children.append(self.expect(";"))
        return _node("event_definition", children)

    def parse_error_declaration(self) -> SyntaxNode:
        children = [self.expect("error"), self.expect_ident(), self.parse_parameter_list()]
        children.append(self.expect(";"))
        return _node("error_declaration", children)

    def parse_modifier_definition(self) -> SyntaxNode:
        children = [self.expect("modifier"), self.expect_ident()]
        if self.at("("):
            children.append(self.parse_parameter_list())
        while self.at("virtual") or self.at("override"):
            if self.at("virtual"):
                children.append(self.expect("virtual"))
            else:
                children.append(self.parse_override_specifier())
        if self.at(";"):
            children.append(self.expect(";"))
        else:
            children.append(self.parse_block())
        return _node("modifier_definition", children)

    def parse_function_like(self, keyword: str) -> SyntaxNode:
        children = [self.expect(keyword)]
        if keyword == "function" and self.at_kind(IDENT):
            children.append(self.expect_ident())
        children.append(self.parse_parameter_list())
        while True:
            word = self.peek().text
            if word in _VISIBILITY:
                children.append(self._labeled("visibility", self.advance()))
            elif word in ("pure", "view", "payable"):
                children.append(self._labeled("state_mutability", self.advance()))
            elif word == "virtual":
                children.append(self.expect("virtual"))
            elif word == "override":
                children.append(self.parse_override_specifier())
            elif word == "returns":
                children.append(self.expect("returns"))
                children.append(self.parse_parameter_list("return_parameter_list"))
            elif self.at_kind(IDENT):
                inv = [self.parse_user_type()]
                if self.at("("):
                    inv.append(self.parse_call_argument_list())
                children.append(_node("modifier_invocation", inv))
            else:
                break
        if self.at(";"):
            children.append(self.expect(";"))
        else:
            children.append(self.parse_block())
        node_type = {
            "function": "function_definition",
            "constructor": "constructor_definition",
            "fallback": "fallback_definition",
            "receive": "receive_definition",
        }[keyword]
        return _node(node_type, children)

    def parse_override_specifier(self) -> SyntaxNode:
        children = [self.expect("override")]
        if self.at("("):
            children.append(self.expect("("))
            while not self.at(")"):
                children.append(self.parse_user_type())
                if self.at(","):
                    children.append(self.expect(","))
            children.append(self.expect(")"))
        return _node("override_specifier", children)

    def parse_state_variable(self) -> SyntaxNode:
        children = [self.parse_type_name()]
        while True:
            word = self.peek().text
            if word in _VISIBILITY:
                children.append(self._labeled("visibility", self.advance()))
            elif word in ("constant", "immutable", "transient"):
                children.append(self.tok_node(self.advance()))
            elif word == "override":
                children.append(self.parse_override_specifier())
            else:
                break
        children.append(self.expect_ident())
        if self.at("="):
            children.append(self.expect("="))
            children.append(self.parse_expression())
        children.append(self.expect(";"))
        return _node("state_variable_declaration", children)

    # -- types -----------------------------------------------------------

    def parse_type_name(self) -> SyntaxNode:
        base = self.parse_base_type()
        while self.at("["):
            suffix = [base, self.expect("[")]
            if not self.at("]"):
                suffix.append(self.parse_expression())
            suffix.append(self.expect("]"))
            base = _node("array_type", suffix)
        return base

    def parse_base_type(self) -> SyntaxNode:
        word = self.peek().text
        if self.at_kind(IDENT) and _is_primitive(word):
            children = [self.tok_node(self.advance())]
            if word == "address" and self.at("payable"):
                children.append(self.expect("payable"))
            return _node("primitive_type", children)
        if word == "payable":
            return _node("primitive_type", [self.tok_node(self.advance())])
        if word == "mapping":
            children = [self.expect("mapping"), self.expect("(")]
            children.append(self.parse_type_name())
            if self.at_kind(IDENT):
                children.append(self.expect_ident())
            children.append(self.expect("=>"))
            children.append(self.parse_type_name())
            if self.at_kind(IDENT):
                children.append(self.expect_ident())
            children.append(self.expect(")"))
            return _node("mapping_type", children)
        if word == "function":
            children = [self.expect("function"), self.parse_parameter_list()]
            while self.peek().text in _VISIBILITY or self.peek().text in ("pure", "view", "payable"):
                t = self.advance()
                kind = "visibility" if t.text in _VISIBILITY else "state_mutability"
                children.append(self._labeled(kind, t))
            if self.at("returns"):
                children.append(self.expect("returns"))
                children.append(self.parse_parameter_list("return_parameter_list"))
            return _node("function_type", children)
        if self.at_kind(IDENT):
            return self.parse_user_type()
        raise self.error(f"expected type name, found {word!r}")

    def parse_user_type(self) -> SyntaxNode:
        children = [self.expect_ident()]
        while self.at(".") and self.peek(1).kind == IDENT:
            children.append(self.expect("."))
            children.append(self.expect_ident())
        return _node("user_type", children)

    def parse_parameter_list(self, node_type: str = "parameter_list") -> SyntaxNode:
        children = [self.expect("(")]
        while not self.at(")"):
            if self.at_kind(EOF):
                raise self.error("unexpected end of input in parameter list")
            children.append(self.parse_parameter())
            if self.at(","):
                children.append(self.expect(","))
            elif not self.at(")"):
                raise self.error("expected ',' or ')' in parameter list")
        children.append(self.expect(")"))
        return _node(node_type, children)

    def parse_parameter(self) -> SyntaxNode:
        children = [self.parse_type_name()]
        while self.peek().text in _LOCATIONS or self.at("indexed"):
            children.append(self.tok_node(self.advance()))
        if self.at_kind(IDENT):
            children.append(self.expect_ident())
        return _node("parameter", children)

    # -- statements --------------------------------------------------------

    def parse_block(self) -> SyntaxNode:
        children = [self.expect("{")]
        while not self.at("}"):
            if self.at_kind(EOF):
                raise self.error("unexpected end of input inside block")
            children.append(self.parse_statement())
        children.append(self.expect("}"))
        return _node("block", children)

    def parse_statement(self) -> SyntaxNode:
        word = self.peek().text
        if word == "{":
            return self.parse_block()
        if word == "unchecked":
            children = [self.expect("unchecked"), self.expect("{")]
            while not self.at("}"):
                if self.at_kind(EOF):
                    raise self.error("unexpected end of input inside unchecked block")
                children.append(self.parse_statement())
            children.append(self.expect("}"))
            return _node("unchecked_block", children)
        if word == "if":
            children = [self.expect("if"), self.expect("("), self.parse_expression(), self.expect(")")]
            children.append(self.parse_statement())
            if self.at("else"):
                children.append(self.expect("else"))
                children.append(self.parse_statement())
            return _node("if_statement", children)
        if word == "for":
            return self.parse_for()
        if word == "while":
            children = [self.expect("while"), self.expect("("), self.parse_expression(), self.expect(")")]
            children.append(self.parse_statement())
            return _node("while_statement", children)
        if word == "do":
            children = [self.expect("do"), self.parse_statement(), self.expect("while")]
            children.append(self.expect("("))
            children.append(self.parse_expression())
            children.append(self.expect(")"))
            children.append(self.expect(";"))
            return _node("do_while_statement", children)
        if word == "return":
            children = [self.expect("return")]
            if not self.at(";"):
                children.append(self.parse_expression())
            children.append(self.expect(";"))
            return _node("return_statement", children)
        if word == "break":
            return _node("break_statement", [self.expect("break"), self.expect(";")])
        if word == "continue":
            return _node("continue_statement", [self.expect("continue"), self.expect(";")])
        if word == "emit":
            children = [self.expect("emit"), self.parse_expression(), self.expect(";")]
            return _node("emit_statement", children)
        if word == "revert":
            children = [self.expect("revert")]
            if not self.at(";"):
                children.append(self.parse_expression())
            children.append(self.expect(";"))
            return _node("revert_statement", children)
        if word == "try":
            return self.parse_try()
        if word == "assembly":
            return self.parse_assembly()
        decl = self.attempt(self.parse_variable_declaration_statement)
        if decl is not None:
            return decl
        children = [self.parse_expression(), self.expect(";")]
        return _node("expression_statement", children)

    def parse_for(self) -> SyntaxNode:
        children = [self.expect("for"), self.expect("(")]
        if self.at(";"):
            children.append(self.expect(";"))
        else:
            init = self.attempt(self.parse_variable_declaration_statement)
            if init is None:
                init = _node("expression_statement", [self.parse_expression(), self.expect(";")])
            children.append(init)
        if not self.at(";"):
            children.append(self.parse_expression())
        children.append(self.expect(";"))
        if not self.at(")"):
            children.append(self.parse_expression())
        children.append(self.expect(")"))
        children.append(self.parse_statement())
        return _node("for_statement", children)

    def parse_try(self) -> SyntaxNode:
        children = [self.expect("try"), self.parse_expression()]
        if self.at("returns"):
            children.append(self.expect("returns"))
            children.append(self.parse_parameter_list("return_parameter_list"))
        children.append(self.parse_block())
        if not self.at("catch"):
            raise self.error("expected 'catch' after try block")
        while self.at("catch"):
            clause = [self.expect("catch")]
            if self.at_kind(IDENT):
                clause.append(self.expect_ident())
            if self.at("("):
                clause.append(self.parse_parameter_list())
            clause.append(self.parse_block())
            children.append(_node("catch_clause", clause))
        return _node("try_statement", children)

    def parse_assembly(self) -> SyntaxNode:
        children = [self.expect("assembly")]
        if self.at_kind(STRING):
            children.append(self.parse_string_literal())
        if self.at("("):
            children.append(self.expect("("))
            children.append(self.parse_string_literal())
            children.append(self.expect(")"))
        children.append(self.parse_yul_block())
        return _node("assembly_statement", children)

    def parse_yul_block(self) -> SyntaxNode:
        # Yul bodies are kept as a shallow token soup: nested braces recurse,
        # every other token becomes a leaf. Fine-grained Yul structure is out
        # of scope for the differ; token leaves still diff at word level.
        children = [self.expect("{")]
        while not self.at("}"):
            if self.at_kind(EOF):
                raise self.error("unexpected end of input inside assembly block")
            if self.at("{"):
                children.append(self.parse_yul_block())
                continue
            t = self.advance()
            if t.kind == IDENT:
                children.append(self._labeled("identifier", t))
            elif t.kind == NUMBER:
                children.append(_node("number_literal", [self._labeled("number", t)]))
            elif t.kind == STRING:
                children.append(_node("string_literal", [self._labeled("string", t)]))
            elif t.kind == HEX_STRING:
                children.append(_node("hex_string_literal", [self._labeled("hex", t)]))
            else:
                children.append(self.tok_node(t))
        children.append(self.expect("}"))
        return _node("yul_block", children)

    def parse_variable_declaration_statement(self) -> SyntaxNode:
        if self.at("("):
            tuple_children = [self.expect("(")]
            saw_declaration = False
            while not self.at(")"):
                if self.at(","):
                    tuple_children.append(self.expect(","))
                    continue
                tuple_children.append(self.parse_variable_declaration())
                saw_declaration = True
                if self.at(","):
                    tuple_children.append(self.expect(","))
            tuple_children.append(self.expect(")"))
            if not saw_declaration:
                raise self.error("not a declaration tuple")
            children = [_node("variable_declaration_tuple", tuple_children)]
            children.append(self.expect("="))
            children.append(self.parse_expression())
            children.append(self.expect(";"))
            return _node("variable_declaration_statement", children)
        children = [self.parse_variable_declaration()]
        if self.at("="):
            children.append(self.expect("="))
            children.append(self.parse_expression())
        children.append(self.expect(";"))
        return _node("variable_declaration_statement", children)

    def parse_variable_declaration(self) -> SyntaxNode:
        children = [self.parse_type_name()]
        while self.peek().text in _LOCATIONS:
            children.append(self.tok_node(self.advance()))
        children.append(self.expect_ident())
        return _node("variable_declaration", children)

    # -- expressions -------------------------------------------------------

    def parse_expression(self) -> SyntaxNode:
        return self.parse_assignment()

    def parse_assignment(self) -> SyntaxNode:
        left = self.parse_conditional()
        if self.peek().kind == PUNCT and self.peek().text in _ASSIGN_OPS:
            op = self.tok_node(self.advance())
            right = self.parse_assignment()
            return _node("assignment_expression", [left, op, right])
        return left

    def parse_conditional(self) -> SyntaxNode:
        cond = self.parse_binary(0)
        if self.at("?"):
            children = [cond, self.expect("?"), self.parse_expression(), self.expect(":")]
            children.append(self.parse_expression())
            return _node("conditional_expression", children)
        return cond

    def parse_binary(self, level: int) -> SyntaxNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.peek().kind == PUNCT and self.peek().text in ops:
            op = self.tok_node(self.advance())
            right = self.parse_binary(level + 1)
            left = _node("binary_expression", [left, op, right])
        return left

    def parse_unary(self) -> SyntaxNode:
        t = self.peek()
        if (t.kind == PUNCT and t.text in _UNARY_OPS) or t.text == "delete":
            op = self.tok_node(self.advance())
            operand = self.parse_unary()
            return _node("unary_expression", [op, operand])
        return self.parse_power()

    def parse_power(self) -> SyntaxNode:
        base = self.parse_postfix()
        if self.at("**"):
            op = self.tok_node(self.advance())
            right = self.parse_unary()
            return _node("binary_expression", [base, op, right])
        return base

    def parse_postfix(self) -> SyntaxNode:
        expr = self.parse_primary()
        while True:
            if self.at("."):
                dot = self.expect(".")
                if self.at_kind(IDENT):
                    member = self.expect_ident()
                else:
                    raise self.error("expected member name after '.'")
                expr = _node("member_expression", [expr, dot, member])
            elif self.at("("):
                expr = _node("call_expression", [expr, self.parse_call_argument_list()])
            elif self.at("["):
                children = [expr, self.expect("[")]
                is_slice = False
                if not self.at("]") and not self.at(":"):
                    children.append(self.parse_expression())
                if self.at(":"):
                    is_slice = True
                    children.append(self.expect(":"))
                    if not self.at("]"):
                        children.append(self.parse_expression())
                children.append(self.expect("]"))
                expr = _node("slice_expression" if is_slice else "index_expression", children)
            elif self.peek().kind == PUNCT and self.peek().text in ("++", "--"):
                expr = _node("update_expression", [expr, self.tok_node(self.advance())])
            elif self.at("{"):
                children = [expr, self.expect("{")]
                while not self.at("}"):
                    children.append(self.parse_named_argument())
                    if self.at(","):
                        children.append(self.expect(","))
                children.append(self.expect("}"))
                expr = _node("call_options_expression", children)
            else:
                return expr

    def parse_call_argument_list(self) -> SyntaxNode:
        children = [self.expect("(")]
        if self.at("{"):
            children.append(self.expect("{"))
            while not self.at("}"):
                children.append(self.parse_named_argument())
                if self.at(","):
                    children.append(self.expect(","))
            children.append(self.expect("}"))
        else:
            while not self.at(")"):
                if self.at_kind(EOF):
                    raise self.error("unexpected end of input in argument list")
                children.append(self.parse_expression())
                if self.at(","):
                    children.append(self.expect(","))
                elif not self.at(")"):
                    raise self.error("expected ',' or ')' in argument list")
        children.append(self.expect(")"))
        return _node("call_argument_list", children)

    def parse_named_argument(self) -> SyntaxNode:
        children = [self.expect_ident(), self.expect(":"), self.parse_expression()]
        return _node("named_argument", children)

    def parse_string_literal(self) -> SyntaxNode:
        if not self.at_kind(STRING):
            raise self.error(f"expected string literal, found {self.peek().text!r}")
        parts = [self._labeled("string", self.advance())]
        while self.at_kind(STRING):
            parts.append(self._labeled("string", self.advance()))
        return _node("string_literal", parts)

    def parse_primary(self) -> SyntaxNode:
        t = self.peek()
        if t.kind == NUMBER:
            children = [self._labeled("number", self.advance())]
            if self.peek().text in _NUMBER_UNITS:
                children.append(self.tok_node(self.advance()))
            return _node("number_literal", children)
        if t.kind == STRING:
            return self.parse_string_literal()
        if t.kind == HEX_STRING:
            parts = [self._labeled("hex", self.advance())]
            while self.at_kind(HEX_STRING):
                parts.append(self._labeled("hex", self.advance()))
            return _node("hex_string_literal", parts)
        if t.text in ("true", "false"):
            return _node("boolean_literal", [self.tok_node(self.advance())])
        if t.text == "new":
            return _node("new_expression", [self.expect("new"), self.parse_type_name()])
        if t.kind == IDENT and (_is_primitive(t.text) or t.text == "payable"):
            # Elementary type used as an expression (casts: uint256(x)).
            children = [self.tok_node(self.advance())]
            if t.text == "address" and self.at("payable") and self.peek(1).text != "(":
                children.append(self.expect("payable"))
            return _node("primitive_type", children)
        if t.text == "mapping" or t.text == "function" and self.peek(1).text == "(":
            return self.parse_base_type()
        if t.kind == IDENT:
            return self.expect_ident()
        if t.text == "(":
            children = [self.expect("(")]
            exprs = 0
            has_comma = False
            while not self.at(")"):
                if self.at(","):
                    children.append(self.expect(","))
                    has_comma = True
                    continue
                children.append(self.parse_expression())
                exprs += 1
            children.append(self.expect(")"))
            if exprs == 1 and not has_comma:
                return _node("parenthesized_expression", children)
            return _node("tuple_expression", children)
        if t.text == "[":
            children = [self.expect("[")]
            while not self.at("]"):
                children.append(self.parse_expression())
                if self.at(","):
                    children.append(self.expect(","))
            children.append(self.expect("]"))
            return _node("array_expression", children)
        raise self.error(f"expected expression, found {t.text!r}")


def _insert_comment(root: SyntaxNode, comment: SyntaxNode) -> None:
    node = root
    start, end = comment.span.start, comment.span.end  # type: ignore[union-attr]
    while True:
        target = None
        for child in node.children:
            if child.span is None or not child.children:
                continue
            if child.span.start <= start and end <= child.span.end:
                target = child
                break
        if target is None:
            at = len(node.children)
            for i, child in enumerate(node.children):
                if child.span is not None and child.span.start >= start:
                    at = i
                    break
            node.children.insert(at, comment)
            return
        node = target


def _rebase_spans_to_bytes(root: SyntaxNode, source: str) -> None:
    # The lexer scans by character; spans are byte ranges over the UTF-8
    # encoding per the tree contract. The two coincide for ASCII sources;
    # otherwise remap through a prefix table.
    byte_at = [0] * (len(source) + 1)
    total = 0
    for i, ch in enumerate(source):
        byte_at[i] = total
        total += len(ch.encode("utf-8"))
    byte_at[len(source)] = total
    for node in root.preorder():
        if node.span is not None:
            node.span = SourceSpan(byte_at[node.span.start], byte_at[node.span.end])


class SolidityParser:
    """Default grammar backend: text in, concrete :class:`SyntaxTree` out.

    Parsing the same source twice yields isomorphic trees with identical
    spans. Syntax errors raise :class:`ParseError`; they are never absorbed
    into a malformed tree.
    """

    grammar_version = GRAMMAR_VERSION

    def parse(self, source: str) -> SyntaxTree:
        tokens = tokenize(source)
        comments = [t for t in tokens if t.kind == COMMENT]
        stream = [t for t in tokens if t.kind != COMMENT]
        parser = _Parser(stream, source)
        try:
            root = parser.parse_source_file()
        except ParseError as err:
            if parser.furthest.position > err.position:
                raise parser.furthest from None
            raise
        for t in comments:
            node = SyntaxNode("comment", t.text, span=SourceSpan(t.start, t.end))
            _insert_comment(root, node)
        if not source.isascii():
            _rebase_spans_to_bytes(root, source)
        return SyntaxTree(root, source)


_DEFAULT = SolidityParser()


def parse_solidity(source: str) -> SyntaxTree:
    """Parse with the default grammar backend."""
    return _DEFAULT.parse(source)
