"""Tolerant AST over a small statement/expression subset of Java-like code.

Handler snippets are short, so a full grammar is unnecessary: declarations,
if/else, switch, for/while, return, expression statements, calls, field
access, literals, unary/binary operators, lambdas, and anonymous-class bodies
are parsed structurally; anything else is swallowed into a single OPAQUE leaf
carrying the raw text, and parsing continues after it.

Leaf nodes carry a value; interior nodes carry only a label. The tree is the
6-tuple view (non-leaves, leaves, leaf vocabulary, root, child map, value
map) exposed by Ast.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import EmptySnippetError

_JAVA_KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double", "else",
    "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return",
    "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while",
}

_MODIFIERS = {"public", "private", "protected", "static", "final",
              "synchronized", "abstract", "native", "transient", "volatile",
              "strictfp", "default"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)*')
  | (?P<number>\d[\w.]*)
  | (?P<ident>[A-Za-z_$][\w$]*)
  | (?P<arrow>->)
  | (?P<op>\+\+|--|&&|\|\||==|!=|<=|>=|<<|>>>|>>|[+\-*/%]=|[&|^]=|::|@|[-+*/%=<>!&|^~?:.,;(){}\[\]])
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            # unknown character: keep it as a one-char op so the parser can
            # choose to recover around it
            toks.append(_Tok("op", text[i], i))
            i += 1
            continue
        kind = m.lastgroup
        if kind not in ("ws", "line_comment", "block_comment"):
            toks.append(_Tok(kind, m.group(0), m.start()))
        i = m.end()
    return toks


class AstNode:
    __slots__ = ("label", "value", "children", "parent")

    def __init__(self, label: str, value: Optional[str] = None):
        self.label = label
        self.value = value
        self.children: list[AstNode] = []
        self.parent: Optional[AstNode] = None

    def add(self, child: "AstNode") -> "AstNode":
        child.parent = self
        self.children.append(child)
        return child

    @property
    def is_leaf(self) -> bool:
        return self.value is not None

    def walk(self) -> Iterator["AstNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def __repr__(self):
        if self.is_leaf:
            return f"{self.label}({self.value!r})"
        return f"{self.label}[{len(self.children)}]"


def leaf(label: str, value: str) -> AstNode:
    return AstNode(label, value)


@dataclass(frozen=True)
class Ast:
    root: AstNode

    @property
    def nodes(self) -> list[AstNode]:
        return list(self.root.walk())

    @property
    def nonterminals(self) -> list[AstNode]:
        return [n for n in self.root.walk() if not n.is_leaf]

    @property
    def terminals(self) -> list[AstNode]:
        return [n for n in self.root.walk() if n.is_leaf]

    @property
    def vocabulary(self) -> set[str]:
        return {n.value for n in self.terminals}

    @property
    def child_map(self) -> dict[AstNode, tuple[AstNode, ...]]:
        return {n: tuple(n.children) for n in self.nonterminals}

    @property
    def value_map(self) -> dict[AstNode, str]:
        return {n: n.value for n in self.terminals}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    # -- token helpers

    def peek(self, offset: int = 0) -> Optional[_Tok]:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str, offset: int = 0) -> bool:
        t = self.peek(offset)
        return t is not None and t.text == text

    def at_kind(self, kind: str, offset: int = 0) -> bool:
        t = self.peek(offset)
        return t is not None and t.kind == kind

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # -- error recovery

    def opaque_until(self, stops: tuple[str, ...]) -> AstNode:
        """Consume a balanced run of tokens up to (and including a `;` from)
        the stop set, and wrap the raw text in one OPAQUE leaf."""
        start_tok = self.peek()
        depth = 0
        end = start_tok.pos
        while self.i < len(self.toks):
            t = self.peek()
            if depth == 0 and t.text in stops:
                if t.text == ";":
                    end = t.pos + 1
                    self.take()
                break
            if depth == 0 and t.text == "{" and end > start_tok.pos:
                break  # let the caller parse the block normally
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                if depth == 0:
                    break
                depth -= 1
            end = t.pos + len(t.text)
            self.take()
        raw = self.text[start_tok.pos:end].strip() or start_tok.text
        return leaf("OPAQUE", raw)

    # -- statements

    def parse_block_contents(self, node: AstNode, closing: str = "}"):
        while self.i < len(self.toks) and not self.at(closing):
            before = self.i
            node.add(self.statement())
            if self.i == before:  # safety: never stall
                node.add(leaf("OPAQUE", self.take().text))

    def statement(self) -> AstNode:
        t = self.peek()
        if t is None:
            return AstNode("EmptyStmt")
        if t.text == "{":
            self.take()
            block = AstNode("Block")
            self.parse_block_contents(block)
            self.accept("}")
            return block
        if t.text == ";":
            self.take()
            return AstNode("EmptyStmt")
        if t.kind == "ident":
            handler = getattr(self, f"_stmt_{t.text}", None)
            if handler is not None:
                return handler()
        if t.text == "@":  # annotation: consume @Name(+args) then retry
            self.take()
            if self.at_kind("ident"):
                self.take()
            if self.at("("):
                self._skip_balanced("(", ")")
            return self.statement()
        if self._looks_like_declaration():
            return self._declaration()
        return self._expression_statement()

    def _skip_balanced(self, open_ch: str, close_ch: str):
        depth = 0
        while self.i < len(self.toks):
            t = self.take()
            if t.text == open_ch:
                depth += 1
            elif t.text == close_ch:
                depth -= 1
                if depth == 0:
                    return

    def _stmt_if(self) -> AstNode:
        node = AstNode("IfStmt")
        self.take()
        if not self.accept("("):
            node.add(self.opaque_until((";", "}")))
            return node
        cond = node.add(AstNode("Cond"))
        cond.add(self.expression())
        self.accept(")")
        node.add(AstNode("Then")).add(self.statement())
        if self.at("else"):
            self.take()
            node.add(AstNode("Else")).add(self.statement())
        return node

    def _stmt_while(self) -> AstNode:
        node = AstNode("WhileStmt")
        self.take()
        if self.accept("("):
            cond = node.add(AstNode("Cond"))
            cond.add(self.expression())
            self.accept(")")
        node.add(self.statement())
        return node

    def _stmt_for(self) -> AstNode:
        node = AstNode("ForStmt")
        self.take()
        if self.accept("("):
            header = node.add(AstNode("ForHeader"))
            while self.i < len(self.toks) and not self.at(")"):
                if self.at(";") or self.at(":") or self.at(","):
                    self.take()
                    continue
                before = self.i
                if self._looks_like_declaration():
                    header.add(self._declaration(consume_semi=False))
                else:
                    header.add(self.expression())
                if self.i == before:
                    header.add(leaf("OPAQUE", self.take().text))
            self.accept(")")
        node.add(self.statement())
        return node

    def _stmt_return(self) -> AstNode:
        node = AstNode("ReturnStmt")
        self.take()
        if not self.at(";"):
            node.add(self.expression())
        self.accept(";")
        return node

    def _stmt_throw(self) -> AstNode:
        node = AstNode("ThrowStmt")
        self.take()
        if not self.at(";"):
            node.add(self.expression())
        self.accept(";")
        return node

    def _stmt_break(self) -> AstNode:
        self.take()
        self.accept(";")
        return AstNode("BreakStmt")

    def _stmt_continue(self) -> AstNode:
        self.take()
        self.accept(";")
        return AstNode("ContinueStmt")

    def _stmt_switch(self) -> AstNode:
        node = AstNode("SwitchStmt")
        self.take()
        if self.accept("("):
            sel = node.add(AstNode("Selector"))
            sel.add(self.expression())
            self.accept(")")
        if not self.accept("{"):
            return node
        clause = None
        while self.i < len(self.toks) and not self.at("}"):
            if self.at("case"):
                self.take()
                clause = node.add(AstNode("CaseClause"))
                guard = clause.add(AstNode("CaseLabel"))
                guard.add(self.expression())
                self.accept(":")
            elif self.at("default"):
                self.take()
                clause = node.add(AstNode("DefaultClause"))
                self.accept(":")
            else:
                target = clause if clause is not None else node
                before = self.i
                target.add(self.statement())
                if self.i == before:
                    target.add(leaf("OPAQUE", self.take().text))
        self.accept("}")
        return node

    def _stmt_case(self) -> AstNode:
        # a bare case label at top level (sliced switch arm): record the
        # guard expression, then continue with ordinary statements
        node = AstNode("CaseClause")
        self.take()
        guard = node.add(AstNode("CaseLabel"))
        guard.add(self.expression())
        self.accept(":")
        return node

    def _stmt_try(self) -> AstNode:
        node = AstNode("TryStmt")
        self.take()
        if self.at("("):
            self._skip_balanced("(", ")")
        node.add(self.statement())
        while self.at("catch") or self.at("finally"):
            kind = self.take().text
            clause = node.add(AstNode("CatchClause" if kind == "catch"
                                      else "FinallyClause"))
            if self.at("("):
                self._skip_balanced("(", ")")
            clause.add(self.statement())
        return node

    def _stmt_do(self) -> AstNode:
        node = AstNode("DoStmt")
        self.take()
        node.add(self.statement())
        if self.accept("while") and self.accept("("):
            cond = node.add(AstNode("Cond"))
            cond.add(self.expression())
            self.accept(")")
        self.accept(";")
        return node

    # -- declarations

    def _looks_like_declaration(self) -> bool:
        """ident-ish type followed by an identifier then = ; , [ or ( ...
        modifiers are tolerated in front."""
        j = 0
        while self.at_kind("ident", j) and self.peek(j).text in _MODIFIERS:
            j += 1
        t = self.peek(j)
        if t is None or t.kind != "ident":
            return False
        if t.text in _JAVA_KEYWORDS and t.text not in (
                "int", "long", "short", "byte", "char", "boolean", "float",
                "double", "void"):
            return False
        j += 1
        # qualified / generic / array type suffixes
        while True:
            if self.at(".", j) and self.at_kind("ident", j + 1):
                j += 2
            elif self.at("<", j):
                depth = 0
                while self.peek(j) is not None:
                    if self.at("<", j):
                        depth += 1
                    elif self.at(">", j):
                        depth -= 1
                        j += 1
                        if depth == 0:
                            break
                        continue
                    elif not (self.at_kind("ident", j) or self.at(",", j)
                              or self.at(".", j) or self.at("?", j)
                              or self.at("[", j) or self.at("]", j)):
                        return False
                    j += 1
                else:
                    return False
            elif self.at("[", j) and self.at("]", j + 1):
                j += 2
            else:
                break
        if not self.at_kind("ident", j):
            return False
        nxt = self.peek(j + 1)
        return nxt is not None and nxt.text in ("=", ";", ",", "[")

    def _declaration(self, consume_semi: bool = True) -> AstNode:
        node = AstNode("LocalVarDecl")
        while self.at_kind("ident") and self.peek().text in _MODIFIERS:
            node.add(leaf("Modifier", self.take().text))
        type_parts = [self.take().text]
        while True:
            if self.at(".") and self.at_kind("ident", 1):
                self.take()
                type_parts.append("." + self.take().text)
            elif self.at("<"):
                depth = 0
                while self.i < len(self.toks):
                    t = self.take()
                    type_parts.append(t.text)
                    if t.text == "<":
                        depth += 1
                    elif t.text == ">":
                        depth -= 1
                        if depth == 0:
                            break
            elif self.at("[") and self.at("]", 1):
                self.take()
                self.take()
                type_parts.append("[]")
            else:
                break
        node.add(leaf("TypeName", "".join(type_parts)))
        while True:
            if not self.at_kind("ident"):
                break
            decl = node.add(AstNode("Declarator"))
            decl.add(leaf("Name", self.take().text))
            while self.at("[") and self.at("]", 1):
                self.take()
                self.take()
            if self.accept("="):
                decl.add(self.expression())
            if not self.accept(","):
                break
        if consume_semi:
            if self.at(";"):
                self.take()
            elif self.peek() is not None and not self.at("}"):
                node.add(self.opaque_until((";", "}")))
        return node

    def _expression_statement(self) -> AstNode:
        node = AstNode("ExprStmt")
        start = self.i
        expr = self.expression()
        node.add(expr)
        if self.at(";"):
            self.take()
        elif self.peek() is not None and not self.at("}") \
                and not self.at("{") and self.i > start:
            # something the expression grammar could not finish
            node.add(self.opaque_until((";", "}")))
        return node

    # -- expressions

    _BINARY_OPS = {"+", "-", "*", "/", "%", "==", "!=", "<", ">", "<=", ">=",
                   "&&", "||", "&", "|", "^", "<<", ">>", ">>>", "=", "+=",
                   "-=", "*=", "/=", "%=", "&=", "|=", "^=", "instanceof"}

    def expression(self) -> AstNode:
        node = self._operand()
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text in self._BINARY_OPS:
                self.take()
                op_label = "Assign" if t.text == "=" else f"Binary{t.text}"
                parent = AstNode(op_label)
                parent.add(node)
                parent.add(self._operand())
                node = parent
            elif t.text == "?":  # ternary
                self.take()
                parent = AstNode("Conditional")
                parent.add(node)
                parent.add(self.expression())
                self.accept(":")
                parent.add(self.expression())
                node = parent
            else:
                break
        return node

    def _operand(self) -> AstNode:
        t = self.peek()
        if t is None:
            return leaf("OPAQUE", "")
        if t.text in ("!", "-", "+", "~", "++", "--"):
            self.take()
            node = AstNode(f"Unary{t.text}")
            node.add(self._operand())
            return node
        return self._postfix(self._primary())

    def _primary(self) -> AstNode:
        t = self.peek()
        if t is None:
            return leaf("OPAQUE", "")
        if t.kind == "number":
            self.take()
            return leaf("Num", t.text)
        if t.kind == "string":
            self.take()
            return leaf("Str", t.text[1:-1])
        if t.kind == "char":
            self.take()
            return leaf("Char", t.text[1:-1])
        if t.text in ("true", "false", "null"):
            self.take()
            return leaf("Lit", t.text)
        if t.text == "new":
            return self._new_expr()
        if t.text == "(":
            if self._lambda_ahead():
                return self._lambda()
            self.take()
            inner = self.expression()
            self.accept(")")
            nxt = self.peek()
            if self._is_type_like(inner) and nxt is not None and (
                    nxt.kind in ("ident", "number", "string", "char")
                    or nxt.text in ("(", "!", "~")):
                cast = AstNode("Cast")
                cast.add(inner)
                cast.add(self._operand())
                return cast
            node = AstNode("Paren")
            node.add(inner)
            return node
        if t.kind == "ident":
            if t.text in _JAVA_KEYWORDS and t.text not in ("this", "super"):
                return self.opaque_until((";", "}"))
            if self.at_kind("arrow", 1):
                return self._lambda()
            self.take()
            return leaf("Name", t.text)
        return self.opaque_until((";", "}"))

    @staticmethod
    def _is_type_like(node: AstNode) -> bool:
        """A bare name or dotted name chain, as a cast's parenthesized type."""
        if node.is_leaf:
            return node.label == "Name"
        return node.label == "FieldAccess" and \
            all(_Parser._is_type_like(c) for c in node.children)

    def _lambda_ahead(self) -> bool:
        assert self.at("(")
        depth = 0
        j = 0
        while self.peek(j) is not None:
            if self.at("(", j):
                depth += 1
            elif self.at(")", j):
                depth -= 1
                if depth == 0:
                    return self.at_kind("arrow", j + 1)
            j += 1
        return False

    def _lambda(self) -> AstNode:
        node = AstNode("Lambda")
        params = node.add(AstNode("Params"))
        if self.accept("("):
            while self.i < len(self.toks) and not self.at(")"):
                t = self.take()
                if t.kind == "ident":
                    # for typed params the last ident before , or ) is the name
                    nxt = self.peek()
                    if nxt is None or nxt.text in (",", ")"):
                        params.add(leaf("Name", t.text))
            self.accept(")")
        elif self.at_kind("ident"):
            params.add(leaf("Name", self.take().text))
        if self.at_kind("arrow"):
            self.take()
        if self.at("{"):
            node.add(self.statement())
        else:
            body = node.add(AstNode("LambdaBody"))
            body.add(self.expression())
        return node

    def _new_expr(self) -> AstNode:
        node = AstNode("New")
        self.take()
        type_parts = []
        while self.at_kind("ident"):
            type_parts.append(self.take().text)
            if self.at(".") and self.at_kind("ident", 1):
                self.take()
                type_parts.append(".")
            else:
                break
        node.add(leaf("TypeName", "".join(type_parts)))
        if self.at("<"):
            self._skip_balanced("<", ">")
        if self.accept("("):
            args = node.add(AstNode("Args"))
            self._parse_args(args)
        if self.at("["):
            self._skip_balanced("[", "]")
        if self.at("{"):
            self.take()
            body = node.add(AstNode("AnonClassBody"))
            self._parse_class_members(body)
            self.accept("}")
        return node

    def _parse_class_members(self, body: AstNode):
        while self.i < len(self.toks) and not self.at("}"):
            if self.at("@"):
                self.take()
                if self.at_kind("ident"):
                    self.take()
                if self.at("("):
                    self._skip_balanced("(", ")")
                continue
            if self._method_decl_ahead():
                body.add(self._method_decl())
                continue
            before = self.i
            body.add(self.statement())
            if self.i == before:
                body.add(leaf("OPAQUE", self.take().text))

    def _method_decl_ahead(self) -> bool:
        j = 0
        while self.at_kind("ident", j) and self.peek(j).text in _MODIFIERS:
            j += 1
        if not self.at_kind("ident", j):
            return False
        j += 1
        if not self.at_kind("ident", j):
            return False
        return self.at("(", j + 1)

    def _method_decl(self) -> AstNode:
        node = AstNode("MethodDecl")
        while self.at_kind("ident") and self.peek().text in _MODIFIERS:
            node.add(leaf("Modifier", self.take().text))
        node.add(leaf("TypeName", self.take().text))
        node.add(leaf("Name", self.take().text))
        params = node.add(AstNode("Params"))
        if self.accept("("):
            while self.i < len(self.toks) and not self.at(")"):
                t = self.take()
                if t.kind == "ident":
                    nxt = self.peek()
                    if nxt is None or nxt.text in (",", ")"):
                        params.add(leaf("Name", t.text))
            self.accept(")")
        if self.at("{"):
            node.add(self.statement())
        else:
            self.accept(";")
        return node

    def _parse_args(self, args: AstNode):
        while self.i < len(self.toks) and not self.at(")"):
            before = self.i
            args.add(self.expression())
            if not self.accept(","):
                if self.i == before:
                    args.add(leaf("OPAQUE", self.take().text))
        self.accept(")")

    def _postfix(self, node: AstNode) -> AstNode:
        while True:
            if self.at(".") and self.at_kind("ident", 1):
                name_tok = self.peek(1)
                if self.at("(", 2):
                    self.take()
                    self.take()
                    self.take()
                    call = AstNode("Call")
                    call.add(node)
                    call.add(leaf("Callee", name_tok.text))
                    args = call.add(AstNode("Args"))
                    self._parse_args(args)
                    node = call
                else:
                    self.take()
                    self.take()
                    access = AstNode("FieldAccess")
                    access.add(node)
                    access.add(leaf("Name", name_tok.text))
                    node = access
            elif self.at("(") and node.is_leaf and node.label == "Name":
                # plain call: promote the name leaf to the callee
                self.take()
                call = AstNode("Call")
                call.add(leaf("Callee", node.value))
                args = call.add(AstNode("Args"))
                self._parse_args(args)
                node = call
            elif self.at("["):
                self.take()
                idx = AstNode("Index")
                idx.add(node)
                idx.add(self.expression())
                self.accept("]")
                node = idx
            elif self.at("++") or self.at("--"):
                t = self.take()
                post = AstNode(f"Unary{t.text}")
                post.add(node)
                node = post
            else:
                return node


def build_ast(snippet: str) -> Ast:
    """Parse a snippet into a labeled tree rooted at MethodBody.

    Unparseable regions collapse into OPAQUE leaves; only an all-whitespace
    snippet is an error.
    """
    if not snippet.strip():
        raise EmptySnippetError("cannot build an AST from an empty snippet")
    parser = _Parser(snippet)
    root = AstNode("MethodBody")
    parser.parse_block_contents(root, closing="\0")
    return Ast(root)
