"""Constraint-language front end: lexer, AST and parser.

The language is a closed, indentation-structured expression language over the
concept functions: assignments (including `+=` accumulation and a list-append
effect), `for ... in` enumeration, `if`/`else` conditionals, `return`, boolean
and arithmetic operators, comparisons (including `in` over collections) and a
conditional expression. Anything else - loops other than `for`, function
definitions, imports, attribute access beyond `.append` - is rejected at parse
time as outside the language.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from ..errors import DslSyntaxError

KEYWORDS = {"for", "in", "if", "else", "return", "not", "and", "or", "True", "False"}

# recognized so we can reject them with a pointed message
FORBIDDEN_KEYWORDS = {
    "while", "def", "import", "from", "class", "lambda", "with", "try",
    "except", "finally", "yield", "global", "nonlocal", "pass", "break",
    "continue", "assert", "del", "raise", "elif", "None", "is", "print",
}

_OPERATORS = (
    "+=", "==", "!=", "<=", ">=",
    "=", "<", ">", "+", "-", "*", "/",
    "(", ")", "[", "]", ",", ":", ".",
)


@dataclass(frozen=True)
class Token:
    kind: str      # NAME KEYWORD NUMBER STRING OP NEWLINE INDENT DEDENT EOF
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    lines = source.splitlines()
    for lineno, raw in enumerate(lines, 1):
        if "\t" in raw:
            raise DslSyntaxError("tab characters are not allowed; indent with spaces",
                                 lineno, raw.index("\t") + 1)
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip(" "))
        if indent > indents[-1]:
            indents.append(indent)
            tokens.append(Token("INDENT", "", lineno, 1))
        else:
            while indent < indents[-1]:
                indents.pop()
                tokens.append(Token("DEDENT", "", lineno, 1))
            if indent != indents[-1]:
                raise DslSyntaxError("unindent does not match any outer level", lineno, indent + 1)
        _tokenize_line(stripped.lstrip(" "), lineno, indent, tokens)
        tokens.append(Token("NEWLINE", "", lineno, len(raw) + 1))
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token("DEDENT", "", len(lines) + 1, 1))
    tokens.append(Token("EOF", "", len(lines) + 1, 1))
    return tokens


def _tokenize_line(text: str, lineno: int, offset: int, out: list[Token]) -> None:
    i = 0
    while i < len(text):
        ch = text[i]
        col = offset + i + 1
        if ch == " ":
            i += 1
            continue
        if ch in "'\"":
            end = text.find(ch, i + 1)
            if end < 0:
                raise DslSyntaxError("unterminated string literal", lineno, col)
            out.append(Token("STRING", text[i + 1:end], lineno, col))
            i = end + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "."):
                j += 1
            lit = text[i:j]
            if lit.count(".") > 1:
                raise DslSyntaxError(f"bad number literal {lit!r}", lineno, col)
            out.append(Token("NUMBER", lit, lineno, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in FORBIDDEN_KEYWORDS:
                raise DslSyntaxError(f"construct not in DSL: {word!r}", lineno, col)
            kind = "KEYWORD" if word in KEYWORDS else "NAME"
            out.append(Token(kind, word, lineno, col))
            i = j
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                out.append(Token("OP", op, lineno, col))
                i += len(op)
                break
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", lineno, col)


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    line: int = field(compare=False, default=1, kw_only=True)
    col: int = field(compare=False, default=1, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: Decimal


@dataclass(frozen=True)
class Str(Node):
    value: str


@dataclass(frozen=True)
class Bool(Node):
    value: bool


@dataclass(frozen=True)
class Name(Node):
    id: str


@dataclass(frozen=True)
class ListLit(Node):
    items: tuple


@dataclass(frozen=True)
class Call(Node):
    func: str
    args: tuple


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str            # "not" | "-"
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str            # + - * / and or
    left: Node
    right: Node


@dataclass(frozen=True)
class Compare(Node):
    op: str            # < > <= >= == != in
    left: Node
    right: Node


@dataclass(frozen=True)
class IfExp(Node):
    cond: Node
    then: Node
    orelse: Node


@dataclass(frozen=True)
class Assign(Node):
    target: str
    value: Node
    augmented: bool = False    # True for "+="


@dataclass(frozen=True)
class Append(Node):
    target: str
    value: Node


@dataclass(frozen=True)
class For(Node):
    var: str
    iterable: Node
    body: tuple


@dataclass(frozen=True)
class If(Node):
    cond: Node
    body: tuple
    orelse: tuple = ()


@dataclass(frozen=True)
class Return(Node):
    value: Node


@dataclass(frozen=True)
class Program:
    statements: tuple


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise DslSyntaxError(f"expected {want!r}, found {tok.value or tok.kind!r}",
                                 tok.line, tok.col)
        return self.advance()

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    # statements ---------------------------------------------------------

    def parse_program(self) -> Program:
        statements = []
        while not self.at("EOF"):
            statements.append(self.statement())
        if not statements:
            raise DslSyntaxError("empty program", 1, 1)
        return Program(tuple(statements))

    def statement(self) -> Node:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            if tok.value == "for":
                return self.for_statement()
            if tok.value == "if":
                return self.if_statement()
            if tok.value == "return":
                return self.return_statement()
            raise DslSyntaxError(f"unexpected keyword {tok.value!r}", tok.line, tok.col)
        if tok.kind == "NAME":
            nxt = self.peek(1)
            if nxt.kind == "OP" and nxt.value in ("=", "+="):
                return self.assign_statement()
            if nxt.kind == "OP" and nxt.value == ".":
                return self.append_statement()
        raise DslSyntaxError(
            f"expected a statement, found {tok.value or tok.kind!r}", tok.line, tok.col
        )

    def assign_statement(self) -> Assign:
        target = self.expect("NAME")
        op = self.expect("OP")
        value = self.expression()
        self.end_of_statement()
        return Assign(target.value, value, augmented=(op.value == "+="),
                      line=target.line, col=target.col)

    def append_statement(self) -> Append:
        target = self.expect("NAME")
        self.expect("OP", ".")
        method = self.expect("NAME")
        if method.value != "append":
            raise DslSyntaxError(
                f"construct not in DSL: method call .{method.value}()",
                method.line, method.col,
            )
        self.expect("OP", "(")
        value = self.expression()
        self.expect("OP", ")")
        self.end_of_statement()
        return Append(target.value, value, line=target.line, col=target.col)

    def return_statement(self) -> Return:
        tok = self.expect("KEYWORD", "return")
        value = self.expression()
        self.end_of_statement()
        return Return(value, line=tok.line, col=tok.col)

    def for_statement(self) -> For:
        tok = self.expect("KEYWORD", "for")
        var = self.expect("NAME")
        self.expect("KEYWORD", "in")
        iterable = self.expression()
        self.expect("OP", ":")
        body = self.suite()
        return For(var.value, iterable, tuple(body), line=tok.line, col=tok.col)

    def if_statement(self) -> If:
        tok = self.expect("KEYWORD", "if")
        cond = self.expression()
        self.expect("OP", ":")
        body = self.suite()
        orelse: list = []
        if self.at("KEYWORD", "else"):
            self.advance()
            self.expect("OP", ":")
            orelse = self.suite()
        return If(cond, tuple(body), tuple(orelse), line=tok.line, col=tok.col)

    def suite(self) -> list:
        # inline form: `if x: effect` on one line
        if not self.at("NEWLINE"):
            return [self.statement()]
        self.advance()
        self.expect("INDENT")
        body = []
        while not self.at("DEDENT") and not self.at("EOF"):
            body.append(self.statement())
        self.expect("DEDENT")
        if not body:
            tok = self.peek()
            raise DslSyntaxError("empty block", tok.line, tok.col)
        return body

    def end_of_statement(self) -> None:
        if self.at("NEWLINE"):
            self.advance()
        elif not (self.at("DEDENT") or self.at("EOF")):
            tok = self.peek()
            raise DslSyntaxError(
                f"unexpected {tok.value or tok.kind!r} after statement", tok.line, tok.col
            )

    # expressions --------------------------------------------------------

    def expression(self) -> Node:
        value = self.or_expr()
        if self.at("KEYWORD", "if"):
            tok = self.advance()
            cond = self.or_expr()
            self.expect("KEYWORD", "else")
            orelse = self.expression()
            return IfExp(cond, value, orelse, line=tok.line, col=tok.col)
        return value

    def or_expr(self) -> Node:
        node = self.and_expr()
        while self.at("KEYWORD", "or"):
            tok = self.advance()
            node = BinOp("or", node, self.and_expr(), line=tok.line, col=tok.col)
        return node

    def and_expr(self) -> Node:
        node = self.not_expr()
        while self.at("KEYWORD", "and"):
            tok = self.advance()
            node = BinOp("and", node, self.not_expr(), line=tok.line, col=tok.col)
        return node

    def not_expr(self) -> Node:
        if self.at("KEYWORD", "not"):
            tok = self.advance()
            return UnaryOp("not", self.not_expr(), line=tok.line, col=tok.col)
        return self.comparison()

    def comparison(self) -> Node:
        node = self.arith()
        tok = self.peek()
        if tok.kind == "OP" and tok.value in ("<", ">", "<=", ">=", "==", "!="):
            self.advance()
            return Compare(tok.value, node, self.arith(), line=tok.line, col=tok.col)
        if tok.kind == "KEYWORD" and tok.value == "in":
            self.advance()
            return Compare("in", node, self.arith(), line=tok.line, col=tok.col)
        return node

    def arith(self) -> Node:
        node = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            tok = self.advance()
            node = BinOp(tok.value, node, self.term(), line=tok.line, col=tok.col)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.at("OP", "*") or self.at("OP", "/"):
            tok = self.advance()
            node = BinOp(tok.value, node, self.factor(), line=tok.line, col=tok.col)
        return node

    def factor(self) -> Node:
        if self.at("OP", "-"):
            tok = self.advance()
            return UnaryOp("-", self.factor(), line=tok.line, col=tok.col)
        if self.at("OP", "+"):
            self.advance()
            return self.factor()
        return self.atom()

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Num(Decimal(tok.value), line=tok.line, col=tok.col)
        if tok.kind == "STRING":
            self.advance()
            return Str(tok.value, line=tok.line, col=tok.col)
        if tok.kind == "KEYWORD" and tok.value in ("True", "False"):
            self.advance()
            return Bool(tok.value == "True", line=tok.line, col=tok.col)
        if tok.kind == "NAME":
            self.advance()
            if self.at("OP", "("):
                self.advance()
                args = []
                if not self.at("OP", ")"):
                    args.append(self.expression())
                    while self.at("OP", ","):
                        self.advance()
                        args.append(self.expression())
                self.expect("OP", ")")
                return Call(tok.value, tuple(args), line=tok.line, col=tok.col)
            return Name(tok.value, line=tok.line, col=tok.col)
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            node = self.expression()
            self.expect("OP", ")")
            return node
        if tok.kind == "OP" and tok.value == "[":
            self.advance()
            items = []
            if not self.at("OP", "]"):
                items.append(self.expression())
                while self.at("OP", ","):
                    self.advance()
                    items.append(self.expression())
            self.expect("OP", "]")
            return ListLit(tuple(items), line=tok.line, col=tok.col)
        raise DslSyntaxError(f"expected an expression, found {tok.value or tok.kind!r}",
                             tok.line, tok.col)


def parse(source: str) -> Program:
    """Parse constraint source text into a Program; raises DslSyntaxError."""
    return _Parser(tokenize(source)).parse_program()


# -- pretty printer ------------------------------------------------------------

_PRECEDENCE = {
    "or": 1, "and": 2,
    "in": 4, "<": 4, ">": 4, "<=": 4, ">=": 4, "==": 4, "!=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6,
}


def _fmt(node: Node, parent_prec: int = 0) -> str:
    if isinstance(node, Num):
        return format(node.value, "f")
    if isinstance(node, Str):
        return '"' + node.value + '"'
    if isinstance(node, Bool):
        return "True" if node.value else "False"
    if isinstance(node, Name):
        return node.id
    if isinstance(node, ListLit):
        return "[" + ", ".join(_fmt(item) for item in node.items) + "]"
    if isinstance(node, Call):
        return node.func + "(" + ", ".join(_fmt(arg) for arg in node.args) + ")"
    if isinstance(node, UnaryOp):
        prec = 3 if node.op == "not" else 7
        sep = " " if node.op == "not" else ""
        body = f"{node.op}{sep}{_fmt(node.operand, prec)}"
        return f"({body})" if prec < parent_prec else body
    if isinstance(node, (BinOp, Compare)):
        prec = _PRECEDENCE[node.op]
        body = f"{_fmt(node.left, prec)} {node.op} {_fmt(node.right, prec + 1)}"
        return f"({body})" if prec < parent_prec else body
    if isinstance(node, IfExp):
        body = f"{_fmt(node.then, 1)} if {_fmt(node.cond, 1)} else {_fmt(node.orelse)}"
        return f"({body})" if parent_prec > 0 else body
    raise TypeError(f"not an expression node: {type(node).__name__}")


def _fmt_block(statements: tuple, depth: int, out: list) -> None:
    pad = "    " * depth
    for stmt in statements:
        if isinstance(stmt, Assign):
            op = "+=" if stmt.augmented else "="
            out.append(f"{pad}{stmt.target} {op} {_fmt(stmt.value)}")
        elif isinstance(stmt, Append):
            out.append(f"{pad}{stmt.target}.append({_fmt(stmt.value)})")
        elif isinstance(stmt, Return):
            out.append(f"{pad}return {_fmt(stmt.value)}")
        elif isinstance(stmt, For):
            out.append(f"{pad}for {stmt.var} in {_fmt(stmt.iterable)}:")
            _fmt_block(stmt.body, depth + 1, out)
        elif isinstance(stmt, If):
            out.append(f"{pad}if {_fmt(stmt.cond)}:")
            _fmt_block(stmt.body, depth + 1, out)
            if stmt.orelse:
                out.append(f"{pad}else:")
                _fmt_block(stmt.orelse, depth + 1, out)
        else:
            raise TypeError(f"not a statement node: {type(stmt).__name__}")


def pretty(program: Program) -> str:
    """Canonical source text; parse(pretty(p)) is AST-identical to p."""
    out: list = []
    _fmt_block(program.statements, 0, out)
    return "\n".join(out) + "\n"
