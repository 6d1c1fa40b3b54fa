"""Tokenizer, recursive-descent parser, and renderer for the mini language.

One function per source file, Python-flavored surface syntax:

    program   := "def" NAME "(" [NAME ("," NAME)*] ")" ":" suite
    suite     := statement (";" statement)* | NEWLINE INDENT block DEDENT
    statement := NAME "=" expr | "return" expr | "if" expr ":" suite ["else" ":" suite]

Expressions cover variables, integer/float literals, calls f(a, b) and
method calls (expr).name(args), unary - and ~, and the binary operators
==  <  >  |  &  +  -  *  /  ** with Python's relative precedence
(comparisons loosest, ** tightest and right-associative).  Newlines are
ignored inside parentheses; '#' starts a comment.

The top-level body must end with its single return statement, and every
variable read must be a parameter or assigned on all paths before use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ParseError

KEYWORDS = ("def", "return", "if", "else")
COMPARISON_OPS = ("==", "<", ">")
ADDITIVE_OPS = ("+", "-")
MULTIPLICATIVE_OPS = ("*", "/")
UNARY_OPS = ("-", "~")
BINARY_OPS = COMPARISON_OPS + ("|", "&") + ADDITIVE_OPS + MULTIPLICATIVE_OPS + ("**",)

_SYMBOLS = ("**", "==", "(", ")", ",", ":", ";", "=", "&", "|", "+", "*", "-", "/", "<", ">", "~", ".")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, OP, NEWLINE, INDENT, DEDENT, EOF
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    indent_stack = [0]
    paren_depth = 0
    for line_no, raw in enumerate(source.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip() and paren_depth == 0:
            continue  # blank or comment-only line
        col = 0
        if paren_depth == 0:
            indent = len(stripped) - len(stripped.lstrip(" "))
            if "\t" in stripped[:indent]:
                raise ParseError("tabs are not supported in indentation", line_no, 1)
            if indent > indent_stack[-1]:
                indent_stack.append(indent)
                tokens.append(Token("INDENT", "", line_no, 1))
            while indent < indent_stack[-1]:
                indent_stack.pop()
                tokens.append(Token("DEDENT", "", line_no, 1))
            if indent != indent_stack[-1]:
                raise ParseError("inconsistent indentation", line_no, indent + 1)
            col = indent
        text = stripped
        while col < len(text):
            ch = text[col]
            if ch == " ":
                col += 1
                continue
            if ch.isdigit() or (ch == "." and col + 1 < len(text) and text[col + 1].isdigit()):
                end = col + 1
                seen_dot = ch == "."
                while end < len(text) and (text[end].isdigit() or (text[end] == "." and not seen_dot)):
                    if text[end] == ".":
                        # a dot starting a method call, not a decimal point
                        if end + 1 >= len(text) or not text[end + 1].isdigit():
                            break
                        seen_dot = True
                    end += 1
                tokens.append(Token("NUMBER", text[col:end], line_no, col + 1))
                col = end
                continue
            if ch.isalpha() or ch == "_":
                end = col + 1
                while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                    end += 1
                tokens.append(Token("NAME", text[col:end], line_no, col + 1))
                col = end
                continue
            for sym in _SYMBOLS:
                if text.startswith(sym, col):
                    if sym == "(":
                        paren_depth += 1
                    elif sym == ")":
                        paren_depth = max(0, paren_depth - 1)
                    tokens.append(Token("OP", sym, line_no, col + 1))
                    col += len(sym)
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", line_no, col + 1)
        if paren_depth == 0:
            tokens.append(Token("NEWLINE", "", line_no, len(raw) + 1))
    if paren_depth > 0:
        raise ParseError("unbalanced parentheses at end of input", len(source.splitlines()), 1)
    while len(indent_stack) > 1:
        indent_stack.pop()
        tokens.append(Token("DEDENT", "", len(source.splitlines()) + 1, 1))
    tokens.append(Token("EOF", "", len(source.splitlines()) + 1, 1))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Const:
    text: str
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    receiver: object | None = None
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Assign:
    target: str
    value: object
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Return:
    value: object
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class If:
    test: object
    then_body: tuple
    else_body: tuple = ()
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Program:
    name: str
    params: tuple[str, ...]
    body: tuple
    span: tuple[int, int] = (0, 0)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value or tok.kind!r}", tok.line, tok.col)
        return self.advance()

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            return self.advance()
        return None

    # -- grammar ----------------------------------------------------------

    def program(self) -> Program:
        start = self.expect("NAME", "def")
        name = self.expect("NAME").value
        if name in KEYWORDS:
            raise ParseError(f"{name!r} is a keyword", start.line, start.col)
        self.expect("OP", "(")
        params = []
        if not self.accept("OP", ")"):
            params.append(self.expect("NAME").value)
            while self.accept("OP", ","):
                params.append(self.expect("NAME").value)
            self.expect("OP", ")")
        if len(set(params)) != len(params):
            raise ParseError("duplicate parameter names", start.line, start.col)
        self.expect("OP", ":")
        body = self.suite(allow_if=True)
        self.expect("EOF")
        return Program(name, tuple(params), tuple(body), (start.line, start.col))

    def suite(self, allow_if: bool) -> list:
        if self.accept("NEWLINE"):
            self.expect("INDENT")
            body: list = []
            while not self.accept("DEDENT"):
                body.extend(self.statement_line())
            if not body:
                tok = self.peek()
                raise ParseError("empty block", tok.line, tok.col)
            return body
        return self.simple_statements()

    def statement_line(self) -> list:
        tok = self.peek()
        if tok.kind == "NAME" and tok.value == "if":
            return [self.if_statement()]
        return self.simple_statements()

    def simple_statements(self) -> list:
        """';'-separated assigns/returns up to the end of the line."""
        body = [self.simple_statement()]
        while self.accept("OP", ";"):
            if self.peek().kind in ("NEWLINE", "EOF"):
                break
            body.append(self.simple_statement())
        if not self.accept("NEWLINE") and self.peek().kind != "EOF":
            tok = self.peek()
            raise ParseError(f"expected end of line, found {tok.value or tok.kind!r}", tok.line, tok.col)
        return body

    def simple_statement(self):
        tok = self.peek()
        if tok.kind == "NAME" and tok.value == "if":
            raise ParseError("if statements need their own line", tok.line, tok.col)
        if tok.kind == "NAME" and tok.value == "return":
            self.advance()
            return Return(self.expression(), (tok.line, tok.col))
        name = self.expect("NAME")
        if name.value in KEYWORDS:
            raise ParseError(f"unexpected keyword {name.value!r}", name.line, name.col)
        self.expect("OP", "=")
        return Assign(name.value, self.expression(), (name.line, name.col))

    def if_statement(self) -> If:
        tok = self.expect("NAME", "if")
        test = self.expression()
        self.expect("OP", ":")
        then_body = self.suite(allow_if=True)
        else_body: list = []
        if self.peek().kind == "NAME" and self.peek().value == "else":
            self.advance()
            self.expect("OP", ":")
            else_body = self.suite(allow_if=True)
        return If(test, tuple(then_body), tuple(else_body), (tok.line, tok.col))

    # -- expressions, loosest binding first --------------------------------

    def expression(self):
        return self.comparison()

    def comparison(self):
        node = self.bit_or()
        while self.peek().kind == "OP" and self.peek().value in COMPARISON_OPS:
            op = self.advance()
            node = Binary(op.value, node, self.bit_or(), (op.line, op.col))
        return node

    def bit_or(self):
        node = self.bit_and()
        while self.peek().kind == "OP" and self.peek().value == "|":
            op = self.advance()
            node = Binary("|", node, self.bit_and(), (op.line, op.col))
        return node

    def bit_and(self):
        node = self.additive()
        while self.peek().kind == "OP" and self.peek().value == "&":
            op = self.advance()
            node = Binary("&", node, self.additive(), (op.line, op.col))
        return node

    def additive(self):
        node = self.multiplicative()
        while self.peek().kind == "OP" and self.peek().value in ADDITIVE_OPS:
            op = self.advance()
            node = Binary(op.value, node, self.multiplicative(), (op.line, op.col))
        return node

    def multiplicative(self):
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().value in MULTIPLICATIVE_OPS:
            op = self.advance()
            node = Binary(op.value, node, self.unary(), (op.line, op.col))
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value in UNARY_OPS:
            self.advance()
            return Unary(tok.value, self.unary(), (tok.line, tok.col))
        return self.power()

    def power(self):
        base = self.postfix()
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "**":
            self.advance()
            return Binary("**", base, self.unary(), (tok.line, tok.col))
        return base

    def postfix(self):
        node = self.atom()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value == "(" and isinstance(node, Var):
                self.advance()
                args = self.call_args()
                node = Call(node.name, tuple(args), receiver=None, span=node.span)
            elif tok.kind == "OP" and tok.value == ".":
                self.advance()
                method = self.expect("NAME")
                self.expect("OP", "(")
                args = self.call_args()
                node = Call(method.value, tuple(args), receiver=node, span=(method.line, method.col))
            else:
                return node

    def call_args(self) -> list:
        args = []
        if self.accept("OP", ")"):
            return args
        args.append(self.expression())
        while self.accept("OP", ","):
            args.append(self.expression())
        self.expect("OP", ")")
        return args

    def atom(self):
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Const(tok.value, (tok.line, tok.col))
        if tok.kind == "NAME":
            if tok.value in KEYWORDS:
                raise ParseError(f"unexpected keyword {tok.value!r}", tok.line, tok.col)
            self.advance()
            return Var(tok.value, (tok.line, tok.col))
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            node = self.expression()
            self.expect("OP", ")")
            return node
        raise ParseError(f"unexpected token {tok.value or tok.kind!r}", tok.line, tok.col)


def expr_reads(expr) -> set[str]:
    """Variable names read by an expression (call names are not reads)."""
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, Unary):
        return expr_reads(expr.operand)
    if isinstance(expr, Binary):
        return expr_reads(expr.left) | expr_reads(expr.right)
    if isinstance(expr, Call):
        out = set()
        if expr.receiver is not None:
            out |= expr_reads(expr.receiver)
        for arg in expr.args:
            out |= expr_reads(arg)
        return out
    raise TypeError(f"not an expression: {expr!r}")


def stmt_reads(stmt) -> set[str]:
    """Free reads of a statement (reads not satisfied inside it)."""
    if isinstance(stmt, Assign):
        return expr_reads(stmt.value)
    if isinstance(stmt, Return):
        return expr_reads(stmt.value)
    if isinstance(stmt, If):
        return expr_reads(stmt.test) | _block_free_reads(stmt.then_body) | _block_free_reads(stmt.else_body)
    raise TypeError(f"not a statement: {stmt!r}")


def stmt_writes(stmt) -> set[str]:
    if isinstance(stmt, Assign):
        return {stmt.target}
    if isinstance(stmt, Return):
        return set()
    if isinstance(stmt, If):
        out = set()
        for s in (*stmt.then_body, *stmt.else_body):
            out |= stmt_writes(s)
        return out
    raise TypeError(f"not a statement: {stmt!r}")


def _block_free_reads(body) -> set[str]:
    free: set[str] = set()
    defined: set[str] = set()
    for stmt in body:
        free |= stmt_reads(stmt) - defined
        defined |= stmt_writes(stmt)
    return free


def _check_defined(body, defined: set[str], top_level: bool, program_name: str) -> set[str]:
    """Use-before-assignment on all paths; returns the surviving defined set."""
    for idx, stmt in enumerate(body):
        if isinstance(stmt, Return) and top_level and idx != len(body) - 1:
            raise ParseError("return must be the final statement", *stmt.span)
        if isinstance(stmt, Return) and not top_level:
            raise ParseError("return is only allowed at the top level", *stmt.span)
        if isinstance(stmt, If):
            missing = expr_reads(stmt.test) - defined
            if missing:
                raise ParseError(f"variable {sorted(missing)[0]!r} read before assignment", *stmt.span)
            then_defined = _check_defined(stmt.then_body, set(defined), False, program_name)
            else_defined = _check_defined(stmt.else_body, set(defined), False, program_name)
            defined = then_defined & else_defined if stmt.else_body else defined
            continue
        missing = stmt_reads(stmt) - defined
        if missing:
            raise ParseError(f"variable {sorted(missing)[0]!r} read before assignment", *stmt.span)
        defined = defined | stmt_writes(stmt)
    return defined


def validate(program: Program) -> None:
    if not program.body or not isinstance(program.body[-1], Return):
        raise ParseError("function body must end with a return statement", *program.span)
    if sum(isinstance(s, Return) for s in program.body) != 1:
        raise ParseError("exactly one top-level return is required", *program.span)
    _check_defined(program.body, set(program.params), True, program.name)


def parse(source: str) -> Program:
    """Parse and validate a mini-language function definition."""
    program = _Parser(tokenize(source)).program()
    validate(program)
    return program


# ---------------------------------------------------------------------------
# rendering


def render(program: Program) -> str:
    lines = [f"def {program.name}({', '.join(program.params)}):"]
    lines.extend(_render_block(program.body, 1))
    return "\n".join(lines) + "\n"


def _render_block(body, depth: int) -> list[str]:
    pad = "  " * depth
    lines = []
    for stmt in body:
        if isinstance(stmt, Assign):
            lines.append(f"{pad}{stmt.target} = {render_expr(stmt.value)}")
        elif isinstance(stmt, Return):
            lines.append(f"{pad}return {render_expr(stmt.value)}")
        else:
            lines.append(f"{pad}if {render_expr(stmt.test)}:")
            lines.extend(_render_block(stmt.then_body, depth + 1))
            if stmt.else_body:
                lines.append(f"{pad}else:")
                lines.extend(_render_block(stmt.else_body, depth + 1))
    return lines


def render_expr(expr) -> str:
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Const):
        return expr.text
    if isinstance(expr, Unary):
        return f"{expr.op}{_maybe_paren(expr.operand)}"
    if isinstance(expr, Binary):
        return f"{_maybe_paren(expr.left)} {expr.op} {_maybe_paren(expr.right)}"
    if isinstance(expr, Call):
        args = ", ".join(render_expr(a) for a in expr.args)
        if expr.receiver is not None:
            return f"{_maybe_paren(expr.receiver)}.{expr.func}({args})"
        return f"{expr.func}({args})"
    raise TypeError(f"not an expression: {expr!r}")


def _maybe_paren(expr) -> str:
    text = render_expr(expr)
    if isinstance(expr, (Binary, Unary)):
        return f"({text})"
    return text
