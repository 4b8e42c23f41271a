"""Recursive-descent parser for the script language.

Grammar (informal)::

    script    := (global | function)* state+
    global    := type IDENT ['=' expr] ';'
    function  := [type] IDENT '(' params ')' block
    state     := 'default' '{' handler* '}' | 'state' IDENT '{' handler* '}'
    handler   := IDENT '(' params ')' block
    stmt      := block | decl | if | while | return | 'state' IDENT ';'
               | lvalue assign_op expr ';' | expr ';' | ';'

Vector and rotation literals are ``<a, b, c>`` and ``<a, b, c, s>``; their
components are parsed above the comparison operators, so a comparison
inside a literal needs parentheses.
"""

from __future__ import annotations

from . import nodes as n
from .errors import ScriptSyntaxError
from .lexer import TYPE_NAMES, Token, tokenize

_ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=")
_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)
_VECTOR_ELEMENT_LEVEL = 4  # additive and tighter


class Parser:
    def __init__(self, source: str, filename: str | None = None):
        self.filename = filename
        try:
            self.tokens = tokenize(source)
        except ScriptSyntaxError as exc:
            exc.filename = filename
            raise
        self.i = 0

    # ---- token helpers ------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected '{text}', found {self._describe(self.tok)}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self._describe(self.tok)}")
        return self.advance()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ScriptSyntaxError(message, tok.line, tok.col, self.filename)

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else f"'{tok.text}'"

    def _at_type(self) -> bool:
        return self.tok.kind == "kw" and self.tok.text in TYPE_NAMES

    # ---- top level ----------------------------------------------------

    def parse_script(self) -> n.Script:
        first = self.tok
        globals_, functions, states = [], [], []
        while not (self.at("default") or self.at("state")):
            if self.tok.kind == "eof":
                self.error("expected a 'default' state")
            if self._at_type() and self.peek().kind == "ident" and self.peek(2).text != "(":
                globals_.append(self.parse_global())
            else:
                functions.append(self.parse_function())
        while self.tok.kind != "eof":
            states.append(self.parse_state())
        return n.Script(globals_, functions, states, line=first.line, col=first.col)

    def parse_global(self) -> n.GlobalVar:
        t = self.advance()
        name = self.expect_ident().text
        init = self.parse_expr() if self.accept("=") else None
        self.expect(";")
        return n.GlobalVar(t.text, name, init, line=t.line, col=t.col)

    def parse_function(self) -> n.Function:
        start = self.tok
        returns = self.advance().text if self._at_type() else None
        name = self.expect_ident().text
        params = self.parse_params()
        body = self.parse_block()
        return n.Function(returns, name, params, body, line=start.line, col=start.col)

    def parse_params(self) -> list[n.Param]:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                if not self._at_type():
                    self.error(f"expected parameter type, found {self._describe(self.tok)}")
                t = self.advance()
                params.append(n.Param(t.text, self.expect_ident().text, line=t.line, col=t.col))
                if not self.accept(","):
                    break
        self.expect(")")
        return params

    def parse_state(self) -> n.State:
        start = self.tok
        if self.accept("default"):
            name = "default"
        elif self.accept("state"):
            name = self.expect_ident().text
        else:
            self.error(f"expected a state, found {self._describe(self.tok)}")
        self.expect("{")
        handlers = []
        while not self.accept("}"):
            t = self.expect_ident()
            handlers.append(n.Handler(t.text, self.parse_params(), self.parse_block(), line=t.line, col=t.col))
        return n.State(name, handlers, line=start.line, col=start.col)

    # ---- statements ---------------------------------------------------

    def parse_block(self) -> n.Block:
        start = self.expect("{")
        body = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                self.error("unterminated block, expected '}'")
            stmt = self.parse_statement()
            if stmt is not None:
                body.append(stmt)
        return n.Block(body, line=start.line, col=start.col)

    def _as_block(self) -> n.Block:
        if self.at("{"):
            return self.parse_block()
        start = self.tok
        stmt = self.parse_statement()
        return n.Block([] if stmt is None else [stmt], line=start.line, col=start.col)

    def parse_statement(self) -> n.Node | None:
        t = self.tok
        if self.accept(";"):
            return None
        if self.at("{"):
            return self.parse_block()
        if self._at_type():
            self.advance()
            name = self.expect_ident().text
            init = self.parse_expr() if self.accept("=") else None
            self.expect(";")
            return n.Decl(t.text, name, init, line=t.line, col=t.col)
        if self.accept("if"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self._as_block()
            orelse = self._as_block() if self.accept("else") else None
            return n.If(cond, then, orelse, line=t.line, col=t.col)
        if self.accept("while"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            return n.While(cond, self._as_block(), line=t.line, col=t.col)
        if self.accept("return"):
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return n.Return(value, line=t.line, col=t.col)
        if self.accept("state"):
            name = "default" if self.accept("default") else self.expect_ident().text
            self.expect(";")
            return n.StateChange(name, line=t.line, col=t.col)
        expr = self.parse_expr()
        if self.tok.kind == "op" and self.tok.text in _ASSIGN_OPS:
            op = self.advance().text
            if not isinstance(expr, (n.Name, n.Member)):
                self.error("left side of assignment is not assignable", t)
            value = self.parse_expr()
            self.expect(";")
            return n.Assign(expr, op, value, line=t.line, col=t.col)
        self.expect(";")
        return n.ExprStmt(expr, line=t.line, col=t.col)

    # ---- expressions --------------------------------------------------

    def parse_expr(self, level: int = 0) -> n.Node:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.tok.kind == "op" and self.tok.text in ops:
            t = self.advance()
            right = self.parse_expr(level + 1)
            left = n.Binary(t.text, left, right, line=t.line, col=t.col)
        return left

    def parse_unary(self) -> n.Node:
        t = self.tok
        if self.at("-") or self.at("!"):
            self.advance()
            return n.Unary(t.text, self.parse_unary(), line=t.line, col=t.col)
        if self.at("(") and self.peek().kind == "kw" and self.peek().text in TYPE_NAMES and self.peek(2).text == ")":
            self.advance()
            type_name = self.advance().text
            self.expect(")")
            return n.Cast(type_name, self.parse_unary(), line=t.line, col=t.col)
        return self.parse_postfix()

    def parse_postfix(self) -> n.Node:
        expr = self.parse_primary()
        while self.at("."):
            t = self.advance()
            field = self.expect_ident().text
            if field not in ("x", "y", "z", "s"):
                self.error(f"unknown component '.{field}'", t)
            expr = n.Member(expr, field, line=t.line, col=t.col)
        return expr

    def parse_primary(self) -> n.Node:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return n.IntLit(t.value, line=t.line, col=t.col)
        if t.kind == "float":
            self.advance()
            return n.FloatLit(t.value, line=t.line, col=t.col)
        if t.kind == "string":
            self.advance()
            return n.StrLit(t.value, line=t.line, col=t.col)
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    while True:
                        args.append(self.parse_expr())
                        if not self.accept(","):
                            break
                self.expect(")")
                return n.Call(t.text, args, line=t.line, col=t.col)
            return n.Name(t.text, line=t.line, col=t.col)
        if self.accept("("):
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if self.accept("<"):
            parts = [self.parse_expr(_VECTOR_ELEMENT_LEVEL)]
            for _ in range(3):
                if not self.accept(","):
                    break
                parts.append(self.parse_expr(_VECTOR_ELEMENT_LEVEL))
            self.expect(">")
            if len(parts) == 3:
                return n.VecLit(*parts, line=t.line, col=t.col)
            if len(parts) == 4:
                return n.RotLit(*parts, line=t.line, col=t.col)
            self.error("vector literals need 3 components, rotations 4", t)
        self.error(f"expected an expression, found {self._describe(t)}")


def parse_syntax(source: str, filename: str | None = None) -> n.Script:
    """Parse without semantic checks."""
    return Parser(source, filename).parse_script()
