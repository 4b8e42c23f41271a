"""Static checks: name resolution, builtin arity and operand types."""

from __future__ import annotations

from . import nodes as n
from .builtins import BUILTINS, CONSTANTS, EVENTS
from .errors import ScriptSyntaxError, ScriptTypeError, UnknownBuiltin

NUMERIC = ("integer", "float")

# (op, left, right) -> result
_BINARY: dict[tuple[str, str, str], str] = {}


def _rule(ops, left, right, result):
    for op in ops:
        _BINARY[(op, left, right)] = result


for _l in NUMERIC:
    for _r in NUMERIC:
        _res = "integer" if _l == _r == "integer" else "float"
        _rule("+-*/", _l, _r, _res)
        _rule(("<", ">", "<=", ">=", "==", "!="), _l, _r, "integer")
    _rule("*", "vector", _l, "vector")
    _rule("*", _l, "vector", "vector")
    _rule("/", "vector", _l, "vector")
_rule("%", "integer", "integer", "integer")
_rule(("&&", "||"), "integer", "integer", "integer")
_rule("+-", "vector", "vector", "vector")
_rule("*", "vector", "vector", "float")
_rule("%", "vector", "vector", "vector")
_rule("*/", "vector", "rotation", "vector")
_rule("+-*/", "rotation", "rotation", "rotation")
_rule("+", "string", "string", "string")
for _t in ("vector", "rotation", "string"):
    _rule(("==", "!="), _t, _t, "integer")


def assignable(target: str, value: str) -> bool:
    return target == value or (target == "float" and value == "integer")


class Checker:
    def __init__(self, script: n.Script, filename: str | None = None):
        self.script = script
        self.filename = filename
        self.scopes: list[dict[str, str]] = []
        self.returns: str | None = None
        self.in_function = False
        self.functions = {}

    def fail(self, cls, message, node):
        raise cls(message, node.line, node.col, self.filename)

    def lookup(self, name: str, node) -> str:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in CONSTANTS:
            return CONSTANTS[name][0]
        self.fail(ScriptTypeError, f"undeclared name '{name}'", node)

    def declare(self, name: str, type_name: str, node):
        if name in self.scopes[-1]:
            self.fail(ScriptTypeError, f"'{name}' is already declared in this scope", node)
        if name in CONSTANTS:
            self.fail(ScriptTypeError, f"'{name}' is a builtin constant", node)
        self.scopes[-1][name] = type_name

    # ---- program ------------------------------------------------------

    def check(self) -> n.Script:
        s = self.script
        self.scopes = [{}]
        for g in s.globals:
            if g.init is not None:
                self._constant_only(g.init)
                self._expect_assignable(g.type, self.expr(g.init), g.init)
            self.declare(g.name, g.type, g)
        for f in s.functions:
            if f.name in self.functions or f.name in BUILTINS:
                self.fail(ScriptTypeError, f"function '{f.name}' is already defined", f)
            self.functions[f.name] = f
        for f in s.functions:
            self._body(f.params, f.body, f.returns, in_function=True)

        names = [st.name for st in s.states]
        if names.count("default") != 1:
            where = s.states[0] if s.states else s
            self.fail(ScriptSyntaxError, "a script needs exactly one 'default' state", where)
        for st in s.states:
            if names.count(st.name) > 1 and st.name != "default":
                self.fail(ScriptTypeError, f"state '{st.name}' is defined twice", st)
        self.state_names = set(names)
        for st in s.states:
            seen = set()
            for h in st.handlers:
                if h.event not in EVENTS:
                    self.fail(ScriptTypeError, f"unknown event '{h.event}'", h)
                if h.event in seen:
                    self.fail(ScriptTypeError, f"event '{h.event}' handled twice in state '{st.name}'", h)
                seen.add(h.event)
                expected = EVENTS[h.event]
                got = tuple(p.type for p in h.params)
                if got != expected:
                    sig = ", ".join(expected) or "no parameters"
                    self.fail(ScriptTypeError, f"event '{h.event}' takes ({sig})", h)
                self._body(h.params, h.body, None, in_function=False)
        self._check_state_targets()
        return s

    def _check_state_targets(self):
        def walk(node):
            if isinstance(node, n.StateChange) and node.name not in self.state_names:
                self.fail(ScriptTypeError, f"unknown state '{node.name}'", node)
            for child in _children(node):
                walk(child)

        for f in self.script.functions:
            walk(f.body)
        for st in self.script.states:
            for h in st.handlers:
                walk(h.body)

    def _constant_only(self, node):
        if isinstance(node, n.Call):
            self.fail(ScriptTypeError, "global initializers must be constant", node)
        for child in _children(node):
            self._constant_only(child)

    def _body(self, params, body, returns, in_function):
        self.scopes.append({})
        for p in params:
            self.declare(p.name, p.type, p)
        self.returns = returns
        self.in_function = in_function
        self.block(body, new_scope=False)
        self.scopes.pop()

    # ---- statements ---------------------------------------------------

    def block(self, block: n.Block, new_scope=True):
        if new_scope:
            self.scopes.append({})
        for stmt in block.body:
            self.stmt(stmt)
        if new_scope:
            self.scopes.pop()

    def stmt(self, s):
        match s:
            case n.Block():
                self.block(s)
            case n.Decl(type=t, name=name, init=init):
                if init is not None:
                    self._expect_assignable(t, self.expr(init), init)
                self.declare(name, t, s)
            case n.Assign(target=target, op=op, value=value):
                tt = self.expr(target)
                vt = self.expr(value)
                if op == "=":
                    self._expect_assignable(tt, vt, value)
                else:
                    result = _BINARY.get((op[0], tt, vt))
                    if result is None or not assignable(tt, result):
                        self.fail(ScriptTypeError, f"cannot apply '{op}' to {tt} and {vt}", s)
            case n.If(cond=c, then=then, orelse=orelse):
                self._condition(c)
                self.block(then)
                if orelse is not None:
                    self.block(orelse)
            case n.While(cond=c, body=body):
                self._condition(c)
                self.block(body)
            case n.ExprStmt(expr=e):
                self.expr(e, statement=True)
            case n.Return(value=v):
                if v is None:
                    if self.in_function and self.returns is not None:
                        self.fail(ScriptTypeError, f"function must return a {self.returns}", s)
                else:
                    if not self.in_function or self.returns is None:
                        self.fail(ScriptTypeError, "cannot return a value here", s)
                    self._expect_assignable(self.returns, self.expr(v), v)
            case n.StateChange():
                if self.in_function:
                    self.fail(ScriptTypeError, "state changes are only allowed in event handlers", s)
            case _:
                self.fail(ScriptTypeError, f"unexpected statement {type(s).__name__}", s)

    def _condition(self, c):
        t = self.expr(c)
        if t not in NUMERIC:
            self.fail(ScriptTypeError, f"condition must be integer or float, got {t}", c)

    def _expect_assignable(self, target, value, node):
        if not assignable(target, value):
            self.fail(ScriptTypeError, f"expected {target}, got {value}", node)

    # ---- expressions --------------------------------------------------

    def expr(self, e, statement=False) -> str:
        match e:
            case n.IntLit():
                return "integer"
            case n.FloatLit():
                return "float"
            case n.StrLit():
                return "string"
            case n.VecLit(x=x, y=y, z=z):
                for part in (x, y, z):
                    self._numeric(part)
                return "vector"
            case n.RotLit(x=x, y=y, z=z, s=s):
                for part in (x, y, z, s):
                    self._numeric(part)
                return "rotation"
            case n.Name(id=name):
                return self.lookup(name, e)
            case n.Member(target=t, field=f):
                tt = self.expr(t)
                if tt == "vector" and f in "xyz" or tt == "rotation":
                    return "float"
                self.fail(ScriptTypeError, f"{tt} has no component '.{f}'", e)
            case n.Unary(op=op, operand=o):
                t = self.expr(o)
                if op == "!" and t == "integer":
                    return t
                if op == "-" and t in ("integer", "float", "vector", "rotation"):
                    return t
                self.fail(ScriptTypeError, f"cannot apply '{op}' to {t}", e)
            case n.Binary(op=op, left=a, right=b):
                lt, rt = self.expr(a), self.expr(b)
                result = _BINARY.get((op, lt, rt))
                if result is None:
                    self.fail(ScriptTypeError, f"cannot apply '{op}' to {lt} and {rt}", e)
                return result
            case n.Cast(type=t, operand=o):
                src = self.expr(o)
                ok = (src in NUMERIC and t in NUMERIC + ("string",)) or t == "string" or src == t or (
                    src == "string" and t in NUMERIC
                )
                if not ok:
                    self.fail(ScriptTypeError, f"cannot cast {src} to {t}", e)
                return t
            case n.Call(name=name, args=args):
                return self._call(e, name, args, statement)
        self.fail(ScriptTypeError, f"unexpected expression {type(e).__name__}", e)

    def _numeric(self, e):
        t = self.expr(e)
        if t not in NUMERIC:
            self.fail(ScriptTypeError, f"expected a number, got {t}", e)

    def _call(self, e, name, args, statement):
        arg_types = [self.expr(a) for a in args]
        if name in self.functions:
            f = self.functions[name]
            params = [p.type for p in f.params]
            if len(params) != len(args):
                self.fail(ScriptTypeError, f"'{name}' takes {len(params)} argument(s), got {len(args)}", e)
            returns = f.returns
        elif name in BUILTINS:
            b = BUILTINS[name]
            if not b.min_args <= len(args) <= b.max_args:
                want = str(b.max_args) if b.min_args == b.max_args else f"{b.min_args}-{b.max_args}"
                self.fail(ScriptTypeError, f"'{name}' takes {want} argument(s), got {len(args)}", e)
            params = list(b.params)
            returns = b.returns
        else:
            self.fail(UnknownBuiltin, f"unknown function '{name}'", e)
        for p, a, node in zip(params, arg_types, args):
            if not assignable(p, a):
                self.fail(ScriptTypeError, f"argument to '{name}' must be {p}, got {a}", node)
        if returns is None:
            if not statement:
                self.fail(ScriptTypeError, f"'{name}' does not return a value", e)
            return "void"
        return returns


def _children(node):
    for value in vars(node).values():
        if isinstance(value, n.Node):
            yield value
        elif isinstance(value, list):
            yield from (v for v in value if isinstance(v, n.Node))


def check(script: n.Script, filename: str | None = None) -> n.Script:
    return Checker(script, filename).check()


def parse(source: str, filename: str | None = None) -> n.Script:
    """Parse and check a script; raises a ScriptError subclass with a location."""
    from .parser import parse_syntax

    return check(parse_syntax(source, filename), filename)
