"""Syntax tree for scripts.

Source locations are excluded from equality so trees parsed from different
layouts of the same program compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def _loc():
    return field(default=0, compare=False, repr=False, kw_only=True)


@dataclass
class Node:
    line: int = _loc()
    col: int = _loc()


# ---- expressions -------------------------------------------------------------


@dataclass
class IntLit(Node):
    value: int


@dataclass
class FloatLit(Node):
    value: float


@dataclass
class StrLit(Node):
    value: str


@dataclass
class VecLit(Node):
    x: Node
    y: Node
    z: Node


@dataclass
class RotLit(Node):
    x: Node
    y: Node
    z: Node
    s: Node


@dataclass
class Name(Node):
    id: str


@dataclass
class Member(Node):
    target: Node
    field: str


@dataclass
class Unary(Node):
    op: str
    operand: Node


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass
class Call(Node):
    name: str
    args: list[Node]


@dataclass
class Cast(Node):
    type: str
    operand: Node


# ---- statements --------------------------------------------------------------


@dataclass
class Block(Node):
    body: list[Node]


@dataclass
class Decl(Node):
    type: str
    name: str
    init: Node | None = None


@dataclass
class Assign(Node):
    target: Node  # Name or Member
    op: str  # "=", "+=", "-=", "*=", "/="
    value: Node


@dataclass
class If(Node):
    cond: Node
    then: Block
    orelse: Block | None = None


@dataclass
class While(Node):
    cond: Node
    body: Block


@dataclass
class ExprStmt(Node):
    expr: Node


@dataclass
class Return(Node):
    value: Node | None = None


@dataclass
class StateChange(Node):
    name: str


# ---- top level ---------------------------------------------------------------


@dataclass
class Param(Node):
    type: str
    name: str


@dataclass
class GlobalVar(Node):
    type: str
    name: str
    init: Node | None = None


@dataclass
class Function(Node):
    returns: str | None
    name: str
    params: list[Param]
    body: Block


@dataclass
class Handler(Node):
    event: str
    params: list[Param]
    body: Block


@dataclass
class State(Node):
    name: str
    handlers: list[Handler]

    def handler(self, event: str) -> Handler | None:
        for h in self.handlers:
            if h.event == event:
                return h
        return None


@dataclass
class Script(Node):
    globals: list[GlobalVar]
    functions: list[Function]
    states: list[State]

    def state(self, name: str) -> State | None:
        for s in self.states:
            if s.name == name:
                return s
        return None

    def function(self, name: str) -> Function | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None
