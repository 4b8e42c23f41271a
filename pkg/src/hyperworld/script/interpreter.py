"""Tree-walking interpreter for checked scripts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from ..errors import HyperworldError, KinematicOnPhysical, KineticOnNonPhysical
from ..vec import ZERO, Rotation, Vec3
from . import nodes as n
from .builtins import BUILTINS, CONSTANTS
from .errors import BudgetExceeded, RuntimeFault

DEFAULT_BUDGET = 100_000

_DEFAULTS = {
    "integer": 0,
    "float": 0.0,
    "vector": ZERO,
    "rotation": Rotation(),
    "string": "",
}


def _int32(v: int) -> int:
    return (v + 2**31) % 2**32 - 2**31


def default_value(type_name: str):
    return _DEFAULTS[type_name]


def coerce(type_name: str, value):
    if type_name == "float" and isinstance(value, int):
        return float(value)
    return value


@dataclass
class ScriptInstance:
    object_id: int
    script: n.Script
    state: str = "default"
    globals: dict[str, Any] = field(default_factory=dict)
    timer_interval: float = 0.0
    timer_next: float | None = None
    ops_executed: int = 0
    ops_this_step: int = 0
    filename: str | None = None


@dataclass
class CallContext:
    world: Any
    instance: ScriptInstance

    @property
    def object_id(self) -> int:
        return self.instance.object_id

    @property
    def prim(self):
        return self.world.get(self.instance.object_id)


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _StateJump(Exception):
    def __init__(self, name):
        self.name = name


class Interpreter:
    """Runs event handlers under a per-event operation budget.

    With ``strict=True`` a kinematic builtin on a physical object (or a
    kinetic one on a non-physical object) raises RuntimeFault; with
    ``strict=False`` the call is silently dropped.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET, strict: bool = True):
        if budget < 1:
            raise ValueError("budget must be positive")
        self.budget = budget
        self.strict = strict

    # ---- lifecycle ----------------------------------------------------

    def instantiate(self, script: n.Script, object_id: int, filename: str | None = None) -> ScriptInstance:
        inst = ScriptInstance(object_id, script, filename=filename)
        frame = _Frame(self, inst, None)
        for g in script.globals:
            value = default_value(g.type) if g.init is None else coerce(g.type, frame.eval(g.init))
            inst.globals[g.name] = value
        return inst

    def run_event(self, instance: ScriptInstance, event: str, world, args=()) -> None:
        frame = _Frame(self, instance, world)
        try:
            while True:
                state = instance.script.state(instance.state)
                handler = state.handler(event) if state is not None else None
                if handler is None:
                    return
                try:
                    frame.call_handler(handler, args)
                    return
                except _StateJump as jump:
                    if jump.name == instance.state:
                        return
                    instance.state = jump.name
                    instance.timer_interval = 0.0
                    instance.timer_next = None
                    event, args = "state_entry", ()
        finally:
            instance.ops_executed += frame.ops
            instance.ops_this_step += frame.ops


def run_event(instance: ScriptInstance, event: str, world, args=(), interpreter: Interpreter | None = None) -> None:
    (interpreter or Interpreter()).run_event(instance, event, world, args)


class _Frame:
    """Execution state for one event dispatch."""

    def __init__(self, interp: Interpreter, instance: ScriptInstance, world):
        self.interp = interp
        self.inst = instance
        self.world = world
        self.ops = 0
        self.scopes: list[dict[str, Any]] = []
        self.types: list[dict[str, str]] = []
        self.global_types = {g.name: g.type for g in instance.script.globals}

    def tick(self, node):
        self.ops += 1
        if self.ops > self.interp.budget:
            raise BudgetExceeded(self.interp.budget, node.line, node.col)

    def fault(self, reason, message, node):
        raise RuntimeFault(reason, message, node.line, node.col)

    # ---- variables ----------------------------------------------------

    def _find(self, name):
        for scope, types in zip(reversed(self.scopes), reversed(self.types)):
            if name in scope:
                return scope, types[name]
        if name in self.inst.globals:
            return self.inst.globals, self.global_types[name]
        return None, None

    def load(self, name, node):
        scope, _ = self._find(name)
        if scope is not None:
            return scope[name]
        if name in CONSTANTS:
            return CONSTANTS[name][1]
        self.fault("UndeclaredName", f"'{name}' is not declared", node)

    def store(self, name, value):
        scope, type_name = self._find(name)
        scope[name] = coerce(type_name, value)

    def declare(self, name, type_name, value):
        self.scopes[-1][name] = coerce(type_name, value)
        self.types[-1][name] = type_name

    # ---- calls --------------------------------------------------------

    def _enter(self, params, args):
        saved = self.scopes, self.types
        self.scopes, self.types = [{}], [{}]
        for p, a in zip(params, args):
            self.declare(p.name, p.type, a)
        return saved

    def call_handler(self, handler: n.Handler, args):
        saved = self._enter(handler.params, args)
        try:
            self.block(handler.body)
        except _Return:
            pass
        finally:
            self.scopes, self.types = saved

    def call_function(self, f: n.Function, args):
        saved = self._enter(f.params, args)
        try:
            self.block(f.body)
        except _Return as r:
            return None if f.returns is None else coerce(f.returns, r.value)
        finally:
            self.scopes, self.types = saved
        return None if f.returns is None else default_value(f.returns)

    def call_builtin(self, node: n.Call, args):
        b = BUILTINS[node.name]
        args = list(args) + list(b.defaults[len(args) - b.min_args:])
        args = [coerce(p, a) for p, a in zip(b.params, args)]
        prim = self.world.get(self.inst.object_id)
        refused = None
        if b.category == "kinetic" and not prim.physical:
            refused = "KineticOnNonPhysical", f"{b.name} needs a physical object"
        elif b.category == "kinematic" and prim.physical:
            refused = "KinematicOnPhysical", f"{b.name} does not act on physical objects"
        if refused:
            if self.interp.strict:
                self.fault(*refused, node)
            return None if b.returns is None else default_value(b.returns)
        ctx = CallContext(self.world, self.inst)
        try:
            result = b.impl(ctx, *args)
        except KineticOnNonPhysical as exc:
            self.fault("KineticOnNonPhysical", str(exc), node)
        except KinematicOnPhysical as exc:
            self.fault("KinematicOnPhysical", str(exc), node)
        except (HyperworldError, ValueError) as exc:
            self.fault(type(exc).__name__, str(exc), node)
        return coerce(b.returns, result) if b.returns else None

    # ---- statements ---------------------------------------------------

    def block(self, block: n.Block):
        self.scopes.append({})
        self.types.append({})
        try:
            for s in block.body:
                self.stmt(s)
        finally:
            self.scopes.pop()
            self.types.pop()

    def stmt(self, s):
        self.tick(s)
        match s:
            case n.Block():
                self.block(s)
            case n.Decl(type=t, name=name, init=init):
                self.declare(name, t, default_value(t) if init is None else self.eval(init))
            case n.Assign(target=target, op=op, value=value):
                v = self.eval(value)
                if op != "=":
                    v = self.binary(op[0], self.eval(target), v, s)
                self.assign(target, v)
            case n.If(cond=c, then=then, orelse=orelse):
                if self.eval(c):
                    self.block(then)
                elif orelse is not None:
                    self.block(orelse)
            case n.While(cond=c, body=body):
                while self.eval(c):
                    self.block(body)
                    self.tick(s)
            case n.ExprStmt(expr=e):
                self.eval(e)
            case n.Return(value=v):
                raise _Return(None if v is None else self.eval(v))
            case n.StateChange(name=name):
                raise _StateJump(name)

    def assign(self, target, value):
        if isinstance(target, n.Name):
            self.store(target.id, value)
            return
        # member assignment: rebuild the vector or rotation
        base = self.eval(target.target)
        parts = dict(zip("xyzs", base))
        parts[target.field] = float(value)
        new = Vec3(parts["x"], parts["y"], parts["z"]) if isinstance(base, Vec3) else Rotation(**parts)
        self.assign(target.target, new)

    # ---- expressions --------------------------------------------------

    def eval(self, e):
        self.tick(e)
        match e:
            case n.IntLit(value=v) | n.FloatLit(value=v) | n.StrLit(value=v):
                return v
            case n.VecLit(x=x, y=y, z=z):
                return Vec3(float(self.eval(x)), float(self.eval(y)), float(self.eval(z)))
            case n.RotLit(x=x, y=y, z=z, s=s):
                return Rotation(*(float(self.eval(p)) for p in (x, y, z, s)))
            case n.Name(id=name):
                return self.load(name, e)
            case n.Member(target=t, field=f):
                return float(getattr(self.eval(t), f))
            case n.Unary(op="!", operand=o):
                return int(not self.eval(o))
            case n.Unary(op="-", operand=o):
                v = self.eval(o)
                if isinstance(v, Rotation):
                    return Rotation(-v.x, -v.y, -v.z, -v.s)
                return _int32(-v) if isinstance(v, int) else -v
            case n.Binary(op="&&", left=a, right=b):
                # both sides are evaluated, as in LSL
                left, right = self.eval(a), self.eval(b)
                return int(bool(left) and bool(right))
            case n.Binary(op="||", left=a, right=b):
                left, right = self.eval(a), self.eval(b)
                return int(bool(left) or bool(right))
            case n.Binary(op=op, left=a, right=b):
                return self.binary(op, self.eval(a), self.eval(b), e)
            case n.Cast(type=t, operand=o):
                return self.cast(t, self.eval(o), e)
            case n.Call(name=name, args=args):
                values = [self.eval(a) for a in args]
                f = self.inst.script.function(name)
                if f is not None:
                    return self.call_function(f, values)
                return self.call_builtin(e, values)
        self.fault("InternalError", f"cannot evaluate {type(e).__name__}", e)

    def binary(self, op, a, b, node):
        if isinstance(a, Vec3) or isinstance(b, Vec3):
            return self._vector_op(op, a, b, node)
        if isinstance(a, Rotation):
            return self._rotation_op(op, a, b, node)
        if isinstance(a, str):
            if op == "+":
                return a + b
            return int((a == b) == (op == "=="))
        if op in ("==", "!="):
            return int((a == b) == (op == "=="))
        if op in ("<", ">", "<=", ">="):
            return int({"<": a < b, ">": a > b, "<=": a <= b, ">=": a >= b}[op])
        both_int = isinstance(a, int) and isinstance(b, int)
        if op in "/%" and b == 0:
            self.fault("MathError", "Math error: division by zero", node)
        if both_int:
            if op == "+":
                return _int32(a + b)
            if op == "-":
                return _int32(a - b)
            if op == "*":
                return _int32(a * b)
            # C semantics: truncate toward zero, remainder takes the dividend's sign
            q = abs(a) // abs(b) * (1 if (a >= 0) == (b >= 0) else -1)
            return _int32(q) if op == "/" else _int32(a - q * b)
        a, b = float(a), float(b)
        result = {"+": a + b, "-": a - b, "*": a * b}.get(op)
        return a / b if result is None else result

    def _vector_op(self, op, a, b, node):
        if isinstance(a, Vec3) and isinstance(b, Vec3):
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a.dot(b)
            if op == "%":
                return a.cross(b)
            return int((a == b) == (op == "=="))
        if isinstance(b, Rotation):
            return b.rotate(a) if op == "*" else b.conjugate().rotate(a)
        if op == "/":
            if b == 0:
                self.fault("MathError", "Math error: division by zero", node)
            return a / float(b)
        return a * float(b) if isinstance(a, Vec3) else b * float(a)

    def _rotation_op(self, op, a: Rotation, b: Rotation, node):
        if op == "*":
            return a * b
        if op == "/":
            return a * b.conjugate()
        if op == "+":
            return Rotation(a.x + b.x, a.y + b.y, a.z + b.z, a.s + b.s)
        if op == "-":
            return Rotation(a.x - b.x, a.y - b.y, a.z - b.z, a.s - b.s)
        return int((a == b) == (op == "=="))

    def cast(self, t, v, node):
        if t == "string":
            if isinstance(v, float):
                return f"{v:.6f}"
            if isinstance(v, Vec3):
                return "<" + ", ".join(f"{c:.5f}" for c in v) + ">"
            if isinstance(v, Rotation):
                return "<" + ", ".join(f"{c:.5f}" for c in v) + ">"
            return str(v)
        if t == "integer":
            if isinstance(v, str):
                try:
                    return _int32(int(float(v.strip() or 0)))
                except ValueError:
                    return 0
            if not math.isfinite(v):
                self.fault("MathError", "Math error: cannot convert to integer", node)
            return _int32(int(v))
        if t == "float":
            if isinstance(v, str):
                try:
                    return float(v.strip() or 0)
                except ValueError:
                    return 0.0
            return float(v)
        return v
