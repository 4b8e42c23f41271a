"""Pretty-printer producing source that parses back to an equal tree."""

from __future__ import annotations

from . import nodes as n

_INDENT = "    "


def _float(value: float) -> str:
    text = repr(float(value))
    if "e" in text or "E" in text:
        mantissa, exp = text.lower().split("e")
        if "." not in mantissa:
            mantissa += ".0"
        return f"{mantissa}e{exp}"
    return text


def _string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def expr(node: n.Node) -> str:
    match node:
        case n.IntLit(value=v):
            return str(v) if v >= 0 else f"(-{-v})"
        case n.FloatLit(value=v):
            return _float(v) if v >= 0 else f"(-{_float(-v)})"
        case n.StrLit(value=v):
            return _string(v)
        case n.VecLit(x=x, y=y, z=z):
            return f"<{expr(x)}, {expr(y)}, {expr(z)}>"
        case n.RotLit(x=x, y=y, z=z, s=s):
            return f"<{expr(x)}, {expr(y)}, {expr(z)}, {expr(s)}>"
        case n.Name(id=name):
            return name
        case n.Member(target=t, field=f):
            return f"{expr(t)}.{f}"
        case n.Unary(op=op, operand=o):
            return f"({op}{expr(o)})"
        case n.Binary(op=op, left=a, right=b):
            return f"({expr(a)} {op} {expr(b)})"
        case n.Call(name=name, args=args):
            return f"{name}({', '.join(expr(a) for a in args)})"
        case n.Cast(type=t, operand=o):
            return f"(({t}){expr(o)})"
    raise TypeError(f"not an expression node: {node!r}")


def _block(block: n.Block, depth: int) -> list[str]:
    lines = ["{"]
    for stmt in block.body:
        lines += [_INDENT + line for line in _stmt(stmt, depth + 1)]
    lines.append("}")
    return lines


def _stmt(node: n.Node, depth: int) -> list[str]:
    match node:
        case n.Block():
            return _block(node, depth)
        case n.Decl(type=t, name=name, init=init):
            return [f"{t} {name}{'' if init is None else ' = ' + expr(init)};"]
        case n.Assign(target=t, op=op, value=v):
            return [f"{expr(t)} {op} {expr(v)};"]
        case n.If(cond=c, then=then, orelse=orelse):
            lines = _block(then, depth)
            lines[0] = f"if ({expr(c)}) {{"
            if orelse is not None:
                tail = _block(orelse, depth)
                lines[-1] = "} else {"
                lines += tail[1:]
            return lines
        case n.While(cond=c, body=body):
            lines = _block(body, depth)
            lines[0] = f"while ({expr(c)}) {{"
            return lines
        case n.ExprStmt(expr=e):
            return [f"{expr(e)};"]
        case n.Return(value=v):
            return ["return;" if v is None else f"return {expr(v)};"]
        case n.StateChange(name=name):
            return [f"state {name};"]
    raise TypeError(f"not a statement node: {node!r}")


def _params(params: list[n.Param]) -> str:
    return ", ".join(f"{p.type} {p.name}" for p in params)


def pretty(script: n.Script) -> str:
    out: list[str] = []
    for g in script.globals:
        out.append(f"{g.type} {g.name}{'' if g.init is None else ' = ' + expr(g.init)};")
    if script.globals:
        out.append("")
    for f in script.functions:
        body = _block(f.body, 0)
        head = f"{f.returns + ' ' if f.returns else ''}{f.name}({_params(f.params)}) {{"
        out += [head] + body[1:] + [""]
    for st in script.states:
        out.append("default {" if st.name == "default" else f"state {st.name} {{")
        for h in st.handlers:
            body = _block(h.body, 1)
            out.append(f"{_INDENT}{h.event}({_params(h.params)}) {{")
            out += [_INDENT + line for line in body[1:]]
        out.append("}")
        out.append("")
    return "\n".join(out)
