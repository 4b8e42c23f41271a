from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ScriptSyntaxError

KEYWORDS = frozenset(
    {"default", "state", "if", "else", "while", "return", "integer", "float", "vector", "rotation", "string"}
)
TYPE_NAMES = ("integer", "float", "vector", "rotation", "string")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "float", "string", "ident", "kw", "op", "eof"
    text: str
    line: int
    col: int
    value: object = None


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<hex>0[xX][0-9a-fA-F]+)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|&&|\|\||\+=|-=|\*=|/=|[-+*/%<>=!(){};,.\[\]])
    """,
    re.VERBOSE | re.DOTALL,
)

_ESCAPES = {"n": "\n", "t": "    ", '"': '"', "\\": "\\"}


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", lambda m: _ESCAPES.get(m.group(1), m.group(1)), body)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ScriptSyntaxError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "float":
            tokens.append(Token("float", text, line, col, float(text)))
        elif kind == "hex":
            tokens.append(Token("int", text, line, col, int(text, 16)))
        elif kind == "int":
            tokens.append(Token("int", text, line, col, int(text)))
        elif kind == "string":
            tokens.append(Token("string", text, line, col, _unescape(text[1:-1])))
        elif kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind == "op":
            tokens.append(Token("op", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
