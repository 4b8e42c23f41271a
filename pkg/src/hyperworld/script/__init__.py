"""A small event-driven scripting language bound to the world API."""

from .builtins import BUILTINS, CONSTANTS, EVENTS
from .errors import BudgetExceeded, RuntimeFault, ScriptError, ScriptSyntaxError, ScriptTypeError, UnknownBuiltin
from .interpreter import CallContext, Interpreter, ScriptInstance, run_event
from .parser import parse_syntax
from .printer import pretty
from .scheduler import Fault, ScriptHost
from .typecheck import parse

__all__ = [
    "BUILTINS",
    "CONSTANTS",
    "EVENTS",
    "BudgetExceeded",
    "CallContext",
    "Fault",
    "Interpreter",
    "RuntimeFault",
    "ScriptError",
    "ScriptHost",
    "ScriptInstance",
    "ScriptSyntaxError",
    "ScriptTypeError",
    "UnknownBuiltin",
    "parse",
    "parse_syntax",
    "pretty",
    "run_event",
]
