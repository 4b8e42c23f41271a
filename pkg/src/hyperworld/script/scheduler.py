"""Event scheduling between physics steps.

Once per physics step the host delivers, in this order: collision_start
events (by object id), due timers (by object id), then touches injected
by the scenario in injection order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import nodes as n
from .errors import RuntimeFault
from .interpreter import Interpreter, ScriptInstance
from .typecheck import parse

_TIMER_EPS = 1e-9


@dataclass(frozen=True)
class Fault:
    time: float
    object_id: int
    event: str
    error: RuntimeFault

    def __str__(self):
        return f"t={self.time:.4f} object {self.object_id} {self.event}: {self.error}"


class ScriptHost:
    """Owns the script instances of one world and feeds them events."""

    def __init__(self, world, interpreter: Interpreter | None = None):
        self.world = world
        self.interpreter = interpreter or Interpreter()
        self.instances: dict[int, ScriptInstance] = {}
        self.faults: list[Fault] = []
        self.log: list[tuple[float, int, str]] = []  # (time, object id, event) as delivered
        self._touches: list[int] = []

    def attach(self, obj, script: "n.Script | str", filename: str | None = None) -> ScriptInstance:
        oid = self.world.get(obj).id
        if isinstance(script, str):
            script = parse(script, filename)
        inst = self.interpreter.instantiate(script, oid, filename)
        self.instances[oid] = inst
        self._deliver(inst, "state_entry", ())
        return inst

    def detach(self, obj) -> None:
        self.instances.pop(getattr(obj, "id", obj), None)

    def inject_touch(self, obj) -> None:
        self._touches.append(self.world.get(obj).id)

    def schedule(self, collisions=()) -> list[tuple[int, str, tuple]]:
        """Pending events for this step, in delivery order. Consumes touches."""
        now = self.world.clock.sim_time
        counts: dict[int, int] = {}
        for c in collisions:
            if c.kind != "object":
                continue
            for oid in (c.a, c.b):
                counts[oid] = counts.get(oid, 0) + 1
        events = [(oid, "collision_start", (counts[oid],)) for oid in sorted(counts) if oid in self.instances]
        for oid in sorted(self.instances):
            inst = self.instances[oid]
            if inst.timer_next is not None and inst.timer_next <= now + _TIMER_EPS:
                events.append((oid, "timer", ()))
                nxt = inst.timer_next + inst.timer_interval
                inst.timer_next = nxt if nxt > now + _TIMER_EPS else now + inst.timer_interval
        events += [(oid, "touch_start", (1,)) for oid in self._touches if oid in self.instances]
        self._touches = []
        return events

    def dispatch(self, events) -> None:
        for oid, event, args in events:
            inst = self.instances.get(oid)
            if inst is None or oid not in self.world:
                continue
            self._deliver(inst, event, args)

    def _deliver(self, inst: ScriptInstance, event: str, args) -> None:
        self.log.append((self.world.clock.sim_time, inst.object_id, event))
        try:
            self.interpreter.run_event(inst, event, self.world, args)
        except RuntimeFault as exc:
            self.faults.append(Fault(self.world.clock.sim_time, inst.object_id, event, exc))

    def after_step(self, report=None) -> None:
        """Deliver this step's events and publish the script load for dilation."""
        collisions = report.collisions if report is not None else ()
        self.dispatch(self.schedule(collisions))
        self.world.script_ops_last_step = sum(i.ops_this_step for i in self.instances.values())
        for inst in self.instances.values():
            inst.ops_this_step = 0
