"""Scenario runner: builds a world from a Scenario, steps it, records samples."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics, laws
from .dynamics import DilationModel
from .errors import HyperworldError, ScenarioError
from .scenario import Scenario
from .script import Interpreter, ScriptError, ScriptHost, parse
from .world import World

CSV_HEADER = ("t", "object_id", "px", "py", "pz", "vx", "vy", "vz", "energy", "dilation")
QUANTITIES = CSV_HEADER[2:]


def _fmt(x: float) -> str:
    return "%.9g" % x


@dataclass
class Trajectory:
    rows: list[tuple] = field(default_factory=list)

    def append_world(self, world: World) -> None:
        t = world.clock.sim_time
        d = world.clock.dilation
        for r, oid in enumerate(world.ids):
            p, v = world.pos[r], world.vel[r]
            self.rows.append((t, oid, p[0], p[1], p[2], v[0], v[1], v[2], world.energy[r], d))

    def for_object(self, oid: int) -> np.ndarray:
        return np.array([r for r in self.rows if r[1] == oid], dtype=float).reshape(-1, len(CSV_HEADER))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow([_fmt(row[0]), row[1], *(_fmt(x) for x in row[2:])])
        return buf.getvalue()

    def write_csv(self, path: "str | Path") -> None:
        Path(path).write_text(self.to_csv())


class Simulation:
    """A world, its script host and the bookkeeping for one run."""

    def __init__(self, scenario: Scenario, *, strict: bool = True, budget: int = 100_000):
        self.scenario = scenario
        world = World(
            scenario.region,
            law=scenario.law,
            dilation=DilationModel(budget=scenario.dilation_budget),
            seed=scenario.seed,
        )
        self.world = world
        self.host = ScriptHost(world, Interpreter(budget=budget, strict=strict))
        self.prims = []
        try:
            self._populate(scenario)
        except ScriptError:
            raise
        except HyperworldError as exc:
            raise ScenarioError(f"{scenario.name}: {exc}") from None
        by_name = {p.name: p.id for p in self.prims if p.name}
        self._touches = [(e.t, by_name[e.target] if isinstance(e.target, str) else self.prims[e.target].id)
                         for e in scenario.events]
        for prim, spec in zip(self.prims, scenario.objects):
            if spec.script is not None:
                source = spec.script.read_text()
                self.host.attach(prim, parse(source, str(spec.script)), str(spec.script))
        world.script_ops_last_step = sum(i.ops_this_step for i in self.host.instances.values())
        for inst in self.host.instances.values():
            inst.ops_this_step = 0

        self.steps = 0
        self.collisions: dict[str, int] = {"object": 0, "ground": 0, "edge": 0}
        self.dilations: list[float] = []
        phys = world._props().physical_rows
        self._p0 = (world.mass[phys, None] * world.vel[phys]).sum(axis=0)
        self.momentum_drift = 0.0
        self._v0 = world.vel.copy()
        self._vdrift = np.zeros(len(world.ids))

    def _populate(self, scenario: Scenario) -> None:
        world = self.world
        if scenario.container is not None:
            world.set_periodic_cell(*scenario.container)
        for spec in scenario.objects:
            prim = world.create_object(spec.shape, spec.material, spec.position, name=spec.name)
            world.set_buoyancy(prim, spec.buoyancy)
            world.set_gravity_multiplier(prim, spec.gravity_multiplier)
            if spec.law is not None:
                world.set_object_law(prim, spec.law)
            world.set_physical(prim, spec.physical)
            if spec.velocity is not None and spec.physical:
                world.vel[world.row(prim)] = spec.velocity.to_array()
            if spec.impulse is not None:
                dynamics.apply_impulse(world, prim, spec.impulse)
            if spec.launch is not None:
                laws.launch(world, prim, *spec.launch)
            self.prims.append(prim)

    @property
    def total_steps(self) -> int | None:
        return self.scenario.steps

    def finished(self) -> bool:
        if self.scenario.steps is not None:
            return self.steps >= self.scenario.steps
        return self.world.clock.sim_time >= self.scenario.seconds - 1e-9

    def advance(self):
        world = self.world
        while self._touches and self._touches[0][0] <= world.clock.sim_time + 1e-12:
            _, oid = self._touches.pop(0)
            if oid in world:
                self.host.inject_touch(oid)
        report = world.step()
        self.host.after_step(report)
        self.steps += 1
        self.dilations.append(report.dilation)
        for c in report.collisions:
            self.collisions[c.kind] += 1
        phys = world._props().physical_rows
        p = (world.mass[phys, None] * world.vel[phys]).sum(axis=0)
        self.momentum_drift = max(self.momentum_drift, float(np.linalg.norm(p - self._p0)))
        n = min(len(self._v0), len(world.ids))
        dv = np.linalg.norm(world.vel[:n] - self._v0[:n], axis=1)
        self._vdrift[:n] = np.maximum(self._vdrift[:n], dv)
        return report

    def run(self, sample_every: int = 1) -> tuple[Trajectory, dict]:
        if sample_every < 1:
            raise ValueError("sample_every must be >= 1")
        traj = Trajectory()
        traj.append_world(self.world)
        while not self.finished():
            self.advance()
            if self.steps % sample_every == 0:
                traj.append_world(self.world)
        if self.steps % sample_every != 0:
            traj.append_world(self.world)
        return traj, self.summary(traj)

    def summary(self, traj: Trajectory) -> dict:
        world = self.world
        objects = {}
        for r, oid in enumerate(world.ids):
            data = traj.for_object(oid)
            stats = {}
            if len(data):
                for k, q in enumerate(QUANTITIES, start=2):
                    col = data[:, k]
                    stats[q] = {"min": float(col.min()), "max": float(col.max()), "final": float(col[-1])}
            entry = {"name": world.get(oid).name, "physical": world.get(oid).physical, "quantities": stats}
            if r < len(self._v0):
                entry["velocity_drift"] = float(self._vdrift[r])
                entry["velocity_change"] = (world.vel[r] - self._v0[r]).tolist()
            objects[str(oid)] = entry
        return {
            "scenario": self.scenario.name,
            "seed": self.scenario.seed,
            "law": self.scenario.law.kind.value,
            "steps": self.steps,
            "sim_time": world.clock.sim_time,
            "collisions": sum(self.collisions.values()),
            "collisions_by_kind": dict(self.collisions),
            "mean_dilation": float(np.mean(self.dilations)) if self.dilations else 1.0,
            "min_dilation": float(np.min(self.dilations)) if self.dilations else 1.0,
            "momentum_drift": self.momentum_drift,
            "faults": [str(f) for f in self.host.faults],
            "objects": objects,
        }


def run_scenario(scenario: Scenario, sample_every: int = 1, **kwargs) -> tuple[Trajectory, dict]:
    return Simulation(scenario, **kwargs).run(sample_every)


def summary_json(summary: dict) -> str:
    return json.dumps(summary, indent=2) + "\n"
