"""Fixed-step rigid-body stepper.

Per physical object and step, with ``w = gamma * m * g`` (gamma is the
gravity multiplier):

* gravity ``(0, 0, -w)`` and buoyancy ``(0, 0, b * w)``; water level plays
  no part,
* drag ``(0, 0, -(w / v_t) * v_z)`` on the vertical component only, so a
  falling body tends to exactly ``v_t`` while horizontal motion persists,
* the script-applied force, scaled down when the object's energy cannot
  pay for it.

Velocities are advanced with the drag term treated implicitly; positions
use the mean of the old and new velocity, which is exact for constant
acceleration.  Sphere/sphere and object/ground contacts are then resolved
with impulses, and energy refills at ``200 / m`` per second up to 100.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import laws
from .errors import InvalidParameter, KinematicOnPhysical, KineticOnNonPhysical, PositionOutOfRegion
from .laws import LawKind
from .vec import Rotation, Vec3

if TYPE_CHECKING:
    from .world import ObjectDynamics, PrimObject, World


@dataclass(frozen=True)
class EnergyModel:
    """Energy budget; ``costs`` are units of energy per 100 N (or N*s, N*m)."""

    cap: float = 100.0
    refill_constant: float = 200.0
    costs: dict = field(default_factory=lambda: {"force": 1.0, "impulse": 2.0, "torque": 1.0})

    def __post_init__(self):
        if not self.cap > 0 or not self.refill_constant > 0:
            raise InvalidParameter("energy cap and refill constant must be > 0")
        for name in ("force", "impulse", "torque"):
            if self.costs.get(name, -1.0) < 0:
                raise InvalidParameter(f"missing or negative energy cost for {name!r}")

    def refill_rate(self, mass: float) -> float:
        return self.refill_constant / mass


@dataclass(frozen=True)
class DilationModel:
    """``dilation = min(1, budget / (per_object * N_physical + per_op * ops))``."""

    budget: float = 1000.0
    per_object: float = 1.0
    per_op: float = 0.01

    def __post_init__(self):
        if not self.budget > 0 or self.per_object < 0 or self.per_op < 0:
            raise InvalidParameter("dilation budget must be > 0 and load weights >= 0")


@dataclass(frozen=True)
class CollisionEvent:
    a: int
    b: int | None  # None for ground and region-edge contacts
    kind: str  # "object", "ground" or "edge"
    impulse: float
    time: float


@dataclass(frozen=True)
class EnergyEntry:
    spent: float
    refilled: float
    level: float


@dataclass(frozen=True)
class StepReport:
    sim_time: float
    dt: float
    dilation: float
    collisions: tuple[CollisionEvent, ...]
    energy: dict  # object id -> EnergyEntry
    forces: dict  # object id -> net force (Vec3) at the start of the step
    substeps: int = 1


def region_time_dilation(world: "World") -> float:
    model = world.dilation_model
    n_physical = int(world._props().physical_rows.size)
    load = model.per_object * n_physical + model.per_op * world.script_ops_last_step
    if load <= model.budget:
        return 1.0
    return model.budget / load


def step(world: "World", wall_dt: float | None = None) -> StepReport:
    """Advance by ``wall_dt`` of wall time (one fixed step if omitted)."""
    step_size = world.clock.step_size
    if wall_dt is None:
        n = 1
    else:
        if not wall_dt > 0:
            raise InvalidParameter("wall_dt must be > 0")
        n = max(1, round(wall_dt / step_size))
    reports = [_substep(world) for _ in range(n)]
    if n == 1:
        return reports[0]
    energy = {}
    for oid in reports[-1].energy:
        entries = [r.energy[oid] for r in reports if oid in r.energy]
        energy[oid] = EnergyEntry(
            sum(e.spent for e in entries), sum(e.refilled for e in entries), entries[-1].level
        )
    return StepReport(
        sim_time=world.clock.sim_time,
        dt=sum(r.dt for r in reports),
        dilation=reports[-1].dilation,
        collisions=tuple(c for r in reports for c in r.collisions),
        energy=energy,
        forces=reports[0].forces,
        substeps=n,
    )


def _substep(world: "World") -> StepReport:
    region, clock = world.region, world.clock
    model = world.energy_model
    delta = region_time_dilation(world)
    dt = delta * clock.step_size
    props = world._props()
    phys = props.physical_rows
    events: list[CollisionEvent] = []
    energy_report: dict = {}
    force_report: dict = {}

    if phys.size:
        forces = world.force[phys]
        torques = world.torque[phys]
        e0 = world.energy[phys]
        demand = (
            model.costs["force"] * np.linalg.norm(forces, axis=1)
            + model.costs["torque"] * np.linalg.norm(torques, axis=1)
        ) * dt / 100.0
        short = demand > e0
        scale = np.ones(phys.size)
        scale[short] = e0[short] / demand[short]
        spent = np.where(short, e0, demand)
        e1 = np.where(short, 0.0, e0 - demand)
        delivered = forces * scale[:, None]
        delivered_torque = torques * scale[:, None]

        net = _net_forces(world, phys, delivered)
        for law, mask in props.law_groups:
            rows = phys[mask]
            if law.kind is LawKind.NEWTONIAN:
                _integrate_newtonian(world, rows, delivered[mask], dt)
            elif law.kind is LawKind.IMPETUS:
                idle = laws.advance_impetus(world, rows, law, dt)
                if idle.size:
                    _integrate_newtonian(world, idle, delivered[mask][np.isin(rows, idle)], dt)
            else:
                laws.advance_aristotelian(world, rows, delivered[mask], law, dt)
        _integrate_rotation(world, phys, delivered_torque, props.inertia[phys], dt)

        events = resolve_collisions(world, time=clock.sim_time + dt)
        for law, mask in props.law_groups:
            if law.kind is LawKind.ARISTOTELIAN:
                # no inertia: contact impulses do not outlive the step
                world.vel[phys[mask]] = law.mobility * delivered[mask]

        mass = world.mass[phys]
        e2 = np.minimum(model.cap, e1 + model.refill_constant / mass * dt)
        world.energy[phys] = e2
        ids = [world.ids[r] for r in phys.tolist()]
        for oid, sp, re, lv, f in zip(ids, spent.tolist(), (e2 - e1).tolist(), e2.tolist(), net.tolist()):
            energy_report[oid] = EnergyEntry(sp, re, lv)
            force_report[oid] = Vec3(*f)

    clock.sim_time += dt
    clock.dilation = delta
    clock.steps += 1
    if world.wind is not None:
        world.wind.advance(dt)
    return StepReport(clock.sim_time, dt, delta, tuple(events), energy_report, force_report)


def _net_forces(world: "World", rows: np.ndarray, delivered: np.ndarray) -> np.ndarray:
    """Total force on each row evaluated at the current state."""
    props = world._props()
    g = world.region.gravity_g
    weight = props.gravity_multiplier[rows] * world.mass[rows] * g
    net = delivered.copy()
    net[:, 2] += (props.buoyancy[rows] - 1.0) * weight
    vt = world.region.terminal_velocity
    if vt is not None:
        net[:, 2] -= np.abs(weight) / vt * world.vel[rows, 2]
    return net


def net_force(world: "World", obj) -> Vec3:
    """Force the next step would apply to ``obj``, ignoring energy limits."""
    r = world.row(obj)
    if not world._props().physical[r]:
        return Vec3()
    rows = np.array([r])
    return Vec3(*_net_forces(world, rows, world.force[rows])[0].tolist())


def _integrate_newtonian(world: "World", rows: np.ndarray, delivered: np.ndarray, dt: float) -> None:
    props = world._props()
    g = world.region.gravity_g
    gm = props.gravity_multiplier[rows]
    v0 = world.vel[rows]
    acc = delivered / world.mass[rows][:, None]
    acc[:, 2] += (props.buoyancy[rows] - 1.0) * gm * g
    v1 = v0 + acc * dt
    vt = world.region.terminal_velocity
    if vt is not None:
        k = np.abs(gm) * g / vt
        v1[:, 2] = (v0[:, 2] + acc[:, 2] * dt) / (1.0 + k * dt)
    world.pos[rows] = world.pos[rows] + 0.5 * (v0 + v1) * dt
    world.vel[rows] = v1


def _integrate_rotation(world: "World", rows, torques, inertia, dt) -> None:
    w = world.omega[rows] + torques / inertia * dt
    world.omega[rows] = w
    q = world.rot[rows]
    wx, wy, wz = w[:, 0], w[:, 1], w[:, 2]
    x, y, z, s = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    dq = np.stack(
        [
            wx * s + wy * z - wz * y,
            wy * s - wx * z + wz * x,
            wx * y - wy * x + wz * s,
            -(wx * x + wy * y + wz * z),
        ],
        axis=1,
    )
    q = q + 0.5 * dt * dq
    world.rot[rows] = q / np.linalg.norm(q, axis=1)[:, None]


# ---- collisions -------------------------------------------------------------


def resolve_collisions(world: "World", time: float | None = None) -> list[CollisionEvent]:
    """Resolve sphere/sphere, object/ground and region-edge contacts.

    Pair restitution is the smaller of the two materials' values.  Each
    pair impulse is equal and opposite, so momentum is conserved.
    """
    time = world.clock.sim_time if time is None else time
    props = world._props()
    phys = props.physical_rows
    if not phys.size:
        return []
    cell = world.periodic_cell
    if cell is not None:
        lo, hi = cell
        world.pos[phys] = lo + np.mod(world.pos[phys] - lo, hi - lo)
    events = _sphere_pairs(world, phys[props.is_sphere[phys]], time)
    events += _ground(world, phys, time)
    events += _edges(world, phys, time)
    return events


def _min_image(d: np.ndarray, cell) -> np.ndarray:
    if cell is None:
        return d
    length = cell[1] - cell[0]
    return d - length * np.round(d / length)


def _sphere_pairs(world: "World", rows: np.ndarray, time: float) -> list[CollisionEvent]:
    if rows.size < 2:
        return []
    props = world._props()
    cell = world.periodic_cell
    radius = props.radius[rows]
    pos = world.pos[rows]
    dist2 = np.zeros((rows.size, rows.size))
    for axis in range(3):
        d = pos[:, axis, None] - pos[None, :, axis]
        if cell is not None:
            length = cell[1][axis] - cell[0][axis]
            d -= length * np.rint(d / length)
        dist2 += d * d
    reach = radius[:, None] + radius[None, :]
    touching = np.triu(dist2 < reach * reach, 1)
    events = []
    for i, j in zip(*np.nonzero(touching)):
        a, b = rows[i], rows[j]
        delta = _min_image(world.pos[a] - world.pos[b], cell)
        dist = math.sqrt(float(delta @ delta))
        if dist == 0.0:
            n = np.array([1.0, 0.0, 0.0])
        else:
            n = delta / dist
        wa, wb = 1.0 / world.mass[a], 1.0 / world.mass[b]
        vn = float((world.vel[a] - world.vel[b]) @ n)
        impulse = 0.0
        if vn < 0.0:
            e = min(props.restitution[a], props.restitution[b])
            impulse = -(1.0 + e) * vn / (wa + wb)
            world.vel[a] = world.vel[a] + (impulse * wa) * n
            world.vel[b] = world.vel[b] - (impulse * wb) * n
            events.append(CollisionEvent(world.ids[a], world.ids[b], "object", impulse, time))
        depth = reach[i, j] - dist
        if depth > 0.0:
            world.pos[a] = world.pos[a] + (depth * wa / (wa + wb)) * n
            world.pos[b] = world.pos[b] - (depth * wb / (wa + wb)) * n
    if cell is not None and events:
        lo, hi = cell
        world.pos[rows] = lo + np.mod(world.pos[rows] - lo, hi - lo)
    return events


def _ground(world: "World", rows: np.ndarray, time: float) -> list[CollisionEvent]:
    props = world._props()
    region = world.region
    q = world.rot[rows]
    x, y, z, s = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    # third row of the rotation matrix: z-extent of each local axis
    zrow = np.stack([2 * (x * z - s * y), 2 * (y * z + s * x), 1 - 2 * (x * x + y * y)], axis=1)
    reach = (np.abs(zrow) * props.half_extents[rows]).sum(axis=1)
    reach = np.where(props.is_sphere[rows], props.radius[rows], reach)
    below = world.pos[rows, 2] - reach < region.ground_z
    resting = 2.0 * region.gravity_g * world.clock.step_size
    events = []
    for k in np.nonzero(below)[0]:
        r = rows[k]
        world.pos[r, 2] = region.ground_z + reach[k]
        vz = world.vel[r, 2]
        if vz < 0.0:
            e = min(props.restitution[r], region.ground_restitution)
            if -vz < resting:
                e = 0.0  # resting contact: don't bounce on the speed gained in a step or two
            world.vel[r, 2] = -e * vz
            events.append(CollisionEvent(world.ids[r], None, "ground", world.mass[r] * (1 + e) * -vz, time))
    return events


def _edges(world: "World", rows: np.ndarray, time: float) -> list[CollisionEvent]:
    side = world.region.side_length
    props = world._props()
    events = []
    for axis in (0, 1):
        p = world.pos[rows, axis]
        out = (p < 0.0) | (p >= side)
        for k in np.nonzero(out)[0]:
            r = rows[k]
            e = props.restitution[r]
            v = world.vel[r, axis]
            if world.pos[r, axis] < 0.0:
                world.pos[r, axis] = min(-world.pos[r, axis], math.nextafter(side, 0.0))
                world.vel[r, axis] = e * abs(v)
            else:
                world.pos[r, axis] = max(2 * side - world.pos[r, axis], 0.0)
                world.pos[r, axis] = min(world.pos[r, axis], math.nextafter(side, 0.0))
                world.vel[r, axis] = -e * abs(v)
            events.append(CollisionEvent(world.ids[r], None, "edge", world.mass[r] * (1 + e) * abs(v), time))
    return events


# ---- script-facing operations ------------------------------------------------


def _require_physical(world: "World", obj) -> "PrimObject":
    prim = world.get(obj)
    if not prim.physical:
        raise KineticOnNonPhysical(f"object {prim.id} is not physical")
    return prim


def _finite(v, what) -> Vec3:
    v = Vec3.of(v)
    if not v.is_finite():
        raise InvalidParameter(f"{what} must be finite")
    return v


def apply_impulse(world: "World", obj, impulse) -> "ObjectDynamics":
    """Kick a physical object; energy shortfall scales the kick down."""
    prim = _require_physical(world, obj)
    j = _finite(impulse, "impulse")
    r = world.row(prim)
    demand = world.energy_model.costs["impulse"] * j.norm() / 100.0
    if demand > 0.0:
        e = world.energy[r]
        scale = 1.0 if e >= demand else e / demand
        world.energy[r] = e - demand if e >= demand else 0.0
        world.vel[r] = world.vel[r] + j.to_array() * (scale / world.mass[r])
    return world.dynamics_of(prim)


def apply_force(world: "World", obj, force) -> "ObjectDynamics":
    """Set the sustained force on a physical object (replaces the previous one)."""
    prim = _require_physical(world, obj)
    world.force[world.row(prim)] = _finite(force, "force").to_array()
    return world.dynamics_of(prim)


def apply_torque(world: "World", obj, torque) -> "ObjectDynamics":
    prim = _require_physical(world, obj)
    world.torque[world.row(prim)] = _finite(torque, "torque").to_array()
    return world.dynamics_of(prim)


def set_position(world: "World", obj, position) -> "PrimObject":
    prim = world.get(obj)
    if prim.physical:
        raise KinematicOnPhysical(f"object {prim.id} is physical")
    p = _finite(position, "position")
    if not world.region.contains(p):
        raise PositionOutOfRegion(f"position {tuple(p)} is outside the region")
    world.pos[world.row(prim)] = p.to_array()
    return prim


def set_rotation(world: "World", obj, rotation) -> "PrimObject":
    prim = world.get(obj)
    if prim.physical:
        raise KinematicOnPhysical(f"object {prim.id} is physical")
    q = Rotation.of(rotation)
    if not q.is_finite() or q.norm() == 0.0:
        raise InvalidParameter("rotation must be a finite non-zero quaternion")
    world.rot[world.row(prim)] = q.normalized().to_array()
    return prim
