"""Builtin function table.

Every builtin carries a category that drives gating:

``kinematic``  teleport/rotate; refused on physical objects
``kinetic``    force/impulse/torque; refused on non-physical objects
``query``      read-only
``world``      state changes allowed on any object

There is deliberately no ``llSetVel``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable

from .. import dynamics
from ..vec import ZERO, Rotation, Vec3
from ..world import Material, PrimShape, ShapeKind

if TYPE_CHECKING:
    from .interpreter import CallContext

STATUS_PHYSICS = 1

CONSTANTS: dict[str, tuple[str, Any]] = {
    "TRUE": ("integer", 1),
    "FALSE": ("integer", 0),
    "PI": ("float", math.pi),
    "TWO_PI": ("float", 2 * math.pi),
    "PI_BY_TWO": ("float", math.pi / 2),
    "DEG_TO_RAD": ("float", math.pi / 180),
    "RAD_TO_DEG": ("float", 180 / math.pi),
    "STATUS_PHYSICS": ("integer", STATUS_PHYSICS),
    "ZERO_VECTOR": ("vector", ZERO),
    "ZERO_ROTATION": ("rotation", Rotation()),
}

EVENTS: dict[str, tuple[str, ...]] = {
    "state_entry": (),
    "timer": (),
    "touch_start": ("integer",),
    "collision_start": ("integer",),
}


@dataclass(frozen=True)
class Builtin:
    name: str
    category: str
    params: tuple[str, ...]
    returns: str | None
    impl: Callable
    defaults: tuple = ()  # values for the trailing optional params
    energy_cost: str | None = None  # key into EnergyModel.costs

    @property
    def min_args(self) -> int:
        return len(self.params) - len(self.defaults)

    @property
    def max_args(self) -> int:
        return len(self.params)


def _get_pos(ctx: "CallContext"):
    return ctx.world.dynamics_of(ctx.object_id).position


def _get_vel(ctx):
    return ctx.world.dynamics_of(ctx.object_id).velocity


def _get_omega(ctx):
    prim = ctx.prim
    if prim.physical:
        return ctx.world.dynamics_of(prim).omega
    return prim.visual_omega


def _get_mass(ctx):
    return ctx.world.mass_of(ctx.object_id)


def _set_force(ctx, force):
    dynamics.apply_force(ctx.world, ctx.object_id, force)


def _apply_impulse(ctx, impulse):
    dynamics.apply_impulse(ctx.world, ctx.object_id, impulse)


def _set_torque(ctx, torque):
    dynamics.apply_torque(ctx.world, ctx.object_id, torque)


def _set_pos(ctx, pos):
    dynamics.set_position(ctx.world, ctx.object_id, pos)


def _set_rot(ctx, rot):
    dynamics.set_rotation(ctx.world, ctx.object_id, rot)


def _set_buoyancy(ctx, b):
    ctx.world.set_buoyancy(ctx.object_id, b)


def _set_status(ctx, status, value):
    if status & STATUS_PHYSICS:
        ctx.world.set_physical(ctx.object_id, bool(value))


def _set_timer(ctx, seconds):
    inst = ctx.instance
    if seconds <= 0:
        inst.timer_interval = 0.0
        inst.timer_next = None
    else:
        inst.timer_interval = float(seconds)
        inst.timer_next = ctx.world.clock.sim_time + seconds


def _rez_object(ctx, shape, pos, size):
    prim = ctx.world.create_object(PrimShape(ShapeKind(shape), size), Material(), pos)
    return prim.id


def _target_omega(ctx, axis, spinrate, gain):
    omega = axis * spinrate if gain != 0 else ZERO
    prim = ctx.prim
    if prim.physical:
        ctx.world.omega[ctx.world.row(prim)] = omega.to_array()
    else:
        ctx.world.set_visual_omega(prim, omega)


def _wind(ctx, offset):
    return ctx.world.wind_at(_get_pos(ctx) + offset)


def _sun(ctx):
    return ctx.world.sun_direction()


def _dilation(ctx):
    return ctx.world.clock.dilation


_TABLE = [
    Builtin("llGetPos", "query", (), "vector", _get_pos),
    Builtin("llGetVel", "query", (), "vector", _get_vel),
    Builtin("llGetOmega", "query", (), "vector", _get_omega),
    Builtin("llGetMass", "query", (), "float", _get_mass),
    Builtin("llSetForce", "kinetic", ("vector",), None, _set_force, energy_cost="force"),
    Builtin("llApplyImpulse", "kinetic", ("vector",), None, _apply_impulse, energy_cost="impulse"),
    Builtin("llSetTorque", "kinetic", ("vector",), None, _set_torque, energy_cost="torque"),
    Builtin("llSetPos", "kinematic", ("vector",), None, _set_pos),
    Builtin("llSetRot", "kinematic", ("rotation",), None, _set_rot),
    Builtin("llSetBuoyancy", "world", ("float",), None, _set_buoyancy),
    Builtin("llSetStatus", "world", ("integer", "integer"), None, _set_status),
    Builtin("llSetTimerEvent", "world", ("float",), None, _set_timer),
    Builtin(
        "llRezObject", "world", ("string", "vector", "vector"), "integer", _rez_object,
        defaults=(Vec3(0.5, 0.5, 0.5),),
    ),
    Builtin("llTargetOmega", "world", ("vector", "float", "float"), None, _target_omega, defaults=(1.0, 1.0)),
    Builtin("llWind", "query", ("vector",), "vector", _wind, defaults=(ZERO,)),
    Builtin("llGetSunDirection", "query", (), "vector", _sun),
    Builtin("llGetRegionTimeDilation", "query", (), "float", _dilation),
]

BUILTINS: dict[str, Builtin] = {b.name: b for b in _TABLE}
