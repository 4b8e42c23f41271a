"""Alternative laws of motion.

Three laws are available, per world (default) or per object (override):

``newtonian``
    Forces produce accelerations; the ordinary dynamics integrator.
``impetus``
    A launch charges the body with an impetus ``m * speed`` along the launch
    direction.  While impetus remains the body travels in a straight line at
    the launch velocity with gravity suspended; the impetus is consumed at
    ``impetus_decay * m`` per second.  Once exhausted the body loses its
    velocity and falls under the Newtonian rules.
``aristotelian``
    No inertia: velocity is ``mobility * F`` for the currently applied
    motive force, and zero whenever no force is applied.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidParameter, KineticOnNonPhysical
from .vec import Vec3

if TYPE_CHECKING:
    from .world import PrimObject, World


class LawKind(str, enum.Enum):
    NEWTONIAN = "newtonian"
    IMPETUS = "impetus"
    ARISTOTELIAN = "aristotelian"


@dataclass(frozen=True)
class LawOfMotion:
    kind: LawKind = LawKind.NEWTONIAN
    impetus_decay: float = 0.0  # 1/s
    mobility: float = 1.0  # (m/s) per N

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", LawKind(self.kind))
        except ValueError:
            raise InvalidParameter(f"unknown law of motion {self.kind!r}") from None
        if not math.isfinite(self.impetus_decay) or self.impetus_decay < 0:
            raise InvalidParameter(f"impetus decay must be >= 0, got {self.impetus_decay}")
        if not math.isfinite(self.mobility) or self.mobility <= 0:
            raise InvalidParameter(f"mobility must be > 0, got {self.mobility}")


NEWTONIAN = LawOfMotion()


def set_law(world: "World", law: LawOfMotion, obj: "PrimObject | int | None" = None):
    """Select ``law`` for the whole world (``obj=None``) or one object.

    Position and velocity are left untouched; only later steps change.
    Returns the updated object, or the world when setting the default.
    """
    if not isinstance(law, LawOfMotion):
        raise InvalidParameter(f"expected a LawOfMotion, got {law!r}")
    if obj is None:
        world.set_default_law(law)
        return world
    return world.set_object_law(obj, law)


def launch(world: "World", obj: "PrimObject | int", speed: float, direction) -> "PrimObject":
    """Set a physical object in motion according to its law of motion."""
    from . import dynamics

    prim = world.get(obj)
    if not prim.physical:
        raise KineticOnNonPhysical(f"object {prim.id} is not physical")
    if speed < 0 or not math.isfinite(speed):
        raise InvalidParameter(f"launch speed must be finite and >= 0, got {speed}")
    d = Vec3.of(direction)
    n = d.norm()
    if speed == 0.0:
        return prim
    if n == 0.0 or not math.isfinite(n):
        raise InvalidParameter("launch direction must be a non-zero vector")
    d = d / n

    law = world.law_of(prim)
    mass = world.mass_of(prim)
    if law.kind is LawKind.NEWTONIAN:
        dynamics.apply_impulse(world, prim, d * (mass * speed))
    elif law.kind is LawKind.IMPETUS:
        row = world.row(prim)
        world.impetus[row] = (d * (mass * speed)).to_array()
        world.vel[row] = (d * speed).to_array()
    else:
        dynamics.apply_force(world, prim, d * (speed / law.mobility))
    return world.get(prim)


def advance_impetus(world: "World", rows: np.ndarray, law: LawOfMotion, dt: float) -> np.ndarray:
    """Move the impetus-carrying rows; return the rows that have none left.

    Returned rows must be integrated with the Newtonian rules by the caller.
    """
    imp = world.impetus[rows]
    mag = np.linalg.norm(imp, axis=1)
    active = mag > 0.0
    for k in np.nonzero(active)[0]:
        r = rows[k]
        v = world.vel[r]
        if law.impetus_decay == 0.0:
            world.pos[r] = world.pos[r] + v * dt
            continue
        spend = law.impetus_decay * world.mass[r]
        t_left = mag[k] / spend
        if t_left > dt:
            world.pos[r] = world.pos[r] + v * dt
            world.impetus[r] = imp[k] * ((mag[k] - spend * dt) / mag[k])
        else:
            world.pos[r] = world.pos[r] + v * t_left
            world.impetus[r] = 0.0
            world.vel[r] = 0.0
    return rows[~active]


def advance_aristotelian(world: "World", rows: np.ndarray, forces: np.ndarray, law: LawOfMotion, dt: float):
    v = law.mobility * forces
    world.vel[rows] = v
    world.pos[rows] = world.pos[rows] + v * dt
