import math

import pytest

from hyperworld import Material, PrimShape, Region, World
from hyperworld.script import Interpreter, ScriptHost

ELASTIC = Material("rubber", 1.0, 0.0)


def physical_sphere(world, diameter=1.0, position=(128, 128, 100), **props):
    o = world.create_object(PrimShape.sphere(diameter), props.pop("material", None), position)
    if "buoyancy" in props:
        world.set_buoyancy(o, props.pop("buoyancy"))
    if "gravity_multiplier" in props:
        world.set_gravity_multiplier(o, props.pop("gravity_multiplier"))
    assert not props, props
    world.set_physical(o, True)
    return world.get(o)


def rel_close(a, b, tol):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


@pytest.fixture
def world():
    return World(Region(wind_enabled=False))


@pytest.fixture
def host(world):
    return ScriptHost(world, Interpreter())


@pytest.fixture
def sphere(world):
    return physical_sphere(world)


__all__ = ["ELASTIC", "physical_sphere", "rel_close", "math"]
