import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperworld import (
    InvalidParameter,
    Material,
    MaterialKind,
    PositionOutOfRegion,
    PrimShape,
    Region,
    Rotation,
    SimClock,
    Vec3,
    World,
    compute_mass,
    moon_direction,
    sun_direction,
)
from hyperworld.errors import UnknownObject


def test_rezzed_object_is_stationary_and_not_physical(world):
    o = world.create_object(PrimShape.box(1, 1, 1), position=(128, 128, 30))
    assert not o.physical
    d = world.dynamics_of(o)
    assert d.velocity == Vec3() and d.position == Vec3(128, 128, 30)
    assert d.energy == 100.0


def test_region_corner_is_inside(world):
    o = world.create_object(PrimShape.sphere(1.0), position=(0, 0, 0.5))
    assert world.dynamics_of(o).position == Vec3(0, 0, 0.5)


@pytest.mark.parametrize("pos", [(300, 10, 5), (256, 10, 5), (-0.01, 3, 3), (10, 256.0, 1)])
def test_out_of_region(world, pos):
    with pytest.raises(PositionOutOfRegion):
        world.create_object(PrimShape.box(1), position=pos)


def test_nonfinite_position_rejected(world):
    with pytest.raises(InvalidParameter):
        world.create_object(PrimShape.box(1), position=(math.nan, 1, 1))


def test_masses():
    assert compute_mass(PrimShape.box(1, 1, 1)) == 10.0
    assert compute_mass(PrimShape.sphere(1.0)) == pytest.approx(4 / 3 * math.pi * 0.125 * 10, rel=1e-15)
    assert compute_mass(PrimShape.sphere(1.0)) == pytest.approx(5.235987755982988)
    assert compute_mass(PrimShape.cylinder(2.0, 3.0)) == pytest.approx(math.pi * 3 * 10)


def test_mass_ignores_material(world):
    wood = world.create_object(PrimShape.box(1), Material.preset("wood"), (10, 10, 10))
    metal = world.create_object(PrimShape.box(1), Material.preset("metal"), (20, 10, 10))
    assert world.mass_of(wood) == world.mass_of(metal) == 10.0


@given(st.floats(0.01, 64), st.floats(0.01, 64), st.floats(0.01, 64))
def test_box_mass_scales_with_volume(a, b, c):
    assert compute_mass(PrimShape.box(a, b, c)) == pytest.approx(10 * a * b * c, rel=1e-12)


def test_size_bounds():
    with pytest.raises(InvalidParameter):
        PrimShape.box(0.001)
    with pytest.raises(InvalidParameter):
        PrimShape.box(65)


def test_material_validation():
    assert Material.preset(MaterialKind.RUBBER).restitution == 0.9
    with pytest.raises(InvalidParameter):
        Material("wood", 1.5, 0.1)
    with pytest.raises(InvalidParameter):
        Material("cheese")


def test_set_physical_applies_gravity_next_step(world):
    o = world.create_object(PrimShape.box(1), position=(128, 128, 30))
    world.set_physical(o, True)
    report = world.step()
    assert report.forces[o.id] == Vec3(0, 0, -98.0)


def test_freezing_zeroes_velocity(world):
    o = world.create_object(PrimShape.box(1), position=(128, 128, 30))
    world.set_physical(o, True)
    world.set_buoyancy(o, 1.0)
    world.vel[world.row(o)] = (5.0, 0, 0)
    world.set_physical(o, False)
    assert world.dynamics_of(o).velocity == Vec3()
    p = world.dynamics_of(o).position
    for _ in range(10):
        world.step()
    assert world.dynamics_of(o).position == p


def test_set_physical_idempotent(world, sphere):
    before = world.dynamics_of(sphere)
    world.set_physical(sphere, True)
    assert world.dynamics_of(sphere) == before
    assert world.get(sphere) == sphere


def test_unknown_object(world):
    with pytest.raises(UnknownObject):
        world.get(99)


def test_delete_object(world):
    a = world.create_object(PrimShape.box(1), position=(1, 1, 1))
    b = world.create_object(PrimShape.box(2), position=(2, 2, 2))
    world.delete_object(a)
    assert a.id not in world
    assert world.dynamics_of(b).position == Vec3(2, 2, 2)
    assert world.mass_of(b) == 80.0


def test_sun_examples():
    s = sun_direction(SimClock(sim_time=0.0))
    assert s == Vec3(1.0, 0.0, 0.0)
    z = sun_direction(SimClock(sim_time=3600.0))
    assert z.x == pytest.approx(0.0, abs=1e-15) and z.z == pytest.approx(1.0)


@given(st.floats(0, 1e7))
def test_sun_moon_opposite(t):
    clock = SimClock(sim_time=t)
    s, m = sun_direction(clock), moon_direction(clock)
    assert abs(s.dot(m) + 1.0) < 1e-12
    assert abs(s.norm() - 1.0) < 1e-12


def test_water_level_constant():
    world = World(Region(water_level=33.0))
    for p in [(0, 0, 0), (100, 200, 50), (255.9, 0.1, 1000)]:
        assert world.water_level_at(p) == 33.0
    with pytest.raises(PositionOutOfRegion):
        world.water_level_at((-1, 0, 0))


def test_wind_at_is_horizontal():
    world = World(seed=4)
    for _ in range(30):
        world.step()
    w = world.wind_at((100, 50, 40))
    assert w.z == 0.0 and (w.x != 0.0 or w.y != 0.0)
    with pytest.raises(PositionOutOfRegion):
        world.wind_at((300, 0, 0))


def test_wind_disabled_reads_zero():
    world = World(Region(wind_enabled=False))
    assert world.wind_at((1, 1, 1)) == Vec3()


def test_region_validation():
    with pytest.raises(InvalidParameter):
        Region(side_length=512)
    with pytest.raises(InvalidParameter):
        Region(terminal_velocity=0)
    with pytest.raises(InvalidParameter):
        SimClock(dilation=1.5)


def test_snapshot_is_immutable_copy(world, sphere):
    snap = world.snapshot()
    world.step()
    (prim, dyn), = snap.objects
    assert prim.id == sphere.id and dyn.position == Vec3(128, 128, 100)


def test_rotation_composition_matches_matrix():
    a = Rotation.from_axis_angle(Vec3(0, 0, 1), math.pi / 2)
    b = Rotation.from_axis_angle(Vec3(1, 0, 0), math.pi / 2)
    v = Vec3(1, 0, 0)
    # a then b
    got = (a * b).rotate(v)
    want = b.rotate(a.rotate(v))
    assert np.allclose(tuple(got), tuple(want))
    assert np.allclose(tuple(got), (0, 0, 1))


@settings(max_examples=50)
@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3), st.floats(-6, 6))
def test_rotation_preserves_length(axis, angle):
    if np.linalg.norm(axis) < 1e-3:
        return
    q = Rotation.from_axis_angle(Vec3(*axis), angle)
    v = Vec3(0.3, -2.0, 1.1)
    assert q.rotate(v).norm() == pytest.approx(v.norm(), rel=1e-12)
