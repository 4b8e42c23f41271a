import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperworld import (
    InvalidParameter,
    KinematicOnPhysical,
    KineticOnNonPhysical,
    Material,
    PositionOutOfRegion,
    PrimShape,
    Region,
    Rotation,
    Vec3,
    World,
    dynamics,
)
from hyperworld.dynamics import DilationModel, EnergyModel

from conftest import ELASTIC, physical_sphere

DT = 1.0 / 45.0


def calm(**kw):
    return World(Region(wind_enabled=False, **kw))


def test_first_step_force_on_ten_kilogram_sphere():
    world = calm()
    o = world.create_object(PrimShape.sphere(2 * (3 / (4 * math.pi)) ** (1 / 3)), position=(128, 128, 50))
    world.set_physical(o, True)
    assert world.mass_of(o) == pytest.approx(10.0)
    f = world.step().forces[o.id]
    assert f.z == pytest.approx(-98.0, rel=1e-12)


def test_half_buoyancy_acceleration():
    world = calm()
    o = physical_sphere(world, buoyancy=0.5)
    world.step()
    assert world.vel[world.row(o), 2] / DT == pytest.approx(-4.9, rel=0.01)


def test_negative_buoyancy_acceleration():
    world = calm()
    o = physical_sphere(world, buoyancy=-1.0)
    world.step()
    assert world.vel[world.row(o), 2] / DT == pytest.approx(-19.6, rel=0.01)


def test_drag_is_vertical_only():
    world = calm()
    o = physical_sphere(world, position=(20, 128, 500))
    m = world.mass_of(o)
    dynamics.apply_impulse(world, o, (3 * m, 0, 0))
    for _ in range(450):
        world.step()
    v = world.dynamics_of(o).velocity
    assert v.x == 3.0
    assert -50 < v.z < -40


def test_impulse_example():
    world = calm()
    o = world.create_object(PrimShape.box(1), position=(20, 128, 60))
    world.set_physical(o, True)
    d = dynamics.apply_impulse(world, o, (20, 0, 0))
    assert d.velocity == Vec3(2.0, 0, 0)
    assert d.energy == pytest.approx(100 - 2 * 20 / 100)
    for _ in range(60 * 45):
        world.step()
    assert abs(world.dynamics_of(o).velocity.x - 2.0) < 1e-9


def test_zero_impulse_is_noop(world, sphere):
    before = world.dynamics_of(sphere)
    assert dynamics.apply_impulse(world, sphere, (0, 0, 0)) == before


def test_kinetic_on_non_physical(world):
    o = world.create_object(PrimShape.box(1), position=(5, 5, 5))
    for fn in (dynamics.apply_impulse, dynamics.apply_force, dynamics.apply_torque):
        with pytest.raises(KineticOnNonPhysical):
            fn(world, o, (1, 0, 0))


def test_nonfinite_impulse(world, sphere):
    with pytest.raises(InvalidParameter):
        dynamics.apply_impulse(world, sphere, (math.inf, 0, 0))


def test_hover_force_balances_weight():
    world = calm()
    o = physical_sphere(world, diameter=0.5)
    m = world.mass_of(o)
    dynamics.apply_force(world, o, (0, 0, m * 9.8))
    z0 = world.pos[world.row(o), 2]
    for _ in range(90):
        world.step()
    # refill far exceeds demand for this light object, so it hovers
    assert world.vel[world.row(o), 2] == 0.0
    assert world.pos[world.row(o), 2] == z0


def test_zero_force_refills_to_cap():
    world = calm()
    o = physical_sphere(world)
    world.energy[world.row(o)] = 10.0
    dynamics.apply_force(world, o, (0, 0, 0))
    for _ in range(45 * 10):
        r = world.step()
        assert r.energy[o.id].spent == 0.0
    assert world.energy[world.row(o)] == 100.0


def test_energy_partial_impulse():
    world = calm()
    o = physical_sphere(world, buoyancy=1.0)
    m = world.mass_of(o)
    world.energy[world.row(o)] = 1.0
    dynamics.apply_impulse(world, o, (100.0, 0, 0))  # costs 2, only 1 available
    assert world.vel[world.row(o), 0] == pytest.approx(50.0 / m)
    assert world.energy[world.row(o)] == 0.0


def test_torque_spins_physical_object():
    world = calm()
    o = physical_sphere(world, buoyancy=1.0)
    dynamics.apply_torque(world, o, (0, 0, 1.0))
    world.step()
    w = world.dynamics_of(o).omega
    assert w.z > 0 and w.x == 0
    q = world.dynamics_of(o).rotation
    assert q.norm() == pytest.approx(1.0)


def test_kinematic_moves():
    world = calm()
    o = world.create_object(PrimShape.box(1), position=(128, 128, 30))
    dynamics.set_position(world, o, (10, 10, 10))
    d = world.dynamics_of(o)
    assert d.position == Vec3(10, 10, 10) and d.velocity == Vec3()
    dynamics.set_position(world, o, (10, 10, 10))
    assert world.dynamics_of(o).position == Vec3(10, 10, 10)
    q = Rotation.from_axis_angle(Vec3(0, 0, 1), 0.3)
    dynamics.set_rotation(world, o, q)
    assert world.dynamics_of(o).rotation.s == pytest.approx(q.s)
    with pytest.raises(PositionOutOfRegion):
        dynamics.set_position(world, o, (300, 1, 1))


def test_kinematic_on_physical(world, sphere):
    with pytest.raises(KinematicOnPhysical):
        dynamics.set_position(world, sphere, (1, 1, 1))
    with pytest.raises(KinematicOnPhysical):
        dynamics.set_rotation(world, sphere, Rotation())


def test_equal_masses_exchange_velocities():
    world = calm()
    a = physical_sphere(world, 1.0, (100, 128, 50), material=ELASTIC, buoyancy=1.0)
    b = physical_sphere(world, 1.0, (104, 128, 50), material=ELASTIC, buoyancy=1.0)
    world.vel[world.row(a), 0] = 2.0
    world.vel[world.row(b), 0] = -2.0
    hits = []
    for _ in range(90):
        hits += world.step().collisions
    assert [c.kind for c in hits] == ["object"]
    assert world.vel[world.row(a), 0] == pytest.approx(-2.0, abs=1e-12)
    assert world.vel[world.row(b), 0] == pytest.approx(2.0, abs=1e-12)


def test_restitution_is_minimum_of_pair():
    world = calm()
    a = physical_sphere(world, 1.0, (100, 128, 50), material=ELASTIC, buoyancy=1.0)
    b = physical_sphere(world, 1.0, (102, 128, 50), material=Material.preset("wood"), buoyancy=1.0)
    world.vel[world.row(a), 0] = 2.0
    for _ in range(60):
        world.step()
    va, vb = world.vel[world.row(a), 0], world.vel[world.row(b), 0]
    assert vb - va == pytest.approx(0.5 * 2.0)
    assert va + vb == pytest.approx(2.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(-5, 5), st.floats(-5, 5), st.floats(-0.4, 0.4))
def test_pair_momentum_conserved(d1, d2, u1, u2, offset):
    world = calm()
    a = physical_sphere(world, d1, (100, 128, 50), material=ELASTIC, buoyancy=1.0)
    b = physical_sphere(world, d2, (100 + (d1 + d2) / 2 - 0.01, 128 + offset * min(d1, d2), 50),
                        material=ELASTIC, buoyancy=1.0)
    world.vel[world.row(a)] = (u1, 0, 0)
    world.vel[world.row(b)] = (u2, 0, 0)
    m = world.mass[:, None]
    p0 = (m * world.vel).sum(axis=0)
    e0 = 0.5 * (m[:, 0] * (world.vel**2).sum(axis=1)).sum()
    dynamics.resolve_collisions(world)
    p1 = (m * world.vel).sum(axis=0)
    e1 = 0.5 * (m[:, 0] * (world.vel**2).sum(axis=1)).sum()
    assert np.allclose(p0, p1, rtol=0, atol=1e-12 * max(1.0, np.abs(p0).max()))
    assert e1 == pytest.approx(e0, rel=1e-12, abs=1e-12)


def test_sphere_rests_on_ground_without_sinking():
    world = calm()
    o = physical_sphere(world, 1.0, (128, 128, 10), material=Material("stone", 0.0, 0.5))
    r = world.row(o)
    for _ in range(45 * 5):
        world.step()
        assert world.pos[r, 2] - 0.5 >= 0.0
    assert world.pos[r, 2] == 0.5
    assert world.vel[r, 2] == 0.0


def test_rotated_box_ground_contact_uses_rotated_extent():
    world = calm()
    o = world.create_object(PrimShape.box(4, 1, 1), position=(128, 128, 10),
                            rotation=Rotation.from_axis_angle(Vec3(0, 1, 0), math.pi / 2))
    world.set_physical(o, True)
    for _ in range(45 * 4):
        world.step()
    assert world.pos[world.row(o), 2] == pytest.approx(2.0)


def test_region_edge_reflects():
    world = calm()
    o = physical_sphere(world, 1.0, (254, 128, 50), material=ELASTIC, buoyancy=1.0)
    world.vel[world.row(o), 0] = 10.0
    kinds = []
    for _ in range(45):
        kinds += [c.kind for c in world.step().collisions]
    assert "edge" in kinds
    assert world.vel[world.row(o), 0] == -10.0
    assert 0 <= world.pos[world.row(o), 0] < 256


def test_dilation_formula():
    model = DilationModel(budget=10.0, per_object=1.0, per_op=0.0)
    world = World(Region(wind_enabled=False), dilation=model)
    assert dynamics.region_time_dilation(world) == 1.0
    objs = [physical_sphere(world, 0.5, (5 + 5 * k, 128, 50), buoyancy=1.0) for k in range(10)]
    assert dynamics.region_time_dilation(world) == 1.0
    for k in range(10):
        physical_sphere(world, 0.5, (5 + 5 * k, 100, 50), buoyancy=1.0)
    assert dynamics.region_time_dilation(world) == 0.5
    r = world.step()
    assert r.dilation == 0.5 and r.dt == pytest.approx(0.5 * DT)
    assert world.clock.dilation == 0.5
    assert objs


def test_script_ops_add_load():
    world = World(Region(wind_enabled=False), dilation=DilationModel(budget=100.0, per_op=0.01))
    world.script_ops_last_step = 20_000
    assert dynamics.region_time_dilation(world) == pytest.approx(0.5)


def test_wall_dt_substeps():
    world = calm()
    o = physical_sphere(world)
    r = world.step(wall_dt=1.0)
    assert r.substeps == 45
    assert world.clock.steps == 45
    assert r.sim_time == pytest.approx(1.0)
    assert o.id in r.energy
    with pytest.raises(InvalidParameter):
        world.step(wall_dt=0)


def test_non_physical_untouched():
    world = calm()
    o = world.create_object(PrimShape.box(1), position=(50, 50, 50))
    for _ in range(20):
        world.step()
    assert world.dynamics_of(o).position == Vec3(50, 50, 50)


def test_energy_model_validation():
    with pytest.raises(InvalidParameter):
        EnergyModel(cap=0)
    with pytest.raises(InvalidParameter):
        DilationModel(budget=0)
