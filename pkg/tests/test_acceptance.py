"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with ``pytest -v tests/test_acceptance.py``; each line of the verbose
output is the pass/fail verdict for one criterion.
"""

import itertools
import math
import time

import numpy as np
import pytest

from hyperworld import (
    LawKind,
    LawOfMotion,
    Material,
    PrimShape,
    Region,
    SimClock,
    World,
    dynamics,
    launch,
    moon_direction,
    sun_direction,
)
from hyperworld.dynamics import DilationModel
from hyperworld.engine import Simulation, run_scenario
from hyperworld.scenario import load_demo
from hyperworld.script import BUILTINS, Interpreter, ScriptHost
from hyperworld.taxonomy import (
    EnvironmentProfile,
    classify,
    classify_johnston_whitehead,
    jw_at_least,
    load_profile,
)
from hyperworld.wind import WindField

from conftest import ELASTIC, physical_sphere, rel_close

G = 9.8
DT = 1.0 / 45.0


def test_c01_gravity_first_step_force():
    t0 = time.perf_counter()
    world = World(Region(wind_enabled=False))
    cases = [
        (PrimShape.sphere(1.0), 1.0),
        (PrimShape.box(2.0, 1.0, 0.5), 1.0),
        (PrimShape.cylinder(0.5, 3.0), 2.5),
        (PrimShape.sphere(0.2), 0.3),
        (PrimShape.box(4.0, 5.0, 2.0), -1.0),
    ]
    objs = []
    for k, (shape, gamma) in enumerate(cases):
        o = world.create_object(shape, position=(20 + 20 * k, 128, 200))
        world.set_gravity_multiplier(o, gamma)
        world.set_physical(o, True)
        objs.append((o, gamma))
    report = world.step()
    for o, gamma in objs:
        expected = -gamma * world.mass_of(o) * 9.8
        f = report.forces[o.id]
        assert rel_close(f.z, expected, 1e-9), (f.z, expected)
        assert f.x == 0.0 and f.y == 0.0
    assert time.perf_counter() - t0 < 1.0


def test_c02_terminal_velocity_and_drag_free_fall():
    world = World(Region(wind_enabled=False))
    o = physical_sphere(world, position=(128, 128, 4000))
    r = world.row(o)
    speeds = []
    for _ in range(int(60 * 45)):
        world.step()
        speeds.append(-world.vel[r, 2])
    speeds = np.array(speeds)
    assert speeds.max() <= 50.0
    assert abs(speeds[-1] - 50.0) < 0.01 * 50.0
    assert np.all(np.diff(speeds) >= 0)  # monotone approach from below

    world = World(Region(terminal_velocity=None, wind_enabled=False))
    o = physical_sphere(world, position=(128, 128, 1000))
    z0 = world.dynamics_of(o).position.z
    for _ in range(90):  # 2 s at dt = 1/45
        world.step()
    t = world.clock.sim_time
    assert abs(t - 2.0) < 1e-12
    fallen = z0 - world.dynamics_of(o).position.z
    assert abs(fallen - 0.5 * G * t * t) < 0.005 * 0.5 * G * t * t


def test_c03_buoyancy_suite():
    world = World(Region(wind_enabled=False))
    o = physical_sphere(world, buoyancy=1.0)
    p0 = world.pos[world.row(o)].copy()
    for _ in range(450):
        world.step()
    assert np.linalg.norm(world.pos[world.row(o)] - p0) < 1e-6

    for b in (-1.0, 0.0, 0.5, 2.0):
        for gamma in (1.0, 0.5):
            world = World(Region(wind_enabled=False))
            o = physical_sphere(world, buoyancy=b, gravity_multiplier=gamma)
            world.step()
            accel = world.vel[world.row(o), 2] / DT
            expected = (b - 1.0) * gamma * G
            assert rel_close(accel, expected, 0.01), (b, gamma, accel, expected)

    def trajectory(water):
        w = World(Region(water_level=water, wind_enabled=False))
        objs = [physical_sphere(w, position=(30 + 30 * k, 128, 40), buoyancy=b) for k, b in enumerate((-1, 0, 0.5, 1, 2))]
        out = []
        for _ in range(300):
            w.step()
            out.append(w.pos[[w.row(x) for x in objs]].copy())
        return np.array(out)

    base = trajectory(0.0)
    for water in (20.0, 35.0, 500.0):
        assert np.max(np.abs(trajectory(water) - base)) < 1e-12


def test_c04_horizontal_velocity_persists():
    world = World(Region(wind_enabled=False))
    o = physical_sphere(world, position=(10, 128, 60))
    m = world.mass_of(o)
    dynamics.apply_impulse(world, o, (m * 1.0, m * 0.25, 0))
    r = world.row(o)
    vx0, vy0 = world.vel[r, 0], world.vel[r, 1]
    worst = 0.0
    for _ in range(10_000):
        world.step()
        worst = max(worst, abs(world.vel[r, 0] - vx0), abs(world.vel[r, 1] - vy0))
    assert worst < 1e-9
    assert world.pos[r, 2] == pytest.approx(0.5)  # it landed and kept sliding


def test_c05_energy_refill_cap_and_starvation():
    world = World(Region(wind_enabled=False))
    o = physical_sphere(world, diameter=2.0)
    m = world.mass_of(o)
    dynamics.apply_impulse(world, o, (10_000.0, 0, 0))  # far beyond the budget
    r = world.row(o)
    assert world.energy[r] == 0.0
    for _ in range(5):
        before = world.energy[r]
        report = world.step()
        rate = (world.energy[r] - before) / report.dt
        assert abs(rate - 200.0 / m) < 1e-9
    for _ in range(45 * 60):
        world.step()
        assert world.energy[r] <= 100.0
    assert world.energy[r] == 100.0

    world = World(Region(wind_enabled=False))
    heavy = world.create_object(PrimShape.box(4, 5, 2), position=(20, 128, 50))
    world.set_buoyancy(heavy, 1.0)
    world.set_physical(heavy, True)
    assert world.mass_of(heavy) == pytest.approx(400.0)
    requested = 4000.0
    dynamics.apply_force(world, heavy, (requested, 0, 0))
    fractions = []
    for _ in range(5 * 45):
        report = world.step()
        fractions.append(report.forces[heavy.id].x / requested)
    settled = np.mean(fractions[-45:])
    sustainable = 200.0 * 100.0 / (400.0 * 1.0 * requested)
    assert settled < 0.2
    assert settled == pytest.approx(sustainable, rel=1e-9)


def _literal(type_name):
    return {
        "integer": "0",
        "float": "1.0",
        "string": '"sphere"',
        "vector": "<1.0, 1.0, 1.0>",
        "rotation": "<0.0, 0.0, 0.0, 1.0>",
    }[type_name]


def test_c06_gating_sweep():
    violations = []
    for name, b in sorted(BUILTINS.items()):
        call = f"{name}({', '.join(_literal(t) for t in b.params)})"
        stmt = f"{b.returns} r = {call};" if b.returns else f"{call};"
        source = f"default {{ touch_start(integer n) {{ {stmt} }} }}"
        for physical in (False, True):
            world = World(Region(wind_enabled=False))
            o = world.create_object(PrimShape.sphere(1.0), position=(128, 128, 30))
            world.set_physical(o, physical)
            host = ScriptHost(world, Interpreter(strict=True))
            host.attach(o, source)
            host.inject_touch(o)
            host.dispatch(host.schedule())
            should_fault = (b.category == "kinetic" and not physical) or (b.category == "kinematic" and physical)
            reasons = [f.error.reason for f in host.faults]
            if should_fault:
                want = "KineticOnNonPhysical" if b.category == "kinetic" else "KinematicOnPhysical"
                if reasons != [want]:
                    violations.append((name, physical, reasons))
            elif reasons:
                violations.append((name, physical, reasons))
    assert violations == []


def _two_body(m_ratio_diam, u1, u2):
    world = World(Region(wind_enabled=False))
    a = physical_sphere(world, 1.0, (100, 128, 50), material=ELASTIC, buoyancy=1.0)
    b = physical_sphere(world, m_ratio_diam, (110, 128, 50), material=ELASTIC, buoyancy=1.0)
    world.vel[world.row(a), 0] = u1
    world.vel[world.row(b), 0] = u2
    for _ in range(45 * 30):
        report = world.step()
        if any(c.kind == "object" for c in report.collisions):
            break
    else:
        raise AssertionError("no collision")
    return world, a, b


def test_c07_elastic_collisions_and_brownian_momentum():
    for diam, u1, u2 in [(1.0, 2.0, -2.0), (2.0, 3.0, 0.0), (1.5, 1.0, -4.0), (0.5, 5.0, 1.0)]:
        world, a, b = _two_body(diam, u1, u2)
        m1, m2 = world.mass_of(a), world.mass_of(b)
        v1 = ((m1 - m2) * u1 + 2 * m2 * u2) / (m1 + m2)
        v2 = ((m2 - m1) * u2 + 2 * m1 * u1) / (m1 + m2)
        got1, got2 = world.vel[world.row(a)], world.vel[world.row(b)]
        assert abs(got1[0] - v1) < 1e-9 and abs(got2[0] - v2) < 1e-9
        assert np.all(np.abs(got1[1:]) < 1e-12) and np.all(np.abs(got2[1:]) < 1e-12)

    sim = Simulation(load_demo("brownian"))
    assert len(sim.world) == 101
    assert sim.scenario.steps == 10_000
    sim.run(sample_every=100)
    assert sim.collisions["object"] > 0
    assert sim.momentum_drift < 1e-6


def _z_at_x(traj, x):
    d = traj.for_object(1)
    px, pz = d[:, 2], d[:, 4]
    k = int(np.argmax(px >= x))
    assert px[k] >= x and k > 0
    f = (x - px[k - 1]) / (px[k] - px[k - 1])
    return pz[k - 1] + f * (pz[k] - pz[k - 1])


def test_c08_laws_of_motion():
    demo = load_demo("cannon")
    runs = {kind: run_scenario(demo.with_law(kind))[0] for kind in ("newtonian", "impetus")}
    rng = 20.0**2 / G  # drag is off in the cannon demo
    x_mid = 20.0 + rng / 2
    z_newton = _z_at_x(runs["newtonian"], x_mid)
    z_impetus = _z_at_x(runs["impetus"], x_mid)
    assert abs(z_impetus - z_newton) > 0.10 * abs(z_newton)

    world = World(Region(terminal_velocity=None, wind_enabled=False), law=LawOfMotion(LawKind.IMPETUS, impetus_decay=10.0))
    o = physical_sphere(world, 0.5, (20, 128, 0.25))
    p0 = world.pos[world.row(o)].copy()
    d = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
    launch(world, o, 20.0, d)
    r = world.row(o)
    worst, impetus_steps = 0.0, 0
    while np.linalg.norm(world.impetus[r]) > 0:
        world.step()
        if np.linalg.norm(world.impetus[r]) == 0:
            break
        rel = world.pos[r] - p0
        worst = max(worst, float(np.linalg.norm(rel - (rel @ d) * d)))
        impetus_steps += 1
    assert impetus_steps > 45
    assert worst < 1e-9

    world = World(Region(wind_enabled=False), law=LawOfMotion(LawKind.ARISTOTELIAN, mobility=0.5))
    a = physical_sphere(world, 1.0, (100, 128, 50))
    b = physical_sphere(world, 1.0, (101.5, 128, 50))
    world.vel[world.row(b)] = (-3.0, 0.0, 0.0)  # a stray velocity is wiped
    pattern = [(4.0, 0, 0), (0, 0, 0), (0, 0, -2.0), (0, 0, 0), (10.0, 0, 0), (0, 0, 0)]
    for k, force in enumerate(pattern * 20):
        dynamics.apply_force(world, a, force)
        world.step()
        if not any(force):
            assert np.all(world.vel[world.row(a)] == 0.0), k
        assert np.all(world.vel[world.row(b)] == 0.0)


def test_c09_wind_projection_decoupling_determinism():
    w = WindField(seed=3)
    for _ in range(200):
        w.advance(DT)
        assert np.abs(w.divergence()).max() < 1e-6
    assert np.abs(w.u).max() > 0

    def trajectory(wind):
        world = World(Region(wind_enabled=wind), seed=11)
        objs = [physical_sphere(world, 1.0, (60 + 40 * k, 128, 80), buoyancy=0.5 * k) for k in range(3)]
        dynamics.apply_impulse(world, objs[0], (3.0, 1.0, 0))
        out = []
        for _ in range(450):
            world.step()
            out.append(world.pos.copy())
            out.append(world.vel.copy())
        return np.array(out)

    assert np.max(np.abs(trajectory(True) - trajectory(False))) < 1e-12

    a, b = WindField(seed=42), WindField(seed=42)
    for _ in range(100):
        a.advance(DT)
        b.advance(DT)
    assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)
    assert a.u.tobytes() == b.u.tobytes()


def test_c10_sun_clock_dilation():
    for t in (0.0, 1.0, 1234.5, 7200.0, 10_000.25, 14_399.0):
        s0 = sun_direction(SimClock(sim_time=t))
        s1 = sun_direction(SimClock(sim_time=t + 14_400.0))
        assert s0 == s1
        m = moon_direction(SimClock(sim_time=t))
        assert abs(s0.dot(m) + 1.0) < 1e-12
    assert sun_direction(SimClock(sim_time=3600.0)).z == pytest.approx(1.0)

    assert dynamics.region_time_dilation(World()) == 1.0
    rng = np.random.default_rng(0)
    for _ in range(200):
        world = World(Region(wind_enabled=False), dilation=DilationModel(budget=float(rng.uniform(1, 50))))
        for k in range(int(rng.integers(0, 60))):
            physical_sphere(world, 0.5, (4 + 4 * k, 128, 50), buoyancy=1.0)
        world.script_ops_last_step = int(rng.integers(0, 10_000))
        d = dynamics.region_time_dilation(world)
        assert 0.0 < d <= 1.0


def test_c11_taxonomy_verdicts_and_subset_chain():
    sl = classify(load_profile("sl_profile.json"))
    assert sl.narayanasamy.overall is None
    assert sl.johnston_whitehead == "Game"
    assert classify(load_profile("airtrack_profile.json")).johnston_whitehead == "TrainingSimulation"
    assert classify(load_profile("brownian_profile.json")).johnston_whitehead == "SeriousGame"
    assert classify(load_profile("bumpers_profile.json")).johnston_whitehead == "SeriousGame"

    names = EnvironmentProfile.field_names()
    assert len(names) == 17
    checked = 0
    for bits in itertools.product((False, True), repeat=len(names)):
        data = dict(zip(names, bits))
        if data["real_world_recreation_only"] and data["fictitious_environment"]:
            continue
        v = classify_johnston_whitehead(EnvironmentProfile(**data))
        if jw_at_least(v, "TrainingSimulation"):
            assert jw_at_least(v, "SeriousGame")
        if jw_at_least(v, "SeriousGame"):
            assert jw_at_least(v, "Game")
        game = data["closed_formal_system"] and data["represents_subset_of_reality"]
        assert jw_at_least(v, "Game") == game
        assert jw_at_least(v, "SeriousGame") == (game and data["primary_goal_education"])
        checked += 1
    assert checked == 3 * 2**15


def test_c12_determinism_bit_identical_csv():
    for name in ("freefall", "buoyancy", "airtrack", "bumpers", "cannon", "brownian"):
        scenario = load_demo(name)
        if name == "brownian":
            scenario.steps = 600
        if name == "freefall":
            scenario.seconds = 10.0
        first = run_scenario(scenario, 1)[0].to_csv()
        second = run_scenario(scenario, 1)[0].to_csv()
        assert first == second, name
        assert first.splitlines()[0] == "t,object_id,px,py,pz,vx,vy,vz,energy,dilation"
