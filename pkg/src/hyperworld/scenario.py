"""Scenario files: JSON descriptions of a region, its objects and a run length.

Schema (every key optional unless noted)::

    {
      "name": "freefall",
      "seed": 0,
      "region": {"gravity": 9.8, "terminal_velocity": 50.0 | null,
                 "water_level": 20.0, "density": 10.0, "wind": true,
                 "dilation_budget": 1000.0, "law": "newtonian",
                 "law_params": {"impetus_decay": 0.0, "mobility": 1.0}},
      "container": {"lo": [x, y, z], "hi": [x, y, z]},       # periodic cell
      "objects": [                                           # required
        {"name": "ball", "shape": "sphere", "size": 1.0 | [sx, sy, sz],
         "material": "wood" | {"restitution": 1.0, "friction": 0.0},
         "position": [x, y, z], "physical": true, "buoyancy": 0.0,
         "gravity_multiplier": 1.0, "law": "impetus" | {"kind": ..., ...},
         "script": "relative/path.lsl", "impulse": [jx, jy, jz],
         "velocity": [vx, vy, vz],
         "launch": {"speed": 20.0, "direction": [1, 0, 1]}},
        {"count": 100, "shape": "sphere", "size": 0.5,
         "lattice": {"lo": [...], "hi": [...]}, "random_speed": 2.0}
      ],
      "run": {"steps": 450} | {"seconds": 10.0},             # required
      "events": [{"t": 1.0, "touch": "ball"}]
    }

An entry with ``count`` expands into that many copies placed on a jittered
lattice, each given a random velocity of magnitude ``random_speed``.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .errors import HyperworldError, ScenarioError, UnknownDemo
from .laws import LawKind, LawOfMotion
from .vec import Vec3
from .world import Material, MaterialKind, PrimShape, Region, ShapeKind

_REGION_KEYS = {"gravity", "terminal_velocity", "water_level", "density", "wind", "dilation_budget", "law", "law_params"}
_OBJECT_KEYS = {
    "name", "shape", "size", "material", "position", "physical", "buoyancy", "gravity_multiplier",
    "law", "script", "impulse", "velocity", "launch", "count", "lattice", "random_speed",
}
_TOP_KEYS = {"name", "seed", "region", "container", "objects", "run", "events", "description"}


@dataclass
class ObjectSpec:
    shape: PrimShape
    material: Material
    position: Vec3
    name: str | None = None
    physical: bool = True
    buoyancy: float = 0.0
    gravity_multiplier: float = 1.0
    law: LawOfMotion | None = None
    script: Path | None = None
    impulse: Vec3 | None = None
    velocity: Vec3 | None = None
    launch: tuple[float, Vec3] | None = None


@dataclass
class TouchEvent:
    t: float
    target: str | int  # object name or index into the object list


@dataclass
class Scenario:
    name: str
    seed: int
    region: Region
    law: LawOfMotion
    dilation_budget: float
    objects: list[ObjectSpec]
    steps: int | None = None
    seconds: float | None = None
    container: tuple[Vec3, Vec3] | None = None
    events: list[TouchEvent] = field(default_factory=list)
    law_params: dict = field(default_factory=dict)
    source: Path | None = None

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, seed=seed)

    def with_law(self, kind: "str | LawKind") -> "Scenario":
        """Same scenario with every object under law ``kind`` (region law params kept)."""
        law = parse_law(kind, self.law_params)
        return replace(self, law=law, objects=[replace(o, law=None) for o in self.objects])


def _fail(message: str, where: str | None = None):
    raise ScenarioError(f"{where}: {message}" if where else message)


def _vec(value, what) -> Vec3:
    try:
        v = Vec3.of(value)
    except (TypeError, ValueError):
        _fail(f"{what} must be a list of three numbers, got {value!r}")
    if not v.is_finite():
        _fail(f"{what} must be finite")
    return v


def _unknown(d: dict, allowed: set, what: str):
    extra = sorted(set(d) - allowed)
    if extra:
        _fail(f"unknown key(s) in {what}: {', '.join(extra)}")


def parse_law(value, defaults: dict | None = None) -> LawOfMotion:
    params = dict(defaults or {})
    if isinstance(value, dict):
        params.update({k: v for k, v in value.items() if k != "kind"})
        kind = value.get("kind", "newtonian")
    else:
        kind = value
    try:
        kind = LawKind(kind)
    except ValueError:
        _fail(f"unknown law of motion {kind!r}")
    if kind is LawKind.NEWTONIAN:
        params = {}
    elif kind is LawKind.IMPETUS:
        params = {k: v for k, v in params.items() if k == "impetus_decay"}
    else:
        params = {k: v for k, v in params.items() if k == "mobility"}
    try:
        return LawOfMotion(kind, **params)
    except (HyperworldError, TypeError) as exc:
        _fail(str(exc))


def _material(value) -> Material:
    if value is None:
        return Material.preset(MaterialKind.WOOD)
    if isinstance(value, str):
        try:
            return Material.preset(value)
        except ValueError:
            _fail(f"unknown material {value!r}")
    if isinstance(value, dict):
        base = Material.preset(value.get("kind", "wood"))
        return Material(base.kind, value.get("restitution", base.restitution), value.get("friction", base.friction))
    _fail(f"material must be a name or an object, got {value!r}")


def _shape(entry: dict) -> PrimShape:
    try:
        kind = ShapeKind(entry.get("shape", "box"))
    except ValueError:
        _fail(f"unknown shape {entry.get('shape')!r}")
    size = entry.get("size", 0.5)
    if isinstance(size, (int, float)):
        size = (size, size, size)
    return PrimShape(kind, _vec(size, "size"))


def _object(entry: dict, base: Path, law_defaults: dict, index: int) -> ObjectSpec:
    law = entry.get("law")
    launch = entry.get("launch")
    if launch is not None:
        launch = (float(launch["speed"]), _vec(launch["direction"], "launch direction"))
    script = entry.get("script")
    if script is not None:
        script = (base / script).resolve()
        if not script.is_file():
            _fail(f"script file not found: {script}", f"objects[{index}]")
    return ObjectSpec(
        shape=_shape(entry),
        material=_material(entry.get("material")),
        position=_vec(entry.get("position", (128.0, 128.0, 25.0)), "position"),
        name=entry.get("name"),
        physical=bool(entry.get("physical", True)),
        buoyancy=float(entry.get("buoyancy", 0.0)),
        gravity_multiplier=float(entry.get("gravity_multiplier", 1.0)),
        law=None if law is None else parse_law(law, law_defaults),
        script=script,
        impulse=None if entry.get("impulse") is None else _vec(entry["impulse"], "impulse"),
        velocity=None if entry.get("velocity") is None else _vec(entry["velocity"], "velocity"),
        launch=launch,
    )


def _expand(entry: dict, rng: np.random.Generator) -> list[dict]:
    """Expand a ``count`` entry into individual object entries."""
    count = int(entry["count"])
    if count < 1:
        _fail("count must be >= 1")
    lat = entry.get("lattice")
    if lat is None:
        _fail("a 'count' entry needs a 'lattice' with lo and hi corners")
    lo = np.array(_vec(lat["lo"], "lattice lo").to_array())
    hi = np.array(_vec(lat["hi"], "lattice hi").to_array())
    per_side = math.ceil(count ** (1 / 3))
    spacing = (hi - lo) / per_side
    size = entry.get("size", 0.5)
    diameter = max(size) if isinstance(size, list) else float(size)
    if np.any(spacing <= diameter):
        _fail("lattice too small for that many objects")
    slack = (spacing - diameter) / 2
    speed = float(entry.get("random_speed", 0.0))
    out = []
    for k in range(count):
        ijk = np.array([k % per_side, (k // per_side) % per_side, k // per_side**2])
        pos = lo + (ijk + 0.5) * spacing + rng.uniform(-1, 1, 3) * slack * 0.9
        e = {key: v for key, v in entry.items() if key not in ("count", "lattice", "random_speed")}
        e["position"] = pos.tolist()
        if speed:
            d = rng.normal(size=3)
            e["velocity"] = (d / np.linalg.norm(d) * speed).tolist()
        if "name" in entry:
            e["name"] = f"{entry['name']}{k}"
        out.append(e)
    return out


def from_dict(data: dict, base: "Path | str" = ".", source: Path | None = None) -> Scenario:
    if not isinstance(data, dict):
        _fail("scenario must be a JSON object")
    _unknown(data, _TOP_KEYS, "scenario")
    base = Path(base)
    seed = int(data.get("seed", 0))
    if seed < 0:
        _fail("seed must be non-negative")
    reg = data.get("region", {})
    _unknown(reg, _REGION_KEYS, "region")
    law_defaults = reg.get("law_params", {})
    try:
        region = Region(
            water_level=float(reg.get("water_level", 20.0)),
            gravity_g=float(reg.get("gravity", 9.8)),
            density=float(reg.get("density", 10.0)),
            terminal_velocity=None if reg.get("terminal_velocity", 50.0) is None else float(reg.get("terminal_velocity", 50.0)),
            wind_enabled=bool(reg.get("wind", True)),
        )
    except HyperworldError as exc:
        _fail(str(exc), "region")
    law = parse_law(reg.get("law", "newtonian"), law_defaults)

    if "objects" not in data or not isinstance(data["objects"], list):
        _fail("scenario needs an 'objects' list")
    rng = np.random.default_rng(seed)
    entries = []
    for entry in data["objects"]:
        if not isinstance(entry, dict):
            _fail("each object must be a JSON object")
        _unknown(entry, _OBJECT_KEYS, "object")
        entries += _expand(entry, rng) if "count" in entry else [entry]
    objects = []
    for i, e in enumerate(entries):
        try:
            spec = _object(e, base, law_defaults, i)
        except (HyperworldError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ScenarioError):
                raise
            _fail(str(exc), f"objects[{i}]")
        objects.append(spec)

    run = data.get("run")
    if not isinstance(run, dict) or not ({"steps", "seconds"} & set(run)):
        _fail("scenario needs 'run' with 'steps' or 'seconds'")
    steps = run.get("steps")
    seconds = run.get("seconds")
    if steps is not None and int(steps) <= 0 or seconds is not None and not float(seconds) > 0:
        _fail("run length must be > 0")

    container = None
    if "container" in data:
        c = data["container"]
        container = (_vec(c["lo"], "container lo"), _vec(c["hi"], "container hi"))

    names = {o.name for o in objects if o.name}
    events = []
    for ev in data.get("events", []):
        if "touch" not in ev or "t" not in ev:
            _fail("events need 't' and 'touch'")
        target = ev["touch"]
        if isinstance(target, str) and target not in names:
            _fail(f"touch target {target!r} is not an object name")
        if isinstance(target, int) and not 0 <= target < len(objects):
            _fail(f"touch target index {target} out of range")
        events.append(TouchEvent(float(ev["t"]), target))
    events.sort(key=lambda e: e.t)

    return Scenario(
        name=str(data.get("name", source.stem if source else "scenario")),
        seed=seed,
        region=region,
        law=law,
        dilation_budget=float(reg.get("dilation_budget", 1000.0)),
        objects=objects,
        steps=None if steps is None else int(steps),
        seconds=None if seconds is None else float(seconds),
        container=container,
        events=events,
        law_params=dict(law_defaults),
        source=source,
    )


def load(path: "str | Path") -> Scenario:
    path = Path(path)
    try:
        data: Any = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    try:
        return from_dict(data, path.parent, source=path)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


DEMOS = ("freefall", "buoyancy", "airtrack", "bumpers", "cannon", "brownian")


def demo_path(name: str) -> Path:
    if name not in DEMOS:
        raise UnknownDemo(name)
    return Path(str(resources.files("hyperworld") / "demos" / f"{name}.json"))


def load_demo(name: str) -> Scenario:
    return load(demo_path(name))
