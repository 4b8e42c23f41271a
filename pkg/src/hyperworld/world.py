"""The region, its clock and sun, object lifecycle and the mass model.

Per-object dynamic state is stored row-wise in numpy arrays owned by
:class:`World`; :class:`PrimObject` (static description) and
:class:`ObjectDynamics` (motion snapshot) are immutable values handed out to
callers.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import dynamics
from .errors import InvalidParameter, PositionOutOfRegion, UnknownObject
from .laws import NEWTONIAN, LawKind, LawOfMotion
from .vec import IDENTITY, ZERO, Rotation, Vec3
from .wind import WindField

REGION_SIDE = 256.0
DEFAULT_DENSITY = 10.0  # kg/m^3, identical for every material
MIN_PRIM_SIZE = 0.01
MAX_PRIM_SIZE = 64.0
ENERGY_CAP = 100.0


class MaterialKind(str, enum.Enum):
    WOOD = "wood"
    STONE = "stone"
    METAL = "metal"
    GLASS = "glass"
    RUBBER = "rubber"
    FLESH = "flesh"


# (restitution, friction); friction is carried for completeness, never used.
_MATERIAL_DEFAULTS = {
    MaterialKind.WOOD: (0.5, 0.6),
    MaterialKind.STONE: (0.4, 0.8),
    MaterialKind.METAL: (0.6, 0.4),
    MaterialKind.GLASS: (0.7, 0.2),
    MaterialKind.RUBBER: (0.9, 0.9),
    MaterialKind.FLESH: (0.2, 0.6),
}


@dataclass(frozen=True)
class Material:
    kind: MaterialKind = MaterialKind.WOOD
    restitution: float = 0.5
    friction: float = 0.6

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", MaterialKind(self.kind))
        except ValueError:
            raise InvalidParameter(f"unknown material {self.kind!r}") from None
        if not 0.0 <= self.restitution <= 1.0:
            raise InvalidParameter(f"restitution must be in [0, 1], got {self.restitution}")
        if not (self.friction >= 0.0 and math.isfinite(self.friction)):
            raise InvalidParameter(f"friction must be >= 0, got {self.friction}")

    @classmethod
    def preset(cls, kind: "MaterialKind | str") -> "Material":
        kind = MaterialKind(kind)
        restitution, friction = _MATERIAL_DEFAULTS[kind]
        return cls(kind, restitution, friction)


class ShapeKind(str, enum.Enum):
    BOX = "box"
    SPHERE = "sphere"
    CYLINDER = "cylinder"


_VOLUME_FACTOR = {
    ShapeKind.BOX: 1.0,
    ShapeKind.SPHERE: math.pi / 6.0,
    ShapeKind.CYLINDER: math.pi / 4.0,
}


@dataclass(frozen=True)
class PrimShape:
    """Shape kind plus bounding-box size in meters.

    A sphere of size ``(d, d, d)`` has diameter ``d``; unequal sizes give an
    ellipsoid.  Cylinders are upright with their axis along local z.
    """

    kind: ShapeKind
    size: Vec3 = Vec3(0.5, 0.5, 0.5)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ShapeKind(self.kind))
        except ValueError:
            raise InvalidParameter(f"unknown shape {self.kind!r}") from None
        object.__setattr__(self, "size", Vec3.of(self.size))
        for c in self.size:
            if not MIN_PRIM_SIZE <= c <= MAX_PRIM_SIZE:
                raise InvalidParameter(
                    f"prim size components must be in [{MIN_PRIM_SIZE}, {MAX_PRIM_SIZE}] m, got {tuple(self.size)}"
                )

    @classmethod
    def box(cls, sx, sy=None, sz=None) -> "PrimShape":
        return cls(ShapeKind.BOX, _size(sx, sy, sz))

    @classmethod
    def sphere(cls, diameter) -> "PrimShape":
        return cls(ShapeKind.SPHERE, Vec3(diameter, diameter, diameter))

    @classmethod
    def cylinder(cls, diameter, height) -> "PrimShape":
        return cls(ShapeKind.CYLINDER, Vec3(diameter, diameter, height))

    @property
    def volume(self) -> float:
        s = self.size
        return _VOLUME_FACTOR[self.kind] * s.x * s.y * s.z

    @property
    def radius(self) -> float:
        """Bounding radius used for sphere contacts."""
        return max(self.size) / 2.0

    def inertia_diagonal(self, mass: float) -> np.ndarray:
        sx, sy, sz = self.size
        if self.kind is ShapeKind.BOX:
            return mass / 12.0 * np.array([sy * sy + sz * sz, sx * sx + sz * sz, sx * sx + sy * sy])
        if self.kind is ShapeKind.SPHERE:
            return mass / 20.0 * np.array([sy * sy + sz * sz, sx * sx + sz * sz, sx * sx + sy * sy])
        r2 = (sx * sx + sy * sy) / 8.0  # mean of the two radii squared
        return np.array([mass * (3 * r2 + sz * sz) / 12.0, mass * (3 * r2 + sz * sz) / 12.0, mass * r2 / 2.0])


def _size(sx, sy, sz) -> Vec3:
    if sy is None and sz is None:
        return Vec3.of(sx) if isinstance(sx, (Vec3, tuple, list)) else Vec3(sx, sx, sx)
    return Vec3(sx, sy, sz)


def compute_mass(shape: PrimShape, density: float = DEFAULT_DENSITY) -> float:
    """Mass in kg from size and shape only; the material never enters."""
    return density * shape.volume


@dataclass(frozen=True)
class Region:
    side_length: float = REGION_SIDE
    water_level: float = 20.0
    gravity_g: float = 9.8
    day_period: float = 14400.0
    density: float = DEFAULT_DENSITY
    terminal_velocity: float | None = 50.0  # None disables drag
    ground_z: float = 0.0
    ground_restitution: float = 1.0
    wind_enabled: bool = True

    def __post_init__(self):
        if self.side_length != REGION_SIDE:
            raise InvalidParameter(f"regions are {REGION_SIDE:g} m square")
        if not self.day_period > 0:
            raise InvalidParameter("day_period must be > 0")
        if not self.water_level >= 0:
            raise InvalidParameter("water_level must be >= 0")
        if not self.density > 0:
            raise InvalidParameter("density must be > 0")
        if self.terminal_velocity is not None and not self.terminal_velocity > 0:
            raise InvalidParameter("terminal_velocity must be > 0 (or None to disable drag)")
        if not 0.0 <= self.ground_restitution <= 1.0:
            raise InvalidParameter("ground_restitution must be in [0, 1]")

    def contains(self, p: Vec3) -> bool:
        return 0.0 <= p.x < self.side_length and 0.0 <= p.y < self.side_length


@dataclass
class SimClock:
    sim_time: float = 0.0
    dilation: float = 1.0
    step_size: float = 1.0 / 45.0
    steps: int = 0

    def __post_init__(self):
        if not 0.0 < self.dilation <= 1.0:
            raise InvalidParameter("dilation must be in (0, 1]")
        if not self.step_size > 0:
            raise InvalidParameter("step_size must be > 0")


def sun_direction(clock: SimClock, day_period: float = 14400.0) -> Vec3:
    """Unit sun vector: rises on +x at t=0, zenith a quarter period later."""
    theta = 2.0 * math.pi * math.fmod(clock.sim_time, day_period) / day_period
    return Vec3(math.cos(theta), 0.0, math.sin(theta))


def moon_direction(clock: SimClock, day_period: float = 14400.0) -> Vec3:
    return -sun_direction(clock, day_period)


@dataclass(frozen=True)
class PrimObject:
    id: int
    shape: PrimShape
    material: Material
    physical: bool = False
    buoyancy: float = 0.0
    gravity_multiplier: float = 1.0
    visual_omega: Vec3 = ZERO
    law: LawOfMotion | None = None  # None: use the world default
    name: str | None = None


@dataclass(frozen=True)
class ObjectDynamics:
    position: Vec3
    velocity: Vec3
    omega: Vec3
    rotation: Rotation
    pending_force: Vec3
    pending_torque: Vec3
    energy: float


@dataclass(frozen=True)
class WorldSnapshot:
    sim_time: float
    dilation: float
    objects: tuple[tuple[PrimObject, ObjectDynamics], ...]


@dataclass
class _Props:
    """Per-row static properties, rebuilt only when objects change."""

    physical: np.ndarray
    buoyancy: np.ndarray
    gravity_multiplier: np.ndarray
    radius: np.ndarray
    half_extents: np.ndarray
    restitution: np.ndarray
    is_sphere: np.ndarray
    inertia: np.ndarray
    physical_rows: np.ndarray
    law_groups: list = field(default_factory=list)  # [(law, bool mask over physical_rows)]


def _vec_check(p, what="position") -> Vec3:
    v = Vec3.of(p)
    if not v.is_finite():
        raise InvalidParameter(f"{what} must be finite, got {tuple(v)}")
    return v


class World:
    """A single region and everything simulated in it.

    Single-writer: mutate from one thread; hand :meth:`snapshot` values to
    other threads.
    """

    def __init__(
        self,
        region: Region | None = None,
        *,
        law: LawOfMotion = NEWTONIAN,
        energy: "dynamics.EnergyModel | None" = None,
        dilation: "dynamics.DilationModel | None" = None,
        clock: SimClock | None = None,
        wind: WindField | None = None,
        seed: int = 0,
    ):
        self.region = region or Region()
        self.clock = clock or SimClock()
        self.law = law
        self.energy_model = energy or dynamics.EnergyModel()
        self.dilation_model = dilation or dynamics.DilationModel()
        self.seed = seed
        if wind is not None:
            self.wind = wind
        else:
            self.wind = WindField(seed=seed) if self.region.wind_enabled else None
        self.periodic_cell: tuple[np.ndarray, np.ndarray] | None = None
        self.script_ops_last_step = 0

        self._objects: dict[int, PrimObject] = {}
        self._row_of: dict[int, int] = {}
        self._ids = itertools.count(1)
        self.ids: list[int] = []
        self.pos = np.zeros((0, 3))
        self.vel = np.zeros((0, 3))
        self.omega = np.zeros((0, 3))
        self.rot = np.zeros((0, 4))
        self.force = np.zeros((0, 3))
        self.torque = np.zeros((0, 3))
        self.impetus = np.zeros((0, 3))
        self.energy = np.zeros(0)
        self.mass = np.zeros(0)
        self._props_cache: _Props | None = None

    # ---- lookup -----------------------------------------------------------

    def get(self, obj: "PrimObject | int") -> PrimObject:
        oid = obj.id if isinstance(obj, PrimObject) else int(obj)
        try:
            return self._objects[oid]
        except KeyError:
            raise UnknownObject(oid) from None

    def row(self, obj: "PrimObject | int") -> int:
        return self._row_of[self.get(obj).id]

    @property
    def objects(self) -> tuple[PrimObject, ...]:
        return tuple(self._objects[i] for i in self.ids)

    def __len__(self):
        return len(self.ids)

    def __contains__(self, obj):
        oid = obj.id if isinstance(obj, PrimObject) else obj
        return oid in self._objects

    def mass_of(self, obj) -> float:
        return float(self.mass[self.row(obj)])

    def law_of(self, obj) -> LawOfMotion:
        prim = self.get(obj)
        return prim.law if prim.law is not None else self.law

    def dynamics_of(self, obj) -> ObjectDynamics:
        r = self.row(obj)
        return ObjectDynamics(
            position=Vec3(*self.pos[r].tolist()),
            velocity=Vec3(*self.vel[r].tolist()),
            omega=Vec3(*self.omega[r].tolist()),
            rotation=Rotation(*self.rot[r].tolist()),
            pending_force=Vec3(*self.force[r].tolist()),
            pending_torque=Vec3(*self.torque[r].tolist()),
            energy=float(self.energy[r]),
        )

    def snapshot(self) -> WorldSnapshot:
        return WorldSnapshot(
            self.clock.sim_time,
            self.clock.dilation,
            tuple((self._objects[i], self.dynamics_of(i)) for i in self.ids),
        )

    # ---- lifecycle --------------------------------------------------------

    def create_object(
        self,
        shape: PrimShape,
        material: Material | None = None,
        position=ZERO,
        *,
        rotation: Rotation = IDENTITY,
        name: str | None = None,
    ) -> PrimObject:
        """Rez a stationary, non-physical object at ``position``."""
        p = _vec_check(position)
        if not self.region.contains(p):
            raise PositionOutOfRegion(f"position {tuple(p)} is outside the region")
        material = material or Material.preset(MaterialKind.WOOD)
        prim = PrimObject(next(self._ids), shape, material, name=name)
        self._objects[prim.id] = prim
        self._row_of[prim.id] = len(self.ids)
        self.ids.append(prim.id)
        q = Rotation.of(rotation).normalized()
        self.pos = np.vstack([self.pos, p.to_array()])
        self.vel = np.vstack([self.vel, np.zeros(3)])
        self.omega = np.vstack([self.omega, np.zeros(3)])
        self.rot = np.vstack([self.rot, q.to_array()])
        self.force = np.vstack([self.force, np.zeros(3)])
        self.torque = np.vstack([self.torque, np.zeros(3)])
        self.impetus = np.vstack([self.impetus, np.zeros(3)])
        self.energy = np.append(self.energy, ENERGY_CAP)
        self.mass = np.append(self.mass, compute_mass(shape, self.region.density))
        self._props_cache = None
        return prim

    def delete_object(self, obj) -> None:
        prim = self.get(obj)
        r = self._row_of.pop(prim.id)
        del self._objects[prim.id]
        self.ids.pop(r)
        for name in ("pos", "vel", "omega", "rot", "force", "torque", "impetus", "energy", "mass"):
            setattr(self, name, np.delete(getattr(self, name), r, axis=0))
        self._row_of = {oid: i for i, oid in enumerate(self.ids)}
        self._props_cache = None

    def _replace(self, prim: PrimObject, **changes) -> PrimObject:
        new = replace(prim, **changes)
        self._objects[prim.id] = new
        self._props_cache = None
        return new

    # ---- object properties ------------------------------------------------

    def set_physical(self, obj, flag: bool) -> PrimObject:
        """Enrol the object in (or remove it from) the dynamics step.

        Turning physics off freezes the object where it is.
        """
        prim = self.get(obj)
        flag = bool(flag)
        if prim.physical == flag:
            return prim
        if not flag:
            r = self.row(prim)
            for arr in (self.vel, self.omega, self.force, self.torque, self.impetus):
                arr[r] = 0.0
        return self._replace(prim, physical=flag)

    def set_buoyancy(self, obj, buoyancy: float) -> PrimObject:
        if not math.isfinite(buoyancy):
            raise InvalidParameter("buoyancy must be finite")
        return self._replace(self.get(obj), buoyancy=float(buoyancy))

    def set_gravity_multiplier(self, obj, multiplier: float) -> PrimObject:
        if not math.isfinite(multiplier):
            raise InvalidParameter("gravity multiplier must be finite")
        return self._replace(self.get(obj), gravity_multiplier=float(multiplier))

    def set_visual_omega(self, obj, omega) -> PrimObject:
        return self._replace(self.get(obj), visual_omega=_vec_check(omega, "omega"))

    def set_default_law(self, law: LawOfMotion) -> None:
        self._on_law_change([p for p in self.objects if p.law is None], law)
        self.law = law
        self._props_cache = None

    def set_object_law(self, obj, law: LawOfMotion | None) -> PrimObject:
        prim = self.get(obj)
        self._on_law_change([prim], law or self.law)
        return self._replace(prim, law=law)

    def _on_law_change(self, prims, law):
        if law.kind is LawKind.IMPETUS:
            return
        for p in prims:
            self.impetus[self.row(p)] = 0.0

    def set_periodic_cell(self, lo, hi) -> None:
        """Wrap physical objects inside an axis-aligned periodic box."""
        lo = _vec_check(lo).to_array()
        hi = _vec_check(hi).to_array()
        if np.any(hi <= lo):
            raise InvalidParameter("periodic cell must have positive extent")
        if not (self.region.contains(Vec3(*lo)) and hi[0] <= REGION_SIDE and hi[1] <= REGION_SIDE):
            raise PositionOutOfRegion("periodic cell must lie inside the region")
        self.periodic_cell = (lo, hi)

    # ---- environment queries ---------------------------------------------

    def sun_direction(self) -> Vec3:
        return sun_direction(self.clock, self.region.day_period)

    def moon_direction(self) -> Vec3:
        return moon_direction(self.clock, self.region.day_period)

    def wind_at(self, position) -> Vec3:
        p = _vec_check(position)
        if not self.region.contains(p):
            raise PositionOutOfRegion(f"position {tuple(p)} is outside the region")
        if self.wind is None:
            return ZERO
        return self.wind.sample(p)

    def water_level_at(self, position) -> float:
        p = _vec_check(position)
        if not self.region.contains(p):
            raise PositionOutOfRegion(f"position {tuple(p)} is outside the region")
        return self.region.water_level

    # ---- stepping ---------------------------------------------------------

    def step(self, wall_dt: float | None = None) -> "dynamics.StepReport":
        return dynamics.step(self, wall_dt)

    def _props(self) -> _Props:
        if self._props_cache is not None:
            return self._props_cache
        prims = self.objects
        n = len(prims)
        physical = np.array([p.physical for p in prims], dtype=bool)
        half = np.array([[c / 2.0 for c in p.shape.size] for p in prims]).reshape(n, 3)
        inertia = np.array(
            [p.shape.inertia_diagonal(self.mass[i]) for i, p in enumerate(prims)]
        ).reshape(n, 3)
        phys_rows = np.nonzero(physical)[0]
        groups: dict[LawOfMotion, list[bool]] = {}
        laws = [self.law if prims[r].law is None else prims[r].law for r in phys_rows]
        for law in dict.fromkeys(laws):
            groups[law] = np.array([lw == law for lw in laws], dtype=bool)
        self._props_cache = _Props(
            physical=physical,
            buoyancy=np.array([p.buoyancy for p in prims], dtype=float),
            gravity_multiplier=np.array([p.gravity_multiplier for p in prims], dtype=float),
            radius=np.array([p.shape.radius for p in prims], dtype=float),
            half_extents=half,
            restitution=np.array([p.material.restitution for p in prims], dtype=float),
            is_sphere=np.array([p.shape.kind is ShapeKind.SPHERE for p in prims], dtype=bool),
            inertia=inertia,
            physical_rows=phys_rows,
            law_groups=list(groups.items()),
        )
        return self._props_cache

