"""A scriptable rigid-body microworld with region-style physics semantics."""

from .dynamics import DilationModel, EnergyModel, StepReport
from .errors import (
    HyperworldError,
    IncompleteProfile,
    InvalidParameter,
    KinematicOnPhysical,
    KineticOnNonPhysical,
    PositionOutOfRegion,
)
from .laws import LawKind, LawOfMotion, launch, set_law
from .vec import Rotation, Vec3
from .wind import WindField
from .world import (
    Material,
    MaterialKind,
    ObjectDynamics,
    PrimObject,
    PrimShape,
    Region,
    ShapeKind,
    SimClock,
    World,
    compute_mass,
    moon_direction,
    sun_direction,
)

__version__ = "0.1.0"
