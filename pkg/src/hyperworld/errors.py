"""Exception hierarchy shared by all subsystems."""


class HyperworldError(Exception):
    """Base class for every error raised by this package."""


class PositionOutOfRegion(HyperworldError, ValueError):
    pass


class InvalidParameter(HyperworldError, ValueError):
    pass


class UnknownObject(HyperworldError, KeyError):
    pass


class KineticOnNonPhysical(HyperworldError):
    """A force/impulse/torque was requested on an object that is not physical."""


class KinematicOnPhysical(HyperworldError):
    """A teleport/rotate was requested on a physical object."""


class IncompleteProfile(HyperworldError, ValueError):
    def __init__(self, missing, extra=()):
        self.missing = tuple(missing)
        self.extra = tuple(extra)
        parts = []
        if self.missing:
            parts.append("missing fields: " + ", ".join(self.missing))
        if self.extra:
            parts.append("unknown fields: " + ", ".join(self.extra))
        super().__init__("; ".join(parts) or "incomplete profile")


class UnknownDemo(HyperworldError, KeyError):
    def __str__(self):
        return f"unknown demo {self.args[0]!r}"


class ScenarioError(HyperworldError):
    pass
