"""Small immutable vector and quaternion types used at API boundaries.

Bulk state lives in numpy arrays inside :class:`~hyperworld.world.World`;
these types are what callers pass in and get back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def of(cls, value: "Vec3 | Iterable[float]") -> "Vec3":
        if isinstance(value, Vec3):
            return value
        x, y, z = (float(c) for c in value)
        return cls(x, y, z)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> "Vec3":
        return Vec3(self.x / k, self.y / k, self.z / k)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


ZERO = Vec3()


@dataclass(frozen=True, slots=True)
class Rotation:
    """Quaternion in LSL component order ``<x, y, z, s>``."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    s: float = 1.0

    @classmethod
    def of(cls, value: "Rotation | Iterable[float]") -> "Rotation":
        if isinstance(value, Rotation):
            return value
        x, y, z, s = (float(c) for c in value)
        return cls(x, y, z, s)

    @classmethod
    def from_axis_angle(cls, axis: Vec3, angle: float) -> "Rotation":
        n = axis.norm()
        if n == 0.0:
            return cls()
        k = math.sin(angle / 2) / n
        return cls(axis.x * k, axis.y * k, axis.z * k, math.cos(angle / 2))

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z
        yield self.s

    def __mul__(self, other: "Rotation") -> "Rotation":
        # LSL convention: a * b applies a first, then b.
        a, b = other, self
        return Rotation(
            a.s * b.x + a.x * b.s + a.y * b.z - a.z * b.y,
            a.s * b.y - a.x * b.z + a.y * b.s + a.z * b.x,
            a.s * b.z + a.x * b.y - a.y * b.x + a.z * b.s,
            a.s * b.s - a.x * b.x - a.y * b.y - a.z * b.z,
        )

    def conjugate(self) -> "Rotation":
        return Rotation(-self.x, -self.y, -self.z, self.s)

    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2 + self.s**2)

    def normalized(self) -> "Rotation":
        n = self.norm()
        if n == 0.0:
            return Rotation()
        return Rotation(self.x / n, self.y / n, self.z / n, self.s / n)

    def rotate(self, v: Vec3) -> Vec3:
        q = Vec3(self.x, self.y, self.z)
        t = 2.0 * q.cross(v)
        return v + self.s * t + q.cross(t)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.s], dtype=float)

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in self)


IDENTITY = Rotation()


def rotation_matrix(q: np.ndarray) -> np.ndarray:
    """3x3 matrix for quaternion ``q = [x, y, z, s]``."""
    x, y, z, s = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - s * z), 2 * (x * z + s * y)],
            [2 * (x * y + s * z), 1 - 2 * (x * x + z * z), 2 * (y * z - s * x)],
            [2 * (x * z - s * y), 2 * (y * z + s * x), 1 - 2 * (x * x + y * y)],
        ]
    )
