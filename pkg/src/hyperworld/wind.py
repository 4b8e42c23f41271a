"""2D stable-fluids wind over the region.

The field lives on an ``n x n`` periodic grid of cells (16 m cells by
default).  Each :meth:`WindField.advance` adds seeded low-wavenumber
forcing, diffuses implicitly, advects semi-Lagrangian and projects onto
divergence-free fields.  Diffusion and projection are solved exactly in
Fourier space using the symbols of the finite-difference operators, so the
central-difference divergence of the result is zero to rounding.

The field is never coupled back into rigid bodies.
"""

from __future__ import annotations

import numpy as np

from .errors import PositionOutOfRegion
from .vec import Vec3


class WindField:
    def __init__(
        self,
        n: int = 16,
        side: float = 256.0,
        *,
        seed: int = 0,
        viscosity: float = 2.0,
        dissipation: float = 0.05,
        forcing: float = 0.3,
        forcing_timescale: float = 60.0,
        forcing_modes: int = 2,
    ):
        if n < 2:
            raise ValueError("wind grid needs at least 2x2 cells")
        self.n = n
        self.side = float(side)
        self.h = self.side / n
        self.seed = seed
        self.viscosity = viscosity
        self.dissipation = dissipation
        self.forcing = forcing
        self.forcing_timescale = forcing_timescale
        self.u = np.zeros((n, n))  # x component, indexed [ix, iy]
        self.v = np.zeros((n, n))
        self.time = 0.0
        self._rng = np.random.Generator(np.random.PCG64(seed))

        k = np.fft.fftfreq(n) * n
        kx, ky = np.meshgrid(k, k, indexing="ij")
        theta_x = 2 * np.pi * kx / n
        theta_y = 2 * np.pi * ky / n
        sx = np.where(np.abs(kx) * 2 == n, 0.0, np.sin(theta_x))  # exact zero at Nyquist
        sy = np.where(np.abs(ky) * 2 == n, 0.0, np.sin(theta_y))
        self._dx = 1j * sx / self.h  # central difference symbols
        self._dy = 1j * sy / self.h
        self._lap = (2 * np.cos(theta_x) - 2 + 2 * np.cos(theta_y) - 2) / self.h**2
        self._band = (np.abs(kx) <= forcing_modes) & (np.abs(ky) <= forcing_modes) & ((kx != 0) | (ky != 0))
        self._modes = np.zeros((2, n, n), dtype=complex)

    def copy(self) -> "WindField":
        other = WindField.__new__(WindField)
        other.__dict__.update(self.__dict__)
        for name in ("u", "v", "_modes"):
            setattr(other, name, getattr(self, name).copy())
        other._rng = np.random.Generator(np.random.PCG64())
        other._rng.bit_generator.state = self._rng.bit_generator.state
        return other

    # ---- update -------------------------------------------------------

    def advance(self, dt: float) -> "WindField":
        if not dt > 0:
            raise ValueError("dt must be > 0")
        self._add_forcing(dt)
        self._diffuse(dt)
        self._advect(dt)
        self._project()
        self.time += dt
        return self

    def _add_forcing(self, dt: float) -> None:
        if self.forcing == 0.0:
            return
        # Ornstein-Uhlenbeck drift of a few low modes: slow, bounded, seeded.
        a = np.exp(-dt / self.forcing_timescale)
        count = int(self._band.sum())
        noise = self._rng.standard_normal((2, 2, count))
        kick = (noise[0] + 1j * noise[1]) * np.sqrt((1 - a * a) / 2)
        self._modes[:, self._band] = a * self._modes[:, self._band] + kick
        scale = self.forcing * self.n * self.n / np.sqrt(count)
        fu = np.fft.ifft2(self._modes[0]).real * scale
        fv = np.fft.ifft2(self._modes[1]).real * scale
        self.u += fu * dt
        self.v += fv * dt

    def _diffuse(self, dt: float) -> None:
        denom = 1.0 - self.viscosity * dt * self._lap
        damp = 1.0 / (1.0 + self.dissipation * dt)
        self.u = np.fft.ifft2(np.fft.fft2(self.u) / denom).real * damp
        self.v = np.fft.ifft2(np.fft.fft2(self.v) / denom).real * damp

    def _advect(self, dt: float) -> None:
        n = self.n
        idx = np.arange(n, dtype=float)
        gx, gy = np.meshgrid(idx, idx, indexing="ij")
        bx = gx - self.u * dt / self.h
        by = gy - self.v * dt / self.h
        u = _bilinear_periodic(self.u, bx, by)
        v = _bilinear_periodic(self.v, bx, by)
        self.u, self.v = u, v

    def _project(self) -> None:
        uh = np.fft.fft2(self.u)
        vh = np.fft.fft2(self.v)
        div = self._dx * uh + self._dy * vh
        norm2 = np.abs(self._dx) ** 2 + np.abs(self._dy) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            phi = np.where(norm2 > 0, div / norm2, 0.0)
        # subtract the gradient part: D^* applied to phi
        uh = uh - np.conj(self._dx) * phi
        vh = vh - np.conj(self._dy) * phi
        self.u = np.fft.ifft2(uh).real
        self.v = np.fft.ifft2(vh).real

    # ---- queries ------------------------------------------------------

    def divergence(self) -> np.ndarray:
        """Central-difference divergence per cell (1/s)."""
        du = (np.roll(self.u, -1, axis=0) - np.roll(self.u, 1, axis=0)) / (2 * self.h)
        dv = (np.roll(self.v, -1, axis=1) - np.roll(self.v, 1, axis=1)) / (2 * self.h)
        return du + dv

    def cell_center(self, i: int, j: int) -> Vec3:
        return Vec3((i + 0.5) * self.h, (j + 0.5) * self.h, 0.0)

    def sample(self, position) -> Vec3:
        """Bilinear wind at ``position``; the z component is always 0."""
        p = Vec3.of(position)
        if not (0.0 <= p.x < self.side and 0.0 <= p.y < self.side):
            raise PositionOutOfRegion(f"position {tuple(p)} is outside the region")
        fx = np.array([p.x / self.h - 0.5])
        fy = np.array([p.y / self.h - 0.5])
        return Vec3(
            float(_bilinear_periodic(self.u, fx, fy)[0]),
            float(_bilinear_periodic(self.v, fx, fy)[0]),
            0.0,
        )


def _bilinear_periodic(field: np.ndarray, fx: np.ndarray, fy: np.ndarray) -> np.ndarray:
    """Sample ``field`` at fractional cell-centre indices, wrapping at edges."""
    n0, n1 = field.shape
    x0 = np.floor(fx)
    y0 = np.floor(fy)
    tx = fx - x0
    ty = fy - y0
    i0 = x0.astype(int) % n0
    j0 = y0.astype(int) % n1
    i1 = (i0 + 1) % n0
    j1 = (j0 + 1) % n1
    return (
        (1 - tx) * (1 - ty) * field[i0, j0]
        + tx * (1 - ty) * field[i1, j0]
        + (1 - tx) * ty * field[i0, j1]
        + tx * ty * field[i1, j1]
    )


def advance(field: WindField, dt: float) -> WindField:
    return field.advance(dt)


def sample(field: WindField, position) -> Vec3:
    return field.sample(position)
