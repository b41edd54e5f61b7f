"""Moving point sources: time functions, trajectories, discrete deltas, windows."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, WindowTooWideError
from .grid import PeriodicGrid, from_fourier
from .shape import SpectralShape, eval_F

IMAG_TOL = 1e-12


@dataclass(frozen=True)
class Gaussian:
    """``g(t) = exp(-(t - t0)^2 / (2 sigma^2)) / (sigma sqrt(2 pi))``."""

    sigma: float
    t0: float

    def __call__(self, t):
        return np.exp(-((t - self.t0) ** 2) / (2 * self.sigma**2)) / (
            self.sigma * np.sqrt(2 * np.pi)
        )

    @property
    def peak(self) -> float:
        return 1.0 / (self.sigma * np.sqrt(2 * np.pi))

    @property
    def support(self) -> tuple[float, float]:
        """Interval outside which ``|g| < 1e-9 * peak``."""
        return (self.t0 - 8 * self.sigma, self.t0 + 8 * self.sigma)

    def derivative(self, t, order: int = 1):
        """Derivatives via probabilists' Hermite polynomials."""
        z = (np.asarray(t, dtype=float) - self.t0) / self.sigma
        he = np.polynomial.hermite_e.hermeval(z, [0] * order + [1])
        return (-1) ** order * he * self(t) / self.sigma**order


@dataclass(frozen=True)
class Trajectory:
    """Source path ``position(t)`` (scalar in 1D, pair in 2D) and its speed bound."""

    position: Callable
    v_max: float
    name: str = "custom"

    def __call__(self, t):
        return self.position(t)

    def check_speed(self, t_start: float, t_end: float, samples: int = 2001) -> float:
        """Largest sampled speed; raises if it exceeds ``v_max`` by more than 1e-6."""
        t = np.linspace(t_start, t_end, samples)
        dt = min(1e-6, (t_end - t_start) * 1e-6)
        vel = (np.asarray(self.position(t + dt), float) - np.asarray(self.position(t - dt), float)) / (2 * dt)
        speed = np.sqrt(np.sum(np.atleast_2d(vel) ** 2, axis=0)) if np.ndim(vel) > 1 else np.abs(vel)
        top = float(np.max(speed))
        if top > self.v_max * (1 + 1e-6):
            raise DomainError(f"trajectory speed {top:.6g} exceeds declared v_max {self.v_max}")
        return top


def linear_trajectory(x_start: float, v0: float) -> Trajectory:
    return Trajectory(lambda t: x_start + v0 * np.asarray(t), abs(v0), name=f"linear({x_start}, {v0})")


def circular_trajectory(center: tuple[float, float], radius: float, v0: float) -> Trajectory:
    """Constant-speed circle ``center + radius * (sin(v0 t / radius), cos(v0 t / radius))``."""
    cx, cy = center
    w = v0 / radius

    def pos(t):
        t = np.asarray(t)
        return (cx + radius * np.sin(w * t), cy + radius * np.cos(w * t))

    return Trajectory(pos, abs(v0), name=f"circle({cx}, {cy}, r={radius}, v={v0})")


@dataclass(frozen=True)
class DeltaVector:
    values: np.ndarray
    x0: float
    grid: PeriodicGrid
    shape: SpectralShape

    def __post_init__(self):
        self.values.setflags(write=False)

    def mass(self) -> float:
        return float(np.sum(self.values) * self.grid.h)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "delta"])
            for x, d in zip(self.grid.x, self.values):
                w.writerow([repr(float(x)), repr(float(d))])


class DeltaFactory:
    """Builds deltas for one (grid, shape) pair, caching ``F(kh)/L`` in FFT order."""

    def __init__(self, grid: PeriodicGrid, shape: SpectralShape):
        self.grid = grid
        self.shape = shape
        self._k = grid.fft_k
        self._spec = eval_F(shape, grid.fft_k * grid.h) / grid.L

    def values(self, x0: float) -> np.ndarray:
        x0 = float(x0) % self.grid.L
        d = np.fft.ifft(np.exp(-1j * self._k * x0) * self._spec) * self.grid.M
        scale = np.max(np.abs(d.real))
        resid = np.max(np.abs(d.imag))
        if resid > IMAG_TOL * max(scale, 1.0):
            raise AssertionError(f"delta has imaginary residue {resid:.2e}")
        return d.real

    def __call__(self, x0: float) -> DeltaVector:
        return DeltaVector(self.values(x0), float(x0) % self.grid.L, self.grid, self.shape)


def build_delta(grid: PeriodicGrid, shape: SpectralShape, x0: float) -> DeltaVector:
    """Grid delta with Fourier coefficients ``exp(-i k x0) F(kh) / L``."""
    x0 = float(x0) % grid.L
    coeffs = np.exp(-1j * grid.k * x0) * eval_F(shape, grid.k * grid.h) / grid.L
    d = from_fourier(coeffs, grid)
    resid = np.max(np.abs(d.imag))
    if resid > IMAG_TOL * max(np.max(np.abs(d.real)), 1.0):
        raise AssertionError(f"delta has imaginary residue {resid:.2e}")
    return DeltaVector(d.real.copy(), x0, grid, shape)


@dataclass(frozen=True)
class WindowSpec:
    """Rectangular window of half-width ``ell = C_l * h**w``."""

    w: float = 0.5
    C_l: float = 4.0

    def __post_init__(self):
        if not 0 < self.w < 1:
            raise DomainError(f"window exponent must lie in (0, 1), got {self.w}")
        if not self.C_l > 0:
            raise DomainError(f"window prefactor must be positive, got {self.C_l}")

    def half_width(self, h: float) -> float:
        return self.C_l * h**self.w

    @classmethod
    def matching(cls, w: float, ell: float, h: float) -> "WindowSpec":
        """Window whose half-width is ``ell`` at spacing ``h``."""
        return cls(w, ell / h**w)


def distance(grid: PeriodicGrid, x0: float, periodic: bool = True) -> np.ndarray:
    d = np.abs(grid.x - x0)
    if periodic:
        d = np.minimum(d, grid.L - d)
    return d


def window_indices(grid: PeriodicGrid, x0: float, ell: float, periodic: bool = True) -> np.ndarray:
    """Indices ``j`` with distance ``|x_j - x0| < ell``."""
    if 2 * ell > grid.L:
        raise WindowTooWideError(f"window width 2*ell = {2 * ell:.6g} exceeds domain length {grid.L}")
    return np.flatnonzero(distance(grid, float(x0) % grid.L if periodic else x0, periodic) < ell)


def apply_window(
    delta: DeltaVector,
    grid: PeriodicGrid,
    x0: float,
    win: WindowSpec | None,
    periodic: bool = True,
) -> tuple[DeltaVector, int]:
    """Zero every entry at distance ``>= ell`` from ``x0``.

    Returns the windowed delta and the number of surviving entries.  ``win=None``
    passes the delta through unchanged.  ``periodic=False`` measures plain
    ``|x_j - x0|`` on ``[0, L)`` instead of the periodic distance.
    """
    if win is None:
        return delta, grid.M
    idx = window_indices(grid, x0, win.half_width(grid.h), periodic)
    out = np.zeros(grid.M)
    out[idx] = delta.values[idx]
    return DeltaVector(out, delta.x0, grid, delta.shape), int(idx.size)


def build_delta_2d(
    gridx: PeriodicGrid,
    gridy: PeriodicGrid,
    shapex: SpectralShape,
    shapey: SpectralShape,
    xbar0: tuple[float, float],
) -> tuple[DeltaVector, DeltaVector]:
    """Tensor factors of the 2D delta ``delta_x (outer) delta_y``."""
    return build_delta(gridx, shapex, xbar0[0]), build_delta(gridy, shapey, xbar0[1])


@dataclass
class WindowedSource1D:
    """``g(t) * W delta^{x0(t)}`` on one grid, as (indices, values) pairs."""

    grid: PeriodicGrid
    shape: SpectralShape
    window: WindowSpec | None = None
    factory: DeltaFactory = field(init=False)

    def __post_init__(self):
        self.factory = DeltaFactory(self.grid, self.shape)
        if self.window is not None:
            ell = self.window.half_width(self.grid.h)
            if 2 * ell > self.grid.L:
                raise WindowTooWideError(
                    f"window width 2*ell = {2 * ell:.6g} exceeds domain length {self.grid.L}"
                )

    def footprint(self, x0: float) -> tuple[np.ndarray, np.ndarray]:
        vals = self.factory.values(x0)
        if self.window is None:
            return np.arange(self.grid.M), vals
        idx = window_indices(self.grid, x0, self.window.half_width(self.grid.h))
        return idx, vals[idx]
