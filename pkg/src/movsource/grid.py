"""Periodic grids and the discrete Fourier pair on the mode set.

Fourier coefficients are kept in natural order, i.e. aligned with
``grid.modes`` (integer mode indices ``m`` with ``k = 2*pi*m/L``), never in
FFT bin order.  For odd ``M = 2N + 1`` the modes are ``-N..N``; for even ``M``
they are ``-M/2..M/2-1`` and the first entry is the Nyquist mode ``kh = pi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class PeriodicGrid:
    """Equidistant grid ``x_j = j*h``, ``j = 0..M-1``, on ``[0, L)``."""

    L: float
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise DimensionError(f"M must be positive, got {self.M}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.M

    @property
    def N(self) -> int:
        return (self.M - 1) // 2

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.M) * self.h

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode indices in natural (ascending) order."""
        return np.arange(self.M) - self.M // 2

    @cached_property
    def k(self) -> np.ndarray:
        """Wavenumbers aligned with ``modes``."""
        return 2 * np.pi * self.modes / self.L

    @cached_property
    def fft_k(self) -> np.ndarray:
        """Wavenumbers in FFT bin order (internal use)."""
        return 2 * np.pi * np.fft.fftfreq(self.M, d=1.0 / self.M) / self.L

    def mode_vector(self, m: int) -> np.ndarray:
        """Samples of ``exp(i k x_j)`` for integer mode ``m``."""
        return np.exp(2j * np.pi * m * self.x / self.L)

    def _check(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        if u.shape != (self.M,):
            raise DimensionError(f"expected length {self.M}, got shape {u.shape}")
        return u


def inner_product(u, v, grid: PeriodicGrid) -> complex:
    """Discrete inner product ``(1/L) sum_j h conj(u_j) v_j``."""
    u = grid._check(u)
    v = grid._check(v)
    return complex(np.vdot(u, v) * grid.h / grid.L)


def norm_h(u, grid: PeriodicGrid) -> float:
    """Norm induced by :func:`inner_product` (also used for 2D via ``h``-weights)."""
    u = np.asarray(u)
    return float(np.sqrt(np.sum(np.abs(u) ** 2) * grid.h / grid.L))


def to_fourier(u, grid: PeriodicGrid) -> np.ndarray:
    """Coefficients ``u_hat_k = <exp(ikx), u>_h`` in natural order."""
    u = grid._check(u)
    return np.fft.fftshift(np.fft.fft(u)) / grid.M


def from_fourier(coeffs, grid: PeriodicGrid) -> np.ndarray:
    """Grid vector ``u_j = sum_k u_hat_k exp(i k x_j)`` from natural-order coefficients."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (grid.M,):
        raise DimensionError(
            f"need one coefficient per mode ({grid.M}), got shape {coeffs.shape}"
        )
    return np.fft.ifft(np.fft.ifftshift(coeffs)) * grid.M
