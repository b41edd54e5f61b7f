"""Centered first-derivative finite-difference operators and their symbols."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .grid import PeriodicGrid

# (du)_j = (1/h) sum_nu a_nu (u_{j+nu} - u_{j-nu})
_CENTERED = {
    2: (1 / 2,),
    4: (2 / 3, -1 / 12),
    6: (3 / 4, -3 / 20, 1 / 60),
}


@dataclass(frozen=True)
class FdOperator:
    order: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) * 2 != self.order:
            raise ValueError("stencil length does not match order")
        # near 0 the symbol is flat to O(kappa^p), below double-precision
        # resolution; there only non-increase (to roundoff) is checkable
        kappa = np.linspace(0.0, np.pi, 10_001)[1:]
        vals = _phat(self.coeffs, kappa)
        steps = np.diff(vals)
        resolved = (1.0 - vals[1:]) > 1e-10
        if np.any(steps > 4 * np.finfo(float).eps) or np.any(steps[resolved] >= 0):
            raise DomainError(
                f"symbol of order-{self.order} stencil is not strictly decreasing"
            )

    @classmethod
    def centered(cls, order: int) -> "FdOperator":
        try:
            return cls(order, _CENTERED[order])
        except KeyError:
            raise ValueError(
                f"centered stencils available for orders {sorted(_CENTERED)}, got {order}"
            ) from None

    @property
    def half_width(self) -> int:
        return len(self.coeffs)

    def __call__(self, u, h: float, axis: int = -1) -> np.ndarray:
        u = np.asarray(u)
        if u.shape[axis] < self.order + 1:
            raise DimensionError(
                f"need at least {self.order + 1} points for order {self.order}, "
                f"got {u.shape[axis]}"
            )
        out = np.zeros_like(u)
        for nu, a in enumerate(self.coeffs, start=1):
            out += a * (np.roll(u, -nu, axis=axis) - np.roll(u, nu, axis=axis))
        return out / h


def _phat(coeffs, kappa):
    kappa = np.asarray(kappa, dtype=float)
    total = np.zeros_like(kappa)
    for nu, a in enumerate(coeffs, start=1):
        total += a * np.sin(nu * kappa)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(kappa == 0, 1.0, 2 * total / np.where(kappa == 0, 1.0, kappa))
    return out


def apply(op: FdOperator, u, grid: PeriodicGrid, axis: int = -1) -> np.ndarray:
    """Periodic application of ``op`` along ``axis``, scaled by ``1/h``."""
    u = np.asarray(u)
    if u.shape[axis] != grid.M:
        raise DimensionError(f"expected {grid.M} points along axis, got {u.shape[axis]}")
    return op(u, grid.h, axis=axis)


def symbol_phat(op: FdOperator, kappa):
    """Real symbol ``P(kh)``: the operator maps ``exp(ikx)`` to ``ik P(kh) exp(ikx)``.

    Defined for ``kappa`` in ``[0, pi]``; ``P(0) = 1``.
    """
    k = np.asarray(kappa, dtype=float)
    if np.any(k < 0) or np.any(k > np.pi):
        raise DomainError("kappa must lie in [0, pi]")
    out = _phat(op.coeffs, k)
    return float(out) if out.ndim == 0 else out


def phase_velocity(op: FdOperator, kappa, c: float = 1.0):
    """Numerical phase velocity ``c P(|kh|)`` for any real ``kappa`` in ``[-pi, pi]``."""
    return c * symbol_phat(op, np.abs(kappa))
