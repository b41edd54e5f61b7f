"""Spectral shape ``F(kh)`` of the motion-consistent discrete delta.

``F`` is even, equals a polynomial ``Q`` of degree ``m + s - 1`` on
``[0, kappa_star]`` and vanishes beyond.  ``Q`` satisfies ``m`` moment
conditions at 0 (``Q(0) = 1``, ``Q^(nu)(0) = 0``) and ``s`` sonic-boom
conditions at ``kappa_star`` (``Q^(nu)(kappa_star) = 0``).

``Q`` is stored by its Bernstein control coefficients in ``u = kappa/kappa_star``.
In that basis the derivative conditions at each end involve only the control
coefficients nearest to it, which keeps both small systems well conditioned and
makes evaluation accurate in relative terms near either endpoint.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.linalg

from .errors import DomainError, ShapeConstructionError, SourceSpeedError
from .fd import FdOperator, symbol_phat

COND_LIMIT = 1e12
RESIDUAL_TOL = 1e-9


def find_k_star(op: FdOperator, velocity_ratio: float) -> float:
    """Smallest ``kappa`` in ``(0, pi]`` with ``P(kappa) = v_max / c``.

    Bisection; ``P`` is strictly decreasing from 1 at 0 to 0 at pi, so the
    root is unique.  Iterates until the bracket stops shrinking.
    """
    r = float(velocity_ratio)
    if r >= 1:
        raise SourceSpeedError(
            f"source at or above wave speed (v_max/c = {r}); no subsonic sonic-boom wavenumber"
        )
    if r < 0:
        raise DomainError(f"velocity ratio must be non-negative, got {r}")
    if r == 0:
        return float(np.pi)
    lo, hi = 0.0, float(np.pi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if symbol_phat(op, mid) > r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bernstein(beta, u):
    """Evaluate ``sum_j beta_j C(n,j) u^j (1-u)^(n-j)`` for ``u`` in ``[0, 1]``."""
    n = len(beta) - 1
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    if n < 0:
        return out
    v = 1.0 - u
    for j, b in enumerate(beta):
        if b != 0:
            out += b * comb(n, j) * u**j * v ** (n - j)
    return out


def _bernstein_derivative(beta, order):
    """Control coefficients of the ``order``-th ``u``-derivative."""
    beta = np.asarray(beta, dtype=float)
    n = len(beta) - 1
    if order > n:
        return np.zeros(1)
    scale = 1.0
    for i in range(order):
        scale *= n - i
    return scale * np.diff(beta, order)


def _end_system(count):
    """Rows ``nu = 0..count-1`` of the ``nu``-th forward difference at the start."""
    A = np.zeros((count, count))
    for nu in range(count):
        for j in range(nu + 1):
            A[nu, j] = (-1) ** (nu - j) * comb(nu, j)
    return A


def _solve(A, b, what):
    cond = np.linalg.cond(A) if A.size else 1.0
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ShapeConstructionError(
            f"{what} system is ill-conditioned (cond ~ {cond:.1e}); use fewer conditions"
        )
    if A.size == 0:
        return np.zeros(0), cond
    # lower triangular with integer entries: forward substitution reproduces
    # the exact 0/1 solutions without the roundoff a pivoted LU would add
    return scipy.linalg.solve_triangular(A, b, lower=True), cond


@dataclass(frozen=True)
class SpectralShape:
    m: int
    s: int
    kappa_star: float
    control: tuple[float, ...]  # Bernstein coefficients of Q in u = kappa/kappa_star
    condition: float = 1.0

    @property
    def degree(self) -> int:
        return self.m + self.s - 1

    def __call__(self, kappa):
        return eval_F(self, kappa)

    def q_derivative(self, kappa, order: int = 0):
        """``d^order Q / d kappa^order`` on ``[0, kappa_star]`` (no cutoff applied)."""
        u = np.asarray(kappa, dtype=float) / self.kappa_star
        coeffs = _bernstein_derivative(self.control, order)
        out = _bernstein(coeffs, u) / self.kappa_star**order
        return float(out) if out.ndim == 0 else out

    def one_minus_q(self, kappa):
        """``1 - Q(kappa)`` evaluated without cancellation near 0."""
        u = np.asarray(kappa, dtype=float) / self.kappa_star
        out = _bernstein(1.0 - np.asarray(self.control), u)
        return float(out) if out.ndim == 0 else out

    def monomial_coeffs(self, scaled: bool = True) -> np.ndarray:
        """Power-basis coefficients of ``Q``, lowest degree first.

        With ``scaled=True`` the variable is ``u = kappa/kappa_star``,
        otherwise ``kappa`` itself.
        """
        n = self.degree
        out = np.zeros(n + 1)
        for j, b in enumerate(self.control):
            # C(n,j) u^j (1-u)^(n-j) = C(n,j) sum_i C(n-j,i) (-1)^i u^(i+j)
            for i in range(n - j + 1):
                out[i + j] += b * comb(n, j) * comb(n - j, i) * (-1) ** i
        if not scaled:
            out = out / self.kappa_star ** np.arange(n + 1)
        return out

    def residuals(self) -> np.ndarray:
        """Dimensionless residuals of all ``m + s`` defining conditions."""
        res = []
        for nu in range(self.m):
            target = 1.0 if nu == 0 else 0.0
            val = self.q_derivative(0.0, nu) * self.kappa_star**nu
            res.append(abs(val - target) / _falling(self.degree, nu))
        for nu in range(self.s):
            val = self.q_derivative(self.kappa_star, nu) * self.kappa_star**nu
            res.append(abs(val) / _falling(self.degree, nu))
        return np.asarray(res)

    def to_csv(self, path, samples: int = 401) -> None:
        """Write ``(kappa, F)`` on ``[0, kappa_star]``."""
        kappa = np.linspace(0.0, self.kappa_star, samples)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["kappa", "F"])
            for k, f in zip(kappa, eval_F(self, kappa)):
                w.writerow([repr(float(k)), repr(float(f))])


def _falling(n, nu):
    out = 1.0
    for i in range(nu):
        out *= n - i
    return max(out, 1.0)


def build_shape(m: int, s: int, kappa_star: float) -> SpectralShape:
    """Construct ``F`` from ``m`` moment and ``s`` sonic-boom conditions."""
    if m < 1:
        raise DomainError(f"need at least one moment condition, got m={m}")
    if s < 0:
        raise DomainError(f"s must be non-negative, got {s}")
    if not 0 < kappa_star <= np.pi:
        raise DomainError(f"kappa_star must lie in (0, pi], got {kappa_star}")

    # Q^(nu)(0) ~ forward differences of the first m control coefficients,
    # Q^(nu)(kappa*) ~ backward differences of the last s.
    A_m = _end_system(m)
    b_m = np.zeros(m)
    b_m[0] = 1.0
    head, cond_m = _solve(A_m, b_m, "moment")
    A_s = _end_system(s)
    tail_rev, cond_s = _solve(A_s, np.zeros(s), "sonic-boom")
    control = np.concatenate([head, tail_rev[::-1]])

    shape = SpectralShape(
        m=m,
        s=s,
        kappa_star=float(kappa_star),
        control=tuple(float(c) for c in control),
        condition=float(max(cond_m, cond_s)),
    )
    worst = shape.residuals().max()
    if worst > RESIDUAL_TOL:
        raise ShapeConstructionError(f"shape conditions violated (residual {worst:.1e})")
    return shape


def eval_F(shape: SpectralShape, kappa):
    """Even extension: ``Q(|kappa|)`` for ``|kappa| <= kappa_star``, else 0."""
    a = np.abs(np.asarray(kappa, dtype=float))
    inside = a <= shape.kappa_star
    u = np.where(inside, a, 0.0) / shape.kappa_star
    # near u = 0 sum the small complement instead, so F -> 1 without ripple
    comp = 1.0 - np.asarray(shape.control)
    q = np.where(u < 0.5, 1.0 - _bernstein(comp, u), _bernstein(shape.control, u))
    out = np.where(inside, q, 0.0)
    return float(out) if out.ndim == 0 else out


def shape_for_order(
    op: FdOperator,
    velocity_ratio: float,
    q: int | None = None,
    m: int | None = None,
    s: int | None = None,
) -> SpectralShape:
    """Default policy: ``m = s = q = 2p + 2`` with ``kappa_star`` from the velocity."""
    q = 2 * op.order + 2 if q is None else q
    m = q if m is None else m
    s = q if s is None else s
    return build_shape(m, s, find_k_star(op, velocity_ratio))
