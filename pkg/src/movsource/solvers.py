"""Method-of-lines solvers with classical RK4 and a moving motion-consistent source.

All domains are periodic.  The source term ``g(t) * delta^{x0(t)}`` is rebuilt
at every RK4 stage time.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InstabilityError
from .fd import FdOperator
from .grid import PeriodicGrid, norm_h
from .shape import SpectralShape, find_k_star, shape_for_order
from .source import (
    Gaussian,
    Trajectory,
    WindowedSource1D,
    WindowSpec,
    circular_trajectory,
    linear_trajectory,
)


class BoundaryContaminationWarning(UserWarning):
    """Wavefield reached the edge strips of a 2D run."""


@dataclass(frozen=True)
class Medium:
    c: float | None = None
    K: float | None = None
    rho: float | None = None

    def __post_init__(self):
        if self.K is not None and self.rho is not None:
            if self.K <= 0 or self.rho <= 0:
                raise DomainError("K and rho must be positive")
            c = math.sqrt(self.K / self.rho)
            if self.c is None:
                object.__setattr__(self, "c", c)
            elif abs(self.c**2 - self.K / self.rho) > 1e-12 * max(1.0, self.c**2):
                raise DomainError(f"c^2 = {self.c**2} inconsistent with K/rho = {self.K / self.rho}")
        if self.c is None or not self.c > 0:
            raise DomainError(f"wave speed must be positive, got {self.c}")

    @classmethod
    def acoustic(cls, K: float = 1.0, rho: float = 1.0) -> "Medium":
        return cls(K=K, rho=rho)


@dataclass(frozen=True)
class SourcePolicy:
    """How the discrete delta is built: ``q`` (default ``2p + 2``) or explicit
    ``m``/``s``, velocity safety factor ``gamma``, and window (``None`` = global)."""

    q: int | None = None
    m: int | None = None
    s: int | None = None
    gamma: float = 1.0
    window: WindowSpec | None = field(default_factory=WindowSpec)

    def shape(self, op: FdOperator, v_max: float, c: float) -> SpectralShape:
        if self.gamma < 1:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        return shape_for_order(op, self.gamma * v_max / c, q=self.q, m=self.m, s=self.s)


@dataclass
class SolutionField:
    t: float
    fields: dict[str, np.ndarray]
    grids: tuple[PeriodicGrid, ...]
    info: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)

    def __getitem__(self, name):
        return self.fields[name]


def _steps(t_end: float, cfl: float, h: float) -> tuple[int, float]:
    if not t_end > 0 or not cfl > 0:
        raise DomainError("t_end and cfl must be positive")
    n = int(math.ceil(t_end / (cfl * h) - 1e-9))
    return n, t_end / n


def rk4_step(state, rhs: Callable, t: float, dt: float, step: int | None = None):
    """Classical four-stage Runge-Kutta step for ``y' = rhs(t, y)``."""
    k1 = rhs(t, state)
    _check_finite(k1, step)
    k2 = rhs(t + dt / 2, state + dt / 2 * k1)
    _check_finite(k2, step)
    k3 = rhs(t + dt / 2, state + dt / 2 * k2)
    _check_finite(k3, step)
    k4 = rhs(t + dt, state + dt * k3)
    _check_finite(k4, step)
    return state + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_finite(k, step):
    if not np.all(np.isfinite(k)):
        raise InstabilityError(f"non-finite stage value at step {step}", step=step)


def _integrate(y, rhs, n_steps, dt, snapshot_times=(), pack=None):
    snaps = []
    pending = sorted(snapshot_times)
    t = 0.0
    for n in range(n_steps):
        y = rk4_step(y, rhs, t, dt, step=n)
        t = (n + 1) * dt
        while pending and t >= pending[0] - 1e-12:
            pending.pop(0)
            snaps.append((t, pack(y) if pack else y.copy()))
    return y, snaps


def _assert_fields(fields: dict):
    for name, arr in fields.items():
        if not np.all(np.isfinite(arr)):
            raise InstabilityError(f"field {name} is not finite")


# ---------------------------------------------------------------- 1D advection


@dataclass
class AdvectionConfig:
    M: int = 1600
    L: float = 4.0
    order: int = 4
    c: float = 1.0
    g: Callable = field(default_factory=lambda: Gaussian(0.15, 1.0))
    trajectory: Trajectory = field(default_factory=lambda: linear_trajectory(1.0, 0.5))
    policy: SourcePolicy = field(default_factory=SourcePolicy)
    cfl: float = 0.2
    t_end: float = 2.0
    snapshot_times: Sequence[float] = ()


def solve_advection_1d(cfg: AdvectionConfig) -> SolutionField:
    """``u_t + c u_x = g(t) delta(x - x0(t))`` with zero initial data."""
    grid = PeriodicGrid(cfg.L, cfg.M)
    op = FdOperator.centered(cfg.order)
    cfg.trajectory.check_speed(0.0, cfg.t_end)
    shape = cfg.policy.shape(op, cfg.trajectory.v_max, cfg.c)
    src = WindowedSource1D(grid, shape, cfg.policy.window)
    n_steps, dt = _steps(cfg.t_end, cfg.cfl, grid.h)

    def rhs(t, u):
        du = -cfg.c * op(u, grid.h)
        gt = cfg.g(t)
        if gt != 0:
            idx, vals = src.footprint(cfg.trajectory(t))
            du[idx] += gt * vals
        return du

    u, snaps = _integrate(np.zeros(grid.M), rhs, n_steps, dt, cfg.snapshot_times)
    out = SolutionField(
        cfg.t_end,
        {"u": u},
        (grid,),
        info={"kappa_star": shape.kappa_star, "dt": dt, "steps": n_steps, "q": shape.m},
        snapshots=[(t, {"u": s}) for t, s in snaps],
    )
    _assert_fields(out.fields)
    return out


def exact_advection_solution(x, t, c: float = 1.0, v0: float = 0.5, g=None, x_start: float = 1.0):
    """Exact solution for a source moving as ``x0(t) = x_start + v0 t`` (non-periodic).

    ``u = g(tau) / (c - v0)`` with emission time ``tau = (c t - (x - x_start)) / (c - v0)``
    for ``0 < tau <= t``; zero elsewhere (not yet reached, or behind the source).
    """
    if c == v0:
        raise DomainError("exact solution undefined for c == v0")
    g = Gaussian(0.15, 1.0) if g is None else g
    x = np.asarray(x, dtype=float)
    tau = (c * t - (x - x_start)) / (c - v0)
    live = (tau > 0) & (tau <= t)
    out = np.where(live, g(np.where(live, tau, 0.0)) / (c - v0), 0.0)
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------------ 1D acoustics


@dataclass
class Wave1DConfig:
    M: int = 400
    L: float = 4.0
    order: int = 4
    medium: Medium = field(default_factory=Medium.acoustic)
    g: Callable = field(default_factory=lambda: Gaussian(0.2, 2.0))
    trajectory: Trajectory = field(default_factory=lambda: linear_trajectory(1.6, 0.3))
    policy: SourcePolicy = field(default_factory=SourcePolicy)
    cfl: float = 0.2
    t_end: float = 2.0
    snapshot_times: Sequence[float] = ()


def solve_wave_1d(cfg: Wave1DConfig) -> SolutionField:
    """``rho v_t + theta_x = 0``, ``theta_t / K + v_x = g delta``; centered stencils."""
    grid = PeriodicGrid(cfg.L, cfg.M)
    op = FdOperator.centered(cfg.order)
    med = cfg.medium
    cfg.trajectory.check_speed(0.0, cfg.t_end)
    shape = cfg.policy.shape(op, cfg.trajectory.v_max, med.c)
    src = WindowedSource1D(grid, shape, cfg.policy.window)
    n_steps, dt = _steps(cfg.t_end, cfg.cfl, grid.h)
    K = med.K if med.K is not None else 1.0
    rho = med.rho if med.rho is not None else 1.0

    def rhs(t, y):
        th, v = y
        out = np.empty_like(y)
        out[0] = -K * op(v, grid.h)
        out[1] = -op(th, grid.h) / rho
        gt = cfg.g(t)
        if gt != 0:
            idx, vals = src.footprint(cfg.trajectory(t))
            out[0, idx] += K * gt * vals
        return out

    y, snaps = _integrate(np.zeros((2, grid.M)), rhs, n_steps, dt, cfg.snapshot_times)
    out = SolutionField(
        cfg.t_end,
        {"theta": y[0], "v": y[1]},
        (grid,),
        info={"kappa_star": shape.kappa_star, "dt": dt, "steps": n_steps, "q": shape.m},
        snapshots=[(t, {"theta": s[0], "v": s[1]}) for t, s in snaps],
    )
    _assert_fields(out.fields)
    return out


def high_wavenumber_fraction(u, grid: PeriodicGrid, kappa_star: float) -> float:
    """Share of the energy of ``u`` in modes with ``|kh| > kappa_star``."""
    uh = np.fft.fft(u) / grid.M
    e = np.abs(uh) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    return float(e[np.abs(grid.fft_k * grid.h) > kappa_star + 1e-12].sum() / total)


# ------------------------------------------------------------ 2D acoustics


@dataclass
class Wave2DConfig:
    N: int = 201  # points per direction counting both ends; periodic grid has N - 1
    L: float = 2.5
    order: int = 4
    medium: Medium = field(default_factory=Medium.acoustic)
    g: Callable = field(default_factory=lambda: Gaussian(1 / 25, 1.0))
    trajectory: Trajectory = field(
        default_factory=lambda: circular_trajectory((1.25, 1.25), 0.2, 0.5)
    )
    policy: SourcePolicy = field(default_factory=SourcePolicy)
    cfl: float = 0.1
    t_end: float = 1.0
    strip: int = 10
    snapshot_times: Sequence[float] = ()


class _Source2D:
    def __init__(self, grid, shape, window, trajectory):
        self.x = WindowedSource1D(grid, shape, window)
        self.trajectory = trajectory

    def block(self, t):
        x0, y0 = self.trajectory(t)
        ix, dx = self.x.footprint(x0)
        iy, dy = self.x.footprint(y0)
        return np.ix_(ix, iy), np.outer(dx, dy)


def wave2d_rhs(cfg: Wave2DConfig):
    """Plain-numpy right-hand side ``(t, y) -> dy/dt`` with ``y = (theta, vx, vy)``.

    Used for small grids and as the reference for the compiled stepper.
    """
    grid = PeriodicGrid(cfg.L, cfg.N - 1)
    op = FdOperator.centered(cfg.order)
    med = cfg.medium
    shape = cfg.policy.shape(op, cfg.trajectory.v_max, med.c)
    src = _Source2D(grid, shape, cfg.policy.window, cfg.trajectory)
    K = med.K if med.K is not None else 1.0
    rho = med.rho if med.rho is not None else 1.0

    def rhs(t, y):
        th, vx, vy = y
        out = np.empty_like(y)
        out[0] = -K * (op(vx, grid.h, axis=0) + op(vy, grid.h, axis=1))
        out[1] = -op(th, grid.h, axis=0) / rho
        out[2] = -op(th, grid.h, axis=1) / rho
        gt = cfg.g(t)
        if gt != 0:
            blk, vals = src.block(t)
            out[0][blk] += K * gt * vals
        return out

    return rhs, grid, shape


def solve_wave_2d(cfg: Wave2DConfig, compiled: bool = True) -> SolutionField:
    """2D acoustic system on a periodic square with a tensor-product moving source.

    ``theta[i, j]`` lives at ``(x_i, y_j)``.  ``compiled=False`` uses the generic
    :func:`rk4_step` with a numpy right-hand side (slow; for checks).
    """
    cfg.trajectory.check_speed(0.0, cfg.t_end)
    rhs, grid, shape = wave2d_rhs(cfg)
    n_steps, dt = _steps(cfg.t_end, cfg.cfl, grid.h)
    if compiled:
        y, snaps = _run_compiled_2d(cfg, grid, shape, n_steps, dt)
    else:
        y, snaps = _integrate(np.zeros((3, grid.M, grid.M)), rhs, n_steps, dt, cfg.snapshot_times)
    fields = {"theta": y[0], "vx": y[1], "vy": y[2]}
    _assert_fields(fields)
    ratio = boundary_ratio(fields, cfg.strip)
    if ratio >= 1e-9:
        warnings.warn(
            f"wavefield reached the edge strip (ratio {ratio:.2e}); periodic and "
            "bounded-domain results may differ",
            BoundaryContaminationWarning,
            stacklevel=2,
        )
    return SolutionField(
        cfg.t_end,
        fields,
        (grid, grid),
        info={
            "kappa_star": shape.kappa_star,
            "dt": dt,
            "steps": n_steps,
            "q": shape.m,
            "boundary_ratio": ratio,
        },
        snapshots=[(t, {"theta": s[0], "vx": s[1], "vy": s[2]}) for t, s in snaps],
    )


def _run_compiled_2d(cfg, grid, shape, n_steps, dt):
    from ._kernels import wave2d_stage

    med = cfg.medium
    K = med.K if med.K is not None else 1.0
    rho = med.rho if med.rho is not None else 1.0
    op = FdOperator.centered(cfg.order)
    coeffs = np.asarray(op.coeffs, dtype=float)
    src = _Source2D(grid, shape, cfg.policy.window, cfg.trajectory)
    M = grid.M
    y = np.zeros((3, M, M))
    acc = np.empty_like(y)
    a = np.empty_like(y)
    b = np.empty_like(y)
    inv_h = 1.0 / grid.h
    pending = sorted(cfg.snapshot_times)
    snaps = []

    # (source of k, time offset, next-stage buffer, dt_next, dt_acc)
    for n in range(n_steps):
        t = n * dt
        plan = (
            (y, 0.0, a, dt / 2, dt / 6),
            (a, dt / 2, b, dt / 2, dt / 3),
            (b, dt / 2, a, dt, dt / 3),
            (a, dt, None, 0.0, dt / 6),
        )
        for stage, (s, off, nxt, c_next, c_acc) in enumerate(plan):
            ok = wave2d_stage(
                s[0], s[1], s[2], y, acc, nxt if nxt is not None else a,
                coeffs, inv_h, K, 1.0 / rho, c_next, c_acc, stage == 0,
            )
            if not ok:
                raise InstabilityError(f"non-finite stage value at step {n}", step=n)
            gt = cfg.g(t + off)
            if gt != 0:
                blk, vals = src.block(t + off)
                term = K * gt * vals
                if nxt is not None:
                    nxt[0][blk] += c_next * term
                acc[0][blk] += c_acc * term
        y, acc = acc, y
        tn = (n + 1) * dt
        while pending and tn >= pending[0] - 1e-12:
            pending.pop(0)
            snaps.append((tn, y.copy()))
    return y, snaps


def boundary_ratio(fields: dict, strip: int = 10) -> float:
    """Max over the edge strips relative to the field max, worst over fields."""
    worst = 0.0
    for arr in fields.values():
        top = np.max(np.abs(arr))
        if top == 0:
            continue
        edge = max(
            np.max(np.abs(arr[:strip])),
            np.max(np.abs(arr[-strip:])),
            np.max(np.abs(arr[:, :strip])),
            np.max(np.abs(arr[:, -strip:])),
        )
        worst = max(worst, float(edge / top))
    return worst


def restrict(fine: np.ndarray, coarse_M: int) -> np.ndarray:
    """Injection onto a nested coarser periodic grid."""
    r, rem = divmod(fine.shape[0], coarse_M)
    if rem:
        raise DomainError(f"grid of {fine.shape[0]} points does not nest {coarse_M}")
    return fine[::r, ::r] if fine.ndim == 2 else fine[::r]


def norm_h2(u, grid: PeriodicGrid) -> float:
    """Weighted 2D norm ``sqrt(sum |u|^2 h^2 / L^2)`` on a square grid."""
    return float(np.sqrt(np.sum(np.abs(u) ** 2)) * grid.h / grid.L)


def write_snapshot_csv(path, sol: SolutionField, name: str, values=None, t=None) -> None:
    """1D: ``x,value`` rows.  2D: header ``# x0=..,y0=..,h=..,N=..,t=..`` then row-major values."""
    values = sol.fields[name] if values is None else values
    t = sol.t if t is None else t
    grid = sol.grids[0]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if values.ndim == 1:
            w.writerow(["x", name])
            for x, v in zip(grid.x, values):
                w.writerow([repr(float(x)), repr(float(v))])
        else:
            fh.write(f"# x0=0.0,y0=0.0,h={grid.h!r},N={grid.M},t={t!r}\n")
            for row in values:
                w.writerow([repr(float(v)) for v in row])


__all__ = [
    "AdvectionConfig",
    "BoundaryContaminationWarning",
    "Medium",
    "SolutionField",
    "SourcePolicy",
    "Wave1DConfig",
    "Wave2DConfig",
    "boundary_ratio",
    "exact_advection_solution",
    "find_k_star",
    "high_wavenumber_fraction",
    "norm_h",
    "norm_h2",
    "restrict",
    "rk4_step",
    "solve_advection_1d",
    "solve_wave_1d",
    "solve_wave_2d",
    "write_snapshot_csv",
]
