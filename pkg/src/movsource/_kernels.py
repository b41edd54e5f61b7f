"""Compiled kernels for the 2D acoustic solver (periodic, centered stencils)."""

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _wrap(i, M):
    if i >= M:
        return i - M
    if i < 0:
        return i + M
    return i


@numba.njit(cache=True)
def wave2d_stage(th, vx, vy, y, acc, nxt, coeffs, inv_h, K, inv_rho, dt_next, dt_acc, init_acc):
    """One fused RK4 stage without the source term.

    With ``k = rhs(th, vx, vy)`` this writes ``nxt = y + dt_next * k`` (skipped when
    ``dt_next == 0``) and updates ``acc += dt_acc * k`` in place, or sets
    ``acc = y + dt_acc * k`` when ``init_acc`` is true.  Returns False when a
    non-finite value appears in ``k``.
    """
    M = th.shape[0]
    r = coeffs.shape[0]
    a_th = -inv_rho * inv_h
    a_v = -K * inv_h
    write_next = dt_next != 0.0
    check = 0.0
    kt = np.empty(M)
    kx = np.empty(M)
    ky = np.empty(M)
    for i in range(M):
        kt[:] = 0.0
        kx[:] = 0.0
        ky[:] = 0.0
        # x-direction (rows): whole-row differences, no per-point wrap
        for nu in range(1, r + 1):
            a = coeffs[nu - 1]
            ip = _wrap(i + nu, M)
            im = _wrap(i - nu, M)
            for j in range(M):
                kt[j] += a * (vx[ip, j] - vx[im, j])
                kx[j] += a * (th[ip, j] - th[im, j])
        # y-direction (contiguous): interior then wrapped edges
        for nu in range(1, r + 1):
            a = coeffs[nu - 1]
            for j in range(r, M - r):
                kt[j] += a * (vy[i, j + nu] - vy[i, j - nu])
                ky[j] += a * (th[i, j + nu] - th[i, j - nu])
            for j in range(0, r):
                jp = _wrap(j + nu, M)
                jm = _wrap(j - nu, M)
                kt[j] += a * (vy[i, jp] - vy[i, jm])
                ky[j] += a * (th[i, jp] - th[i, jm])
            for j in range(M - r, M):
                jp = _wrap(j + nu, M)
                jm = _wrap(j - nu, M)
                kt[j] += a * (vy[i, jp] - vy[i, jm])
                ky[j] += a * (th[i, jp] - th[i, jm])
        for j in range(M):
            k0 = a_v * kt[j]
            k1 = a_th * kx[j]
            k2 = a_th * ky[j]
            check += k0 + k1 + k2
            if write_next:
                nxt[0, i, j] = y[0, i, j] + dt_next * k0
                nxt[1, i, j] = y[1, i, j] + dt_next * k1
                nxt[2, i, j] = y[2, i, j] + dt_next * k2
            if init_acc:
                acc[0, i, j] = y[0, i, j] + dt_acc * k0
                acc[1, i, j] = y[1, i, j] + dt_acc * k1
                acc[2, i, j] = y[2, i, j] + dt_acc * k2
            else:
                acc[0, i, j] += dt_acc * k0
                acc[1, i, j] += dt_acc * k1
                acc[2, i, j] += dt_acc * k2
    return np.isfinite(check)
