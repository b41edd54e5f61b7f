"""Motion-consistent delta, windowing and the 2D tensor factors."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from movsource.errors import DomainError, WindowTooWideError
from movsource.grid import PeriodicGrid, to_fourier
from movsource.shape import build_shape
from movsource.source import (
    DeltaFactory,
    Gaussian,
    WindowedSource1D,
    WindowSpec,
    apply_window,
    build_delta,
    build_delta_2d,
    circular_trajectory,
    linear_trajectory,
)

positions = st.floats(0.0, 4.0, allow_nan=False)
grids = st.sampled_from([PeriodicGrid(4.0, 64), PeriodicGrid(4.0, 101), PeriodicGrid(1.0, 33)])
shapes = st.builds(build_shape, st.integers(1, 12), st.integers(1, 12), st.floats(0.5, math.pi))


@given(grids, shapes, positions)
def test_unit_mass(grid, shape, x0):
    assert build_delta(grid, shape, x0).mass() == pytest.approx(1.0, abs=1e-12)


@given(grids, shapes, positions)
def test_shift_by_h_is_circular_shift(grid, shape, x0):
    a = build_delta(grid, shape, x0).values
    b = build_delta(grid, shape, x0 + grid.h).values
    assert np.abs(np.roll(a, 1) - b).max() < 1e-12 * max(1.0, np.abs(a).max())


def test_spectrum_magnitude_independent_of_position():
    grid = PeriodicGrid(4.0, 100)
    shape = build_shape(10, 10, 2.3)
    a = np.abs(to_fourier(build_delta(grid, shape, 0.37).values, grid))
    b = np.abs(to_fourier(build_delta(grid, shape, 1.94).values, grid))
    assert np.abs(a - b).max() < 1e-12


def test_spectrum_matches_shape():
    grid = PeriodicGrid(4.0, 80)
    shape = build_shape(6, 6, 2.0)
    c = to_fourier(build_delta(grid, shape, 1.1).values, grid)
    expected = np.exp(-1j * grid.k * 1.1) * shape(grid.k * grid.h) / grid.L
    assert np.abs(c - expected).max() < 1e-13


def test_off_grid_peak_between_neighbours():
    grid = PeriodicGrid(1.0, 64)
    x0 = 0.5 + 1 / 29
    d = build_delta(grid, build_shape(10, 10, math.pi), x0)
    j = int(np.argmax(d.values))
    assert abs(grid.x[j] - x0) < grid.h
    assert d.mass() == pytest.approx(1.0, abs=1e-12)


def test_factory_agrees_with_direct_construction():
    grid = PeriodicGrid(4.0, 101)
    shape = build_shape(8, 8, 2.5)
    f = DeltaFactory(grid, shape)
    for x0 in (0.0, 1.234, 3.99):
        assert np.abs(f.values(x0) - build_delta(grid, shape, x0).values).max() < 1e-13


def test_delta_values_read_only():
    d = build_delta(PeriodicGrid(1.0, 16), build_shape(2, 2, math.pi), 0.3)
    with pytest.raises(ValueError):
        d.values[0] = 1.0


def test_window_removes_far_points():
    grid = PeriodicGrid(1.0, 256)
    d = build_delta(grid, build_shape(4, 4, math.pi), 0.5)
    win = WindowSpec(0.5, 0.5)
    out, n = apply_window(d, grid, 0.5, win)
    ell = win.half_width(grid.h)
    far = np.abs(grid.x - 0.5) >= ell
    assert np.all(out.values[far] == 0)
    assert np.all(out.values[~far] == d.values[~far])
    assert n == int((~far).sum())


def test_window_wraps_periodically():
    grid = PeriodicGrid(1.0, 100)
    d = build_delta(grid, build_shape(4, 4, math.pi), 0.0)
    out, _ = apply_window(d, grid, 0.0, WindowSpec(0.5, 0.5))
    assert out.values[-1] != 0 and out.values[1] != 0


def test_window_too_wide_rejected():
    grid = PeriodicGrid(1.0, 16)
    d = build_delta(grid, build_shape(4, 4, math.pi), 0.5)
    with pytest.raises(WindowTooWideError):
        apply_window(d, grid, 0.5, WindowSpec(0.5, 0.51 / grid.h**0.5))


def test_no_window_passes_through():
    grid = PeriodicGrid(1.0, 16)
    d = build_delta(grid, build_shape(4, 4, math.pi), 0.5)
    out, n = apply_window(d, grid, 0.5, None)
    assert out is d and n == 16


def test_window_matching():
    win = WindowSpec.matching(0.5, 0.5, 1 / 16)
    assert win.half_width(1 / 16) == pytest.approx(0.5)


def test_window_spec_validation():
    with pytest.raises(DomainError):
        WindowSpec(0.0, 1.0)
    with pytest.raises(DomainError):
        WindowSpec(0.5, -1.0)


@given(st.floats(0.0, 4.0), st.floats(0.0, 4.0))
def test_2d_unit_mass(x0, y0):
    gx, gy = PeriodicGrid(4.0, 40), PeriodicGrid(4.0, 50)
    sx, sy = build_shape(6, 6, 2.5), build_shape(6, 6, 2.0)
    dx, dy = build_delta_2d(gx, gy, sx, sy, (x0, y0))
    total = gx.h * gy.h * np.sum(np.outer(dx.values, dy.values))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_2d_shift_moves_only_x_factor():
    g = PeriodicGrid(2.5, 60)
    s = build_shape(10, 10, 2.3)
    ax, ay = build_delta_2d(g, g, s, s, (1.1, 1.3))
    bx, by = build_delta_2d(g, g, s, s, (1.1 + g.h, 1.3))
    assert np.abs(np.roll(ax.values, 1) - bx.values).max() < 1e-12
    assert np.abs(ay.values - by.values).max() < 1e-15


def test_2d_footprint_bound():
    g = PeriodicGrid(2.5, 200)
    src = WindowedSource1D(g, build_shape(10, 10, 2.3), WindowSpec())
    ix, _ = src.footprint(1.25)
    iy, _ = src.footprint(1.37)
    ell = WindowSpec().half_width(g.h)
    assert len(ix) * len(iy) <= (2 * ell / g.h + 1) ** 2


def test_gaussian():
    g = Gaussian(0.15, 1.0)
    assert g(1.0) == pytest.approx(1 / (0.15 * math.sqrt(2 * math.pi)))
    assert g.peak == g(1.0)
    lo, hi = g.support
    assert g(lo) < 1e-9 * g.peak
    h = 1e-5
    assert g.derivative(0.9) == pytest.approx((g(0.9 + h) - g(0.9 - h)) / (2 * h), rel=1e-6)


def test_trajectories():
    lin = linear_trajectory(1.0, 0.5)
    assert lin(2.0) == pytest.approx(2.0)
    assert lin.check_speed(0, 2) == pytest.approx(0.5)
    circ = circular_trajectory((1.25, 1.25), 0.2, 0.5)
    x, y = circ(1.0)
    assert x == pytest.approx(1.25 + 0.2 * math.sin(2.5))
    assert y == pytest.approx(1.25 + 0.2 * math.cos(2.5))
    assert circ.check_speed(0, 1) == pytest.approx(0.5, rel=1e-6)


def test_speed_above_bound_rejected():
    from movsource.source import Trajectory

    traj = Trajectory(lambda t: 0.7 * np.asarray(t), v_max=0.5)
    with pytest.raises(DomainError):
        traj.check_speed(0, 1)


def test_csv(tmp_path):
    grid = PeriodicGrid(1.0, 32)
    d = build_delta(grid, build_shape(4, 4, math.pi), 0.3)
    d.to_csv(tmp_path / "d.csv")
    data = np.loadtxt(tmp_path / "d.csv", delimiter=",", skiprows=1)
    assert data.shape == (32, 2)
    assert np.sum(data[:, 1]) * grid.h == pytest.approx(1.0, abs=1e-12)
