"""Periodic grid, discrete inner product and the transform pair."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from movsource.errors import DimensionError
from movsource.grid import PeriodicGrid, from_fourier, inner_product, norm_h, to_fourier


def test_spacing_and_points():
    g = PeriodicGrid(4.0, 100)
    assert g.h == pytest.approx(0.04)
    assert g.x[0] == 0.0 and g.x[-1] == pytest.approx(4.0 - 0.04)
    assert len(g.modes) == 100


def test_invalid_grid_rejected():
    with pytest.raises((DimensionError, ValueError)):
        PeriodicGrid(1.0, 0)
    with pytest.raises((DimensionError, ValueError)):
        PeriodicGrid(-1.0, 10)


def test_ones_have_unit_norm():
    for M in (7, 16, 101):
        g = PeriodicGrid(2.5, M)
        assert inner_product(np.ones(M), np.ones(M), g) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("M", [5, 8, 17, 32, 63, 64])
def test_modes_orthonormal(M):
    g = PeriodicGrid(3.0, M)
    E = np.array([g.mode_vector(m) for m in g.modes])
    gram = E.conj() @ E.T * g.h / g.L
    assert np.abs(gram - np.eye(M)).max() < 1e-12


def test_inner_product_length_mismatch():
    g = PeriodicGrid(1.0, 8)
    with pytest.raises(DimensionError):
        inner_product(np.ones(8), np.ones(7), g)


def test_constant_transform():
    g = PeriodicGrid(1.0, 12)
    c = to_fourier(np.full(12, 2.5), g)
    zero = list(g.modes).index(0)
    assert c[zero] == pytest.approx(2.5, abs=1e-12)
    assert np.abs(np.delete(c, zero)).max() < 1e-12


def test_single_mode_transform():
    g = PeriodicGrid(2.0, 15)
    for m in (-7, -3, 0, 4, 7):
        c = to_fourier(g.mode_vector(m), g)
        expected = (g.modes == m).astype(float)
        assert np.abs(c - expected).max() < 1e-12


def test_unit_zero_mode_gives_ones():
    g = PeriodicGrid(1.0, 9)
    c = np.zeros(9, complex)
    c[list(g.modes).index(0)] = 1.0
    assert np.abs(from_fourier(c, g) - 1).max() < 1e-14


def test_first_mode_synthesis():
    g = PeriodicGrid(3.0, 10)
    c = np.zeros(10, complex)
    c[list(g.modes).index(1)] = 1.0
    assert np.abs(from_fourier(c, g) - np.exp(2j * np.pi * g.x / g.L)).max() < 1e-13


def test_from_fourier_length_check():
    with pytest.raises(DimensionError):
        from_fourier(np.zeros(5), PeriodicGrid(1.0, 6))


@given(st.integers(3, 64), st.integers(0, 2**31 - 1))
def test_round_trip(M, seed):
    g = PeriodicGrid(1.7, M)
    u = np.random.default_rng(seed).standard_normal(M)
    assert np.abs(from_fourier(to_fourier(u, g), g) - u).max() < 1e-12


@given(st.integers(3, 64), st.integers(0, 2**31 - 1))
def test_hermitian_coefficients_give_real_field(M, seed):
    g = PeriodicGrid(1.0, M)
    u = np.random.default_rng(seed).standard_normal(M)
    c = to_fourier(u, g)
    assert np.abs(from_fourier(c, g).imag).max() < 1e-12


@given(st.integers(2, 80), st.integers(0, 2**31 - 1))
def test_plancherel(M, seed):
    g = PeriodicGrid(2.0, M)
    u = np.random.default_rng(seed).standard_normal(M) + 0j
    lhs = norm_h(u, g) ** 2
    rhs = np.sum(np.abs(to_fourier(u, g)) ** 2)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, lhs)


def test_even_M_nyquist_mode_present():
    g = PeriodicGrid(1.0, 8)
    assert g.modes.min() == -4 and g.modes.max() == 3
