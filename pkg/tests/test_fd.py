"""Centered stencils and their symbols."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from movsource.errors import DimensionError, DomainError
from movsource.fd import FdOperator, apply, phase_velocity, symbol_phat
from movsource.grid import PeriodicGrid

ORDERS = (2, 4, 6)


@pytest.mark.parametrize("p", ORDERS)
def test_constant_has_zero_derivative(p):
    g = PeriodicGrid(2.0, 32)
    assert np.abs(apply(FdOperator.centered(p), np.full(32, 3.0), g)).max() < 1e-12


def test_second_order_sine():
    L, M = 2 * np.pi, 16
    g = PeriodicGrid(L, M)
    u = np.sin(2 * np.pi * g.x / L)
    kh = 2 * np.pi / L * g.h
    expected = (2 * np.pi / L) * (np.sin(kh) / kh) * np.cos(2 * np.pi * g.x / L)
    assert np.abs(apply(FdOperator.centered(2), u, g) - expected).max() < 1e-13


@pytest.mark.parametrize("p", ORDERS)
def test_modes_are_eigenvectors(p):
    g = PeriodicGrid(3.0, 21)
    op = FdOperator.centered(p)
    for m, k in zip(g.modes, g.k):
        e = g.mode_vector(m)
        expected = 1j * k * symbol_phat(op, abs(k * g.h)) * e
        assert np.abs(apply(op, e, g) - expected).max() < 1e-12


@pytest.mark.parametrize("p", ORDERS)
def test_exact_on_polynomials(p):
    h = 0.1
    op = FdOperator.centered(p)
    x = 1.0 + h * np.arange(-p, p + 1)
    for r in range(p + 1):
        # evaluate the stencil at the centre point only, away from any wrap
        u = x**r
        d = sum(a * (u[p + nu] - u[p - nu]) for nu, a in enumerate(op.coeffs, start=1)) / h
        exact = r * 1.0 ** (r - 1) if r else 0.0
        assert d == pytest.approx(exact, rel=1e-10, abs=1e-10)


def test_too_few_points():
    with pytest.raises(DimensionError):
        FdOperator.centered(6)(np.ones(6), 0.1)


def test_unsupported_order():
    with pytest.raises((ValueError, KeyError)):
        FdOperator.centered(3)


@pytest.mark.parametrize("p", ORDERS)
def test_symbol_endpoints(p):
    op = FdOperator.centered(p)
    assert symbol_phat(op, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert abs(symbol_phat(op, math.pi)) < 1e-15


def test_fourth_order_symbol_value():
    expected = (8 * math.sin(2.0) - math.sin(4.0)) / (6 * 2.0)
    assert symbol_phat(FdOperator.centered(4), 2.0) == pytest.approx(expected, rel=1e-14)


def test_symbol_domain():
    with pytest.raises(DomainError):
        symbol_phat(FdOperator.centered(2), 3.2)
    with pytest.raises(DomainError):
        symbol_phat(FdOperator.centered(2), -0.1)


@pytest.mark.parametrize("p", ORDERS)
def test_symbol_strictly_decreasing_high_precision(p):
    mpmath.mp.dps = 50
    # exact rationals rather than the rounded doubles
    exact = {2: ["1/2"], 4: ["2/3", "-1/12"], 6: ["3/4", "-3/20", "1/60"]}[p]
    coeffs = [mpmath.mpf(mpmath.fraction(*map(int, c.split("/")))) for c in exact]
    prev = None
    for kappa in mpmath.linspace(mpmath.mpf("1e-6"), mpmath.pi, 2000):
        val = 2 / kappa * sum(a * mpmath.sin((nu + 1) * kappa) for nu, a in enumerate(coeffs))
        if prev is not None:
            assert val < prev
        prev = val


@pytest.mark.parametrize("p", ORDERS)
def test_symbol_error_slope(p):
    op = FdOperator.centered(p)
    kappa = np.array([0.05, 0.1])
    err = np.abs(1 - symbol_phat(op, kappa))
    slope = np.log(err[1] / err[0]) / np.log(2)
    assert slope == pytest.approx(p, abs=0.05)


@given(st.sampled_from(ORDERS), st.floats(0.0, math.pi))
def test_symbol_bounded(p, kappa):
    v = symbol_phat(FdOperator.centered(p), kappa)
    assert -1e-15 <= v <= 1 + 1e-15


def test_phase_velocity_scales():
    op = FdOperator.centered(4)
    assert phase_velocity(op, 1.0, c=2.0) == pytest.approx(2 * symbol_phat(op, 1.0))


def test_non_monotone_stencil_rejected():
    with pytest.raises(ValueError):
        FdOperator(4, (0.5, 0.5))
