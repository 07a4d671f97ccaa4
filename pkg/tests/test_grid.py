"""Tests for grids and sampled-function calculus."""

import math

import numpy as np
import pytest

from isofactor.exceptions import GridError, NumericalError
from isofactor.spectral.grid import (
    Grid,
    GridFunction,
    cumulative_integral,
    derivative,
    ensure_same_grid,
    integral,
    second_derivative,
)


def test_grid_rejects_bad_bounds():
    """Test that empty, reversed and non-finite intervals are rejected."""
    with pytest.raises(GridError):
        Grid(1.0, 1.0, 10)
    with pytest.raises(GridError):
        Grid(2.0, 1.0, 10)
    with pytest.raises(GridError):
        Grid(0.0, math.inf, 10)


def test_grid_needs_three_points():
    """Test the minimum node count."""
    with pytest.raises(GridError, match="at least 3 points"):
        Grid(0.0, 1.0, 2)


def test_radial_grid_starts_one_spacing_from_origin():
    """Test radial grid layout and its extension to r = 0."""
    grid = Grid.radial(10.0, 100)
    assert grid.is_radial
    assert grid.spacing == pytest.approx(0.1)
    assert grid.nodes[0] == pytest.approx(0.1)

    extended = grid.with_origin()
    assert extended.x_min == 0.0
    assert extended.n_points == 101
    assert extended.spacing == pytest.approx(grid.spacing)


def test_symmetric_grid_is_not_radial():
    """Test that only radial grids extend to the origin."""
    grid = Grid.symmetric(5.0, 101)
    assert not grid.is_radial
    with pytest.raises(GridError):
        grid.with_origin()


def test_index_of():
    """Test nearest-node lookup and the off-grid error."""
    grid = Grid.symmetric(1.0, 21)
    assert grid.index_of(0.0) == 10
    assert grid.index_of(0.96) == 20
    with pytest.raises(GridError, match="outside the grid"):
        grid.index_of(1.5)


def test_ensure_same_grid():
    """Test grid compatibility checks."""
    a = Grid(0.0, 1.0, 11)
    assert ensure_same_grid(a, Grid(0.0, 1.0, 11)) == a
    with pytest.raises(GridError, match="Grid mismatch"):
        ensure_same_grid(a, Grid(0.0, 1.0, 12))


def test_non_finite_samples_are_rejected():
    """Test that NaN samples raise a numerical error."""
    grid = Grid(0.0, 1.0, 5)
    with pytest.raises(NumericalError, match="Non-finite sample"):
        GridFunction(grid, np.array([0.0, 1.0, np.nan, 1.0, 0.0]))


def test_wrong_sample_count():
    """Test the shape check of grid functions."""
    with pytest.raises(GridError):
        GridFunction(Grid(0.0, 1.0, 5), np.zeros(4))


def test_rescaled_keeps_value():
    """Test that the binary scale exponent is transparent to unscaled()."""
    grid = Grid(0.0, 1.0, 11)
    raw = np.exp(300.0 * grid.nodes)
    f = GridFunction.rescaled(grid, raw)
    assert 0.5 <= np.max(np.abs(f.values)) < 1.0
    assert f.log2_scale > 400
    np.testing.assert_allclose(f.unscaled(), raw, rtol=1e-14)


def test_sum_of_differently_scaled_functions():
    """Test alignment of scale exponents in addition."""
    grid = Grid(0.0, 1.0, 5)
    a = GridFunction(grid, np.ones(5), 3)
    b = GridFunction(grid, np.ones(5), 1)
    np.testing.assert_allclose((a + b).unscaled(), np.full(5, 10.0))
    np.testing.assert_allclose((a - b).unscaled(), np.full(5, 6.0))


def test_integral_simpson_is_exact_for_cubics():
    """Test Simpson quadrature on an even interval count."""
    grid = Grid(0.0, 1.0, 101)
    assert integral(grid.sample(lambda x: x**3)) == pytest.approx(0.25, abs=1e-14)


def test_integral_honours_scale():
    """Test that the scale exponent is applied to integrals."""
    grid = Grid(0.0, 1.0, 101)
    f = GridFunction(grid, np.ones(101), 4)
    assert integral(f) == pytest.approx(16.0)


def test_norm_and_normalized():
    """Test L2 normalization of a Gaussian."""
    grid = Grid.symmetric(10.0, 2001)
    f = grid.sample(lambda x: np.exp(-0.5 * x**2))
    assert f.norm() == pytest.approx(math.pi**0.25, rel=1e-10)
    assert f.normalized().norm() == pytest.approx(1.0, rel=1e-12)


def test_normalizing_zero_function_fails():
    """Test the zero-function guard."""
    with pytest.raises(NumericalError):
        Grid(0.0, 1.0, 5).constant(0.0).normalized()


def test_derivative_of_sine():
    """Test second-order differences including the ends."""
    grid = Grid(0.0, math.pi, 2001)
    d = derivative(grid.sample(np.sin))
    assert np.max(np.abs(d.values - np.cos(grid.nodes))) < 1e-5


def test_second_derivative_zero_padded():
    """Test the three-point stencil and its zero end nodes."""
    grid = Grid(-1.0, 1.0, 201)
    d2 = second_derivative(grid.sample(lambda x: x**2))
    assert d2[0] == 0.0
    assert d2[-1] == 0.0
    np.testing.assert_allclose(d2[1:-1], 2.0, rtol=1e-9)


def test_cumulative_integral_anchor():
    """Test that the prefix integral vanishes at its anchor."""
    grid = Grid.symmetric(1.0, 201)
    F = cumulative_integral(grid.sample(lambda x: 2.0 * x), anchor=0.0)
    np.testing.assert_allclose(F.values, grid.nodes**2, atol=1e-10)
    with pytest.raises(GridError):
        cumulative_integral(grid.constant(1.0), anchor=2.0)
