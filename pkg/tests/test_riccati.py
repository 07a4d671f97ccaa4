"""Tests for superpotentials, general Riccati solutions and residuals."""

import numpy as np
import pytest

from isofactor.exceptions import (
    NodeZeroError,
    ParameterError,
    SingularFamilyError,
    UnsupportedPotentialError,
)
from isofactor.spectral.grid import Grid
from isofactor.spectral.riccati import (
    BetaForm,
    BetaFunction,
    DerivativeMode,
    GeneralForm,
    Ordering,
    PotentialSpec,
    beta_from_u,
    general_beta,
    particular_beta,
    particular_scheme,
    riccati_residual,
    u_from_beta,
)


def _max_abs(f):
    return float(np.max(np.abs(f.values)))


def test_ordering_signs():
    """Test the Riccati and partner signs of both orderings."""
    assert Ordering.DAGGER_FIRST.riccati_sign == -1
    assert Ordering.DAGGER_FIRST.partner_sign == 1
    assert Ordering.PLAIN_FIRST.riccati_sign == 1
    assert Ordering.PLAIN_FIRST.partner_sign == -1
    assert Ordering.DAGGER_FIRST.reversed is Ordering.PLAIN_FIRST
    assert GeneralForm.DIRECT.ordering is Ordering.DAGGER_FIRST
    assert GeneralForm.REVERSED.ordering is Ordering.PLAIN_FIRST


def test_catalog_oscillator():
    """Test beta = x at eps = 1 for x^2."""
    grid = Grid.symmetric(6.0, 601)
    scheme = particular_scheme(PotentialSpec.oscillator())
    assert scheme.epsilon == 1.0
    assert scheme.ordering is Ordering.DAGGER_FIRST
    residual = riccati_residual(scheme.beta, PotentialSpec.oscillator(), grid, scheme.ordering)
    assert _max_abs(residual) < 1e-12


def test_catalog_shifted_oscillator_is_plain_first():
    """Test alpha = x for x^2 + 2 in the plain-first ordering."""
    grid = Grid.symmetric(6.0, 601)
    spec = PotentialSpec.oscillator_shifted()
    scheme = particular_scheme(spec)
    assert scheme.ordering is Ordering.PLAIN_FIRST
    assert scheme.epsilon == 1.0
    assert _max_abs(riccati_residual(scheme.beta, spec, grid, Ordering.PLAIN_FIRST)) < 1e-12
    # the same beta does not solve the dagger-first equation
    assert _max_abs(riccati_residual(scheme.beta, spec, grid, Ordering.DAGGER_FIRST)) == pytest.approx(2.0)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_catalog_hydrogen(l):
    """Test beta_l = l/r - 1/l at eps = -1/l^2."""
    grid = Grid.radial(40.0, 4000)
    spec = PotentialSpec.hydrogen(l)
    beta = particular_beta(spec)
    assert beta.epsilon == pytest.approx(-1.0 / l**2)
    scale = float(np.max(np.abs(spec.sample(grid).values)))
    assert _max_abs(riccati_residual(beta, spec, grid)) < 1e-12 * scale


def test_numeric_derivative_mode():
    """Test that numeric differentiation approximates the analytic residual."""
    grid = Grid.radial(40.0, 8000)
    spec = PotentialSpec.hydrogen(1)
    beta = particular_beta(spec)
    residual = riccati_residual(beta, spec, grid, mode=DerivativeMode.NUMERIC)
    away_from_origin = residual.values[grid.nodes >= 1.0]
    assert np.max(np.abs(away_from_origin)) < 1e-4


def test_hydrogen_spec_requires_positive_l():
    """Test potential spec validation."""
    with pytest.raises(ParameterError, match="l >= 1"):
        PotentialSpec.hydrogen(0)


def test_tabulated_potential_has_no_catalog_entry():
    """Test the unsupported-potential error."""
    grid = Grid.symmetric(1.0, 11)
    spec = PotentialSpec.tabulated(grid.sample(lambda x: x**4))
    with pytest.raises(UnsupportedPotentialError):
        particular_scheme(spec)
    assert spec.sample(grid) is spec.table


def test_sampled_beta_needs_samples():
    """Test beta form validation."""
    with pytest.raises(ParameterError):
        BetaFunction(1.0, BetaForm.SAMPLED, "x")
    with pytest.raises(ParameterError):
        BetaFunction(1.0, BetaForm.CLOSED_FORM, "x")
    with pytest.raises(ParameterError, match="finite"):
        BetaFunction.closed(float("nan"), "x", value=lambda x: x)


def test_direct_general_solution_solves_riccati():
    """Test the direct one-parameter family for hydrogen."""
    grid = Grid.radial(60.0, 12000)
    spec = PotentialSpec.hydrogen(1)
    beta = general_beta(particular_beta(spec), 1.0, grid, GeneralForm.DIRECT)
    assert beta.form is BetaForm.SAMPLED
    assert beta.parameters["lambda"] == 1.0
    scale = float(np.max(np.abs(spec.sample(grid).values)))
    assert _max_abs(riccati_residual(beta, spec, grid)) < 1e-9 * scale


def test_reversed_general_solution_solves_riccati():
    """Test the reversed one-parameter family for x^2 + 2."""
    grid = Grid.symmetric(8.0, 4001)
    spec = PotentialSpec.oscillator_shifted()
    beta = general_beta(particular_beta(spec), 2.0, grid, GeneralForm.REVERSED)
    assert beta.parameters["gamma"] == 2.0
    residual = riccati_residual(beta, spec, grid, Ordering.PLAIN_FIRST)
    assert _max_abs(residual) < 1e-9 * 66.0


def test_direct_general_solution_singular_inside_domain_gap():
    """Test that 0 < lambda < bound makes the denominator vanish."""
    grid = Grid.radial(20.0, 2000)
    beta_p = particular_beta(PotentialSpec.hydrogen(1))
    with pytest.raises(SingularFamilyError, match="crosses zero") as exc_info:
        general_beta(beta_p, 0.1, grid, GeneralForm.DIRECT)
    assert exc_info.value.x is not None


def test_beta_from_gaussian():
    """Test beta = -u'/u for u = exp(-x^2/2)."""
    grid = Grid.symmetric(5.0, 2001)
    beta = beta_from_u(grid.sample(lambda x: np.exp(-0.5 * x**2)), epsilon=1.0)
    values = beta.values(grid).values
    assert np.max(np.abs(values[1:-1] - grid.nodes[1:-1])) < 1e-3
    u = u_from_beta(beta, grid)
    assert float(np.max(u.values)) == pytest.approx(1.0)
    np.testing.assert_allclose(u.values, np.exp(-0.5 * grid.nodes**2), atol=1e-9)


def test_beta_from_function_with_node():
    """Test that u must be nodeless."""
    grid = Grid.symmetric(2.0, 101)
    with pytest.raises(NodeZeroError):
        beta_from_u(grid.sample(np.sin))


def test_shifted_beta_breaks_riccati():
    """Test the negative-control shift of beta."""
    grid = Grid.symmetric(4.0, 401)
    spec = PotentialSpec.oscillator()
    beta = particular_beta(spec)
    shifted = beta.shifted(0.01)
    assert shifted.epsilon == beta.epsilon
    np.testing.assert_allclose(shifted.values(grid).values, grid.nodes + 0.01)
    residual = riccati_residual(shifted, spec, grid)
    # (x + d)^2 - x^2 = 2 d x + d^2
    assert _max_abs(residual) == pytest.approx(0.08 + 1e-4, rel=1e-9)
    assert beta.shifted(0.0) is beta
