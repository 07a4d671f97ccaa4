"""Tests for factorization operators, null states and the hydrogen ladder."""

import numpy as np
import pytest

from isofactor.exceptions import ParameterError
from isofactor.spectral.eigensolve import build_hamiltonian, lowest_eigenpairs
from isofactor.spectral.factorize import (
    LadderContext,
    LadderDirection,
    NullKernel,
    apply_annihilation,
    apply_creation,
    apply_hamiltonian,
    cosine_similarity,
    factorized_hamiltonian,
    hydrogen_ladder,
    is_square_integrable,
    ladder_beta,
    ladder_closure,
    null_state,
    oscillator_commutators,
)
from isofactor.spectral.families import System, default_grid, predicted_levels, sdih_hydrogen
from isofactor.spectral.grid import Grid
from isofactor.spectral.riccati import PotentialSpec, particular_scheme


@pytest.fixture
def oscillator_grid():
    return Grid.symmetric(8.0, 4001)


@pytest.fixture
def gaussian(oscillator_grid):
    return oscillator_grid.sample(lambda x: np.exp(-0.5 * x**2)).normalized()


def test_annihilation_kills_ground_state(gaussian):
    """Test A exp(-x^2/2) = 0 for beta = x."""
    beta = particular_scheme(PotentialSpec.oscillator()).beta
    assert apply_annihilation(beta, gaussian).norm() < 1e-4


def test_creation_raises_ground_state(oscillator_grid, gaussian):
    """Test A+ exp(-x^2/2) = 2x exp(-x^2/2)."""
    beta = particular_scheme(PotentialSpec.oscillator()).beta
    raised = apply_creation(beta, gaussian)
    expected = 2.0 * oscillator_grid.nodes * gaussian.values
    assert np.max(np.abs(raised.values - expected)) < 1e-4


def test_factorized_hamiltonian_matches_hamiltonian(oscillator_grid):
    """Test (A+A + 1) f = (-d^2 + x^2) f, and the partner product against x^2 + 2."""
    f = oscillator_grid.sample(lambda x: np.sin(x) * np.exp(-0.25 * x**2))
    scheme = particular_scheme(PotentialSpec.oscillator())
    source = PotentialSpec.oscillator().sample(oscillator_grid)
    target = PotentialSpec.oscillator_shifted().sample(oscillator_grid)
    direct = factorized_hamiltonian(scheme, f)
    np.testing.assert_allclose(direct.values, apply_hamiltonian(source, f).values, atol=1e-9)
    partner = factorized_hamiltonian(scheme, f, partner=True)
    np.testing.assert_allclose(partner.values, apply_hamiltonian(target, f).values, atol=1e-9)
    assert direct.values[0] == 0.0
    assert direct.values[-1] == 0.0


def test_null_states_of_oscillator(oscillator_grid):
    """Test that exp(-x^2/2) is normalizable and exp(+x^2/2) is not."""
    beta = particular_scheme(PotentialSpec.oscillator()).beta
    kernel_a = null_state(beta, NullKernel.ANNIHILATION_KERNEL, oscillator_grid)
    kernel_ad = null_state(beta, NullKernel.CREATION_KERNEL, oscillator_grid)
    assert kernel_a.square_integrable
    assert not kernel_ad.square_integrable
    assert float(np.max(kernel_a.function.values)) == pytest.approx(1.0)


def test_is_square_integrable_radial():
    """Test the radial criterion on r^2 exp(-r/2)."""
    grid = Grid.radial(60.0, 12000)
    assert is_square_integrable(grid.sample(lambda r: r**2 * np.exp(-0.5 * r)))
    assert not is_square_integrable(grid.sample(lambda r: r**-2 * np.exp(0.5 * r)))
    assert not is_square_integrable(grid.constant(0.0))


@pytest.mark.parametrize("r_max, n", [(60.0, 12000), (135.0, 27000), (20.0, 400)])
def test_is_square_integrable_radial_independent_of_node_count(r_max, n):
    """Test r exp(-r), peaked at r = 1, on short, widened and coarse grids."""
    grid = Grid.radial(r_max, n)
    assert is_square_integrable(grid.sample(lambda r: r * np.exp(-r)))
    assert not is_square_integrable(grid.sample(lambda r: np.exp(-r) / r))


def test_sdih_hydrogen_adds_level_on_widened_grid():
    """Test that the l = 1 partner gains -1 on the grid widened for five levels."""
    result = sdih_hydrogen(1, Grid.radial(135.0, 27000))
    assert result.missing.square_integrable
    assert result.adds_level
    assert predicted_levels(result, 3)[0] == pytest.approx(-1.0)


def test_ladder_beta():
    """Test beta_j and its energy."""
    grid = Grid.radial(10.0, 100)
    beta = ladder_beta(2)
    assert beta.epsilon == pytest.approx(-0.25)
    np.testing.assert_allclose(beta.values(grid).values, 2.0 / grid.nodes - 0.5)
    with pytest.raises(ParameterError):
        ladder_beta(0)


def test_ladder_context():
    """Test target sectors and operator indices."""
    up = LadderContext(1, LadderDirection.RAISE_L)
    down = LadderContext(2, LadderDirection.LOWER_L)
    assert (up.target_l, up.operator_index) == (2, 2)
    assert (down.target_l, down.operator_index) == (1, 2)
    with pytest.raises(ParameterError):
        LadderContext(0, LadderDirection.LOWER_L)
    with pytest.raises(ParameterError):
        LadderContext(-1, LadderDirection.RAISE_L)


def test_raising_annihilates_lowest_state():
    """Test a_2+ (r^2 exp(-r/2)) = 0: the lowest l = 1 state has no l = 2 partner."""
    grid = Grid.radial(60.0, 30000)
    psi = grid.sample(lambda r: r**2 * np.exp(-0.5 * r)).normalized()
    result = hydrogen_ladder(LadderContext(1, LadderDirection.RAISE_L, threshold=1e-3), psi, -0.25)
    assert result.annihilated
    assert result.rayleigh_quotient is None


def test_ladder_round_trip_and_rayleigh():
    """Test raising then lowering an excited l = 1 state, and the raised energy."""
    grid = default_grid(System.HYDROGEN, 1)
    potential = PotentialSpec.hydrogen(1).sample(grid)
    energies, states = lowest_eigenpairs(build_hamiltonian(potential), 3)
    assert 1.0 - ladder_closure(1, states[2], energies[2]) < 1e-5

    raised = hydrogen_ladder(LadderContext(1, LadderDirection.RAISE_L), states[1], energies[1])
    assert not raised.annihilated
    assert raised.rayleigh_quotient == pytest.approx(energies[1], abs=1e-3)


def test_cosine_similarity(gaussian):
    """Test that a function is parallel to its own multiple."""
    assert cosine_similarity(gaussian, -3.0 * gaussian) == pytest.approx(1.0)


def test_oscillator_commutators(gaussian):
    """Test [a, a+] = 2 and [H, a+] = 2 a+ on the ground state."""
    number, hamiltonian = oscillator_commutators(gaussian)
    assert number < 1e-4
    assert hamiltonian < 1e-4
