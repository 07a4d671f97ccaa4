"""Tests for confluent hypergeometric and Pochhammer helpers."""

import math

import numpy as np
import pytest

from isofactor.exceptions import ParameterError, PoleError
from isofactor.spectral.specfun import (
    HypergeometricParams,
    check_parameters,
    gamma_ratio,
    hyp1f1,
    hyp1f1_derivative,
    kummer_1f1,
    pochhammer,
)


def test_equal_parameters_give_exponential():
    """Test 1F1(a, a, z) = e^z on both sides of zero."""
    z = np.linspace(-6.0, 6.0, 25)
    np.testing.assert_allclose(hyp1f1(0.7, 0.7, z), np.exp(z), rtol=1e-12)


def test_closed_form_value():
    """Test 1F1(1, 2, z) = (e^z - 1) / z."""
    for z in (0.5, 3.0, 12.0):
        assert hyp1f1(1.0, 2.0, z)[0] == pytest.approx((math.exp(z) - 1.0) / z, rel=1e-12)


def test_kummer_transformation():
    """Test 1F1(a, b, z) = e^z 1F1(b - a, b, -z)."""
    a, b, z = 0.3, 1.7, 2.5
    direct = kummer_1f1(HypergeometricParams(a, b, z))
    transformed = math.exp(z) * kummer_1f1(HypergeometricParams(b - a, b, -z))
    assert direct == pytest.approx(transformed, rel=1e-12)


def test_terminating_series_is_polynomial():
    """Test that a non-positive integer a gives a polynomial."""
    # 1 - 2z/b + z^2/(b(b+1)) at b = 0.5, z = 1
    assert hyp1f1(-2.0, 0.5, 1.0)[0] == pytest.approx(1.0 - 4.0 + 1.0 / 0.75, rel=1e-14)
    assert hyp1f1(0.0, 3.0, 100.0)[0] == 1.0


def test_terminating_before_denominator_pole():
    """Test that b = -2 is fine when the series stops first."""
    check_parameters(-1.0, -2.0)
    assert hyp1f1(-1.0, -2.0, 4.0)[0] == pytest.approx(3.0)


@pytest.mark.parametrize(("a", "b"), [(0.5, -2.0), (-2.0, -2.0), (1.0, 0.0)])
def test_denominator_pole_rejected(a, b):
    """Test that series reaching a zero denominator are rejected."""
    with pytest.raises(ParameterError, match="undefined"):
        check_parameters(a, b)
    with pytest.raises(ParameterError):
        HypergeometricParams(a, b, 1.0)


def test_derivative_relation():
    """Test d/dz 1F1(a, a, z) = e^z and the a = 0 shortcut."""
    z = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(hyp1f1_derivative(1.5, 1.5, z), np.exp(z), rtol=1e-12)
    np.testing.assert_array_equal(hyp1f1_derivative(0.0, 2.0, z), np.zeros(3))


def test_pochhammer():
    """Test rising factorials for integral and fractional arguments."""
    assert pochhammer(3, 2) == 12.0
    assert pochhammer(0.5, 3) == pytest.approx(1.875)
    assert pochhammer(-2, 2) == 2.0
    assert pochhammer(4.2, 0) == 1.0
    with pytest.raises(ParameterError):
        pochhammer(1.0, -1)


def test_gamma_ratio():
    """Test Gamma(z)/Gamma(z+m) and the pole guard."""
    assert gamma_ratio(-2.0, 2) == pytest.approx(0.5)
    assert gamma_ratio(2.5, 1) == pytest.approx(1.0 / 2.5)
    assert gamma_ratio(-4.0, 0) == 1.0
    with pytest.raises(PoleError, match="pole"):
        gamma_ratio(-2.0, 3)
