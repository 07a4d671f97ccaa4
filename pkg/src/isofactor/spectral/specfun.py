"""Confluent hypergeometric function and Gamma ratios for seed solutions.

``1F1(a, b, z)`` is summed as a power series. For ``z < 0`` the Kummer
transformation ``1F1(a, b, z) = e^z 1F1(b - a, b, -z)`` keeps all terms of the
same sign. When ``a`` is a non-positive integer the series terminates and is
summed exactly, which also covers non-positive integer ``b`` as long as the
series stops before the denominator pole.

Gamma ratios are always formed from Pochhammer products, so Gamma is never
evaluated at one of its poles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from isofactor.exceptions import ConvergenceError, ParameterError, PoleError

logger = logging.getLogger(__name__)

MAX_TERMS = 500
TAIL_TOLERANCE = 1e-16
INTEGER_TOLERANCE = 1e-12


def _nonpositive_integer(value: float) -> int | None:
    """Return ``value`` as an int if it is a non-positive integer, else None."""
    nearest = round(value)
    if abs(value - nearest) < INTEGER_TOLERANCE and nearest <= 0:
        return int(nearest)
    return None


@dataclass(frozen=True)
class HypergeometricParams:
    """Arguments of ``1F1(a, b, z)``."""

    a: float
    b: float
    z: float

    def __post_init__(self) -> None:
        check_parameters(self.a, self.b)


def check_parameters(a: float, b: float) -> None:
    """Reject ``b`` at a denominator pole that the series would reach."""
    b_int = _nonpositive_integer(b)
    if b_int is None:
        return
    a_int = _nonpositive_integer(a)
    if a_int is None or a_int <= b_int:
        raise ParameterError(
            f"1F1({a}, {b}, z) is undefined: b is a non-positive integer and the series does not "
            f"terminate before the pole (need integer a with 0 >= a > b)"
        )


def _terminating(a_int: int, b: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
    total = np.ones_like(z)
    term = np.ones_like(z)
    for n in range(-a_int):
        term = term * (a_int + n) / (b + n) * z / (n + 1)
        total = total + term
    return total


def _series(a: float, b: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
    """Power series for ``z >= 0``."""
    a_int = _nonpositive_integer(a)
    if a_int is not None:
        return _terminating(a_int, b, z)

    total = np.ones_like(z)
    term = np.ones_like(z)
    z_peak = float(np.max(z)) if z.size else 0.0
    for n in range(MAX_TERMS):
        term = term * (a + n) / (b + n) * z / (n + 1)
        total = total + term
        past_peak = n + 1 > z_peak and n + 1 > -a
        if past_peak and np.all(np.abs(term) <= TAIL_TOLERANCE * np.abs(total)):
            logger.debug("1F1(%s, %s, .) converged after %d terms", a, b, n + 1)
            return total
    raise ConvergenceError(f"1F1({a}, {b}, z) did not converge within {MAX_TERMS} terms (max z={z_peak:.6g})")


def hyp1f1(a: float, b: float, z: ArrayLike) -> NDArray[np.float64]:
    """Vectorized ``1F1(a, b, z)`` for real ``z``."""
    check_parameters(a, b)
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    a_int = _nonpositive_integer(a)
    if a_int is not None:
        return _terminating(a_int, b, z_arr)

    out = np.empty_like(z_arr)
    positive = z_arr >= 0.0
    if np.any(positive):
        out[positive] = _series(a, b, z_arr[positive])
    if np.any(~positive):
        w = -z_arr[~positive]
        out[~positive] = np.exp(-w) * _series(b - a, b, w)
    return out


def kummer_1f1(p: HypergeometricParams) -> float:
    """Scalar ``1F1(a, b, z)``."""
    return float(hyp1f1(p.a, p.b, p.z)[0])


def hyp1f1_derivative(a: float, b: float, z: ArrayLike) -> NDArray[np.float64]:
    """``d/dz 1F1(a, b, z) = (a / b) 1F1(a + 1, b + 1, z)``."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    if a == 0.0:
        return np.zeros_like(z_arr)
    return (a / b) * hyp1f1(a + 1.0, b + 1.0, z_arr)


def pochhammer(z: float, m: int) -> float:
    """Rising factorial ``z (z + 1) ... (z + m - 1)``; exact for integral ``z``."""
    if m < 0:
        raise ParameterError(f"Pochhammer length must be non-negative, got {m}")
    if abs(z - round(z)) < INTEGER_TOLERANCE:
        start = round(z)
        return float(math.prod(range(start, start + m)))
    return math.prod(z + j for j in range(m))


def gamma_ratio(z: float, m: int) -> float:
    """``Gamma(z) / Gamma(z + m) = 1 / (z)_m`` without evaluating Gamma.

    Raises:
        PoleError: if some factor ``z + j`` (``0 <= j < m``) is zero.
    """
    if m < 0:
        raise ParameterError(f"gamma_ratio needs m >= 0, got {m}")
    for j in range(m):
        if abs(z + j) < INTEGER_TOLERANCE:
            raise PoleError(f"Gamma({z})/Gamma({z + m}) hits a pole: factor z+{j} vanishes")
    return 1.0 / pochhammer(z, m)
