"""Exception hierarchy for isofactor.

Every error carries the process exit code the CLI reports for it: 2 for
invalid input (bad parameters, domains, grids) and 3 for numerical failures
(singular families, non-convergence, degenerate maps).
"""

from __future__ import annotations


class IsofactorError(Exception):
    """Base class for all isofactor errors."""

    exit_code: int = 3


class DomainValidationError(IsofactorError, ValueError):
    """A family parameter lies outside its singularity-free domain."""

    exit_code = 2

    def __init__(self, message: str, bound: str | None = None) -> None:
        super().__init__(message)
        self.bound = bound


class ParameterError(IsofactorError, ValueError):
    """Malformed or unsupported arguments."""

    exit_code = 2


class PoleError(ParameterError):
    """A Pochhammer factor vanishes, so the Gamma ratio sits on a pole."""


class EqualEnergyError(ParameterError):
    """Two consecutive factorization energies coincide."""


class UnsupportedPotentialError(ParameterError):
    """No catalog entry exists for the requested potential."""


class GridError(IsofactorError, ValueError):
    """Grid invariants violated, grids mismatched or a point lies off the grid."""

    exit_code = 2


class NumericalError(IsofactorError, ArithmeticError):
    """Base class for numerical failures."""

    exit_code = 3


class SingularFamilyError(NumericalError):
    """A denominator or seed changes sign (or vanishes) on the working grid."""

    def __init__(self, message: str, node: int | None = None, x: float | None = None) -> None:
        if node is not None and x is not None:
            message = f"{message} (node {node}, x={x:.6g})"
        super().__init__(message)
        self.node = node
        self.x = x


class ChainSingularityError(SingularFamilyError):
    """The two-energy chain formula divides by zero on the grid."""


class NodeZeroError(NumericalError):
    """A function expected to be nodeless vanishes at a grid node."""


class ConvergenceError(NumericalError):
    """An iterative evaluation did not converge within its cap."""


class DegenerateMapError(NumericalError):
    """An eigenfunction is mapped at (or numerically at) the factorization energy."""


class ImaginaryNormalizationError(NumericalError):
    """The (E - eps)^(-1/2) normalization would be imaginary."""


class BracketError(NumericalError):
    """An energy bracket holds no level or more than one level."""
