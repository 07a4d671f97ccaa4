"""Factorization, intertwining and eigensolver building blocks."""

from .darboux import ChainState, TransformResult, build_transform, chain_step, map_eigenfunction, missing_state
from .eigensolve import SpectrumReport, build_hamiltonian, isospectral_report, lowest_eigenvalues
from .families import Scheme, System
from .grid import Grid, GridFunction
from .riccati import BetaFunction, FactorizationScheme, Ordering, PotentialSpec

__all__ = [
    "BetaFunction",
    "ChainState",
    "FactorizationScheme",
    "Grid",
    "GridFunction",
    "Ordering",
    "PotentialSpec",
    "Scheme",
    "SpectrumReport",
    "System",
    "TransformResult",
    "build_hamiltonian",
    "build_transform",
    "chain_step",
    "isospectral_report",
    "lowest_eigenvalues",
    "map_eigenfunction",
    "missing_state",
]
