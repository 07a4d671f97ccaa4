"""Construction under verification, with spectra computed on first use."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from isofactor.exceptions import ParameterError
from isofactor.spectral.darboux import DEGENERATE_GAP, ChainState, TransformResult, map_eigenfunction
from isofactor.spectral.eigensolve import build_hamiltonian, lowest_eigenpairs, numerov_levels, widen_until_converged
from isofactor.spectral.factorize import NullState
from isofactor.spectral.families import (
    Scheme,
    System,
    chain_levels,
    generalized_hydrogen,
    generalized_oscillator,
    mielnik_hydrogen,
    mielnik_oscillator,
    oscillator_chain,
    predicted_levels,
    require_valid_hydrogen,
    sdih_hydrogen,
    sdih_oscillator,
)
from isofactor.spectral.grid import Grid, GridFunction
from isofactor.spectral.riccati import FactorizationScheme, Ordering, PotentialSpec

from .base import SampleTable
from .config import RunConfig

logger = logging.getLogger(__name__)

Construction = TransformResult | ChainState


@dataclass(frozen=True)
class Step:
    """One factorization ``V -> V_target`` with its scheme; ``label`` names chain steps."""

    label: str
    source: GridFunction
    target: GridFunction
    scheme: FactorizationScheme
    missing: NullState


def _working_grid(config: RunConfig) -> Grid:
    """Configured grid; default radial grids grow until the highest requested state has decayed."""
    grid = config.resolved_grid()
    if config.system is System.HYDROGEN and config.grid.x_max is None:
        grid = widen_until_converged(PotentialSpec.hydrogen(config.l).sample, grid, config.levels)
    return grid


def build_construction(config: RunConfig, grid: Grid | None = None) -> Construction:
    """Build the family (or chain) selected by the configuration."""
    system, scheme = config.system, config.scheme
    if system is System.HYDROGEN:
        require_valid_hydrogen(scheme, config.l, config.k, config.lambda_)
    grid = grid or _working_grid(config)
    logger.info(
        "Building %s/%s on [%g, %g] with %d nodes",
        system.value,
        scheme.value,
        grid.x_min,
        grid.x_max,
        grid.n_points,
        extra={"system": system.value, "scheme": scheme.value},
    )
    if scheme is Scheme.CHAIN:
        return oscillator_chain(config.epsilons, grid)
    if system is System.OSCILLATOR:
        if scheme is Scheme.SDIH:
            return sdih_oscillator(grid)
        if scheme is Scheme.MIELNIK:
            return mielnik_oscillator(config.gamma, grid)
        k = config.k if config.epsilon is None else None
        return generalized_oscillator(config.nu, grid, epsilon=config.epsilon, k=k)
    if scheme is Scheme.SDIH:
        return sdih_hydrogen(config.l, grid)
    if scheme is Scheme.MIELNIK:
        return mielnik_hydrogen(config.l, config.lambda_, grid)
    if scheme is Scheme.GENERALIZED:
        return generalized_hydrogen(config.l, config.k, config.lambda_, grid)
    raise ParameterError(f"Unsupported combination {system.value}/{scheme.value}")


@dataclass(frozen=True)
class MappedState:
    energy: float
    source: GridFunction
    image: GridFunction


class VerificationContext:
    """Shared, lazily evaluated data for all checks of one run."""

    def __init__(self, config: RunConfig, construction: Construction | None = None):
        self.config = config
        self.construction = construction if construction is not None else build_construction(config)
        self.levels = config.levels
        self._step_pairs: dict[str, tuple[list[float], list[GridFunction]]] = {}

    @property
    def transform(self) -> TransformResult | None:
        return self.construction if isinstance(self.construction, TransformResult) else None

    @property
    def chain(self) -> ChainState | None:
        return self.construction if isinstance(self.construction, ChainState) else None

    @property
    def grid(self) -> Grid:
        return self.construction.grid

    @property
    def source_potential(self) -> GridFunction:
        if self.transform is not None:
            return self.transform.source_potential
        assert self.chain is not None
        return self.chain.initial

    @property
    def target_potential(self) -> GridFunction:
        if self.transform is not None:
            return self.transform.target_potential
        assert self.chain is not None
        return self.chain.potential

    @cached_property
    def scheme(self) -> FactorizationScheme | None:
        """Factorization under test, with ``beta`` shifted by the configured perturbation."""
        if self.transform is None:
            return None
        scheme = self.transform.scheme
        if self.config.perturb_beta:
            logger.warning("Perturbing beta by %g for a negative control", self.config.perturb_beta)
            return FactorizationScheme(scheme.beta.shifted(self.config.perturb_beta), scheme.ordering)
        return scheme

    @cached_property
    def source_pairs(self) -> tuple[list[float], list[GridFunction]]:
        return lowest_eigenpairs(build_hamiltonian(self.source_potential), self.levels)

    @cached_property
    def target_pairs(self) -> tuple[list[float], list[GridFunction]]:
        return lowest_eigenpairs(build_hamiltonian(self.target_potential), self.levels)

    @cached_property
    def target_numerov(self) -> list[float]:
        return numerov_levels(self.target_potential, self.target_pairs[0])

    @cached_property
    def predicted(self) -> list[float]:
        if self.transform is not None:
            return predicted_levels(self.transform, self.levels)
        assert self.chain is not None
        return chain_levels(self.chain, self.levels)

    @cached_property
    def mapped(self) -> list[MappedState]:
        """Source eigenpairs clearly above ``eps`` carried to the target."""
        scheme = self.scheme
        if scheme is None:
            return []
        out: list[MappedState] = []
        for energy, psi in zip(*self.source_pairs, strict=True):
            if energy - scheme.epsilon <= max(DEGENERATE_GAP, self.config.spectrum_tolerance()):
                continue
            out.append(MappedState(energy, psi, map_eigenfunction(scheme, psi, energy)))
        return out

    def describe(self) -> dict[str, object]:
        """Family data echoed into reports."""
        if self.transform is not None:
            t = self.transform
            return {
                "label": t.label,
                "epsilon": t.epsilon,
                "parameters": dict(sorted(t.family_params.items())),
                "ordering": t.scheme.ordering.value,
                "missing_state_normalizable": t.adds_level,
            }
        assert self.chain is not None
        return {
            "label": "oscillator chain",
            "epsilons": list(self.chain.epsilons),
            "missing_state_normalizable": [link.missing.square_integrable for link in self.chain.steps],
        }

    def factorizations(self) -> list[Step]:
        """Every first-order step of the construction with its two potentials."""
        if self.transform is not None:
            assert self.scheme is not None
            return [Step("", self.source_potential, self.target_potential, self.scheme, self.transform.missing)]
        assert self.chain is not None
        return [
            Step(
                f"step{n}",
                self.chain.potential_before(n),
                link.potential,
                FactorizationScheme(link.beta, Ordering.DAGGER_FIRST),
                link.missing,
            )
            for n, link in enumerate(self.chain.steps, start=1)
        ]

    def missing(self) -> NullState:
        if self.transform is not None:
            return self.transform.missing
        assert self.chain is not None
        return self.chain.steps[-1].missing

    def samples(self) -> SampleTable:
        """Columns written to the CSV: potentials, missing state and eigenfunctions of the target."""
        table = SampleTable()
        table.add("x", np.asarray(self.grid.nodes))
        table.add("V", self.source_potential.unscaled())
        table.add("V_transformed", self.target_potential.unscaled())
        table.add("missing_state", self.missing().function.values)
        if self.transform is not None:
            states = [m.image for m in self.mapped]
        else:
            states = self.target_pairs[1]
        for index, psi in enumerate(states):
            table.add(f"psi_{index}", psi.values)
        return table

    def step_pairs(self, step: Step) -> tuple[list[float], list[GridFunction]]:
        """Eigenpairs of the potential a step factorizes."""
        if self.transform is not None:
            return self.source_pairs
        if step.label not in self._step_pairs:
            self._step_pairs[step.label] = lowest_eigenpairs(build_hamiltonian(step.source), self.levels)
        return self._step_pairs[step.label]
