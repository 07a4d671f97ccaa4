"""Intertwining transformations: partner potentials, mapped states, missing states, chains."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType

import numpy as np

from isofactor.exceptions import (
    ChainSingularityError,
    DegenerateMapError,
    EqualEnergyError,
    GridError,
    ImaginaryNormalizationError,
    NumericalError,
    ParameterError,
)

from .factorize import NullKernel, NullState, apply_annihilation, apply_creation, null_state
from .grid import FloatArray, Grid, GridFunction, ensure_same_grid
from .riccati import BetaFunction, FactorizationScheme, Ordering, PotentialSpec, riccati_residual
from .seeds import SeedSolution

logger = logging.getLogger(__name__)

DEGENERATE_GAP = 1e-10
RICCATI_GATE = 1e-6


class Direction(str, Enum):
    """``ADD``: ``V + 2 beta'``; ``SUBTRACT``: ``V - 2 beta'``."""

    ADD = "add"
    SUBTRACT = "subtract"

    @classmethod
    def for_ordering(cls, ordering: Ordering) -> Direction:
        return cls.ADD if ordering is Ordering.DAGGER_FIRST else cls.SUBTRACT


def _source_samples(source: PotentialSpec | GridFunction, beta: BetaFunction, grid: Grid | None) -> GridFunction:
    if isinstance(source, GridFunction):
        return source
    grid = grid or beta.grid
    if grid is None:
        raise GridError("A grid is required to sample a closed-form superpotential")
    return source.sample(grid)


def transform_potential(
    source: PotentialSpec | GridFunction,
    beta: BetaFunction,
    direction: Direction,
    grid: Grid | None = None,
) -> GridFunction:
    """Partner potential ``V +- 2 beta'`` sampled on the grid."""
    v = _source_samples(source, beta, grid)
    dbeta = beta.derivative(v.grid).values
    sign = 2.0 if direction is Direction.ADD else -2.0
    return GridFunction(v.grid, v.unscaled() + sign * dbeta)


def map_eigenfunction(
    scheme: FactorizationScheme, psi: GridFunction, E: float, renormalize: bool = True
) -> GridFunction:
    """``(E - eps)^{-1/2} L psi`` with ``L = A`` (dagger-first) or ``A+`` (plain-first).

    Raises:
        DegenerateMapError: if ``E`` coincides with ``eps``.
        ImaginaryNormalizationError: if ``E < eps``.
    """
    gap = E - scheme.epsilon
    if gap < -DEGENERATE_GAP:
        raise ImaginaryNormalizationError(f"E={E:g} lies below the factorization energy {scheme.epsilon:g}")
    if gap <= DEGENERATE_GAP:
        raise DegenerateMapError(f"E={E:g} equals the factorization energy; the image has zero norm")
    if scheme.ordering is Ordering.DAGGER_FIRST:
        image = apply_annihilation(scheme.beta, psi)
    else:
        image = apply_creation(scheme.beta, psi)
    image = image * (1.0 / math.sqrt(gap))
    if not renormalize:
        return image
    logger.debug("Mapped state at E=%g: norm before renormalization %.6g", E, image.norm() / psi.norm())
    return image.normalized()


@dataclass(frozen=True)
class TransformResult:
    """A completed first-order transformation of a source potential."""

    source: PotentialSpec
    scheme: FactorizationScheme
    source_potential: GridFunction
    target_potential: GridFunction
    missing: NullState
    family_params: Mapping[str, float] = field(default_factory=lambda: MappingProxyType({}))
    label: str = ""

    def __post_init__(self) -> None:
        ensure_same_grid(self.source_potential.grid, self.target_potential.grid)
        object.__setattr__(self, "family_params", MappingProxyType(dict(self.family_params)))

    @property
    def grid(self) -> Grid:
        return self.target_potential.grid

    @property
    def epsilon(self) -> float:
        return self.scheme.epsilon

    @property
    def beta(self) -> BetaFunction:
        return self.scheme.beta

    @property
    def adds_level(self) -> bool:
        """Whether the target gains the level ``eps`` (otherwise a source level at ``eps`` disappears)."""
        return self.missing.square_integrable

    def with_beta(self, beta: BetaFunction) -> TransformResult:
        """Same target potential with a replaced superpotential (negative controls)."""
        return replace(self, scheme=FactorizationScheme(beta, self.scheme.ordering))


def missing_state(transform: TransformResult) -> NullState:
    """Kernel of the target factor: ``exp(+int beta)`` (dagger-first) or ``exp(-int beta)``.

    The function is unit-normalized when it is square-integrable.
    """
    which = (
        NullKernel.CREATION_KERNEL
        if transform.scheme.ordering is Ordering.DAGGER_FIRST
        else NullKernel.ANNIHILATION_KERNEL
    )
    state = null_state(transform.beta, which, transform.grid)
    if state.square_integrable:
        return NullState(state.function.normalized(), True)
    return state


def build_transform(
    source: PotentialSpec,
    scheme: FactorizationScheme,
    grid: Grid,
    label: str = "",
    **family_params: float,
) -> TransformResult:
    """Sample the source, build the partner potential and attach the missing state."""
    v = source.sample(grid)
    target = transform_potential(v, scheme.beta, Direction.for_ordering(scheme.ordering))
    provisional = TransformResult(source, scheme, v, target, NullState(v, False), family_params, label)
    result = replace(provisional, missing=missing_state(provisional))
    logger.info(
        "Built %s: eps=%g, missing state %s",
        label or scheme.beta.descriptor,
        scheme.epsilon,
        "normalizable" if result.adds_level else "not normalizable",
        extra={"family": label, **family_params},
    )
    return result


@dataclass(frozen=True)
class ChainLink:
    """One step: ``beta_n`` at ``eps_n`` and the potential ``V_n`` it produced."""

    epsilon: float
    beta: BetaFunction
    potential: GridFunction
    missing: NullState


@dataclass(frozen=True)
class ChainState:
    """Immutable sequence of dagger-first steps starting from ``initial``."""

    initial: GridFunction
    steps: tuple[ChainLink, ...] = ()

    @classmethod
    def start(cls, potential: GridFunction) -> ChainState:
        return cls(potential)

    @property
    def grid(self) -> Grid:
        return self.initial.grid

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def potential(self) -> GridFunction:
        return self.steps[-1].potential if self.steps else self.initial

    @property
    def epsilons(self) -> tuple[float, ...]:
        return tuple(link.epsilon for link in self.steps)

    def potential_before(self, n: int) -> GridFunction:
        """``V_{n-1}``: the potential factorized by step ``n`` (1-based)."""
        return self.steps[n - 2].potential if n >= 2 else self.initial

    def added_levels(self) -> list[float]:
        return [link.epsilon for link in self.steps if link.missing.square_integrable]


def lift_seed(state: ChainState, seed: SeedSolution, through: int) -> SeedSolution:
    """Carry a seed of the initial potential through the first ``through`` steps.

    Step ``j`` maps a solution ``u`` of ``V_{j-1}`` to ``A_j u = u' + beta_j u``,
    a solution of ``V_j`` at the same energy.
    """
    if through > state.depth:
        raise ParameterError(f"Cannot lift through {through} steps of a chain of depth {state.depth}")
    ensure_same_grid(seed.grid, state.grid)
    grid = state.grid
    u, du = seed.u, seed.du
    for n in range(1, through + 1):
        link = state.steps[n - 1]
        b = link.beta.values(grid).values
        db = link.beta.derivative(grid).values
        v_prev = state.potential_before(n).unscaled()
        new_u = du.values + b * u.values
        new_du = (v_prev - seed.epsilon + db) * u.values + b * du.values
        u = GridFunction(grid, new_u, u.log2_scale)
        du = GridFunction(grid, new_du, du.log2_scale)
    potential = state.steps[through - 1].potential if through else state.initial
    return SeedSolution(seed.epsilon, u, du, potential, f"{seed.label} lifted x{through}")


def _first_sign_break(values: FloatArray) -> int | None:
    signs = np.sign(values)
    if signs[0] == 0:
        return 0
    bad = np.flatnonzero(signs != signs[0])
    return int(bad[0]) if bad.size else None


def chain_step(
    state: ChainState,
    next_epsilon: float,
    next_seed: BetaFunction | SeedSolution,
    gate: float = RICCATI_GATE,
) -> ChainState:
    """Append the step at ``next_epsilon``.

    ``next_seed`` is a first-step superpotential at ``next_epsilon`` for the
    potential factorized by the last step. A :class:`SeedSolution` may be
    passed instead; its ``u`` is allowed to have nodes as long as the
    combination ``-(u' + beta_n u)`` does not.

    ``beta_{n+1} = -beta_n - (eps_{n+1} - eps_n) / (beta_hat - beta_n)``.

    Raises:
        EqualEnergyError: if ``next_epsilon`` equals the last energy.
        ChainSingularityError: if the denominator vanishes on the grid.
        NumericalError: if the new superpotential fails the Riccati gate.
    """
    grid = state.grid
    if abs(next_seed.epsilon - next_epsilon) > 1e-12 * max(1.0, abs(next_epsilon)):
        raise ParameterError(f"Seed energy {next_seed.epsilon:g} does not match the step energy {next_epsilon:g}")

    if not state.steps:
        seed_beta = next_seed.beta() if isinstance(next_seed, SeedSolution) else next_seed
        beta_next = seed_beta
    else:
        last = state.steps[-1]
        if abs(next_epsilon - last.epsilon) <= 1e-12 * max(1.0, abs(last.epsilon)):
            raise EqualEnergyError(f"Consecutive factorization energies coincide at {next_epsilon:g}")
        delta = next_epsilon - last.epsilon
        bn = last.beta.values(grid).values
        dbn = last.beta.derivative(grid).values
        if isinstance(next_seed, SeedSolution):
            ensure_same_grid(next_seed.grid, grid)
            u = next_seed.u.values
            du = next_seed.du.values
            q = -(du + bn * u)
            bad = _first_sign_break(q)
            if bad is not None:
                raise ChainSingularityError(
                    f"Chain denominator vanishes for eps={next_epsilon:g}", node=bad, x=float(grid.nodes[bad])
                )
            ratio = u / q
            value = -bn - delta * ratio
            dvalue = -dbn + delta * (-du + bn * u) / q + delta**2 * ratio**2
        else:
            w = next_seed.values(grid).values - bn
            bad = _first_sign_break(w)
            if bad is not None:
                raise ChainSingularityError(
                    f"beta_hat - beta_n vanishes for eps={next_epsilon:g}", node=bad, x=float(grid.nodes[bad])
                )
            value = -bn - delta / w
            dvalue = -dbn + delta * (next_seed.values(grid).values + bn) / w + delta**2 / w**2
        beta_next = BetaFunction.sampled(
            next_epsilon,
            f"chain[{state.depth + 1}] eps={next_epsilon:g}",
            GridFunction(grid, value),
            GridFunction(grid, dvalue),
            None,
            step=float(state.depth + 1),
        )

    residual = riccati_residual(beta_next, state.potential, grid, Ordering.DAGGER_FIRST)
    worst = float(np.max(np.abs(residual.values)))
    if worst > gate * max(1.0, float(np.max(np.abs(state.potential.unscaled())))):
        raise NumericalError(f"Chain step at eps={next_epsilon:g} fails the Riccati gate: max residual {worst:.3g}")

    new_potential = transform_potential(state.potential, beta_next, Direction.ADD)
    missing = null_state(beta_next, NullKernel.CREATION_KERNEL, grid)
    if missing.square_integrable:
        missing = NullState(missing.function.normalized(), True)
    link = ChainLink(next_epsilon, beta_next, new_potential, missing)
    logger.info(
        "Chain step %d at eps=%g: Riccati residual %.2g, new level %s",
        state.depth + 1,
        next_epsilon,
        worst,
        "added" if missing.square_integrable else "not added",
        extra={"step": state.depth + 1, "epsilon": next_epsilon},
    )
    return ChainState(state.initial, (*state.steps, link))
