"""Ready-made constructions of exactly solvable partner families and their spectrum laws."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from enum import Enum

from isofactor.exceptions import ParameterError, UnsupportedPotentialError

from .darboux import ChainState, TransformResult, build_transform, chain_step, lift_seed
from .grid import Grid
from .riccati import (
    FactorizationScheme,
    GeneralForm,
    Ordering,
    PotentialKind,
    PotentialSpec,
    general_beta,
    particular_scheme,
)
from .seeds import (
    SQRT_PI_HALF,
    FamilyKind,
    MielnikFamily,
    SeedSpec,
    SeedSystem,
    hydrogen_seed_solution,
    mielnik_hydrogen_bound,
    oscillator_parity_seed,
    oscillator_seed_energy,
    oscillator_seed_solution,
    require_valid,
)

logger = logging.getLogger(__name__)

OSCILLATOR_HALF_WIDTH = 8.0
OSCILLATOR_POINTS = 4001
RADIAL_SPACING = 0.005
RADIAL_MIN_EXTENT = 60.0


class System(str, Enum):
    OSCILLATOR = "oscillator"
    HYDROGEN = "hydrogen"


class Scheme(str, Enum):
    SDIH = "sdih"
    MIELNIK = "mielnik"
    GENERALIZED = "generalized"
    CHAIN = "chain"


def default_grid(system: System, l: int = 1) -> Grid:
    """``[-8, 8]`` with 4001 nodes, or ``(h, max(40 l, 60)]`` with ``h = 0.005``."""
    if system is System.OSCILLATOR:
        return Grid.symmetric(OSCILLATOR_HALF_WIDTH, OSCILLATOR_POINTS)
    r_max = max(40.0 * l, RADIAL_MIN_EXTENT)
    return Grid.radial(r_max, round(r_max / RADIAL_SPACING))


def analytic_levels(spec: PotentialSpec, m: int) -> list[float]:
    """Lowest ``m`` exact bound-state energies of a base potential."""
    if spec.kind is PotentialKind.OSCILLATOR:
        return [2.0 * n + 1.0 for n in range(m)]
    if spec.kind is PotentialKind.OSCILLATOR_SHIFTED:
        return [2.0 * n + 3.0 for n in range(m)]
    if spec.kind is PotentialKind.HYDROGEN_RADIAL:
        l = int(spec.l or 0)
        return [-1.0 / (l + k) ** 2 for k in range(1, m + 1)]
    raise UnsupportedPotentialError(f"No analytic spectrum for '{spec.label}'")


def _apply_law(levels: list[float], epsilon: float, added: bool) -> list[float]:
    if added:
        return sorted([epsilon, *levels])
    return [e for e in levels if abs(e - epsilon) > 1e-9]


def predicted_levels(result: TransformResult, m: int) -> list[float]:
    """Target spectrum: the source levels plus ``eps``, or minus it when the missing state is unphysical."""
    source = analytic_levels(result.source, m + 1)
    return _apply_law(source, result.epsilon, result.adds_level)[:m]


def sdih_partner(spec: PotentialSpec, grid: Grid) -> TransformResult:
    """Partner built from the particular catalog superpotential."""
    scheme = particular_scheme(spec)
    params = {"l": float(spec.l)} if spec.l is not None else {}
    return build_transform(spec, scheme, grid, f"sdih {spec.label}", **params)


def sdih_oscillator(grid: Grid) -> TransformResult:
    """``x^2 -> x^2 + 2``; the ground level at 1 is annihilated."""
    return sdih_partner(PotentialSpec.oscillator(), grid)


def sdih_hydrogen(l: int, grid: Grid) -> TransformResult:
    """``V_l -> V_{l-1}`` gaining the level ``-1/l^2``."""
    return sdih_partner(PotentialSpec.hydrogen(l), grid)


def mielnik_oscillator(gamma: float, grid: Grid) -> TransformResult:
    """Isospectral oscillator family from ``x^2 + 2`` in the reversed scheme."""
    require_valid(MielnikFamily(FamilyKind.MIELNIK_OSCILLATOR, gamma))
    spec = PotentialSpec.oscillator_shifted()
    alpha = particular_scheme(spec).beta
    beta = general_beta(alpha, gamma, grid, GeneralForm.REVERSED)
    scheme = FactorizationScheme(beta, GeneralForm.REVERSED.ordering)
    return build_transform(spec, scheme, grid, f"mielnik oscillator gamma={gamma:g}", gamma=gamma)


def mielnik_hydrogen(l: int, lam: float, grid: Grid) -> TransformResult:
    """Family of ``V_{l-1}``-like potentials from ``V_l`` in the direct scheme."""
    require_valid(MielnikFamily(FamilyKind.MIELNIK_HYDROGEN, lam, l))
    spec = PotentialSpec.hydrogen(l)
    beta_p = particular_scheme(spec).beta
    beta = general_beta(beta_p, lam, grid, GeneralForm.DIRECT)
    scheme = FactorizationScheme(beta, GeneralForm.DIRECT.ordering)
    return build_transform(spec, scheme, grid, f"mielnik hydrogen l={l} lambda={lam:g}", l=float(l), **{"lambda": lam})


def generalized_hydrogen(l: int, k: int, lam: float, grid: Grid) -> TransformResult:
    """Transformation of ``V_l`` seeded at ``eps = -1/(l+k)^2``."""
    seed = hydrogen_seed_solution(l, k, lam, grid)
    scheme = FactorizationScheme(seed.beta(), Ordering.DAGGER_FIRST)
    return build_transform(
        PotentialSpec.hydrogen(l),
        scheme,
        grid,
        f"generalized hydrogen l={l} k={k} lambda={lam:g}",
        l=float(l),
        k=float(k),
        **{"lambda": lam},
    )


def require_valid_hydrogen(scheme: Scheme, l: int, k: int, lam: float) -> None:
    """Reject hydrogen family parameters without touching a grid."""
    if scheme is Scheme.MIELNIK:
        require_valid(MielnikFamily(FamilyKind.MIELNIK_HYDROGEN, lam, l))
    elif scheme is Scheme.GENERALIZED:
        require_valid(SeedSpec(SeedSystem.HYDROGEN, k=k, lambda_or_nu=lam, l=l))


def generalized_oscillator(nu: float, grid: Grid, epsilon: float | None = None, k: int | None = None) -> TransformResult:
    """Transformation of ``x^2`` seeded at a free ``epsilon < 1`` or at the catalog energy ``-2k-1``."""
    if epsilon is None:
        epsilon = oscillator_seed_energy(k if k is not None else 0)
    elif k is not None and abs(oscillator_seed_energy(k) - epsilon) > 1e-12:
        raise ParameterError(f"epsilon={epsilon:g} does not match the catalog energy of k={k}")
    seed = oscillator_seed_solution(epsilon, nu, grid)
    scheme = FactorizationScheme(seed.beta(), Ordering.DAGGER_FIRST)
    return build_transform(
        PotentialSpec.oscillator(),
        scheme,
        grid,
        f"generalized oscillator eps={epsilon:g} nu={nu:g}",
        epsilon=epsilon,
        nu=nu,
    )


def oscillator_chain(epsilons: Sequence[float], grid: Grid) -> ChainState:
    """Chain of dagger-first steps on ``x^2`` with alternating even/odd seeds.

    Every seed is a solution of ``x^2`` lifted through all steps but the last.
    """
    if not epsilons:
        raise ParameterError("A chain needs at least one factorization energy")
    state = ChainState.start(PotentialSpec.oscillator().sample(grid))
    for index, eps in enumerate(epsilons):
        if eps >= 1.0:
            raise ParameterError(f"Chain energies must lie below the ground level 1, got {eps:g}")
        seed = oscillator_parity_seed(eps, grid, odd=index % 2 == 1)
        lifted = lift_seed(state, seed, max(state.depth - 1, 0))
        state = chain_step(state, eps, lifted)
    return state


def chain_levels(state: ChainState, m: int) -> list[float]:
    """Oscillator levels after every step's addition or removal of its energy."""
    levels = analytic_levels(PotentialSpec.oscillator(), m + state.depth)
    for link in state.steps:
        levels = _apply_law(levels, link.epsilon, link.missing.square_integrable)
    return levels[:m]


def lambda_from_mielnik(l: int, lam_mielnik: float) -> float:
    """Generalized ``lambda^(0)_l`` producing the same potential as the direct family at ``lambda_l``."""
    if lam_mielnik == 0.0:
        raise ParameterError("lambda_l = 0 has no generalized counterpart")
    return mielnik_hydrogen_bound(l) / lam_mielnik


def nu_from_gamma(gamma: float) -> float:
    """Oscillator seed weight at ``eps = -1`` matching the reversed family at ``gamma`` (potential shifted by -2)."""
    if gamma == 0.0 or not math.isfinite(gamma):
        raise ParameterError(f"gamma must be finite and non-zero, got {gamma}")
    return SQRT_PI_HALF / gamma
