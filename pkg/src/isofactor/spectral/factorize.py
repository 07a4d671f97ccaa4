"""First-order factorization operators acting on grid functions.

``A = d/dx + beta`` and ``A+ = -d/dx + beta`` are applied with sampled (or
closed-form) ``beta`` and a numeric ``f'``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from isofactor.exceptions import ParameterError

from .eigensolve import rayleigh_quotient
from .grid import FloatArray, Grid, GridFunction, derivative, ensure_same_grid, second_derivative
from .riccati import BetaFunction, FactorizationScheme, Ordering, coulomb_potential

logger = logging.getLogger(__name__)

ANNIHILATION_THRESHOLD = 1e-6
BOUNDARY_AMPLITUDE = 1e-6
TAIL_FRACTION = 0.2
# radial states must grow away from the origin over this length
ORIGIN_EXTENT = 0.05


def apply_annihilation(beta: BetaFunction, f: GridFunction) -> GridFunction:
    """``(A f)(x) = f'(x) + beta(x) f(x)``."""
    b = beta.values(f.grid).values
    return GridFunction(f.grid, derivative(f).values + b * f.values, f.log2_scale)


def apply_creation(beta: BetaFunction, f: GridFunction) -> GridFunction:
    """``(A+ f)(x) = -f'(x) + beta(x) f(x)``."""
    b = beta.values(f.grid).values
    return GridFunction(f.grid, -derivative(f).values + b * f.values, f.log2_scale)


def apply_hamiltonian(potential: GridFunction, f: GridFunction) -> GridFunction:
    """``-f'' + V f`` with the three-point stencil; zero at the two end nodes."""
    grid = ensure_same_grid(potential.grid, f.grid)
    out = -second_derivative(f) + potential.unscaled() * f.values
    out[0] = out[-1] = 0.0
    return GridFunction(grid, out, f.log2_scale)


def factorized_hamiltonian(scheme: FactorizationScheme, f: GridFunction, partner: bool = False) -> GridFunction:
    """``(A+A + eps) f`` or ``(AA+ + eps) f`` according to the scheme's ordering.

    The product is expanded to ``-f'' + (beta^2 -+ beta') f + eps f`` so only
    ``f''`` is differenced. With ``partner`` the opposite product is applied,
    i.e. the Hamiltonian of the transformed potential. End nodes are zero.
    """
    dagger_first = scheme.ordering is Ordering.DAGGER_FIRST
    if partner:
        dagger_first = not dagger_first
    grid = f.grid
    b = scheme.beta.values(grid).values
    db = scheme.beta.derivative(grid).values
    effective = b**2 - db if dagger_first else b**2 + db
    out = -second_derivative(f) + (effective + scheme.epsilon) * f.values
    out[0] = out[-1] = 0.0
    return GridFunction(grid, out, f.log2_scale)


class NullKernel(str, Enum):
    ANNIHILATION_KERNEL = "annihilation_kernel"
    CREATION_KERNEL = "creation_kernel"


@dataclass(frozen=True)
class NullState:
    """Kernel element of ``A`` or ``A+`` and whether it is square-integrable."""

    function: GridFunction
    square_integrable: bool


def _tail_monotone(values: FloatArray, count: int) -> bool:
    tail = np.abs(values[-count:])
    return bool(np.all(np.diff(tail) <= 0.0))


def is_square_integrable(f: GridFunction) -> bool:
    """Decide normalizability from boundary amplitudes and monotone tail decay.

    On radial grids the origin side only needs ``|f|`` to grow over
    ``r <= ORIGIN_EXTENT``; ordinary grids apply the tail test at both ends.
    """
    v = np.abs(f.values)
    peak = float(np.max(v))
    if peak == 0.0:
        return False
    n = f.grid.n_points
    count = max(3, int(TAIL_FRACTION * n))
    right = v[-1] / peak < BOUNDARY_AMPLITUDE and _tail_monotone(v, count)
    if f.grid.is_radial:
        head = max(3, int(np.searchsorted(f.grid.nodes, ORIGIN_EXTENT, side="right")))
        left = v[0] < peak and bool(np.all(np.diff(v[:head]) >= 0.0))
    else:
        left = v[0] / peak < BOUNDARY_AMPLITUDE and _tail_monotone(v[::-1], count)
    return bool(left and right)


def null_state(beta: BetaFunction, which: NullKernel, grid: Grid) -> NullState:
    """``exp(-int beta)`` (kernel of ``A``) or ``exp(+int beta)`` (kernel of ``A+``), max-normalized."""
    sign = -1.0 if which is NullKernel.ANNIHILATION_KERNEL else 1.0
    exponent = sign * beta.antiderivative(grid).values
    values = np.exp(exponent - float(np.max(exponent)))
    f = GridFunction(grid, values)
    integrable = is_square_integrable(f)
    logger.debug("Null state %s of %s: square-integrable=%s", which.value, beta.descriptor, integrable)
    return NullState(f, integrable)


class LadderDirection(str, Enum):
    RAISE_L = "raise_l"
    LOWER_L = "lower_l"


@dataclass(frozen=True)
class LadderContext:
    """Sector ``l`` of the radial Coulomb problem and the direction of the step."""

    l: int
    direction: LadderDirection
    threshold: float = ANNIHILATION_THRESHOLD

    def __post_init__(self) -> None:
        if self.l < 0:
            raise ParameterError(f"Angular momentum must be non-negative, got l={self.l}")
        if self.direction is LadderDirection.LOWER_L and self.l < 1:
            raise ParameterError("Lowering requires l >= 1")

    @property
    def target_l(self) -> int:
        return self.l + 1 if self.direction is LadderDirection.RAISE_L else self.l - 1

    @property
    def operator_index(self) -> int:
        """Index ``j`` of the operator ``a_j`` (lowering) or ``a_j+`` (raising) that is applied."""
        return self.l + 1 if self.direction is LadderDirection.RAISE_L else self.l


@dataclass(frozen=True)
class LadderResult:
    function: GridFunction
    annihilated: bool
    rayleigh_quotient: float | None = None


def ladder_beta(j: int) -> BetaFunction:
    """``beta_j = j/r - 1/j`` of the operators ``a_j = d/dr + beta_j``."""
    if j < 1:
        raise ParameterError(f"Ladder operators are defined for j >= 1, got {j}")
    return BetaFunction.closed(
        -1.0 / j**2,
        f"{j}/r - 1/{j}",
        value=lambda r: j / r - 1.0 / j,
        derivative=lambda r: -j / r**2,
        antiderivative=lambda r: j * np.log(r) - r / j,
        l=float(j),
    )


def hydrogen_ladder(ctx: LadderContext, psi: GridFunction, E: float) -> LadderResult:
    """Move an eigenfunction of ``H_l`` at energy ``E`` to the sector ``l +- 1``.

    Raising applies ``a_{l+1}+``, lowering applies ``a_l``. The lowest state
    of a sector is annihilated by raising; the output is then flagged and left
    unnormalized.
    """
    grid = psi.grid
    beta = ladder_beta(ctx.operator_index)
    if ctx.direction is LadderDirection.RAISE_L:
        out = apply_creation(beta, psi)
    else:
        out = apply_annihilation(beta, psi)
    ratio = out.norm() / psi.norm()
    if ratio < ctx.threshold:
        logger.info(
            "Ladder %s from l=%d annihilated the state at E=%g (ratio %.2g)",
            ctx.direction.value,
            ctx.l,
            E,
            ratio,
            extra={"l": ctx.l, "direction": ctx.direction.value},
        )
        return LadderResult(out, True)
    normalized = out.normalized()
    target = grid.sample(lambda r: coulomb_potential(ctx.target_l, r))
    rq = rayleigh_quotient(target, normalized)
    logger.debug("Ladder %s l=%d -> %d: E=%g, Rayleigh=%.8g", ctx.direction.value, ctx.l, ctx.target_l, E, rq)
    return LadderResult(normalized, False, rq)


def cosine_similarity(f: GridFunction, g: GridFunction) -> float:
    return abs(f.inner(g)) / (f.norm() * g.norm())


def ladder_closure(l: int, psi: GridFunction, E: float) -> float:
    """Raise from sector ``l`` then lower back; cosine similarity with the input.

    ``a_{l+1} a_{l+1}+ = H_l + 1/(l+1)^2`` so the round trip is a multiple of ``psi``.
    """
    up = hydrogen_ladder(LadderContext(l, LadderDirection.RAISE_L), psi, E)
    if up.annihilated:
        raise ParameterError(f"State at E={E:g} is the lowest of sector l={l}; raising annihilates it")
    down = hydrogen_ladder(LadderContext(l + 1, LadderDirection.LOWER_L), up.function, E)
    return cosine_similarity(psi, down.function)


def oscillator_commutators(f: GridFunction, margin: int = 4) -> tuple[float, float]:
    """Relative errors of ``[a, a+] f = 2 f`` and ``[H, a+] f = 2 a+ f`` for ``beta = x``.

    Errors are max-norms over interior nodes, ``margin`` nodes away from each
    end, relative to the max of the right-hand side.
    """
    grid = f.grid
    beta = BetaFunction.closed(1.0, "x", value=lambda x: x, derivative=np.ones_like)
    potential = grid.sample(lambda x: x**2)
    inner = slice(margin, grid.n_points - margin)

    a_ad = apply_annihilation(beta, apply_creation(beta, f)).values
    ad_a = apply_creation(beta, apply_annihilation(beta, f)).values
    lhs1 = (a_ad - ad_a)[inner]
    rhs1 = 2.0 * f.values[inner]

    ad_f = apply_creation(beta, f)
    h_ad = apply_hamiltonian(potential, ad_f).values
    ad_h = apply_creation(beta, apply_hamiltonian(potential, f)).values
    lhs2 = (h_ad - ad_h)[inner]
    rhs2 = 2.0 * ad_f.values[inner]

    err1 = float(np.max(np.abs(lhs1 - rhs1))) / max(float(np.max(np.abs(rhs1))), math.ulp(1.0))
    err2 = float(np.max(np.abs(lhs2 - rhs2))) / max(float(np.max(np.abs(rhs2))), math.ulp(1.0))
    return err1, err2
