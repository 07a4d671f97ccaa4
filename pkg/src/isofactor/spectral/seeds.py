"""Seed solutions at generalized factorization energies and parameter domains.

A seed ``u`` solves ``-u'' + V u = eps u`` at an (in general unphysical)
energy ``eps``; ``beta = -u'/u`` is then a superpotential for ``V`` at ``eps``
in the dagger-first ordering. Seeds grow exponentially, so samples are kept
with a binary scale exponent.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from isofactor.exceptions import DomainValidationError, NodeZeroError, ParameterError

from .grid import FloatArray, Grid, GridFunction, cumulative_integral
from .riccati import BetaFunction, DerivativeMode, coulomb_potential
from .specfun import gamma_ratio, hyp1f1, hyp1f1_derivative

logger = logging.getLogger(__name__)

SQRT_PI_HALF = math.sqrt(math.pi) / 2.0


class SeedSystem(str, Enum):
    OSCILLATOR = "oscillator"
    HYDROGEN = "hydrogen"


class FamilyKind(str, Enum):
    """Transformed families with a validity domain."""

    MIELNIK_OSCILLATOR = "mielnik_oscillator"
    MIELNIK_HYDROGEN = "mielnik_hydrogen"
    GENERALIZED_HYDROGEN = "generalized_hydrogen"
    GENERALIZED_OSCILLATOR = "generalized_oscillator"


@dataclass(frozen=True)
class MielnikFamily:
    """General-solution family: ``gamma`` for the oscillator, ``lambda_l`` for hydrogen."""

    kind: FamilyKind
    constant: float
    l: int | None = None


@dataclass(frozen=True)
class SeedSpec:
    """Seed at a generalized energy.

    Hydrogen seeds use ``eps = -1/(l+k)^2`` with ``k in {0, -1, ..., -(l-1)}``
    and family parameter ``lambda``. Oscillator seeds use ``eps = -2k-1``
    (``k >= 0``) or, in free mode, any ``epsilon < 1``, with parameter ``nu``.
    """

    system: SeedSystem
    k: int = 0
    lambda_or_nu: float = 0.0
    l: int | None = None
    epsilon_free: float | None = None
    c0: float = 1.0
    c1: float = 0.0

    @property
    def epsilon(self) -> float:
        if self.system is SeedSystem.HYDROGEN:
            return hydrogen_seed_energy(int(self.l or 0), self.k)
        if self.epsilon_free is not None:
            return self.epsilon_free
        return oscillator_seed_energy(self.k)

    @property
    def kind(self) -> FamilyKind:
        if self.system is SeedSystem.HYDROGEN:
            return FamilyKind.GENERALIZED_HYDROGEN
        return FamilyKind.GENERALIZED_OSCILLATOR


@dataclass(frozen=True)
class ValidationOutcome:
    ok: bool
    reason: str = ""
    bound: str = ""

    def __bool__(self) -> bool:
        return self.ok


def oscillator_seed_energy(k: int) -> float:
    if k < 0:
        raise ParameterError(f"Oscillator seed index must be k >= 0, got {k}")
    return -2.0 * k - 1.0


def check_hydrogen_index(l: int, k: int) -> None:
    if l < 1:
        raise ParameterError(f"Hydrogen seeds require l >= 1, got {l}")
    if k > 0 or abs(k) >= l:
        raise ParameterError(f"Hydrogen seed index must satisfy k in {{0, ..., -{l - 1}}} (|k| < l), got k={k} for l={l}")


def hydrogen_seed_energy(l: int, k: int) -> float:
    check_hydrogen_index(l, k)
    return -1.0 / (l + k) ** 2


def mielnik_hydrogen_bound(l: int) -> float:
    """``(2l)! (l/2)^(2l+1)``: the integral of ``r^(2l) e^(-2r/l)`` over ``(0, inf)``."""
    return math.factorial(2 * l) * (l / 2.0) ** (2 * l + 1)


@dataclass(frozen=True)
class EnergyCatalog:
    """Discrete seed energies ``(k, eps)`` of a system."""

    system: SeedSystem
    entries: tuple[tuple[int, float], ...]
    l: int | None = None

    @classmethod
    def oscillator(cls, k_max: int = 4) -> EnergyCatalog:
        return cls(SeedSystem.OSCILLATOR, tuple((k, oscillator_seed_energy(k)) for k in range(k_max + 1)))

    @classmethod
    def hydrogen(cls, l: int) -> EnergyCatalog:
        return cls(SeedSystem.HYDROGEN, tuple((k, hydrogen_seed_energy(l, k)) for k in range(0, -l, -1)), l=l)


def validate_params(family: SeedSpec | MielnikFamily) -> ValidationOutcome:
    """Accept iff the family parameters keep the construction singularity-free."""
    if isinstance(family, MielnikFamily):
        if family.kind is FamilyKind.MIELNIK_OSCILLATOR:
            bound = f"|gamma| > sqrt(pi)/2 = {SQRT_PI_HALF:.7f}"
            if abs(family.constant) > SQRT_PI_HALF:
                return ValidationOutcome(True, bound=bound)
            return ValidationOutcome(False, f"gamma={family.constant:g} violates {bound}", bound)
        if family.kind is FamilyKind.MIELNIK_HYDROGEN:
            l = int(family.l or 0)
            if l < 1:
                raise ParameterError(f"Mielnik hydrogen family requires l >= 1, got {family.l}")
            threshold = mielnik_hydrogen_bound(l)
            bound = f"lambda_{l} > (2l)!(l/2)^(2l+1) = {threshold:.7g} or lambda_{l} < 0"
            if family.constant > threshold or family.constant < 0:
                return ValidationOutcome(True, bound=bound)
            return ValidationOutcome(False, f"lambda_{l}={family.constant:g} violates {bound}", bound)
        raise ParameterError(f"{family.kind.value} is not a Mielnik family")

    if family.system is SeedSystem.HYDROGEN:
        l = int(family.l or 0)
        check_hydrogen_index(l, family.k)
        lam = family.lambda_or_nu
        if abs(family.k) % 2 == 0:
            bound = "lambda in (-inf, 1) for |k| even"
            ok = lam < 1.0
        else:
            bound = "lambda in (1, inf) for |k| odd"
            ok = lam > 1.0
        if ok:
            return ValidationOutcome(True, bound=bound)
        return ValidationOutcome(False, f"lambda={lam:g} (l={l}, k={family.k}) violates {bound}", bound)

    eps = family.epsilon
    nu = family.lambda_or_nu
    bound = "eps < 1 and |nu| < 1"
    if eps < 1.0 and abs(nu) < 1.0:
        return ValidationOutcome(True, bound=bound)
    return ValidationOutcome(False, f"eps={eps:g}, nu={nu:g} violates {bound}", bound)


def require_valid(family: SeedSpec | MielnikFamily) -> None:
    """Raise :class:`DomainValidationError` when :func:`validate_params` rejects."""
    outcome = validate_params(family)
    if not outcome.ok:
        logger.warning("Rejected family parameters: %s", outcome.reason, extra={"bound": outcome.bound})
        raise DomainValidationError(f"Parameters outside the singularity-free domain: {outcome.reason}", outcome.bound)


@dataclass(frozen=True)
class SeedSolution:
    """A seed ``u`` with its derivative, both sharing one scale exponent."""

    epsilon: float
    u: GridFunction
    du: GridFunction
    potential: GridFunction
    label: str

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @property
    def nodeless(self) -> bool:
        signs = np.sign(self.u.values)
        return bool(signs[0] != 0 and np.all(signs == signs[0]))

    def beta(self) -> BetaFunction:
        """``beta = -u'/u``; ``beta'`` from the Riccati identity, antiderivative ``-ln|u|``.

        Raises:
            NodeZeroError: if ``u`` vanishes or changes sign on the grid.
        """
        if not self.nodeless:
            bad = int(np.flatnonzero(np.sign(self.u.values) != np.sign(self.u.values[0]))[0])
            raise NodeZeroError(f"Seed {self.label} has a node near x={self.grid.nodes[bad]:.6g}")
        beta = -self.du.values / self.u.values
        dbeta = beta**2 - (self.potential.unscaled() - self.epsilon)
        anti = -(np.log(np.abs(self.u.values)) + self.u.log2_scale * math.log(2.0))
        return BetaFunction.sampled(
            self.epsilon,
            f"-u'/u [{self.label}]",
            GridFunction(self.grid, beta),
            GridFunction(self.grid, dbeta),
            GridFunction(self.grid, anti),
        ).with_mode(DerivativeMode.ANALYTIC)


def _scaled_pair(grid: Grid, u: FloatArray, du: FloatArray) -> tuple[GridFunction, GridFunction]:
    peak = float(np.max(np.abs(u)))
    exponent = math.frexp(peak)[1] if peak > 0 and math.isfinite(peak) else 0
    return GridFunction(grid, np.ldexp(u, -exponent), exponent), GridFunction(grid, np.ldexp(du, -exponent), exponent)


def _oscillator_parts(epsilon: float, x: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """Even and odd seed factors ``Fe(x^2)``, ``x Fo(x^2)`` and their x-derivatives."""
    a_even = (1.0 - epsilon) / 4.0
    a_odd = (3.0 - epsilon) / 4.0
    y = x**2
    fe = hyp1f1(a_even, 0.5, y)
    fe_d = 2.0 * x * hyp1f1_derivative(a_even, 0.5, y)
    fo = hyp1f1(a_odd, 1.5, y)
    odd = x * fo
    odd_d = fo + 2.0 * y * hyp1f1_derivative(a_odd, 1.5, y)
    return fe, fe_d, odd, odd_d


def _odd_weight(epsilon: float) -> float:
    """``2 Gamma((3-eps)/4) / Gamma((1-eps)/4)``, so that ``|nu| < 1`` is the nodeless domain."""
    a = (1.0 - epsilon) / 4.0
    if a <= 0:
        raise ParameterError(f"Oscillator seeds need eps < 1, got {epsilon}")
    return 2.0 * math.exp(math.lgamma(a + 0.5) - math.lgamma(a))


def oscillator_seed_solution(epsilon: float, nu: float, grid: Grid, validate: bool = True) -> SeedSolution:
    """``u = Phi(x^2) e^{-x^2/2}`` with ``Phi = Fe + nu * w(eps) * x * Fo`` for ``V = x^2``."""
    if validate:
        require_valid(SeedSpec(SeedSystem.OSCILLATOR, lambda_or_nu=nu, epsilon_free=epsilon))
    x = grid.nodes
    fe, fe_d, odd, odd_d = _oscillator_parts(epsilon, x)
    weight = nu * _odd_weight(epsilon)
    phi = fe + weight * odd
    dphi = fe_d + weight * odd_d
    gauss = np.exp(-0.5 * x**2)
    u, du = _scaled_pair(grid, phi * gauss, (dphi - x * phi) * gauss)
    logger.debug("Oscillator seed eps=%g nu=%g, scale 2^%d", epsilon, nu, u.log2_scale)
    return SeedSolution(epsilon, u, du, grid.sample(lambda t: t**2), f"oscillator eps={epsilon:g} nu={nu:g}")


def oscillator_parity_seed(epsilon: float, grid: Grid, odd: bool) -> SeedSolution:
    """Even (``Fe``) or odd (``x Fo``) seed of ``V = x^2`` at any energy."""
    x = grid.nodes
    fe, fe_d, xo, xo_d = _oscillator_parts(epsilon, x)
    phi, dphi = (xo, xo_d) if odd else (fe, fe_d)
    gauss = np.exp(-0.5 * x**2)
    u, du = _scaled_pair(grid, phi * gauss, (dphi - x * phi) * gauss)
    parity = "odd" if odd else "even"
    return SeedSolution(epsilon, u, du, grid.sample(lambda t: t**2), f"oscillator {parity} eps={epsilon:g}")


def oscillator_seed(epsilon: float, nu: float, grid: Grid) -> GridFunction:
    """Nodeless oscillator seed; domain ``eps < 1``, ``|nu| < 1``."""
    return oscillator_seed_solution(epsilon, nu, grid).u


def hydrogen_nu(l: int, k: int, lam: float) -> float:
    """``nu_lk = [Gamma(1+|k|)/Gamma(2l+2)] [Gamma(-2l)/Gamma(-2l+|k|)] lambda`` via Pochhammer ratios."""
    m = abs(k)
    return math.factorial(m) / math.factorial(2 * l + 1) * gamma_ratio(-2.0 * l, m) * lam


def hydrogen_seed_solution(l: int, k: int, lam: float, grid: Grid, validate: bool = True) -> SeedSolution:
    """Seed of ``V_l`` at ``eps = -1/(l+k)^2``: ``u = r^{-l} e^{r/(l+k)} Phi(r)``."""
    check_hydrogen_index(l, k)
    if validate:
        require_valid(SeedSpec(SeedSystem.HYDROGEN, k=k, lambda_or_nu=lam, l=l))
    if grid.x_min <= 0:
        raise ParameterError("Hydrogen seeds need a radial grid with r > 0")
    n = l + k
    r = grid.nodes
    z = -2.0 * r / n
    nu = hydrogen_nu(l, k, lam)
    p = 2 * l + 1
    f1 = hyp1f1(k, -2.0 * l, z)
    f1_d = -2.0 / n * hyp1f1_derivative(k, -2.0 * l, z)
    s = (2.0 * r / n) ** p
    ds = p * (2.0 / n) * (2.0 * r / n) ** (p - 1)
    f2 = hyp1f1(1.0 + k + 2 * l, 2.0 + 2 * l, z)
    f2_d = -2.0 / n * hyp1f1_derivative(1.0 + k + 2 * l, 2.0 + 2 * l, z)
    phi = f1 - nu * s * f2
    dphi = f1_d - nu * (ds * f2 + s * f2_d)
    # r^{-l} e^{r/n}, built in log space
    log_pref = -l * np.log(r) + r / n
    shift = float(np.max(log_pref))
    pref = np.exp(log_pref - shift)
    u_vals = pref * phi
    du_vals = pref * ((-l / r + 1.0 / n) * phi + dphi)
    u, du = _scaled_pair(grid, u_vals, du_vals)
    exponent = int(round(shift / math.log(2.0)))
    residual = shift - exponent * math.log(2.0)
    u = GridFunction(grid, u.values * math.exp(residual), u.log2_scale + exponent)
    du = GridFunction(grid, du.values * math.exp(residual), du.log2_scale + exponent)
    eps = -1.0 / n**2
    logger.debug("Hydrogen seed l=%d k=%d lambda=%g nu=%g", l, k, lam, nu, extra={"l": l, "k": k})
    return SeedSolution(eps, u, du, grid.sample(lambda t: coulomb_potential(l, t)), f"hydrogen l={l} k={k} lambda={lam:g}")


def hydrogen_seed(l: int, k: int, lam: float, grid: Grid) -> GridFunction:
    """Nodeless hydrogen seed on a radial grid."""
    return hydrogen_seed_solution(l, k, lam, grid).u


def general_seed_from_null(psi_n: GridFunction, c0: float, c1: float, anchor: float | None = None) -> GridFunction:
    """``u = psi_N [c0 + c1 int_anchor^x psi_N^-2]``.

    The anchor defaults to ``x = 0`` when it lies on the grid, else ``x_min``.
    """
    bad = np.flatnonzero(psi_n.values == 0.0)
    if bad.size:
        raise NodeZeroError(f"psi_N vanishes at node {int(bad[0])}")
    grid = psi_n.grid
    if anchor is None:
        anchor = 0.0 if grid.contains(0.0) else grid.x_min
    if c1 == 0.0:
        return psi_n.with_values(c0 * psi_n.values)
    inv_sq = GridFunction(grid, psi_n.values**-2.0)
    inner = cumulative_integral(inv_sq, anchor).values
    # inner carries 2^(-2 scale); fold it into the second branch
    second = c1 * np.ldexp(inner, -2 * psi_n.log2_scale)
    return psi_n.with_values(psi_n.values * (c0 + second))
