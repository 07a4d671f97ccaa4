"""Superpotentials: catalog entries, general solutions by quadrature, residuals.

Conventions (``H = -d^2/dx^2 + V``, ``A = d/dx + beta``, ``A+ = -d/dx + beta``):

* ``Ordering.DAGGER_FIRST``: ``H = A+ A + eps`` and ``-beta' + beta^2 = V - eps``.
  The partner ``A A+ + eps`` has potential ``V + 2 beta'``.
* ``Ordering.PLAIN_FIRST``: ``H = A A+ + eps`` and ``+beta' + beta^2 = V - eps``.
  The partner ``A+ A + eps`` has potential ``V - 2 beta'``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType

import numpy as np
from scipy.integrate import cumulative_trapezoid

from isofactor.exceptions import (
    GridError,
    NodeZeroError,
    NumericalError,
    ParameterError,
    SingularFamilyError,
    UnsupportedPotentialError,
)

from .grid import FloatArray, Grid, GridFunction, cumulative_integral, derivative, ensure_same_grid

logger = logging.getLogger(__name__)

Evaluator = Callable[[FloatArray], FloatArray]


class PotentialKind(str, Enum):
    """Potentials with a superpotential catalog entry, plus tabulated ones."""

    OSCILLATOR = "oscillator"
    OSCILLATOR_SHIFTED = "oscillator_shifted"
    HYDROGEN_RADIAL = "hydrogen_radial"
    TABULATED = "tabulated"


class BetaForm(str, Enum):
    CLOSED_FORM = "closed_form"
    SAMPLED = "sampled"


class DerivativeMode(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


class Ordering(str, Enum):
    """Operator product order of a factorization ``H = A+A + eps`` or ``H = AA+ + eps``."""

    DAGGER_FIRST = "dagger_first"
    PLAIN_FIRST = "plain_first"

    @property
    def riccati_sign(self) -> int:
        """Sign of ``beta'`` in ``sign * beta' + beta^2 = V - eps``."""
        return -1 if self is Ordering.DAGGER_FIRST else 1

    @property
    def partner_sign(self) -> int:
        """Sign of ``2 beta'`` in the partner potential."""
        return 1 if self is Ordering.DAGGER_FIRST else -1

    @property
    def reversed(self) -> Ordering:
        return Ordering.PLAIN_FIRST if self is Ordering.DAGGER_FIRST else Ordering.DAGGER_FIRST


class GeneralForm(str, Enum):
    """The two one-parameter general solutions.

    ``DIRECT``: ``beta = beta_p - d/dx ln(lambda - int e^{2 int beta_p})`` (dagger-first sign).
    ``REVERSED``: ``beta = alpha + d/dx ln(gamma + int e^{-2 int alpha})`` (plain-first sign).
    """

    DIRECT = "direct"
    REVERSED = "reversed"

    @property
    def ordering(self) -> Ordering:
        return Ordering.DAGGER_FIRST if self is GeneralForm.DIRECT else Ordering.PLAIN_FIRST


def coulomb_potential(l: int, r: FloatArray) -> FloatArray:
    """Effective radial potential ``-2/r + l(l+1)/r^2``."""
    return -2.0 / r + l * (l + 1) / r**2


@dataclass(frozen=True)
class PotentialSpec:
    """Identifies a potential: a base system or a tabulated sample set."""

    kind: PotentialKind
    label: str
    l: int | None = None
    table: GridFunction | None = None

    def __post_init__(self) -> None:
        if self.kind is PotentialKind.HYDROGEN_RADIAL and (self.l is None or self.l < 1):
            raise ParameterError(f"hydrogen_radial requires l >= 1, got {self.l}")
        if self.kind is PotentialKind.TABULATED and self.table is None:
            raise ParameterError("tabulated potential requires a sampled table")

    @classmethod
    def oscillator(cls) -> PotentialSpec:
        return cls(PotentialKind.OSCILLATOR, "x^2")

    @classmethod
    def oscillator_shifted(cls) -> PotentialSpec:
        return cls(PotentialKind.OSCILLATOR_SHIFTED, "x^2+2")

    @classmethod
    def hydrogen(cls, l: int) -> PotentialSpec:
        return cls(PotentialKind.HYDROGEN_RADIAL, f"V_{l}(r)", l=l)

    @classmethod
    def tabulated(cls, table: GridFunction, label: str = "tabulated") -> PotentialSpec:
        return cls(PotentialKind.TABULATED, label, table=table)

    @property
    def is_radial(self) -> bool:
        return self.kind is PotentialKind.HYDROGEN_RADIAL or (
            self.kind is PotentialKind.TABULATED and self.table is not None and self.table.grid.is_radial
        )

    def sample(self, grid: Grid) -> GridFunction:
        """Potential values on ``grid``."""
        if self.kind is PotentialKind.OSCILLATOR:
            return grid.sample(lambda x: x**2)
        if self.kind is PotentialKind.OSCILLATOR_SHIFTED:
            return grid.sample(lambda x: x**2 + 2.0)
        if self.kind is PotentialKind.HYDROGEN_RADIAL:
            if grid.x_min <= 0:
                raise GridError("Radial potentials need a grid with r > 0")
            l = int(self.l or 0)
            return grid.sample(lambda r: coulomb_potential(l, r))
        assert self.table is not None
        ensure_same_grid(self.table.grid, grid)
        return self.table


@dataclass(frozen=True)
class SampledBeta:
    """Grid samples of a superpotential, its derivative and an antiderivative."""

    value: GridFunction
    derivative: GridFunction | None = None
    antiderivative: GridFunction | None = None


@dataclass(frozen=True)
class BetaFunction:
    """A superpotential together with its factorization energy.

    Closed-form betas carry vectorized evaluators; sampled betas carry grid
    samples. ``derivative_mode`` selects analytic derivatives (when available)
    or numeric differentiation of the samples.
    """

    epsilon: float
    form: BetaForm
    descriptor: str
    parameters: Mapping[str, float] = field(default_factory=lambda: MappingProxyType({}))
    value_fn: Evaluator | None = None
    derivative_fn: Evaluator | None = None
    antiderivative_fn: Evaluator | None = None
    samples: SampledBeta | None = None
    derivative_mode: DerivativeMode = DerivativeMode.ANALYTIC

    def __post_init__(self) -> None:
        if not math.isfinite(self.epsilon):
            raise ParameterError(f"Factorization energy must be finite, got {self.epsilon}")
        if self.form is BetaForm.CLOSED_FORM and self.value_fn is None:
            raise ParameterError("closed-form beta needs an evaluator")
        if self.form is BetaForm.SAMPLED and self.samples is None:
            raise ParameterError("sampled beta needs grid samples")
        object.__setattr__(self, "parameters", MappingProxyType(dict(self.parameters)))

    @classmethod
    def closed(
        cls,
        epsilon: float,
        descriptor: str,
        value: Evaluator,
        derivative: Evaluator | None = None,
        antiderivative: Evaluator | None = None,
        **parameters: float,
    ) -> BetaFunction:
        return cls(epsilon, BetaForm.CLOSED_FORM, descriptor, parameters, value, derivative, antiderivative)

    @classmethod
    def sampled(
        cls,
        epsilon: float,
        descriptor: str,
        value: GridFunction,
        derivative: GridFunction | None = None,
        antiderivative: GridFunction | None = None,
        **parameters: float,
    ) -> BetaFunction:
        return cls(
            epsilon,
            BetaForm.SAMPLED,
            descriptor,
            parameters,
            samples=SampledBeta(value, derivative, antiderivative),
        )

    @property
    def grid(self) -> Grid | None:
        return self.samples.value.grid if self.samples is not None else None

    def with_mode(self, mode: DerivativeMode) -> BetaFunction:
        return replace(self, derivative_mode=mode)

    def _evaluate(self, fn: Evaluator, grid: Grid) -> GridFunction:
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.asarray(fn(grid.nodes), dtype=np.float64)
        values = np.broadcast_to(values, (grid.n_points,))
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise SingularFamilyError(f"{self.descriptor} is singular on the grid", node=bad, x=float(grid.nodes[bad]))
        return GridFunction(grid, values)

    def values(self, grid: Grid) -> GridFunction:
        if self.samples is not None:
            ensure_same_grid(self.samples.value.grid, grid)
            return self.samples.value
        assert self.value_fn is not None
        return self._evaluate(self.value_fn, grid)

    def derivative(self, grid: Grid, mode: DerivativeMode | None = None) -> GridFunction:
        mode = mode or self.derivative_mode
        if mode is DerivativeMode.ANALYTIC:
            if self.samples is not None and self.samples.derivative is not None:
                ensure_same_grid(self.samples.derivative.grid, grid)
                return self.samples.derivative
            if self.derivative_fn is not None:
                return self._evaluate(self.derivative_fn, grid)
        return derivative(self.values(grid))

    def antiderivative(self, grid: Grid) -> GridFunction:
        """Some antiderivative of beta (fixed up to an additive constant)."""
        if self.samples is not None and self.samples.antiderivative is not None:
            ensure_same_grid(self.samples.antiderivative.grid, grid)
            return self.samples.antiderivative
        if self.samples is None and self.antiderivative_fn is not None:
            return self._evaluate(self.antiderivative_fn, grid)
        return cumulative_integral(self.values(grid), grid.x_min)

    def shifted(self, delta: float) -> BetaFunction:
        """``beta + delta`` with the same energy; used as a negative control."""
        if delta == 0.0:
            return self
        descriptor = f"{self.descriptor} {delta:+g}"
        if self.samples is not None:
            s = self.samples
            anti = None
            if s.antiderivative is not None:
                anti = s.antiderivative + s.value.grid.sample(lambda x: delta * x)
            return replace(
                self,
                descriptor=descriptor,
                samples=SampledBeta(s.value + delta, s.derivative, anti),
            )
        value_fn = self.value_fn
        anti_fn = self.antiderivative_fn
        assert value_fn is not None
        return replace(
            self,
            descriptor=descriptor,
            value_fn=lambda x: value_fn(x) + delta,
            antiderivative_fn=(lambda x: anti_fn(x) + delta * x) if anti_fn is not None else None,
        )


@dataclass(frozen=True)
class FactorizationScheme:
    """``H = A+A + eps`` or ``H = AA+ + eps`` for a given superpotential."""

    beta: BetaFunction
    ordering: Ordering

    @property
    def epsilon(self) -> float:
        return self.beta.epsilon


def _oscillator_beta() -> BetaFunction:
    return BetaFunction.closed(
        1.0,
        "x",
        value=lambda x: x,
        derivative=np.ones_like,
        antiderivative=lambda x: 0.5 * x**2,
    )


def _hydrogen_beta(l: int) -> BetaFunction:
    return BetaFunction.closed(
        -1.0 / l**2,
        f"{l}/r - 1/{l}",
        value=lambda r: l / r - 1.0 / l,
        derivative=lambda r: -l / r**2,
        antiderivative=lambda r: l * np.log(r) - r / l,
        l=float(l),
    )


def particular_scheme(spec: PotentialSpec) -> FactorizationScheme:
    """Catalog factorization of a base potential."""
    if spec.kind is PotentialKind.OSCILLATOR:
        return FactorizationScheme(_oscillator_beta(), Ordering.DAGGER_FIRST)
    if spec.kind is PotentialKind.OSCILLATOR_SHIFTED:
        alpha = replace(_oscillator_beta(), descriptor="x (alpha)")
        return FactorizationScheme(alpha, Ordering.PLAIN_FIRST)
    if spec.kind is PotentialKind.HYDROGEN_RADIAL:
        return FactorizationScheme(_hydrogen_beta(int(spec.l or 0)), Ordering.DAGGER_FIRST)
    raise UnsupportedPotentialError(f"No catalog superpotential for {spec.kind.value} potential '{spec.label}'")


def particular_beta(spec: PotentialSpec) -> BetaFunction:
    """Particular Riccati solution and factorization energy of a base potential."""
    return particular_scheme(spec).beta


def _kernel_quadrature(kernel: FloatArray, grid: Grid) -> FloatArray:
    """``Q(x) = int_anchor^x K``: anchored at r = 0 on radial grids, else at x = 0 (or x_min)."""
    h = grid.spacing
    prefix = cumulative_trapezoid(kernel, dx=h, initial=0.0)
    if grid.is_radial:
        # kernel assumed to vanish at the origin; first interval closes the gap to r = 0
        return prefix + 0.5 * h * kernel[0]
    anchor = 0.0 if grid.contains(0.0) else grid.x_min
    return prefix - float(np.interp(anchor, grid.nodes, prefix))


def _sign_change(values: FloatArray) -> int | None:
    """First node where ``values`` vanishes or flips sign relative to node 0."""
    signs = np.sign(values)
    bad = np.flatnonzero(signs != signs[0])
    if signs[0] == 0:
        return 0
    return int(bad[0]) if bad.size else None


def general_beta(beta_p: BetaFunction, constant: float, grid: Grid, form: GeneralForm) -> BetaFunction:
    """One-parameter general Riccati solution built from a particular one.

    The logarithmic derivative is evaluated as ``K / D`` with the kernel
    ``K = exp(+-2 int beta_p)`` and denominator ``D = lambda - Q`` (direct) or
    ``D = gamma + Q`` (reversed), ``Q`` being the kernel quadrature.

    Raises:
        SingularFamilyError: if the denominator vanishes or changes sign on the grid.
    """
    s = 1.0 if form is GeneralForm.DIRECT else -1.0
    bp = beta_p.values(grid).values
    dbp = beta_p.derivative(grid).values
    ibp = beta_p.antiderivative(grid).values

    exponent = 2.0 * s * ibp
    with np.errstate(over="raise"):
        try:
            kernel = np.exp(exponent)
        except FloatingPointError as exc:
            raise NumericalError(f"Quadrature kernel overflows on [{grid.x_min}, {grid.x_max}]") from exc
    quad = _kernel_quadrature(kernel, grid)
    denom = constant - quad if form is GeneralForm.DIRECT else constant + quad

    bad = _sign_change(denom)
    if bad is not None:
        raise SingularFamilyError(
            f"Denominator of the {form.value} general solution crosses zero for constant={constant:g}",
            node=bad,
            x=float(grid.nodes[bad]),
        )

    w = kernel / denom
    beta = bp + w
    dbeta = dbp + s * (2.0 * bp * w + w**2)
    anti = ibp - s * np.log(np.abs(denom))
    name = "lambda" if form is GeneralForm.DIRECT else "gamma"
    logger.debug(
        "Built %s general solution, %s=%g, max|w|=%.3g",
        form.value,
        name,
        constant,
        float(np.max(np.abs(w))),
        extra={"form": form.value, "constant": constant},
    )
    return BetaFunction.sampled(
        beta_p.epsilon,
        f"general[{form.value}]({beta_p.descriptor}; {name}={constant:g})",
        GridFunction(grid, beta),
        GridFunction(grid, dbeta),
        GridFunction(grid, anti),
        **{name: constant},
    )


def riccati_residual(
    beta: BetaFunction,
    potential: PotentialSpec | GridFunction,
    grid: Grid,
    ordering: Ordering = Ordering.DAGGER_FIRST,
    mode: DerivativeMode | None = None,
) -> GridFunction:
    """Pointwise ``sign*beta' + beta^2 - (V - eps)``."""
    v = potential.sample(grid) if isinstance(potential, PotentialSpec) else potential
    ensure_same_grid(v.grid, grid)
    b = beta.values(grid).values
    db = beta.derivative(grid, mode).values
    res = ordering.riccati_sign * db + b**2 - (v.unscaled() - beta.epsilon)
    return GridFunction(grid, res)


def _check_nodeless(u: GridFunction) -> None:
    bad = _sign_change(u.values)
    if bad is not None:
        raise NodeZeroError(f"Function vanishes or changes sign at node {bad} (x={u.grid.nodes[bad]:.6g})")


def beta_from_u(u: GridFunction, epsilon: float = 0.0) -> BetaFunction:
    """``beta = -u'/u`` with numeric ``u'``; the antiderivative is ``-ln|u|``."""
    _check_nodeless(u)
    du = derivative(u).values
    beta = -du / u.values
    anti = -(np.log(np.abs(u.values)) + u.log2_scale * math.log(2.0))
    return BetaFunction.sampled(
        epsilon,
        "-u'/u",
        GridFunction(u.grid, beta),
        None,
        GridFunction(u.grid, anti),
    ).with_mode(DerivativeMode.NUMERIC)


def u_from_beta(beta: BetaFunction, grid: Grid) -> GridFunction:
    """``exp(-int beta)`` up to a constant, scaled to a maximum of 1."""
    a = -beta.antiderivative(grid).values
    return GridFunction(grid, np.exp(a - float(np.max(a))))
