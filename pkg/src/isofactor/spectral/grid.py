"""Uniform-mesh calculus for sampled functions."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import cumulative_trapezoid, simpson, trapezoid

from isofactor.exceptions import GridError, NumericalError

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

# Relative tolerance used when deciding whether two grids are the same mesh.
_GRID_RTOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform 1D mesh ``x_min, x_min + h, ..., x_max``."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise GridError(f"Grid bounds must be finite, got [{self.x_min}, {self.x_max}]")
        if self.x_min >= self.x_max:
            raise GridError(f"Grid requires x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 3:
            raise GridError(f"Grid requires at least 3 points, got {self.n_points}")

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> Grid:
        """Grid on ``[-half_width, half_width]``."""
        return cls(-half_width, half_width, n_points)

    @classmethod
    def radial(cls, r_max: float, n_points: int) -> Grid:
        """Radial grid ``(0, r_max]`` that starts one spacing away from the origin."""
        return cls(r_max / n_points, r_max, n_points)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def nodes(self) -> FloatArray:
        x = np.linspace(self.x_min, self.x_max, self.n_points)
        x.flags.writeable = False
        return x

    @property
    def is_radial(self) -> bool:
        """True when the mesh continues down to a virtual node at the origin."""
        return self.x_min > 0 and math.isclose(self.x_min, self.spacing, rel_tol=1e-9)

    def with_origin(self) -> Grid:
        """The radial grid extended by the virtual node at r = 0."""
        if not self.is_radial:
            raise GridError("Only radial grids can be extended to the origin")
        return Grid(0.0, self.x_max, self.n_points + 1)

    def contains(self, x: float) -> bool:
        tol = _GRID_RTOL * max(1.0, abs(self.x_min), abs(self.x_max))
        return self.x_min - tol <= x <= self.x_max + tol

    def index_of(self, x: float) -> int:
        """Index of the node closest to ``x``."""
        if not self.contains(x):
            raise GridError(f"Point {x} lies outside the grid [{self.x_min}, {self.x_max}]")
        return int(np.clip(round((x - self.x_min) / self.spacing), 0, self.n_points - 1))

    def same_mesh(self, other: Grid) -> bool:
        if self.n_points != other.n_points:
            return False
        scale = max(1.0, abs(self.x_min), abs(self.x_max))
        return abs(self.x_min - other.x_min) <= _GRID_RTOL * scale and abs(self.x_max - other.x_max) <= _GRID_RTOL * scale

    def sample(self, func: Callable[[FloatArray], ArrayLike], log2_scale: int = 0) -> GridFunction:
        """Evaluate a vectorized callable on the nodes."""
        values = np.broadcast_to(np.asarray(func(self.nodes), dtype=np.float64), (self.n_points,))
        return GridFunction(self, values, log2_scale)

    def constant(self, value: float) -> GridFunction:
        return GridFunction(self, np.full(self.n_points, value, dtype=np.float64))


def ensure_same_grid(*grids: Grid) -> Grid:
    """Return the common grid or raise :class:`GridError`."""
    first = grids[0]
    for other in grids[1:]:
        if not first.same_mesh(other):
            raise GridError(f"Grid mismatch: {first} vs {other}")
    return first


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real samples ``values * 2**log2_scale`` on a :class:`Grid`.

    The binary scale exponent lets rapidly growing seed functions stay in
    floating-point range; every ratio-based quantity (log-derivatives,
    normalized states) is unaffected by it.
    """

    grid: Grid
    values: FloatArray
    log2_scale: int = field(default=0)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (self.grid.n_points,):
            raise GridError(f"Expected {self.grid.n_points} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NumericalError(f"Non-finite sample at node {bad} (x={self.grid.nodes[bad]:.6g})")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def rescaled(cls, grid: Grid, values: ArrayLike) -> GridFunction:
        """Build a function whose stored samples have max |value| in [0.5, 1)."""
        arr = np.asarray(values, dtype=np.float64)
        peak = float(np.max(np.abs(arr))) if arr.size else 0.0
        if peak == 0.0 or not math.isfinite(peak):
            return cls(grid, arr)
        _, exponent = math.frexp(peak)
        return cls(grid, np.ldexp(arr, -exponent), exponent)

    def unscaled(self) -> FloatArray:
        """Samples with the scale exponent applied."""
        if self.log2_scale == 0:
            return np.asarray(self.values)
        return np.ldexp(self.values, self.log2_scale)

    @property
    def x(self) -> FloatArray:
        return self.grid.nodes

    def with_values(self, values: ArrayLike) -> GridFunction:
        return GridFunction(self.grid, np.asarray(values, dtype=np.float64), self.log2_scale)

    def norm(self) -> float:
        """L2 norm of the stored samples (scale exponent ignored)."""
        return math.sqrt(integral(GridFunction(self.grid, self.values**2)))

    def normalized(self) -> GridFunction:
        """Unit L2 norm, scale exponent dropped."""
        n = self.norm()
        if n == 0.0:
            raise NumericalError("Cannot normalize the zero function")
        return GridFunction(self.grid, self.values / n)

    def inner(self, other: GridFunction) -> float:
        """Unscaled inner product of the stored samples."""
        ensure_same_grid(self.grid, other.grid)
        return integral(GridFunction(self.grid, self.values * other.values))

    def _aligned(self, other: GridFunction) -> tuple[FloatArray, FloatArray, int]:
        ensure_same_grid(self.grid, other.grid)
        scale = max(self.log2_scale, other.log2_scale)
        a = np.ldexp(self.values, self.log2_scale - scale)
        b = np.ldexp(other.values, other.log2_scale - scale)
        return a, b, scale

    def __add__(self, other: GridFunction | float) -> GridFunction:
        if isinstance(other, GridFunction):
            a, b, scale = self._aligned(other)
            return GridFunction(self.grid, a + b, scale)
        return GridFunction(self.grid, self.unscaled() + float(other))

    __radd__ = __add__

    def __sub__(self, other: GridFunction | float) -> GridFunction:
        return self + (-1.0) * other

    def __neg__(self) -> GridFunction:
        return GridFunction(self.grid, -self.values, self.log2_scale)

    def __mul__(self, other: GridFunction | float) -> GridFunction:
        if isinstance(other, GridFunction):
            ensure_same_grid(self.grid, other.grid)
            return GridFunction(self.grid, self.values * other.values, self.log2_scale + other.log2_scale)
        return GridFunction(self.grid, self.values * float(other), self.log2_scale)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"GridFunction(grid={self.grid}, log2_scale={self.log2_scale})"


def derivative(f: GridFunction) -> GridFunction:
    """Second-order central differences inside, second-order one-sided at the ends."""
    d = np.gradient(f.values, f.grid.spacing, edge_order=2)
    return GridFunction(f.grid, d, f.log2_scale)


def second_derivative(f: GridFunction) -> FloatArray:
    """Three-point second difference on interior nodes, zero-padded at the ends."""
    h2 = f.grid.spacing**2
    out = np.zeros(f.grid.n_points)
    out[1:-1] = (f.values[2:] - 2.0 * f.values[1:-1] + f.values[:-2]) / h2
    return out


def integral(f: GridFunction) -> float:
    """Composite Simpson for an even interval count, trapezoid otherwise."""
    h = f.grid.spacing
    if (f.grid.n_points - 1) % 2 == 0:
        total = float(simpson(f.values, dx=h))
    else:
        total = float(trapezoid(f.values, dx=h))
    return math.ldexp(total, f.log2_scale)


def cumulative_integral(f: GridFunction, anchor: float) -> GridFunction:
    """``F(x) = int_anchor^x f`` by node-aligned trapezoid prefix sums."""
    grid = f.grid
    if not grid.contains(anchor):
        raise GridError(f"Anchor {anchor} lies outside the grid [{grid.x_min}, {grid.x_max}]")
    prefix = cumulative_trapezoid(f.values, dx=grid.spacing, initial=0.0)
    offset = float(np.interp(anchor, grid.nodes, prefix))
    return GridFunction(grid, prefix - offset, f.log2_scale)
