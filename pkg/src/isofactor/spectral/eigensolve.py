"""Numerical spectra: finite-difference Sturm bisection and Numerov shooting.

Both oracles solve ``-psi'' + V psi = E psi`` with Dirichlet walls. Ordinary
grids put the walls at the two end nodes. Radial grids (``x_min == h``) put
the left wall at the virtual node ``r = 0``, so every node except the last is
an unknown and ``V`` is never sampled at the origin.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import eigh_tridiagonal

from isofactor.exceptions import BracketError, ParameterError

from .grid import FloatArray, Grid, GridFunction, ensure_same_grid
from .riccati import BetaFunction, Ordering

logger = logging.getLogger(__name__)

DEFAULT_LEVEL_CAP = 12
_RESCALE_LIMIT = 1e150
_BISECTION_STEPS = 200


class Boundary(str, Enum):
    DIRICHLET_BOTH = "dirichlet_both"
    DIRICHLET_ORIGIN = "dirichlet_origin"


@dataclass(frozen=True, eq=False)
class DiscretizedHamiltonian:
    """Symmetric tridiagonal ``-D2 + V`` restricted to the unknown nodes."""

    grid: Grid
    diagonal: FloatArray
    off_diagonal: float
    boundary: Boundary

    @property
    def unknowns(self) -> slice:
        if self.boundary is Boundary.DIRICHLET_ORIGIN:
            return slice(0, self.grid.n_points - 1)
        return slice(1, self.grid.n_points - 1)

    @property
    def size(self) -> int:
        return int(self.diagonal.shape[0])

    def dense(self) -> FloatArray:
        """Dense matrix, for small systems and tests."""
        off = np.full(self.size - 1, self.off_diagonal)
        return np.diag(self.diagonal) + np.diag(off, 1) + np.diag(off, -1)

    def matvec(self, v: FloatArray) -> FloatArray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def embed(self, v: FloatArray) -> FloatArray:
        """Pad an unknown-node vector with zeros at the wall nodes on the grid."""
        full = np.zeros(self.grid.n_points)
        full[self.unknowns] = v
        return full


def build_hamiltonian(V: GridFunction, boundary: Boundary | None = None) -> DiscretizedHamiltonian:
    """Three-point Laplacian plus ``V`` with Dirichlet walls."""
    grid = V.grid
    if boundary is None:
        boundary = Boundary.DIRICHLET_ORIGIN if grid.is_radial else Boundary.DIRICHLET_BOTH
    h2 = grid.spacing**2
    sl = slice(0, grid.n_points - 1) if boundary is Boundary.DIRICHLET_ORIGIN else slice(1, grid.n_points - 1)
    diag = 2.0 / h2 + V.unscaled()[sl]
    diag.flags.writeable = False
    return DiscretizedHamiltonian(grid, diag, -1.0 / h2, boundary)


def _check_count(H: DiscretizedHamiltonian, m: int, cap: int) -> None:
    if m < 1:
        raise ParameterError(f"Number of levels must be positive, got {m}")
    if m > cap:
        raise ParameterError(f"Requested {m} levels, above the configured cap of {cap}")
    if m > H.size:
        raise ParameterError(f"Requested {m} levels from a {H.size}x{H.size} matrix")


def lowest_eigenvalues(H: DiscretizedHamiltonian, m: int, cap: int = DEFAULT_LEVEL_CAP) -> list[float]:
    """The ``m`` smallest eigenvalues by Sturm-sequence bisection, ascending."""
    _check_count(H, m, cap)
    off = np.full(H.size - 1, H.off_diagonal)
    values = eigh_tridiagonal(
        H.diagonal, off, eigvals_only=True, select="i", select_range=(0, m - 1), lapack_driver="stebz"
    )
    return [float(v) for v in np.sort(values)]


def lowest_eigenpairs(
    H: DiscretizedHamiltonian, m: int, cap: int = DEFAULT_LEVEL_CAP
) -> tuple[list[float], list[GridFunction]]:
    """Eigenvalues and unit-norm eigenfunctions; the leftmost lobe of each is positive."""
    _check_count(H, m, cap)
    off = np.full(H.size - 1, H.off_diagonal)
    values, vectors = eigh_tridiagonal(
        H.diagonal, off, select="i", select_range=(0, m - 1), lapack_driver="stebz"
    )
    order = np.argsort(values)
    states: list[GridFunction] = []
    for idx in order:
        vec = vectors[:, idx]
        peak = float(np.max(np.abs(vec)))
        first = int(np.flatnonzero(np.abs(vec) > 1e-8 * peak)[0])
        if vec[first] < 0:
            vec = -vec
        states.append(GridFunction(H.grid, H.embed(vec)).normalized())
    return [float(values[i]) for i in order], states


def count_nodes(f: GridFunction, rel_floor: float = 1e-10) -> int:
    """Sign changes of ``f``, ignoring samples below ``rel_floor`` of its maximum."""
    v = f.values
    significant = v[np.abs(v) > rel_floor * float(np.max(np.abs(v)))]
    if significant.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


def rayleigh_quotient(V: GridFunction, f: GridFunction) -> float:
    """``<f, H f> / <f, f>`` with the discrete Hamiltonian of ``V``."""
    ensure_same_grid(V.grid, f.grid)
    H = build_hamiltonian(V)
    v = f.values[H.unknowns]
    return float(v @ H.matvec(v) / (v @ v))


@njit(cache=True)
def _numerov_sweep(k: FloatArray, h2: float, start: int, stop: int) -> FloatArray:  # pragma: no cover
    """Numerov recurrence for ``psi'' = -k psi`` from a wall at ``start`` up to index ``stop``."""
    n = k.shape[0]
    psi = np.zeros(n)
    if start + 1 >= n:
        return psi
    psi[start + 1] = 1.0
    c = h2 / 12.0
    for i in range(start + 1, min(stop, n - 1)):
        t_prev = 1.0 + c * k[i - 1]
        t_next = 1.0 + c * k[i + 1]
        psi[i + 1] = (2.0 * psi[i] * (1.0 - 5.0 * c * k[i]) - psi[i - 1] * t_prev) / t_next
        if abs(psi[i + 1]) > 1e150:
            for j in range(i + 2):
                psi[j] *= 1e-150
    return psi


def _walled(V: GridFunction) -> tuple[FloatArray, int]:
    """Potential on the walled index range and the offset of grid node 0 in it."""
    if V.grid.is_radial:
        return np.concatenate(([0.0], V.unscaled())), 1
    return np.asarray(V.unscaled(), dtype=np.float64), 0


def _wall_start(k: FloatArray, h2: float) -> int:
    """Move the wall past nodes where the Numerov weight would approach zero."""
    steep = -h2 * k / 12.0 >= 0.5
    start = 0
    while start < k.shape[0] - 2 and steep[start + 1]:
        start += 1
    return start


def _outward(V: GridFunction, E: float, stop: int | None = None) -> tuple[FloatArray, FloatArray, int]:
    v_ext, _ = _walled(V)
    k = E - v_ext
    h2 = V.grid.spacing**2
    start = _wall_start(k, h2)
    last = k.shape[0] - 1 if stop is None else stop
    return _numerov_sweep(k, h2, start, last), k, start


def numerov_node_count(V: GridFunction, E: float) -> int:
    """Number of Dirichlet levels below ``E`` from the nodes of the outward solution."""
    psi, _, start = _outward(V, E)
    tail = psi[start + 1 :]
    signs = np.sign(tail[tail != 0.0])
    return int(np.count_nonzero(np.diff(signs) != 0))


def _matching_index(v_ext: FloatArray, E: float) -> int:
    """Rightmost classical turning point, or the midpoint when there is none."""
    n = v_ext.shape[0]
    allowed = np.flatnonzero(v_ext[1:-1] <= E) + 1
    if allowed.size == 0 or allowed[-1] >= n - 3:
        return n // 2
    return int(allowed[-1])


def _casoratian(V: GridFunction, E: float, match: int) -> float:
    """Discrete Wronskian of outward and inward Numerov solutions at ``match``."""
    v_ext, _ = _walled(V)
    k = E - v_ext
    h2 = V.grid.spacing**2
    n = k.shape[0]
    t = 1.0 + h2 * k / 12.0
    out = _numerov_sweep(k, h2, _wall_start(k, h2), match + 1)
    k_rev = np.ascontiguousarray(k[::-1])
    inn = _numerov_sweep(k_rev, h2, _wall_start(k_rev, h2), n - match)[::-1]
    w_out = out * t
    w_in = inn * t
    return float(w_out[match] * w_in[match + 1] - w_out[match + 1] * w_in[match])


def _bisect(predicate: Callable[[float], bool], lo: float, hi: float) -> float:
    """Shrink ``[lo, hi]`` keeping ``predicate(lo)`` true and ``predicate(hi)`` false."""
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * max(1.0, abs(mid)):
            break
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def numerov_shoot(V: GridFunction, E_lo: float, E_hi: float) -> float:
    """The single level in ``(E_lo, E_hi)`` by Numerov shooting.

    Raises:
        BracketError: if the bracket holds no level or more than one.
    """
    if not E_lo < E_hi:
        raise BracketError(f"Invalid bracket ({E_lo}, {E_hi})")
    n_lo = numerov_node_count(V, E_lo)
    n_hi = numerov_node_count(V, E_hi)
    if n_hi - n_lo != 1:
        what = "no level" if n_hi == n_lo else f"{n_hi - n_lo} levels"
        raise BracketError(f"Bracket ({E_lo:g}, {E_hi:g}) holds {what}")

    v_ext, _ = _walled(V)
    match = _matching_index(v_ext, 0.5 * (E_lo + E_hi))
    w_lo = _casoratian(V, E_lo, match)
    w_hi = _casoratian(V, E_hi, match)
    if w_lo != 0.0 and w_hi != 0.0 and math.copysign(1.0, w_lo) != math.copysign(1.0, w_hi):
        sign_lo = math.copysign(1.0, w_lo)
        level = _bisect(lambda e: math.copysign(1.0, _casoratian(V, e, match)) == sign_lo, E_lo, E_hi)
        method = "matching"
    else:
        level = _bisect(lambda e: numerov_node_count(V, e) <= n_lo, E_lo, E_hi)
        method = "node count"
    logger.debug("Numerov level %d at %.12g (%s, match node %d)", n_lo, level, method, match)
    return level


def _single_level_top(V: GridFunction, E_lo: float, E_hi: float) -> float:
    """Pull ``E_hi`` down by node-count bisection until ``(E_lo, E_hi)`` holds one level."""
    target = numerov_node_count(V, E_lo) + 1
    if numerov_node_count(V, E_hi) <= target:
        return E_hi
    below, above = E_lo, E_hi
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (below + above)
        count = numerov_node_count(V, mid)
        if count == target:
            return mid
        if count > target:
            above = mid
        else:
            below = mid
    raise BracketError(f"No single-level bracket found in ({E_lo:g}, {E_hi:g})")


def numerov_levels(V: GridFunction, approx: Sequence[float]) -> list[float]:
    """Refine each approximate level with a bracket halfway to its neighbours.

    The upper end of every bracket is narrowed by node counts, so unrequested
    levels crowding in above the last one never share its bracket.
    """
    levels = sorted(approx)
    out: list[float] = []
    for i, e in enumerate(levels):
        lower_gap = (e - levels[i - 1]) if i > 0 else (levels[1] - e if len(levels) > 1 else 1.0)
        upper_gap = (levels[i + 1] - e) if i + 1 < len(levels) else lower_gap
        E_lo = e - 0.5 * lower_gap
        out.append(numerov_shoot(V, E_lo, _single_level_top(V, E_lo, e + 0.5 * upper_gap)))
    return out


class SpectrumReport(BaseModel):
    """Computed versus predicted levels."""

    model_config = ConfigDict(populate_by_name=True)

    computed: list[float]
    predicted: list[float]
    max_abs_error: float
    passed: bool = Field(alias="pass")
    tolerance: float

    @classmethod
    def compare(cls, computed: Sequence[float], predicted: Sequence[float], tolerance: float) -> SpectrumReport:
        if len(computed) != len(predicted):
            raise ParameterError(f"Spectrum lengths differ: {len(computed)} vs {len(predicted)}")
        c = sorted(float(v) for v in computed)
        p = sorted(float(v) for v in predicted)
        err = max((abs(a - b) for a, b in zip(c, p, strict=True)), default=0.0)
        return cls(computed=c, predicted=p, max_abs_error=err, passed=err <= tolerance, tolerance=tolerance)


def isospectral_report(
    V_source: GridFunction,
    V_target: GridFunction,
    epsilon: float,
    m: int,
    tol: float,
    adds_level: bool = True,
) -> SpectrumReport:
    """Compare the target spectrum with the source spectrum plus (or minus) the level ``epsilon``.

    With ``adds_level`` the prediction is ``{eps} U lowest m-1 source levels``.
    Otherwise the source level at ``eps`` (if any) is annihilated and the
    prediction is the lowest ``m`` remaining source levels.
    """
    ensure_same_grid(V_source.grid, V_target.grid)
    computed = lowest_eigenvalues(build_hamiltonian(V_target), m)
    if adds_level:
        source = lowest_eigenvalues(build_hamiltonian(V_source), m - 1) if m > 1 else []
        predicted = sorted([epsilon, *source])
    else:
        source = lowest_eigenvalues(build_hamiltonian(V_source), m + 1, cap=max(DEFAULT_LEVEL_CAP, m + 1))
        predicted = [e for e in source if abs(e - epsilon) > max(tol, 1e-8)][:m]
    report = SpectrumReport.compare(computed, predicted[: len(computed)], tol)
    logger.info(
        "Isospectral check eps=%g m=%d: max error %.3g (tol %.3g) -> %s",
        epsilon,
        m,
        report.max_abs_error,
        tol,
        "pass" if report.passed else "fail",
    )
    return report


def _apply_h(V: FloatArray, f: FloatArray, h2: float) -> FloatArray:
    out = np.zeros_like(f)
    out[1:-1] = -(f[2:] - 2.0 * f[1:-1] + f[:-2]) / h2 + V[1:-1] * f[1:-1]
    return out


def intertwine_residual(
    V: GridFunction,
    V_target: GridFunction,
    beta: BetaFunction,
    psi: GridFunction,
    ordering: Ordering = Ordering.DAGGER_FIRST,
    margin: int = 2,
) -> float:
    """``||H_target(L psi) - L(H psi)|| / ||psi||`` on interior nodes.

    ``L`` is ``A = d/dx + beta`` in the dagger-first ordering and
    ``A+ = -d/dx + beta`` in the plain-first ordering.
    """
    grid = ensure_same_grid(V.grid, V_target.grid, psi.grid)
    h = grid.spacing
    b = beta.values(grid).values
    sign = 1.0 if ordering is Ordering.DAGGER_FIRST else -1.0
    f = psi.values

    def op(g: FloatArray) -> FloatArray:
        return sign * np.gradient(g, h) + b * g

    lhs = _apply_h(V_target.unscaled(), op(f), h * h)
    rhs = op(_apply_h(V.unscaled(), f, h * h))
    inner = slice(margin, grid.n_points - margin)
    diff = (lhs - rhs)[inner]
    norm_psi = math.sqrt(h * float(np.sum(f**2)))
    if norm_psi == 0.0:
        return 0.0
    return math.sqrt(h * float(np.sum(diff**2))) / norm_psi


def boundary_amplitude(f: GridFunction) -> float:
    """Largest wall-adjacent amplitude relative to the maximum of ``f``."""
    v = np.abs(f.values)
    peak = float(np.max(v))
    if peak == 0.0:
        return 0.0
    left = 0.0 if f.grid.is_radial else float(v[1])
    return max(left, float(v[-2])) / peak


def widen_until_converged(
    potential: Callable[[Grid], GridFunction],
    grid: Grid,
    m: int,
    threshold: float = 1e-8,
    factor: float = 1.5,
    max_rounds: int = 4,
) -> Grid:
    """Grow a radial grid at fixed spacing until the m-th state has decayed at the wall."""
    current = grid
    for _ in range(max_rounds):
        _, states = lowest_eigenpairs(build_hamiltonian(potential(current)), m)
        amp = boundary_amplitude(states[-1])
        if amp < threshold:
            return current
        n_new = round((current.n_points) * factor)
        r_max = current.spacing * n_new
        logger.warning(
            "State %d reaches %.2g of its peak at r=%g; widening grid to r=%g",
            m - 1,
            amp,
            current.x_max,
            r_max,
        )
        current = Grid.radial(r_max, n_new)
    return current
