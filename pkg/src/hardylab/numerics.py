"""Grids, weighted quadrature, finite differences, and tridiagonal eigensolves.

Everything downstream runs on strictly increasing radial grids with
r_min > 0; whole-space integrals are truncated to [r_min, r_max] chosen by
the caller from the decay of the integrand.  Quadrature is composite
trapezoid (second order on smooth data, which is all the tolerances here
require), derivatives are three-point stencils that are exact on
quadratics, and generalized symmetric tridiagonal eigenproblems are solved
by Sturm-sequence bisection plus inverse iteration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NumericError, ParameterError, SolverError

MIN_NODES = 16

#: spacing growth beyond this makes second-order stencils untrustworthy
MAX_SPACING_RATIO = 1.2


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing nodes on (0, inf) with a grading descriptor."""

    nodes: np.ndarray
    grading: str = "custom"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise ParameterError(
                f"grid needs at least {MIN_NODES} nodes, got {nodes.size}"
            )
        if not np.all(np.isfinite(nodes)):
            raise ParameterError("grid nodes must be finite")
        if nodes[0] <= 0.0:
            raise ParameterError("grid must stay strictly positive (r_min > 0)")
        diffs = np.diff(nodes)
        if not np.all(diffs > 0.0):
            raise ParameterError("grid nodes must be strictly increasing")
        ratios = diffs[1:] / diffs[:-1]
        if ratios.size and max(ratios.max(), 1.0 / ratios.min()) > MAX_SPACING_RATIO:
            warnings.warn(
                "consecutive spacing ratio exceeds "
                f"{MAX_SPACING_RATIO}; second-order accuracy may degrade",
                stacklevel=2,
            )
        nodes = nodes.copy()
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])


@dataclass(frozen=True)
class GridFunction:
    """Finite real samples tied to the grid they were taken on."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise ParameterError(
                f"values shape {values.shape} does not match grid "
                f"shape {self.grid.nodes.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NumericError("grid function values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def make_grid(r_min: float, r_max: float, n: int, grading: str = "log") -> RadialGrid:
    """Build a log- or uniformly-spaced grid on [r_min, r_max].

    Parameters
    ----------
    r_min, r_max : float
        Endpoints, 0 < r_min < r_max.  Both appear exactly as nodes.
    n : int
        Node count, at least 16.
    grading : str
        "log" (geometric spacing, aliases "uniform-in-log", "geometric")
        or "uniform".
    """
    if not (0.0 < r_min < r_max):
        raise ParameterError("need 0 < r_min < r_max")
    if n < MIN_NODES:
        raise ParameterError(f"need n >= {MIN_NODES}, got {n}")
    if grading in ("log", "uniform-in-log", "geometric"):
        nodes = np.geomspace(r_min, r_max, n)
        grading = "log"
    elif grading == "uniform":
        nodes = np.linspace(r_min, r_max, n)
    else:
        raise ParameterError(f"unknown grading {grading!r}")
    nodes[0], nodes[-1] = r_min, r_max
    return RadialGrid(nodes=nodes, grading=grading)


def sample(fn, grid: RadialGrid) -> GridFunction:
    """Evaluate a vectorized callable on a grid."""
    return GridFunction(grid=grid, values=np.asarray(fn(grid.nodes), dtype=float))


def quad_weighted(f: GridFunction, weight_exponent: float) -> float:
    """Trapezoid approximation of the integral of f(r) * r**w dr.

    Linear in f; exact when the full integrand is piecewise linear on the
    grid (weight 0).  The caller is responsible for choosing a grid on
    which the weighted integrand has decayed at both ends.
    """
    integrand = f.values * f.grid.nodes**weight_exponent
    if not np.all(np.isfinite(integrand)):
        raise NumericError("weighted integrand is not finite")
    return float(np.trapezoid(integrand, f.grid.nodes))


def derivative(f: GridFunction) -> GridFunction:
    """Three-point finite-difference first derivative on a nonuniform grid.

    Exact for quadratics, including the one-sided second-order stencils
    used at both endpoints.
    """
    if f.grid.n < 3:
        raise ParameterError("derivative needs at least 3 nodes")
    dv = np.gradient(f.values, f.grid.nodes, edge_order=2)
    return GridFunction(grid=f.grid, values=dv)


def derivative2(f: GridFunction) -> GridFunction:
    """Three-point second derivative; interior nodes only are second order.

    The endpoint values are copied from their nearest interior neighbour,
    so anything consuming this (residual checks) must restrict attention
    to interior nodes.
    """
    r = f.grid.nodes
    v = f.values
    if r.size < 3:
        raise ParameterError("second derivative needs at least 3 nodes")
    h1 = r[1:-1] - r[:-2]
    h2 = r[2:] - r[1:-1]
    num = 2.0 * (h2 * v[:-2] - (h1 + h2) * v[1:-1] + h1 * v[2:])
    interior = num / (h1 * h2 * (h1 + h2))
    out = np.empty_like(v)
    out[1:-1] = interior
    out[0] = interior[0]
    out[-1] = interior[-1]
    return GridFunction(grid=f.grid, values=out)


@dataclass(frozen=True)
class TridiagonalPencil:
    """Symmetric tridiagonal K against a positive diagonal (lumped) B."""

    diag_K: np.ndarray
    offdiag_K: np.ndarray
    diag_B: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag_K, dtype=float)
        e = np.asarray(self.offdiag_K, dtype=float)
        b = np.asarray(self.diag_B, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ParameterError("pencil diagonal must be a nonempty vector")
        if e.shape != (d.size - 1,):
            raise ParameterError("off-diagonal length must be n - 1")
        if b.shape != d.shape:
            raise ParameterError("B diagonal must match K diagonal in length")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e)) and np.all(np.isfinite(b))):
            raise NumericError("pencil entries must be finite")
        if not np.all(b > 0.0):
            raise ParameterError("B must be strictly positive on the diagonal")
        for name, arr in (("diag_K", d), ("offdiag_K", e), ("diag_B", b)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.diag_K.size

    def standard_form(self) -> tuple[np.ndarray, np.ndarray]:
        """Similarity-reduce (K, B) to a standard symmetric tridiagonal."""
        s = 1.0 / np.sqrt(self.diag_B)
        d = self.diag_K * s * s
        e = self.offdiag_K * s[:-1] * s[1:]
        return d, e


def sturm_count_below(pencil: TridiagonalPencil, threshold: float) -> int:
    """Number of pencil eigenvalues strictly below ``threshold``.

    Classic Sturm sequence on the similarity-reduced standard matrix:
    the count equals the number of negative pivots of the shifted LDL^T
    factorization.
    """
    d, e = pencil.standard_form()
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    for i in range(d.size):
        esq = e[i - 1] ** 2 if i > 0 else 0.0
        q = (d[i] - threshold) - esq / q
        if q == 0.0:
            q = tiny
        if q < 0.0:
            count += 1
    return count


def eig_count_below(pencil: TridiagonalPencil, threshold: float) -> int:
    """Exact count of eigenvalues strictly below ``threshold``.

    A threshold that coincides with an eigenvalue to machine tolerance is
    perturbed downward by a relative 1e-12 (with a warning), so boundary
    eigenvalues are excluded deterministically.
    """
    if not np.isfinite(threshold):
        raise ParameterError("threshold must be finite")
    delta = 1e-12 * max(abs(threshold), 1.0)
    lo = sturm_count_below(pencil, threshold - delta)
    hi = sturm_count_below(pencil, threshold + delta)
    if lo != hi:
        warnings.warn(
            "threshold sits on an eigenvalue to machine tolerance; "
            "perturbed downward by a relative 1e-12",
            stacklevel=2,
        )
    return lo


def solve_smallest_eig(pencil: TridiagonalPencil) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of K x = mu B x.

    Sturm-sequence bisection locates the smallest eigenvalue of the
    similarity-reduced standard matrix; inverse iteration recovers its
    vector (both via the LAPACK stebz/stein pair).  The returned vector is
    B-normalized with its first nonzero component positive.
    """
    d, e = pencil.standard_form()
    try:
        if d.size == 1:
            w = np.array([d[0]])
            y = np.array([[1.0]])
        else:
            w, y = scipy.linalg.eigh_tridiagonal(
                d, e, select="i", select_range=(0, 0)
            )
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc
    value = float(w[0])
    x = y[:, 0] / np.sqrt(pencil.diag_B)
    nz = np.flatnonzero(x)
    if nz.size and x[nz[0]] < 0.0:
        x = -x
    return value, x
