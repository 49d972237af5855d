"""Weighted eigenvalue problems attached to the linearized equations.

Two singular Sturm-Liouville problems are discretized here with P1 finite
elements on log-graded meshes:

* the unit-interval quotient

      Lambda = inf { int (w'^2 - p A v^(p-1) w^2) r^(M-1) dr /
                     int w^2 r^(M-3) dr : w(1) = 0 },

  whose sign and magnitude drive the subcritical bifurcation analysis, and

* the half-line problem

      -eta'' - (N-1)/r eta' - N(N+2)/(1+r^2)^2 eta = (t/r^2) eta,

  whose unique negative eigenvalue is 1 - N with eigenfunction
  r/(1+r^2)^(N/2).

Element integrals of r^w against linear basis products are evaluated in
closed form, the mass (and potential) terms are lumped so the stiffness
side stays tridiagonal and the weighted mass diagonal, and the resulting
pencils go to the Sturm bisection / inverse iteration solver.  The
Dirichlet end is eliminated from the unknowns; the inner endpoint r_min
carries the natural (no-flux) condition, which the weight r^(M-1)
suppresses as r_min -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .numerics import (
    GridFunction,
    RadialGrid,
    TridiagonalPencil,
    make_grid,
    quad_weighted,
    derivative,
)
from .params import ProblemParams, transform_coeffs

DEFAULT_R_MIN = 1e-6


def _power_integral(a: np.ndarray, b: np.ndarray, k: float) -> np.ndarray:
    """Exact elementwise integral of r^k over [a, b] (log branch at k = -1)."""
    if k == -1.0:
        return np.log(b / a)
    return (b ** (k + 1.0) - a ** (k + 1.0)) / (k + 1.0)


def lumped_weighted_mass(nodes: np.ndarray, w: float) -> np.ndarray:
    """Diagonal m_i = int phi_i(r) r^w dr with exact hat-function integrals."""
    a, b = nodes[:-1], nodes[1:]
    h = b - a
    i0 = _power_integral(a, b, w)
    i1 = _power_integral(a, b, w + 1.0)
    left = (b * i0 - i1) / h    # weight of the descending hat on each element
    right = (i1 - a * i0) / h   # weight of the ascending hat
    m = np.zeros_like(nodes)
    m[:-1] += left
    m[1:] += right
    return m


def assemble_pencil(
    nodes: np.ndarray,
    stiffness_weight: float,
    potential: np.ndarray | None,
    mass_weight: float,
) -> TridiagonalPencil:
    """P1 pencil for int (w'^2 + V w^2) r^s dr against int w^2 r^m dr.

    The final node carries the Dirichlet condition and is eliminated; the
    first node keeps its natural-boundary row.  The potential is lumped
    onto the diagonal with the stiffness-side weight.
    """
    a, b = nodes[:-1], nodes[1:]
    h = b - a
    k_e = _power_integral(a, b, stiffness_weight) / h**2
    diag = np.zeros_like(nodes)
    diag[:-1] += k_e
    diag[1:] += k_e
    off = -k_e
    if potential is not None:
        diag = diag + potential * lumped_weighted_mass(nodes, stiffness_weight)
    diag_B = lumped_weighted_mass(nodes, mass_weight)
    # eliminate the Dirichlet node at the outer end
    return TridiagonalPencil(diag_K=diag[:-1], offdiag_K=off[:-1], diag_B=diag_B[:-1])


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue with its mesh eigenfunction (Dirichlet node included).

    psi is B-normalized, carries value 0 at the outer endpoint, and is
    sign-fixed so the component largest in magnitude is positive.
    """

    value: float
    psi: GridFunction
    mesh_n: int
    weight_M: float


def _solve_pencil_on_mesh(
    mesh: RadialGrid,
    stiffness_weight: float,
    potential: np.ndarray | None,
    mass_weight: float,
) -> EigenPair:
    from .numerics import solve_smallest_eig

    pencil = assemble_pencil(mesh.nodes, stiffness_weight, potential, mass_weight)
    value, x = solve_smallest_eig(pencil)
    psi_vals = np.concatenate([x, [0.0]])
    if psi_vals[np.argmax(np.abs(psi_vals))] < 0.0:
        psi_vals = -psi_vals
    psi = GridFunction(grid=mesh, values=psi_vals)
    return EigenPair(
        value=value, psi=psi, mesh_n=mesh.n, weight_M=stiffness_weight + 1.0
    )


def lambda1(
    P: ProblemParams,
    v: GridFunction,
    mesh_n: int = 4000,
    r_min: float = DEFAULT_R_MIN,
) -> EigenPair:
    """Smallest eigenvalue of the weighted linearized quotient on (0, 1).

    Discretizes  int (w'^2 - p A v^(p-1) w^2) r^(M-1) dr  against
    int w^2 r^(M-3) dr  with w(1) = 0 on a log-graded mesh.  The profile v
    is interpolated onto the mesh.  The infimum is negative for every
    admissible subcritical triple (witnessed by w = v itself); a
    nonnegative discrete value means the infimum is possibly not attained
    and is reported as an error rather than returned.
    """
    if P.is_critical:
        raise ParameterError("lambda1 requires a strictly subcritical exponent")
    if mesh_n < 64:
        raise ParameterError(f"mesh_n must be at least 64, got {mesh_n}")
    C = transform_coeffs(P)
    mesh = make_grid(r_min, 1.0, mesh_n, "log")
    if v.grid.r_min > r_min * (1.0 + 1e-12) or v.grid.r_max < 1.0:
        raise ParameterError("profile grid must cover the eigenvalue mesh [r_min, 1]")
    v_mesh = np.interp(mesh.nodes, v.grid.nodes, v.values)
    potential = -P.p * C.A * np.abs(v_mesh) ** (P.p - 1.0)
    pair = _solve_pencil_on_mesh(mesh, C.M - 1.0, potential, C.M - 3.0)
    if pair.value >= 0.0:
        raise NumericError(
            f"computed quotient minimum {pair.value} is nonnegative: "
            "infimum possibly not attained"
        )
    interior = pair.psi.values[:-1]
    tiny = 1e-12 * float(np.max(np.abs(interior)))
    signs = np.sign(interior[np.abs(interior) > tiny])
    if signs.size and signs.min() < 0.0 < signs.max():
        raise NumericError("computed ground state changes sign on the mesh")
    return pair


def critical_halfline_eig(
    N: int,
    R_max: float = 100.0,
    mesh_n: int = 4000,
    r_min: float = DEFAULT_R_MIN,
) -> EigenPair:
    """Smallest eigenvalue of the degree-separated critical linearization.

    Solves  -eta'' - (N-1)/r eta' - N(N+2)/(1+r^2)^2 eta = (t/r^2) eta  on
    (r_min, R_max) with a Dirichlet cap at R_max.  The continuum problem
    has the unique negative eigenvalue 1 - N with eigenfunction
    r/(1+r^2)^(N/2); the discrete value converges to it at second order in
    the mesh.
    """
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    if not R_max > 1.0:
        raise ParameterError("R_max must exceed 1")
    if mesh_n < 64:
        raise ParameterError(f"mesh_n must be at least 64, got {mesh_n}")
    mesh = make_grid(r_min, R_max, mesh_n, "log")
    r = mesh.nodes
    potential = -N * (N + 2) / (1.0 + r * r) ** 2
    return _solve_pencil_on_mesh(mesh, float(N - 1), potential, float(N - 3))


def rayleigh_quotient(
    P: ProblemParams, v: GridFunction, w: GridFunction
) -> float:
    """Continuous quotient of the lambda1 form at a test function w(1) = 0.

    Evaluated by quadrature on w's own grid; an upper bound for the
    eigenvalue up to discretization error.
    """
    C = transform_coeffs(P)
    if abs(w.values[-1]) > 1e-10 * max(1.0, float(np.max(np.abs(w.values)))):
        raise ParameterError("test function must vanish at r = 1")
    v_on_w = np.interp(w.grid.nodes, v.grid.nodes, v.values)
    dw = derivative(w)
    num_grad = quad_weighted(
        GridFunction(grid=w.grid, values=dw.values**2), C.M - 1.0
    )
    num_pot = quad_weighted(
        GridFunction(
            grid=w.grid, values=np.abs(v_on_w) ** (P.p - 1.0) * w.values**2
        ),
        C.M - 1.0,
    )
    den = quad_weighted(GridFunction(grid=w.grid, values=w.values**2), C.M - 3.0)
    if den <= 0.0:
        raise ParameterError("test function has vanishing weighted norm")
    return (num_grad - P.p * C.A * num_pot) / den


def hardy_pencil_minimum(M: float, mesh_n: int = 2000, r_min: float = DEFAULT_R_MIN) -> float:
    """Discrete minimum of int w'^2 r^(M-1) / int w^2 r^(M-3), w(1) = 0.

    The weighted Hardy inequality bounds this below by ((M-2)/2)^2; the
    sharp constant is approached but not attained, so the discrete minimum
    sits slightly above it.
    """
    from .numerics import solve_smallest_eig

    if not M > 2.0:
        raise ParameterError(f"need M > 2, got {M}")
    mesh = make_grid(r_min, 1.0, mesh_n, "log")
    pencil = assemble_pencil(mesh.nodes, M - 1.0, None, M - 3.0)
    value, _ = solve_smallest_eig(pencil)
    return value


def decay_exponent(M: float, beta2: float) -> float:
    """Origin exponent theta = (2 - M + sqrt((M-2)^2 + 4 beta^2))/2.

    Solutions of the weighted problems with inverse-square coefficient
    beta^2 > 0 vanish like r^theta; theta > 0 whenever beta^2 > 0, and
    M = N, beta^2 = N - 1 gives exactly 1.
    """
    if not M > 2.0:
        raise ParameterError(f"need M > 2, got {M}")
    if not beta2 > 0.0:
        raise ParameterError(f"need beta^2 > 0, got {beta2}")
    disc = (M - 2.0) ** 2 + 4.0 * beta2
    return (2.0 - M + np.sqrt(disc)) / 2.0


def verify_decay(psi: GridFunction, theta: float) -> tuple[float, float]:
    """Log-log slope of psi over its two smallest grid decades vs theta.

    Returns (fitted_slope, |fitted_slope - theta|).  Requires psi > 0 on
    the fit window.
    """
    r = psi.grid.nodes
    window = r <= 100.0 * r[0]
    if window.sum() < 8:
        raise NumericError("grid too coarse near the origin to fit a decay slope")
    vals = psi.values[window]
    if np.any(vals <= 0.0):
        raise NumericError("eigenfunction is not positive on the fit window")
    slope = float(np.polyfit(np.log(r[window]), np.log(vals), 1)[0])
    return slope, abs(slope - theta)
