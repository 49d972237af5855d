"""Closed forms at the critical exponent: solution family, kernels, spectrum.

With p = (N+2)/(N-2) and C(lam) = N(N-2) nu^2, the problem

    -u'' - (N-1)/r u' - lam/r^2 u = C(lam) u^((N+2)/(N-2))

has the explicit positive solutions

    u_delta(r) = r^((N-2)(nu-1)/2) delta^((N-2)/2) / (1 + delta^2 r^(2 nu))^((N-2)/2),

which the singularity-removing map carries exactly onto the classical
bubbles delta^((N-2)/2) / (1 + delta^2 r^2)^((N-2)/2).  Linearizing around
u_delta and separating spherical harmonics of degree j produces the
half-line problems whose kernels, degeneracy couplings lam_j, and Morse
counts are implemented here in exact arithmetic wherever possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .params import ProblemParams, c_lambda, nu_lambda

#: couplings within this relative distance of lam_j count as degenerate
DEGENERACY_RTOL = 1e-12

#: a Morse threshold this close to an integer is snapped onto it
MORSE_TIE_TOL = 1e-12


def _require_critical(P: ProblemParams, who: str) -> None:
    if not P.is_critical:
        raise ParameterError(f"{who} requires the critical exponent p = (N+2)/(N-2)")


def u_delta_lambda(delta: float, P: ProblemParams) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form positive solution of the critical problem, as a callable.

    Vanishes like r^((N-2)(nu-1)/2) at the origin (for lam < 0) and decays
    like r^(-(N-2)(nu+1)/2) at infinity.
    """
    _require_critical(P, "u_delta_lambda")
    if not delta > 0.0:
        raise ParameterError(f"scale delta must be positive, got {delta}")
    nu = nu_lambda(P)
    half = (P.N - 2) / 2.0

    def u(r):
        r = np.asarray(r, dtype=float)
        return r ** (half * (nu - 1.0)) * delta**half / (1.0 + delta**2 * r ** (2.0 * nu)) ** half

    return u


def aubin_talenti(delta: float, N: int) -> Callable[[np.ndarray], np.ndarray]:
    """Classical bubble U_delta(r) = delta^((N-2)/2) / (1 + delta^2 r^2)^((N-2)/2)."""
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    if not delta > 0.0:
        raise ParameterError(f"scale delta must be positive, got {delta}")
    half = (N - 2) / 2.0

    def U(r):
        r = np.asarray(r, dtype=float)
        return delta**half / (1.0 + delta**2 * r * r) ** half

    return U


def linearized_potential(P: ProblemParams) -> Callable[[np.ndarray], np.ndarray]:
    """Potential N(N+2) nu^2 r^(2(nu-1)) / (1 + r^(2 nu))^2 of the linearization.

    This is C(lam) * (N+2)/(N-2) * u_1^(4/(N-2)) written out; the factor
    r^(2(nu-1)) carries the residual origin singularity for nu != 1.
    """
    _require_critical(P, "linearized_potential")
    nu = nu_lambda(P)
    N = P.N

    def W(r):
        r = np.asarray(r, dtype=float)
        return N * (N + 2) * nu**2 * r ** (2.0 * (nu - 1.0)) / (1.0 + r ** (2.0 * nu)) ** 2

    return W


def kernel_Z(P: ProblemParams) -> Callable[[np.ndarray], np.ndarray]:
    """Radial kernel element of the linearization around u_1.

    Z(r) = r^((N-2)(nu-1)/2) (1 - r^(2 nu)) / (1 + r^(2 nu))^(N/2);
    it is the delta-derivative of the solution family and exists for every
    admissible lam.
    """
    _require_critical(P, "kernel_Z")
    nu = nu_lambda(P)
    half = (P.N - 2) / 2.0
    Nhalf = P.N / 2.0

    def Z(r):
        r = np.asarray(r, dtype=float)
        s = r ** (2.0 * nu)
        return r ** (half * (nu - 1.0)) * (1.0 - s) / (1.0 + s) ** Nhalf

    return Z


def mu_j(N: int, j: int) -> int:
    """Eigenvalue j(N-2+j) of the spherical Laplacian on degree-j harmonics."""
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    if int(j) != j or j < 0:
        raise ParameterError(f"harmonic degree must be a nonnegative integer, got {j}")
    return int(j) * (int(N) - 2 + int(j))


def harmonic_multiplicity(N: int, j: int) -> int:
    """Dimension of degree-j spherical harmonics in N variables.

    (N + 2j - 2) (N + j - 3)! / ((N-2)! j!), an exact integer; degree 0
    gives 1 and degree 1 gives N.
    """
    mu_j(N, j)  # validates N and j
    N, j = int(N), int(j)
    if j == 0:
        return 1
    num = (N + 2 * j - 2) * math.factorial(N + j - 3)
    den = math.factorial(N - 2) * math.factorial(j)
    mult, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("multiplicity formula did not divide exactly")
    return mult


@dataclass(frozen=True)
class HarmonicData:
    """Exact integer data of the degree-j spherical harmonic sector."""

    j: int
    mu: int
    mult: int


def harmonic_data(N: int, j: int) -> HarmonicData:
    """Eigenvalue and multiplicity of the degree-j sector, exact integers."""
    return HarmonicData(j=int(j), mu=mu_j(N, j), mult=harmonic_multiplicity(N, j))


def lambda_j(N: int, j: int) -> float:
    """Coupling at which the degree-j sector of the linearization degenerates.

    lam_j = ((N-2)^2/4) (1 - mu_j/(N-1)).  Degree 1 gives exactly 0 for
    every N (mu_1 = N-1); degree 0 formally returns the Hardy threshold
    itself, where the admissible region ends -- the radial kernel exists
    for every lam, so that row is informational.
    """
    m = mu_j(N, j)
    return (N - 2) ** 2 / 4.0 * (1.0 - m / (N - 1))


def kernel_Zj(P: ProblemParams, j: int) -> Callable[[np.ndarray], np.ndarray]:
    """Degree-j kernel profile, defined only at the degeneracy coupling lam_j.

    psi_j(r) = r^((N-2)(nu-1)/2 + nu) / (1 + r^(2 nu))^(N/2).  The origin
    exponent equals (N/2) nu - (N-2)/2; the two expressions coincide for
    every nu, and the construction asserts it.
    """
    _require_critical(P, "kernel_Zj")
    if int(j) != j or j < 1:
        raise ParameterError(f"kernel_Zj needs a harmonic degree >= 1, got {j}")
    lj = lambda_j(P.N, int(j))
    if abs(P.lam - lj) > DEGENERACY_RTOL * max(1.0, abs(lj)):
        raise ParameterError(
            f"degree-{j} kernel exists only at lam = {lj!r}; got lam = {P.lam!r}"
        )
    nu = nu_lambda(P)
    expo = (P.N - 2) * (nu - 1.0) / 2.0 + nu
    assert abs(expo - ((P.N / 2.0) * nu - (P.N - 2) / 2.0)) < 1e-12
    Nhalf = P.N / 2.0

    def psi(r):
        r = np.asarray(r, dtype=float)
        return r**expo / (1.0 + r ** (2.0 * nu)) ** Nhalf

    return psi


def _morse_sum(N: int, tau: float) -> int:
    """Sum of sector multiplicities over integer degrees strictly below tau.

    A tau within a relative 1e-12 of an integer is treated as that integer
    (and hence excluded by strictness).
    """
    nearest = round(tau)
    if abs(tau - nearest) <= MORSE_TIE_TOL * max(1.0, abs(tau)):
        j_top = int(nearest) - 1
    else:
        j_top = math.floor(tau)
        if j_top == tau:  # exact integer float
            j_top -= 1
    return sum(harmonic_multiplicity(N, j) for j in range(0, j_top + 1))


def morse_threshold_critical(N: int, lam: float) -> float:
    """Degree threshold tau(lam) = (2-N)/2 + sqrt(N^2 - 16(N-1)lam/(N-2)^2)/2.

    Sectors of degree j < tau contribute their multiplicity to the Morse
    index; tau(lambda_j) = j exactly, so degeneracies sit on integer
    thresholds.  Takes plain numbers so the identity can be evaluated at
    lambda_0 (the Hardy constant itself), which is not an admissible
    coupling for the solvers.
    """
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    if not lam <= (N - 2) ** 2 / 4.0:
        raise ParameterError(
            f"threshold formula needs lam <= (N-2)^2/4 = {(N - 2) ** 2 / 4.0}, got {lam}"
        )
    disc = N**2 - 16.0 * (N - 1) * lam / (N - 2) ** 2
    return (2.0 - N) / 2.0 + math.sqrt(disc) / 2.0


def morse_index_critical(P: ProblemParams) -> int:
    """Morse index of u_delta as a critical point of the associated energy.

    Equals 1 at lam = 0 (the mountain-pass bubble) and jumps by the sector
    multiplicity each time lam crosses a degeneracy coupling lam_j from
    above.
    """
    _require_critical(P, "morse_index_critical")
    return _morse_sum(P.N, morse_threshold_critical(P.N, P.lam))
