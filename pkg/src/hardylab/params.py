"""Problem parameters and the coefficients of the singularity-removing map.

The equation under study is

    -u'' - (N-1)/r u' - lam/r^2 u = u^p          (radial form, r > 0)

for dimension N >= 3, exponent 1 < p <= (N+2)/(N-2), and inverse-square
coupling lam < (N-2)^2/4.  Substituting

    v(r) = r^a u(r^b)

with the exponents chosen below turns the left-hand side into the plain
radial Laplacian in a fractional dimension M, at the price of a constant
A multiplying the nonlinearity:

    -v'' - (M-1)/r v' = A v^p.

All coefficients are rational expressions in N, p and

    nu = sqrt(1 - 4 lam / (N-2)^2),

with common denominator D = (p-1)(N-2)(nu-1) + 4.  At the critical
exponent p = (N+2)/(N-2) they collapse to b = 1/nu, a = (N-2)(1-nu)/(2 nu)
and M = N exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

#: relative tolerance used to recognize the critical exponent
CRITICAL_RTOL = 1e-12


def critical_exponent(N: int) -> float:
    """Critical Sobolev exponent (N+2)/(N-2)."""
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    return (N + 2) / (N - 2)


@dataclass(frozen=True)
class ProblemParams:
    """Validated (N, p, lam) triple.

    N : integer dimension >= 3
    p : exponent in (1, (N+2)/(N-2)]
    lam : inverse-square coupling, lam < (N-2)^2/4
    """

    N: int
    p: float
    lam: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise ParameterError(f"dimension must be an integer >= 3, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        p_c = critical_exponent(self.N)
        if not (1.0 < self.p <= p_c * (1.0 + CRITICAL_RTOL)):
            raise ParameterError(
                f"exponent must satisfy 1 < p <= (N+2)/(N-2) = {p_c}, got {self.p}"
            )
        lam_max = (self.N - 2) ** 2 / 4.0
        if not self.lam < lam_max:
            raise ParameterError(
                f"coupling must satisfy lam < (N-2)^2/4 = {lam_max}, got {self.lam}"
            )
        if not (math.isfinite(self.p) and math.isfinite(self.lam)):
            raise ParameterError("p and lam must be finite")

    @property
    def is_critical(self) -> bool:
        p_c = critical_exponent(self.N)
        return abs(self.p - p_c) <= CRITICAL_RTOL * p_c


def nu_lambda(P: ProblemParams) -> float:
    """nu = sqrt(1 - 4 lam / (N-2)^2); nu > 1 iff lam < 0."""
    return math.sqrt(1.0 - 4.0 * P.lam / (P.N - 2) ** 2)


@dataclass(frozen=True)
class TransformCoeffs:
    """Exponents and constants of the map v(r) = r^a u(r^b).

    nu : spectral square root sqrt(1 - 4 lam/(N-2)^2)
    a  : prefactor exponent, 2(N-2)(1-nu)/D
    b  : radial rescaling exponent, 4/D
    A  : constant multiplying the transformed nonlinearity, b^2
    M  : working (generally fractional) dimension, 1 + [(p+3)(N-2)(nu-1) + 4(N-1)]/D

    D = (p-1)(N-2)(nu-1) + 4 is positive for every valid parameter triple
    (it equals 4 nu at the critical exponent and tends to 4 as p -> 1).
    """

    nu: float
    a: float
    b: float
    A: float
    M: float


def transform_coeffs(P: ProblemParams) -> TransformCoeffs:
    """Coefficients of the singularity-removing substitution for P."""
    nu = nu_lambda(P)
    D = (P.p - 1.0) * (P.N - 2) * (nu - 1.0) + 4.0
    if not D > 0.0:
        raise ParameterError(f"degenerate transform: D = {D} must be positive")
    a = 2.0 * (P.N - 2) * (1.0 - nu) / D
    b = 4.0 / D
    A = b * b
    M = 1.0 + ((P.p + 3.0) * (P.N - 2) * (nu - 1.0) + 4.0 * (P.N - 1)) / D
    if not M > 2.0:
        raise ParameterError(f"working dimension M = {M} must exceed 2")
    return TransformCoeffs(nu=nu, a=a, b=b, A=A, M=M)


def c_lambda(P: ProblemParams) -> float:
    """Constant C(lam) = N(N-2) nu^2 normalizing the critical closed forms.

    Only meaningful at the critical exponent; equals N(N-2) at lam = 0 and
    tends to 0 as lam approaches the Hardy threshold (N-2)^2/4.
    """
    if not P.is_critical:
        raise ParameterError("c_lambda requires the critical exponent p = (N+2)/(N-2)")
    nu = nu_lambda(P)
    return P.N * (P.N - 2) * nu * nu
