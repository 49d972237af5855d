"""Locating the couplings where subcritical solutions degenerate.

The degree-j sector of the linearization around the subcritical profile
degenerates exactly when

    -Lambda(lam) = b(lam)^2 mu_j,      mu_j = j(N-2+j),

which, written with L(lam) := Lambda(lam) [(p-1)(2-N+sqrt((N-2)^2-4 lam)) + 4]^2
                            = 16 Lambda(lam) / b(lam)^2,

becomes L(lam) = -16 mu_j.  For each degree k the bifurcation coupling is
the rightmost such root,

    lam_k = sup { lam < 0 : L(lam) = -16 mu_k },

found by scanning L + 16 mu_k from 0^- downward for its first sign change
and bisecting.  No root structure beyond continuity is assumed; the scan
reports every sign change it sees at its resolution.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .closedform import _morse_sum, harmonic_multiplicity, mu_j
from .errors import NumericError, ParameterError, SolverError
from .params import ProblemParams, critical_exponent, transform_coeffs
from .radial_ode import solve_vlambda
from .spectral import lambda1

#: minimum |lam| at which scans start; L is finite and positive there + 16 mu_k
SCAN_LAMBDA_HI = 1e-3

_IDENTITY_RTOL = 1e-10


class LambdaCache:
    """Memoized Lambda(lam) evaluations, safe for concurrent insert-or-read."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get_or_compute(self, key, compute):
        with self._lock:
            if key in self._data:
                return self._data[key]
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)


def _validate_template(N: int, p: float) -> None:
    if int(N) != N or N < 3:
        raise ParameterError(f"dimension must be an integer >= 3, got {N}")
    if not 1.0 < p < critical_exponent(N):
        raise ParameterError(
            f"exponent must be strictly subcritical, 1 < p < {critical_exponent(N)}"
        )


def lambda_of(
    lam: float,
    N: int,
    p: float,
    mesh_n: int = 2000,
    cache: LambdaCache | None = None,
) -> float:
    """Weighted eigenvalue Lambda(lam) for the (N, p) family at coupling lam < 0."""
    _validate_template(N, p)
    if not lam < 0.0:
        raise ParameterError(f"scans run over negative couplings, got lam = {lam}")

    def compute() -> float:
        P = ProblemParams(N=N, p=p, lam=lam)
        v = solve_vlambda(P)
        return lambda1(P, v, mesh_n=mesh_n).value

    if cache is None:
        return compute()
    return cache.get_or_compute((N, p, lam, mesh_n), compute)


def L_of_lambda(
    lam: float,
    N: int,
    p: float,
    mesh_n: int = 2000,
    cache: LambdaCache | None = None,
) -> float:
    """L(lam) = Lambda(lam) [(p-1)(2-N+sqrt((N-2)^2-4 lam)) + 4]^2.

    The bracket equals 4/b, so L is also 16 Lambda / b^2; both forms are
    evaluated and must agree to a relative 1e-10 (a guard on the
    coefficient algebra, enforced at every evaluation).
    """
    Lam = lambda_of(lam, N, p, mesh_n=mesh_n, cache=cache)
    bracket = (p - 1.0) * (2.0 - N + math.sqrt((N - 2) ** 2 - 4.0 * lam)) + 4.0
    L = Lam * bracket * bracket
    b = transform_coeffs(ProblemParams(N=N, p=p, lam=lam)).b
    L_alg = 16.0 * Lam / (b * b)
    if abs(L - L_alg) > _IDENTITY_RTOL * max(1.0, abs(L)):
        raise SolverError(
            f"coefficient identity violated: L = {L!r} vs 16 Lambda/b^2 = {L_alg!r}"
        )
    return L


def morse_subcritical(P: ProblemParams, Lam: float) -> int:
    """Morse index of the subcritical solution from its weighted eigenvalue.

    Counts sector multiplicities over integer degrees strictly below

        tau = (2-N)/2 + sqrt((N-2)^2 - 4 Lambda/b^2) / 2,

    with near-integer thresholds snapped onto the integer and excluded.
    Lambda < 0 is required; tau > 0 then, so the radial sector always
    contributes and the index is at least 1.
    """
    if not Lam < 0.0:
        raise ParameterError(f"need Lambda < 0, got {Lam}")
    b = transform_coeffs(P).b
    disc = (P.N - 2) ** 2 - 4.0 * Lam / (b * b)
    tau = (2.0 - P.N) / 2.0 + math.sqrt(disc) / 2.0
    return _morse_sum(P.N, tau)


@dataclass(frozen=True)
class BifurcationPoint:
    """Rightmost degeneracy of the degree-k sector along lam < 0.

    bracket : final (alpha_k, beta_k) with the sign conditions
              L(beta_k) + 16 mu_k > 0 > L(alpha_k) + 16 mu_k
    morse_before / morse_after : Morse indices at beta_k / alpha_k
    predicted_branches : floor(N/2) for even k, else 1
    sign_changes : every bracket the scan saw at its resolution
    """

    k: int
    lambda_k: float
    bracket: tuple[float, float]
    morse_before: int
    morse_after: int
    mult: int
    predicted_branches: int
    sign_changes: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        alpha, beta = self.bracket
        if not alpha < self.lambda_k < 0.0 or not alpha < beta <= 0.0:
            raise ParameterError("bifurcation bracket must satisfy alpha < lam_k < beta <= 0")
        if self.morse_after - self.morse_before != self.mult:
            raise ParameterError(
                f"Morse jump {self.morse_after - self.morse_before} does not "
                f"match the sector multiplicity {self.mult}"
            )


def _default_lambda_lo(N: int, k: int) -> float:
    return -4.0 * (k + 1) ** 2 * (N - 2) ** 2


def find_lambda_k(
    N: int,
    p: float,
    k: int,
    lambda_lo: float | None = None,
    scan_n: int = 200,
    tol: float = 1e-7,
    mesh_n: int = 2000,
    cache: LambdaCache | None = None,
    scan_all: bool = False,
) -> BifurcationPoint:
    """Locate lam_k = sup{ lam < 0 : L(lam) = -16 mu_k } by scan + bisection.

    A log-spaced scan of g = L + 16 mu_k runs from -1e-3 down to lambda_lo
    (default -4 (k+1)^2 (N-2)^2, deepened up to three times if no sign
    change appears).  The rightmost sign change is refined by bisection
    until the bracket is narrower than tol and |g| at the returned point is
    below 1e-6 * 16 mu_k.  Emission re-checks the sign conditions at both
    bracket ends against every other sector and the Morse jump across the
    bracket.
    """
    _validate_template(N, p)
    if int(k) != k or k < 1:
        raise ParameterError(f"sector degree k must be a positive integer, got {k}")
    if lambda_lo is None:
        lambda_lo = _default_lambda_lo(N, int(k))
    if not lambda_lo < -SCAN_LAMBDA_HI:
        raise ParameterError(f"lambda_lo = {lambda_lo} must lie below -{SCAN_LAMBDA_HI}")
    if scan_n < 16:
        raise ParameterError(f"scan_n must be at least 16, got {scan_n}")
    if cache is None:
        cache = LambdaCache()

    target = 16.0 * mu_j(N, int(k))

    def g(lam: float) -> float:
        return L_of_lambda(lam, N, p, mesh_n=mesh_n, cache=cache) + target

    bracket = None
    sign_changes: list[tuple[float, float]] = []
    for attempt in range(4):
        # log-spaced magnitudes from SCAN_LAMBDA_HI down to |lambda_lo|
        ratio = (abs(lambda_lo) / SCAN_LAMBDA_HI) ** (1.0 / (scan_n - 1))
        lams = [-SCAN_LAMBDA_HI * ratio**i for i in range(scan_n)]
        prev_lam = lams[0]
        prev_g = g(prev_lam)
        if prev_g <= 0.0:
            raise SolverError(
                f"g = L + 16 mu_k is already nonpositive at lam = {prev_lam}; "
                "the scan window cannot bracket the rightmost root"
            )
        for lam in lams[1:]:
            cur_g = g(lam)
            if (prev_g > 0.0) != (cur_g > 0.0):
                sign_changes.append((lam, prev_lam))
                if bracket is None:
                    bracket = (lam, prev_lam, cur_g, prev_g)
                if not scan_all:
                    break
            prev_lam, prev_g = lam, cur_g
        if bracket is not None:
            break
        lambda_lo *= 2.0
    else:
        raise SolverError(
            f"no sign change of L + 16 mu_k found down to lam = {lambda_lo / 2.0}; "
            "deepen lambda_lo or raise scan_n"
        )

    lo, hi, g_lo, g_hi = bracket  # g_lo < 0 < g_hi, lo < hi
    lam_k = None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        eff_tol = max(tol, 1e-8 * abs(mid))
        if hi - lo <= eff_tol and abs(g_mid) <= 1e-6 * target:
            lam_k = mid
            break
        if g_mid > 0.0:
            hi, g_hi = mid, g_mid
        else:
            lo, g_lo = mid, g_mid
    if lam_k is None:
        raise SolverError("bisection failed to meet its width and residual targets")
    alpha_k, beta_k = lo, hi

    L_beta = g(beta_k) - target
    L_alpha = g(alpha_k) - target
    for h in range(1, int(k)):
        if not L_beta < -16.0 * mu_j(N, h):
            raise SolverError(
                f"bracket end beta_k fails the lower-sector condition at degree {h}"
            )
    if not L_alpha > -16.0 * mu_j(N, int(k) + 1):
        raise SolverError("bracket end alpha_k fails the higher-sector condition")

    Lam_beta = lambda_of(beta_k, N, p, mesh_n=mesh_n, cache=cache)
    Lam_alpha = lambda_of(alpha_k, N, p, mesh_n=mesh_n, cache=cache)
    P_beta = ProblemParams(N=N, p=p, lam=beta_k)
    P_alpha = ProblemParams(N=N, p=p, lam=alpha_k)
    morse_before = morse_subcritical(P_beta, Lam_beta)
    morse_after = morse_subcritical(P_alpha, Lam_alpha)

    return BifurcationPoint(
        k=int(k),
        lambda_k=lam_k,
        bracket=(alpha_k, beta_k),
        morse_before=morse_before,
        morse_after=morse_after,
        mult=harmonic_multiplicity(N, int(k)),
        predicted_branches=N // 2 if k % 2 == 0 else 1,
        sign_changes=tuple(sign_changes),
    )


def sweep_diagram(
    N: int,
    p: float | None,
    lambda_grid,
    mesh_n: int = 2000,
    cache: LambdaCache | None = None,
) -> list[dict]:
    """Tabulate coefficients, eigenvalue data and Morse indices over lam.

    ``p = None`` selects the critical exponent, where the closed-form Morse
    count applies and the Lambda/L columns are empty.  Rows are emitted in
    ascending lam order; per-row failures are recorded in the ``error``
    column instead of aborting the sweep.
    """
    from .closedform import lambda_j, morse_index_critical

    critical = p is None
    p_val = critical_exponent(N) if critical else float(p)
    if cache is None:
        cache = LambdaCache()
    lams = sorted(float(x) for x in lambda_grid)
    if not lams:
        raise ParameterError("lambda grid is empty")

    rows: list[dict] = []
    for lam in lams:
        row: dict = {
            "lambda": lam,
            "nu": None,
            "b": None,
            "M": None,
            "A": None,
            "Lambda": None,
            "L": None,
            "morse": None,
            "degenerate": False,
            "error": "",
        }
        try:
            P = ProblemParams(N=N, p=p_val, lam=lam)
            C = transform_coeffs(P)
            row.update(nu=C.nu, b=C.b, M=C.M, A=C.A)
            if critical:
                row["morse"] = morse_index_critical(P)
                j = 1
                while lambda_j(N, j) >= lam - 1.0:
                    if abs(lam - lambda_j(N, j)) <= 1e-9 * max(1.0, abs(lambda_j(N, j))):
                        row["degenerate"] = True
                    j += 1
            else:
                Lam = lambda_of(lam, N, p_val, mesh_n=mesh_n, cache=cache)
                L = L_of_lambda(lam, N, p_val, mesh_n=mesh_n, cache=cache)
                row.update(Lambda=Lam, L=L)
                row["morse"] = morse_subcritical(P, Lam)
                for kk in range(1, 13):
                    if abs(L + 16.0 * mu_j(N, kk)) <= 1e-6 * 16.0 * mu_j(N, kk):
                        row["degenerate"] = True
                        break
        except (ParameterError, SolverError, NumericError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    return rows
