"""Numerical laboratory for the radial semilinear Hardy equation.

The equation -Lap u - lam/|x|^2 u = u^p on R^N is studied through the
change of variables v(r) = r^a u(r^b), which trades the inverse-square
potential for a non-integer working dimension M.  The package computes
the transform coefficients, closed-form critical profiles and their
linearization spectra, shooting solutions of the subcritical profile,
weighted eigenvalues on log-graded meshes, and the couplings lambda_k at
which nonradial branches bifurcate; ``verify`` ties everything together
with residual and identity checks, and ``cli`` exposes it all as
subcommands.
"""

from .bifurcation import (
    BifurcationPoint,
    LambdaCache,
    L_of_lambda,
    find_lambda_k,
    lambda_of,
    morse_subcritical,
    sweep_diagram,
)
from .closedform import (
    HarmonicData,
    aubin_talenti,
    harmonic_data,
    harmonic_multiplicity,
    kernel_Z,
    kernel_Zj,
    lambda_j,
    linearized_potential,
    morse_index_critical,
    morse_threshold_critical,
    mu_j,
    u_delta_lambda,
)
from .errors import NumericError, ParameterError, SolverError, TruncationError
from .numerics import (
    GridFunction,
    RadialGrid,
    TridiagonalPencil,
    derivative,
    derivative2,
    eig_count_below,
    make_grid,
    quad_weighted,
    sample,
    solve_smallest_eig,
    sturm_count_below,
)
from .params import (
    ProblemParams,
    TransformCoeffs,
    c_lambda,
    critical_exponent,
    nu_lambda,
    transform_coeffs,
)
from .radial_ode import (
    RadialSolution,
    ShootingConfig,
    origin_constant,
    reconstruct_u,
    solve_canonical,
    solve_vlambda,
)
from .spectral import (
    EigenPair,
    critical_halfline_eig,
    decay_exponent,
    hardy_pencil_minimum,
    lambda1,
    rayleigh_quotient,
    verify_decay,
)
from .transform import energy_identity_check, forward, inverse
from .verify import (
    CheckResult,
    VerificationReport,
    hardy_sobolev_ratio,
    pohozaev_check,
    residual_linearized,
    residual_ode,
    run_all,
    sobolev_constant_numeric,
    transformed_energy_gap,
)

__version__ = "0.1.0"

__all__ = [
    "BifurcationPoint",
    "CheckResult",
    "EigenPair",
    "GridFunction",
    "HarmonicData",
    "LambdaCache",
    "L_of_lambda",
    "NumericError",
    "ParameterError",
    "ProblemParams",
    "RadialGrid",
    "RadialSolution",
    "ShootingConfig",
    "SolverError",
    "TransformCoeffs",
    "TridiagonalPencil",
    "TruncationError",
    "VerificationReport",
    "aubin_talenti",
    "c_lambda",
    "critical_exponent",
    "critical_halfline_eig",
    "decay_exponent",
    "derivative",
    "derivative2",
    "eig_count_below",
    "energy_identity_check",
    "find_lambda_k",
    "forward",
    "hardy_pencil_minimum",
    "hardy_sobolev_ratio",
    "harmonic_data",
    "harmonic_multiplicity",
    "inverse",
    "kernel_Z",
    "kernel_Zj",
    "lambda1",
    "lambda_j",
    "lambda_of",
    "linearized_potential",
    "make_grid",
    "morse_index_critical",
    "morse_subcritical",
    "morse_threshold_critical",
    "mu_j",
    "nu_lambda",
    "origin_constant",
    "pohozaev_check",
    "quad_weighted",
    "rayleigh_quotient",
    "reconstruct_u",
    "residual_linearized",
    "residual_ode",
    "run_all",
    "sample",
    "sobolev_constant_numeric",
    "solve_canonical",
    "solve_smallest_eig",
    "solve_vlambda",
    "sturm_count_below",
    "sweep_diagram",
    "transform_coeffs",
    "transformed_energy_gap",
    "u_delta_lambda",
    "verify_decay",
]
