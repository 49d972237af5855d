"""Exception types shared across the package.

Three families cover every failure mode: bad inputs (parameters, domains,
preconditions), numerical trouble detected in otherwise valid data (NaN,
divergent tails, grids too coarse to diagnose), and solver breakdowns
(no zero crossing, non-convergent eigeniteration, exhausted scan range).
The command-line layer maps these onto distinct exit codes.
"""


class ParameterError(ValueError):
    """Invalid parameters, domain violations, or unmet preconditions."""


class NumericError(RuntimeError):
    """Non-finite data or a computation outside its trustworthy regime."""


class TruncationError(NumericError):
    """Integrand has not decayed across the outermost decade of the grid."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge or to locate its target."""
