"""Run the consistency batteries for a critical and a subcritical case.

The critical battery substitutes closed forms into their equations and
checks the sharp-constant and integral identities; the subcritical battery
solves the profile first and then certifies it.  Every check prints its
measured value next to its tolerance.
"""

from hardylab import ProblemParams, critical_exponent, run_all


def show(P):
    report = run_all(P)
    tag = "critical" if P.is_critical else "subcritical"
    print(f"{tag}: N = {P.N}, p = {P.p:g}, lambda = {P.lam:g}")
    for c in report.checks:
        mark = "ok  " if c.passed else "FAIL"
        print(f"  [{mark}] {c.name:28s} {c.value:.3e}  (tol {c.tolerance:.0e})")
    print(f"  => {'all checks passed' if report.passed else 'FAILURES PRESENT'}")
    print()


show(ProblemParams(N=4, p=critical_exponent(4), lam=-1.0))
show(ProblemParams(N=3, p=critical_exponent(3), lam=0.0))
show(ProblemParams(N=4, p=2.0, lam=-1.0))
