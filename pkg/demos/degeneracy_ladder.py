"""Tabulate the degeneracy couplings lambda_j and the resulting Morse indices.

For each dimension the critical-profile linearization acquires kernel along
degree-j spherical harmonics exactly at lambda_j; between consecutive
ladder points the Morse index is constant and jumps by the harmonic
multiplicity.  The table below prints the ladder for N = 3 and N = 4
together with the index just below each rung.
"""

from hardylab import (
    ProblemParams,
    critical_exponent,
    harmonic_data,
    lambda_j,
    morse_index_critical,
    morse_threshold_critical,
)

for N in (3, 4):
    print(f"N = {N}")
    print("  j   lambda_j        mu_j  mult  tau(lambda_j)  m just below")
    for j in range(0, 6):
        lj = lambda_j(N, j)
        d = harmonic_data(N, j)
        tau = morse_threshold_critical(N, lj)
        P = ProblemParams(N=N, p=critical_exponent(N), lam=lj - 1e-9)
        m = morse_index_critical(P)
        print(f"  {j}   {lj:+.10f}  {d.mu:4d}  {d.mult:4d}  {tau:13.10f}  {m:6d}")
    print()

print("the radial kernel element exists at every admissible lambda;")
print("the extra degree-j elements appear only on the ladder itself")
