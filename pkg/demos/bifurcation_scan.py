"""Locate the first bifurcation couplings of the subcritical family.

Along lambda < 0 the weighted eigenvalue Lambda(lambda) drifts downward;
whenever L = 16 Lambda / b^2 crosses -16 mu_k the degree-k harmonic sector
degenerates and a nonradial branch can split off.  This scan brackets and
bisects those crossings for k = 1..K and prints the certified records.

usage: python3 demos/bifurcation_scan.py [K]   (default K = 1; K = 3 takes
about half a minute since every scan point solves an ODE and an eigenproblem)
"""

import sys

from hardylab import LambdaCache, find_lambda_k

N, p = 4, 2.0
K = int(sys.argv[1]) if len(sys.argv) > 1 else 1

cache = LambdaCache()
print(f"N = {N}, p = {p}: scanning sectors k = 1..{K}")
for k in range(1, K + 1):
    bp = find_lambda_k(N, p, k, cache=cache)
    lo, hi = bp.bracket
    print(f"k = {k}")
    print(f"  lambda_k            : {bp.lambda_k:.10f}")
    print(f"  bracket             : [{lo:.10f}, {hi:.10f}]")
    print(f"  Morse index         : {bp.morse_before} -> {bp.morse_after}"
          f"  (jump {bp.morse_after - bp.morse_before} = sector multiplicity)")
    print(f"  predicted branches  : {bp.predicted_branches}")
