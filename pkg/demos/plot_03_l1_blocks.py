"""
Multiplication and shift on L^1[1, inf)
=======================================

On each interval ``[k, k+1)`` both operators act by scalars against the first
interval, so the first ``N`` blocks form an exact ``N x N`` pair.  We tabulate
the semidistance as ``N`` grows and look at the first Riesz projections.
"""

import numpy as np

from semispec import l1_discretization, rho

###############################################################################
# Semidistance per truncation
# ---------------------------
# Closed forms: ``varrho(T_N, S_N) = 1 - 1/N`` and
# ``varrho(S_N, T_N) = 1 - 1/N^2``.  A value of 1/2 has been claimed for the
# full operators; the table lets you judge that claim.

print(f"{'N':>3} {'(T,S)':>10} {'(S,T)':>10} {'rho':>10} {'||Q1-P1||':>10}")
for N in range(2, 9):
    pair = l1_discretization(N)
    rep = rho(pair.a, pair.b, "geometric")
    fa, fb = rep.families
    gap = np.linalg.norm(fb.projections[0] - fa.projections[0])
    print(f"{N:3d} {rep.varrho_ab:10.6f} {rep.varrho_ba:10.6f} {rep.rho:10.6f} {gap:10.4f}")

###############################################################################
# The projection of ``S`` onto its eigenvalue 1 has entries ``1/(k^2 - 1)``
# below the first row, so it differs from that of ``T``.

pair = l1_discretization(5)
rep = rho(pair.a, pair.b, "geometric")
print(np.round(rep.families[1].projections[0].real, 4))
