"""
Quasinilpotent perturbations
============================

Adding a nilpotent that commutes with a matrix changes nothing the
semidistance can see.  Two matrices are at distance zero exactly when their
spectra and Riesz projections agree.
"""

import numpy as np

from semispec import jordan_perturb, quasinilpotent_equivalent, random_diagonalizable_pair, varrho_geometric
from semispec.semidistance import GeometricOptions

###############################################################################
# Invariance under a Jordan perturbation
# --------------------------------------

base = random_diagonalizable_pair(5, 0.2, 31, repeat=2)
pert = jordan_perturb(base, "a", 3)
opts = GeometricOptions(cluster_tol=pert.cluster_tol)
v0, bd0 = varrho_geometric(base.a, base.b, opts)
v1, bd1 = varrho_geometric(pert.a, pert.b, opts)
print(f"before {v0:.12f}  after {v1:.12f}  same active pairs: {bd0.active_set == bd1.active_set}")

###############################################################################
# Deciding equivalence
# --------------------

cases = {
    "1 + nilpotent vs 1": ([[1.0, 1.0], [0.0, 1.0]], np.eye(2)),
    "diag(1,2) vs diag(2,1)": (np.diag([1.0, 2.0]), np.diag([2.0, 1.0])),
    "same spectrum, other projections": ([[1.0, 1.0], [0.0, 2.0]], np.diag([1.0, 2.0])),
}
for label, (a, b) in cases.items():
    ok, ev = quasinilpotent_equivalent(a, b)
    extra = (f"||abar - bbar|| = {ev.semisimple_defect:.1e}" if ok
             else f"witness distance {ev.witness.distance:.3f}")
    print(f"{label:>34}: {ok}  ({extra})")
