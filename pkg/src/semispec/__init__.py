"""Spectral semidistance of complex square matrices.

``varrho(a, b) = limsup ||C^n 1||^(1/n)`` with ``C x = a x - x b``, computed by
the root test on commutator powers, by Riesz projections, and by the type of
``exp(z a) exp(-z b)``; ``rho(a, b) = max(varrho(a, b), varrho(b, a))``.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    PairSpec,
    corpus_pairs,
    free_algebra_pair,
    jordan_perturb,
    l1_discretization,
    random_diagonalizable_pair,
)
from .eigensolve import SpectrumDescription, cluster_spectrum, eigenvalues, spectrum  # noqa: E402
from .growth import GrowthEstimate, growth_estimate, order_estimate, type_estimate  # noqa: E402
from .riesz import (  # noqa: E402
    ProjectionFamily,
    SemisimpleSplit,
    projection_family,
    resolvent,
    riesz_projection,
    semisimple_split,
)
from .semidistance import (  # noqa: E402
    CommutatorSequence,
    GeometricBreakdown,
    GeometricOptions,
    SemidistanceReport,
    commutator_sequence,
    quasinilpotent_equivalent,
    rho,
    varrho_charf,
    varrho_definition,
    varrho_geometric,
)

__all__ = [
    "CommutatorSequence", "GeometricBreakdown", "GeometricOptions", "GrowthEstimate",
    "PairSpec", "ProjectionFamily", "SemidistanceReport", "SemisimpleSplit",
    "SpectrumDescription", "cluster_spectrum", "commutator_sequence", "corpus_pairs",
    "eigenvalues", "free_algebra_pair", "growth_estimate", "jordan_perturb",
    "l1_discretization", "order_estimate", "projection_family", "quasinilpotent_equivalent",
    "random_diagonalizable_pair", "resolvent", "rho", "riesz_projection", "semisimple_split",
    "spectrum", "type_estimate", "varrho_charf", "varrho_definition", "varrho_geometric",
]
