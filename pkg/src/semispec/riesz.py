"""Riesz projections by trapezoidal quadrature of the resolvent on circles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigensolve import SpectrumDescription, eigenvalues
from .errors import ConvergenceError, GapTooSmallError, ProjectionInvariantError
from .numkernel import as_mat, lu_factor, lu_solve, norm

DEFAULT_NODES = 16
DEFAULT_NODES_CAP = 512
CONVERGENCE_TOL = 1e-11
TRACE_TOL = 1e-6


def resolvent(a, z: complex) -> np.ndarray:
    """``(z*1 - a)^{-1}``; raises SingularPivotError when z is on the spectrum."""
    a = as_mat(a)
    n = a.shape[0]
    shifted = complex(z) * np.eye(n) - a
    return lu_solve(lu_factor(shifted), np.eye(n))


def _node_sum(a: np.ndarray, alpha: complex, radius: float, nodes: int, odd_only: bool) -> np.ndarray:
    n = a.shape[0]
    acc = np.zeros((n, n), dtype=np.complex128)
    start, step = (1, 2) if odd_only else (0, 1)
    for m in range(start, nodes, step):
        w = np.exp(2j * np.pi * m / nodes)
        acc += w * resolvent(a, alpha + radius * w)
    return acc


def trapezoid_projection(a, alpha: complex, radius: float, nodes: int) -> np.ndarray:
    """Fixed ``nodes``-point trapezoidal rule for the Riesz projection on the
    circle of ``radius`` about ``alpha``."""
    a = as_mat(a)
    if nodes < 1:
        raise ValueError("nodes must be positive")
    return (radius / nodes) * _node_sum(a, complex(alpha), float(radius), nodes, False)


def _adaptive_projection(a, alpha, radius, nodes, nodes_cap, tol):
    if nodes < 8:
        raise ValueError("nodes must be at least 8")
    alpha = complex(alpha)
    radius = float(radius)
    acc = _node_sum(a, alpha, radius, nodes, False)
    p = (radius / nodes) * acc
    defect = np.inf
    while True:
        if 2 * nodes > max(nodes_cap, nodes):
            raise ConvergenceError(
                f"Riesz projection at {alpha:.6g} not converged with {nodes} nodes "
                f"(last change {defect:.3e})",
                defect=defect,
            )
        # the 2N-point rule reuses the N-point nodes; only odd nodes are new
        acc = acc + _node_sum(a, alpha, radius, 2 * nodes, True)
        nodes *= 2
        p_new = (radius / nodes) * acc
        defect = norm(p_new - p)
        p = p_new
        if defect < tol * (1.0 + norm(p)):
            return p, nodes, defect


def riesz_projection(a, alpha: complex, radius: float, nodes: int = DEFAULT_NODES,
                     nodes_cap: int = DEFAULT_NODES_CAP, tol: float = CONVERGENCE_TOL) -> np.ndarray:
    """Riesz projection of ``a`` for the spectrum inside the circle |z - alpha| = radius.

    The trapezoidal rule is doubled from ``nodes`` until two successive
    estimates differ by less than ``tol * (1 + ||p||)``.  The caller must make
    sure the circle avoids the spectrum; a circle enclosing no eigenvalue
    yields (numerically) zero.
    """
    p, _, _ = _adaptive_projection(as_mat(a), alpha, radius, nodes, nodes_cap, tol)
    p.flags.writeable = False
    return p


@dataclass(frozen=True)
class ProjectionDiagnostics:
    idempotency_defect: float
    commutation_defect: float
    trace_value: complex
    nodes_used: int
    radius_used: float
    orthogonality_defect: float = 0.0
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return {
            "idempotency_defect": self.idempotency_defect,
            "commutation_defect": self.commutation_defect,
            "orthogonality_defect": self.orthogonality_defect,
            "trace": [self.trace_value.real, self.trace_value.imag],
            "nodes_used": self.nodes_used,
            "radius_used": self.radius_used,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class ProjectionFamily:
    source: np.ndarray
    points: SpectrumDescription
    projections: tuple[np.ndarray, ...]
    complement: np.ndarray
    diagnostics: tuple[ProjectionDiagnostics, ...]
    complement_defect: float = 0.0
    resolution_defect: float = 0.0

    @property
    def max_defects(self) -> dict[str, float]:
        d = self.diagnostics
        return {
            "idempotency": max((x.idempotency_defect for x in d), default=0.0),
            "orthogonality": max((x.orthogonality_defect for x in d), default=0.0),
            "commutation": max((x.commutation_defect for x in d), default=0.0),
            "resolution": self.resolution_defect,
            "complement": self.complement_defect,
            "trace": max(
                (abs(x.trace_value - m) for x, m in zip(d, self.points.multiplicities)),
                default=0.0,
            ),
        }

    def to_dict(self) -> dict:
        return {
            "spectrum": self.points.to_dict(),
            "projections": [x.to_dict() for x in self.diagnostics],
            "complement_defect": self.complement_defect,
            "resolution_defect": self.resolution_defect,
        }


def isolating_radii(spec: SpectrumDescription, scale: float) -> list[float]:
    """Half the distance to the nearest other point or to the zero-cluster circle.

    A lone point with nothing to isolate from gets a circle of radius
    ``0.5 * (1 + scale)``.
    """
    values = spec.values
    radii = []
    for i, v in enumerate(values):
        gaps = [abs(v - w) for j, w in enumerate(values) if j != i]
        if spec.zero_cluster is not None:
            gaps.append(abs(v) - spec.zero_cluster.radius)
        radii.append(0.5 * min(gaps) if gaps else 0.5 * (1.0 + scale))
    return radii


def projection_family(a, spec: SpectrumDescription, nodes: int = DEFAULT_NODES,
                      nodes_cap: int = DEFAULT_NODES_CAP,
                      tol_proj: Optional[float] = None) -> ProjectionFamily:
    """Projections for every point of ``spec`` plus the complement ``1 - sum(p)``.

    The family is validated (idempotency, mutual orthogonality, commutation
    with ``a``, resolution of the identity, integer traces) and
    :class:`ProjectionInvariantError` is raised naming the worst defect.
    ``tol_proj`` overrides the default ``1e-9 * (1 + ||p||^2)``.
    """
    a = as_mat(a)
    n = a.shape[0]
    anorm = norm(a)
    floor = 1e-10 * (1.0 + anorm)
    radii = isolating_radii(spec, anorm)
    for v, r in zip(spec.values, radii):
        if r < floor:
            raise GapTooSmallError(
                f"isolating radius {r:.3e} for point {v:.6g} is below {floor:.3e}"
            )

    projs, used = [], []
    for v, r in zip(spec.values, radii):
        p, nodes_used, _ = _adaptive_projection(a, v, r, nodes, nodes_cap, CONVERGENCE_TOL)
        p.flags.writeable = False
        projs.append(p)
        used.append(nodes_used)
    complement = np.eye(n, dtype=np.complex128) - sum(projs, np.zeros((n, n), complex))
    complement.flags.writeable = False

    def tol_for(p):
        return tol_proj if tol_proj is not None else 1e-9 * (1.0 + norm(p) ** 2)

    diags = []
    worst = (0.0, "", None)
    for i, (p, m, r, k) in enumerate(zip(projs, spec.multiplicities, radii, used)):
        tol = tol_for(p)
        idem = norm(p @ p - p)
        comm = norm(a @ p - p @ a)
        orth = max((max(norm(p @ q), norm(q @ p)) for j, q in enumerate(projs) if j != i),
                   default=0.0)
        tr = complex(np.trace(p))
        diags.append(ProjectionDiagnostics(idem, comm, tr, k, r, orth, tol))
        checks = [
            ("idempotency", idem, tol),
            ("orthogonality", orth, max(tol, max((tol_for(q) for q in projs), default=tol))),
            ("commutation", comm, tol * max(anorm, 1.0)),
            ("trace", abs(tr - m), TRACE_TOL),
        ]
        for name, val, lim in checks:
            if val > lim and val / lim > worst[0]:
                worst = (val / lim, f"{name} defect {val:.3e} > {lim:.3e} at point {spec.values[i]:.6g}", name)

    # with no zero cluster the complement must vanish; otherwise it must be a projection
    ctol = tol_for(complement)
    if spec.zero_cluster is None:
        comp_defect = norm(complement)
    else:
        comp_defect = norm(complement @ complement - complement)
        tr0 = complex(np.trace(complement))
        if abs(tr0 - spec.zero_cluster.swallowed_count) > TRACE_TOL:
            worst = max(worst, (np.inf, f"complement trace {tr0:.6g} != "
                                f"{spec.zero_cluster.swallowed_count}", "trace"),
                        key=lambda w: w[0])
    if comp_defect > ctol and comp_defect / ctol > worst[0]:
        worst = (comp_defect / ctol, f"resolution-of-identity defect {comp_defect:.3e} > {ctol:.3e}",
                 "resolution")
    resolution = norm(sum(projs, np.zeros((n, n), complex)) + complement - np.eye(n))
    if worst[2] is not None:
        raise ProjectionInvariantError(worst[1], defect_name=worst[2], defect=worst[0])
    return ProjectionFamily(
        source=a,
        points=spec,
        projections=tuple(projs),
        complement=complement,
        diagnostics=tuple(diags),
        complement_defect=comp_defect,
        resolution_defect=resolution,
    )


@dataclass(frozen=True)
class SemisimpleSplit:
    semisimple: np.ndarray
    residual: np.ndarray
    residual_spectral_radius: float


def semisimple_split(a, fam: ProjectionFamily) -> SemisimpleSplit:
    """Write ``a = sum(lambda_i p_i) + r`` with ``r`` commuting with ``a``.

    ``r`` is quasinilpotent when the spectrum is fully resolved; with a zero
    cluster it also carries ``a p_0`` and its spectral radius is bounded by
    the cluster radius.
    """
    a = as_mat(a)
    n = a.shape[0]
    semi = np.zeros((n, n), dtype=np.complex128)
    for v, p in zip(fam.points.values, fam.projections):
        semi += v * p
    residual = a - semi
    semi.flags.writeable = False
    residual.flags.writeable = False
    rsr = max(abs(z) for z in eigenvalues(residual))
    return SemisimpleSplit(semi, residual, rsr)
