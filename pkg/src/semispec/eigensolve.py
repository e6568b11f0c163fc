"""Eigenvalues by Householder-Hessenberg reduction and shifted complex QR,
plus clustering of the raw eigenvalues into distinct spectral points."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ClusteringAmbiguityError, ConvergenceError
from .numkernel import as_mat, norm

DEFLATION_TOL = 1e-13


def hessenberg(a) -> np.ndarray:
    """Upper Hessenberg matrix unitarily similar to ``a`` (Householder)."""
    h = np.array(as_mat(a), dtype=np.complex128)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(x: complex, y: complex) -> tuple[float, complex]:
    """(c, s) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    ay = abs(y)
    if ay == 0.0:
        return 1.0, 0j
    ax = abs(x)
    if ax == 0.0:
        return 0.0, y.conjugate() / ay
    r = math.hypot(ax, ay)
    return ax / r, (x / ax) * y.conjugate() / r


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = 0.5 * (a - d)
    disc = cmath.sqrt(half * half + b * c)
    m1 = 0.5 * (a + d) + disc
    m2 = 0.5 * (a + d) - disc
    return m1 if abs(m1 - d) <= abs(m2 - d) else m2


def _qr_sweep(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One explicitly shifted QR step on the active block h[lo:hi+1, lo:hi+1]."""
    blk = h[lo:hi + 1, lo:hi + 1]
    m = blk.shape[0]
    idx = np.arange(m)
    blk[idx, idx] -= mu
    rots = []
    for k in range(m - 1):
        c, s = _givens(complex(blk[k, k]), complex(blk[k + 1, k]))
        rows = blk[k:k + 2, k:].copy()
        blk[k, k:] = c * rows[0] + s * rows[1]
        blk[k + 1, k:] = -s.conjugate() * rows[0] + c * rows[1]
        blk[k + 1, k] = 0.0
        rots.append((c, s))
    for k, (c, s) in enumerate(rots):
        top = min(k + 2, m)
        cols = blk[:top, k:k + 2].copy()
        # right-multiply by G^H
        blk[:top, k] = c * cols[:, 0] + s.conjugate() * cols[:, 1]
        blk[:top, k + 1] = -s * cols[:, 0] + c * cols[:, 1]
    blk[idx, idx] += mu


def eigenvalues(a, max_sweeps: Optional[int] = None) -> list[complex]:
    """All eigenvalues of ``a`` (with multiplicity).

    Raises :class:`ConvergenceError` if more than ``max_sweeps`` QR sweeps
    (default ``30 * n``) are needed.
    """
    h = hessenberg(a)
    n = h.shape[0]
    if max_sweeps is None:
        max_sweeps = 30 * n
    hnorm = max(norm(h), np.finfo(float).tiny)
    eigs: list[complex] = []
    hi = n - 1
    sweeps = 0
    since_deflation = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            local = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            # floor keeps the test at roundoff level relative to ||h|| for tiny diagonals
            if abs(h[lo, lo - 1]) <= DEFLATION_TOL * max(local, 1e-3 * hnorm):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(complex(h[hi, hi]))
            hi -= 1
            since_deflation = 0
            continue
        sweeps += 1
        since_deflation += 1
        if sweeps > max_sweeps:
            raise ConvergenceError(
                f"QR iteration did not converge in {max_sweeps} sweeps",
                defect=float(abs(h[hi, hi - 1])),
            )
        if since_deflation % 11 == 10:
            mu = complex(h[hi, hi]) + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(
                complex(h[hi - 1, hi - 1]), complex(h[hi - 1, hi]),
                complex(h[hi, hi - 1]), complex(h[hi, hi]),
            )
        _qr_sweep(h, lo, hi, mu)
    return eigs[::-1]


@dataclass(frozen=True)
class ZeroCluster:
    radius: float
    swallowed_count: int


@dataclass(frozen=True)
class SpectrumDescription:
    """Distinct spectral points with multiplicities, sorted by descending
    modulus (ties by ascending argument), and an optional zero cluster."""

    points: tuple[tuple[complex, int], ...]
    zero_cluster: Optional[ZeroCluster]
    spectral_radius: float
    cluster_tol: float = 0.0

    @property
    def values(self) -> list[complex]:
        return [v for v, _ in self.points]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.points]

    @property
    def dimension(self) -> int:
        swallowed = self.zero_cluster.swallowed_count if self.zero_cluster else 0
        return sum(self.multiplicities) + swallowed

    @property
    def zero_radius(self) -> float:
        return self.zero_cluster.radius if self.zero_cluster else 0.0

    def to_dict(self) -> dict:
        return {
            "points": [
                {"re": v.real, "im": v.imag, "multiplicity": m} for v, m in self.points
            ],
            "zero_cluster": None if self.zero_cluster is None else {
                "radius": self.zero_cluster.radius,
                "swallowed_count": self.zero_cluster.swallowed_count,
            },
            "spectral_radius": self.spectral_radius,
            "cluster_tol": self.cluster_tol,
        }


def _sort_key(z: complex):
    return (-abs(z), cmath.phase(z))


def cluster_spectrum(eigs, cluster_tol: float, zero_radius: float = 0.0) -> SpectrumDescription:
    """Group eigenvalues by single linkage at ``cluster_tol``.

    With ``zero_radius > 0`` every eigenvalue of modulus at most
    ``zero_radius`` is swallowed by the zero cluster; a linkage group with
    members on both sides of that circle is ambiguous and raises
    :class:`ClusteringAmbiguityError`.
    """
    eigs = [complex(z) for z in eigs]
    if not eigs:
        raise ValueError("need at least one eigenvalue (dimension >= 1)")
    if cluster_tol < 0 or zero_radius < 0:
        raise ValueError("cluster_tol and zero_radius must be nonnegative")
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= cluster_tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(eigs[i])

    points = []
    swallowed = 0
    for members in groups.values():
        if zero_radius > 0:
            inside = [abs(z) <= zero_radius for z in members]
            if all(inside):
                swallowed += len(members)
                continue
            if any(inside):
                raise ClusteringAmbiguityError(
                    f"an eigenvalue group straddles the zero-cluster radius {zero_radius:g}; "
                    "adjust cluster_tol or zero_radius"
                )
        value = sum(members) / len(members)
        if zero_radius > 0 and abs(value) <= zero_radius:
            raise ClusteringAmbiguityError(
                "a group outside the zero cluster has its mean inside it; adjust tolerances"
            )
        points.append((value, len(members)))
    points.sort(key=lambda p: _sort_key(p[0]))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i][0] - points[j][0]) <= cluster_tol:
                raise ClusteringAmbiguityError(
                    "two clustered points are closer than cluster_tol; adjust tolerances"
                )
    return SpectrumDescription(
        points=tuple(points),
        zero_cluster=ZeroCluster(zero_radius, swallowed) if zero_radius > 0 else None,
        spectral_radius=max(abs(z) for z in eigs),
        cluster_tol=cluster_tol,
    )


def default_cluster_tol(a) -> float:
    return 1e-8 * (1.0 + norm(a))


def spectrum(a, cluster_tol: Optional[float] = None, zero_radius: float = 0.0,
             max_sweeps: Optional[int] = None) -> SpectrumDescription:
    """Eigenvalues of ``a`` clustered into a :class:`SpectrumDescription`."""
    a = as_mat(a)
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(a)
    return cluster_spectrum(eigenvalues(a, max_sweeps), cluster_tol, zero_radius)


def spectral_radius(a) -> float:
    return max(abs(z) for z in eigenvalues(a))
