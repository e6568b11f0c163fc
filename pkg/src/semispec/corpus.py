"""Deterministic matrix pairs: the two worked operator examples and seeded
random families for checking the semidistance routes against each other."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import NoEligibleEigenspaceError
from .numkernel import as_mat, mat_mul, norm


@dataclass(frozen=True)
class Expected:
    varrho_ab: Optional[float]
    varrho_ba: Optional[float]
    provenance: str


@dataclass(frozen=True)
class PairSpec:
    name: str
    a: np.ndarray
    b: np.ndarray
    expected: Optional[Expected] = None
    zero_radius: Optional[float] = None
    cluster_tol: Optional[float] = None
    note: str = ""
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        a, b = as_mat(self.a), as_mat(self.b)
        if a.shape != b.shape:
            raise ValueError(f"pair {self.name!r}: a is {a.shape}, b is {b.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]


# x1, x2 realize x1^2 = x1, x2^2 = x2, x1 x2 = 0, x2 x1 != 0
X1 = as_mat([[1, 0], [0, 0]])
X2 = as_mat([[0, 0], [1, 1]])


def free_algebra_pair() -> PairSpec:
    """``a = x1/2``, ``b = -x2/2`` for two idempotents with ``x1 x2 = 0 != x2 x1``.

    A 2x2 realization is enough: the commutator powers only involve the four
    relations and the nonvanishing of ``x1 + x2`` and ``x2 x1``.
    """
    x1, x2 = X1, X2
    if not (np.array_equal(mat_mul(x1, x1), x1) and np.array_equal(mat_mul(x2, x2), x2)):
        raise AssertionError("x1, x2 must be idempotent")
    if np.any(mat_mul(x1, x2)) or not np.any(mat_mul(x2, x1)):
        raise AssertionError("need x1 x2 = 0 and x2 x1 != 0")
    return PairSpec(
        name="free-algebra",
        a=0.5 * x1,
        b=-0.5 * x2,
        expected=Expected(0.5, 1.0, "asymmetry example: ||C^n_{a,b}1|| ~ 2^-n, ||C^n_{b,a}1|| ~ 1"),
        note="x1=[[1,0],[0,0]], x2=[[0,0],[1,1]]",
    )


def l1_discretization(N: int) -> PairSpec:
    """First ``N`` blocks of the multiplication/shift pair on ``L^1[1, inf)``.

    ``T`` acts on ``[k, k+1)`` as multiplication by ``1/k``; ``S`` is the
    identity on ``[1, 2)`` and ``[f(t) + f(t-k+1)] / k^2`` on ``[k, k+1)``.
    For each offset ``s in [0, 1)`` the values ``f(k + s)`` form an invariant
    fibre on which both operators act by the scalar matrices

        T_N = diag(1, 1/2, ..., 1/N),
        S_N[1,1] = 1,  S_N[k,k] = S_N[k,1] = 1/k^2  (k >= 2).

    The claimed value ``rho(T, S) = 1/2`` is recorded in ``note`` only; it
    is what the reported numbers are compared against, not an expectation.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    k = np.arange(1, N + 1, dtype=float)
    t = np.diag(1.0 / k)
    s = np.zeros((N, N))
    s[0, 0] = 1.0
    for i in range(1, N):
        s[i, i] = 1.0 / k[i] ** 2
        s[i, 0] = 1.0 / k[i] ** 2
    return PairSpec(
        name=f"l1-N{N}",
        a=t,
        b=s,
        expected=None,
        zero_radius=0.5 / N**2,
        note="claimed for the full operators: Q_1 = P_1 and rho(T,S) = 1/2 (to be adjudicated, not asserted)",
        meta={"N": N},
    )


def _unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _conditioned(rng: np.random.Generator, n: int, max_cond: float) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    kappa = rng.uniform(2.0, max_cond)
    sv = np.geomspace(1.0, kappa, n)
    return _unitary(rng, n) @ np.diag(sv) @ _unitary(rng, n)


def _separated_points(rng: np.random.Generator, count: int, gap: float) -> np.ndarray:
    radius = max(1.0, gap * np.sqrt(count) * 1.5)
    pts: list[complex] = []
    while len(pts) < count:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if all(abs(z - w) >= gap for w in pts):
            pts.append(z)
    return np.array(pts)


def random_diagonalizable_pair(n: int, gap: float, seed: int, *, repeat: int = 0,
                               commuting: bool = False, diagonal: bool = False,
                               max_cond: float = 100.0) -> PairSpec:
    """``a = V Da V^-1``, ``b = W Db W^-1`` with seeded eigenvalues.

    Distinct eigenvalues of each matrix are at least ``gap`` apart, and the
    similarity transforms have condition number at most ``max_cond``.
    ``repeat`` extra copies of the first eigenvalue of ``a`` are included
    (room for :func:`jordan_perturb`).  ``commuting`` shares one transform
    between ``a`` and ``b``; ``diagonal`` uses the identity for both.
    No expected values are stored.
    """
    if n < 1 or gap <= 0:
        raise ValueError("need n >= 1 and gap > 0")
    if repeat >= n:
        raise ValueError("repeat must be smaller than n")
    rng = np.random.default_rng(seed)
    da = _separated_points(rng, n - repeat, gap)
    da = np.concatenate([np.repeat(da[:1], repeat), da])
    db = _separated_points(rng, n, gap)
    if diagonal:
        v = w = np.eye(n, dtype=complex)
    else:
        v = _conditioned(rng, n, max_cond)
        w = v if commuting else _conditioned(rng, n, max_cond)
    a = v @ np.diag(da) @ np.linalg.inv(v)
    b = w @ np.diag(db) @ np.linalg.inv(w)
    tag = "diagonal" if diagonal else ("commuting" if commuting else "random")
    return PairSpec(
        name=f"{tag}-n{n}-s{seed}" + (f"-r{repeat}" if repeat else ""),
        a=a,
        b=b,
        meta={"da": da, "db": db, "V": v, "W": w, "gap": gap, "seed": seed},
    )


def _eigenbasis(spec: PairSpec, which: str):
    m = spec.a if which == "a" else spec.b
    key_d, key_v = ("da", "V") if which == "a" else ("db", "W")
    if key_d in spec.meta:
        return np.asarray(spec.meta[key_d]), np.asarray(spec.meta[key_v])
    off = m - np.diag(np.diag(m))
    if not np.any(off):
        return np.diag(m).copy(), np.eye(m.shape[0], dtype=complex)
    raise NoEligibleEigenspaceError(
        f"matrix {which!r} of {spec.name!r} is not diagonal and carries no eigenbasis"
    )


def jordan_perturb(spec: PairSpec, which: str = "a", size: int = 2) -> PairSpec:
    """Add a nilpotent supported on a repeated eigenvalue's eigenspace.

    The nilpotent is ``V E V^-1`` with ``E`` a ``size x size`` shift on
    eigen-indices sharing one eigenvalue, so it commutes with the matrix and
    leaves every semidistance unchanged.  The returned pair carries a
    clustering tolerance of ``gap / 100`` since the computed eigenvalues of a
    Jordan block split by roughly ``eps^(1/size)``.
    """
    if which not in ("a", "b"):
        raise ValueError("which must be 'a' or 'b'")
    if size < 2:
        raise ValueError("size must be at least 2")
    d, v = _eigenbasis(spec, which)
    idx = None
    for val in d:
        same = np.flatnonzero(d == val)
        if len(same) >= size:
            idx = same[:size]
            break
    if idx is None:
        raise NoEligibleEigenspaceError(f"no eigenvalue of {which!r} has multiplicity >= {size}")
    e = np.zeros((len(d), len(d)), dtype=complex)
    for i, j in zip(idx[:-1], idx[1:]):
        e[i, j] = 1.0
    nil = v @ e @ np.linalg.inv(v)
    m = spec.a if which == "a" else spec.b
    perturbed = np.asarray(m) + nil
    distinct = np.unique(np.round(np.concatenate([
        np.asarray(spec.meta.get("da", np.diag(spec.a))),
        np.asarray(spec.meta.get("db", np.diag(spec.b)))]), 12))
    gaps = [abs(x - y) for i, x in enumerate(distinct) for y in distinct[i + 1:]]
    gap = spec.meta.get("gap", min(gaps) if gaps else 1.0)
    kw = {"a": perturbed} if which == "a" else {"b": perturbed}
    return replace(
        spec,
        name=f"{spec.name}+jordan{which}{size}",
        cluster_tol=gap / 100.0,
        meta={**spec.meta, f"nilpotent_{which}": nil},
        **kw,
    )


def small_examples() -> list[PairSpec]:
    """Hand-checkable pairs used throughout the tests."""
    return [
        PairSpec("swap-diag", np.diag([1.0, 2.0]), np.diag([2.0, 1.0]),
                 Expected(1.0, 1.0, "diagonal projector products by hand")),
        PairSpec("jordan-vs-identity", [[1.0, 1.0], [0.0, 1.0]], np.eye(2),
                 Expected(0.0, 0.0, "a - b nilpotent and commuting")),
        PairSpec("commuting-diag", np.diag([3.0, 1.0]), np.eye(2),
                 Expected(2.0, 2.0, "r(a - b) for commuting a, b")),
    ]


def corpus_pairs(n_random: int = 6) -> list[PairSpec]:
    """Every builder's output at desk-scale parameters."""
    pairs = [free_algebra_pair()]
    pairs += [l1_discretization(N) for N in range(2, 9)]
    pairs += small_examples()
    for seed in range(n_random):
        n = 2 + seed % 6
        pairs.append(random_diagonalizable_pair(n, 0.1, seed))
        pairs.append(random_diagonalizable_pair(n, 0.1, 100 + seed, diagonal=True))
    for seed in range(3):
        base = random_diagonalizable_pair(4 + seed, 0.1, 200 + seed, repeat=1 + seed)
        pairs.append(jordan_perturb(base, "a", 2))
    return pairs


def scale(spec: PairSpec) -> float:
    return 1.0 + max(norm(spec.a), norm(spec.b))
