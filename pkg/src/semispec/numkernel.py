"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  :func:`as_mat`
validates and freezes them (square, finite, read-only); everything else in the
package accepts anything :func:`as_mat` accepts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, NonFiniteError, SingularPivotError

NORM_KINDS = ("fro", "one", "inf")

_NORM_ALIASES = {
    "fro": "fro",
    "frobenius": "fro",
    "one": "one",
    "1": "one",
    "inf": "inf",
}

# relative pivot magnitude below which a matrix is treated as singular
PIVOT_THRESHOLD = 1e-14


def as_mat(x, copy=True) -> np.ndarray:
    """Return ``x`` as a read-only square complex matrix.

    Scalars become 1x1 matrices.  Raises :class:`DimensionError` for
    non-square or empty input and :class:`NonFiniteError` for NaN/Inf entries.
    """
    arr = np.array(x, dtype=np.complex128, copy=copy)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix has non-finite entries")
    arr.flags.writeable = False
    return arr


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError("matrix dimension must be at least 1")
    eye = np.eye(n, dtype=np.complex128)
    eye.flags.writeable = False
    return eye


def zeros(n: int) -> np.ndarray:
    z = np.zeros((n, n), dtype=np.complex128)
    z.flags.writeable = False
    return z


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def _finite(out: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{what} produced non-finite entries")
    out.flags.writeable = False
    return out


def mat_mul(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    _check_same_dim(a, b)
    with np.errstate(all="ignore"):
        out = np.asarray(a @ b, dtype=np.complex128)
    return _finite(out, "mat_mul")


def mat_add(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    _check_same_dim(a, b)
    return _finite(np.asarray(a + b, dtype=np.complex128), "mat_add")


def mat_sub(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    _check_same_dim(a, b)
    return _finite(np.asarray(a - b, dtype=np.complex128), "mat_sub")


def mat_scale(alpha: complex, a) -> np.ndarray:
    return _finite(np.asarray(complex(alpha) * np.asarray(a), dtype=np.complex128), "mat_scale")


def normalize_norm_kind(kind: str) -> str:
    try:
        return _NORM_ALIASES[str(kind).lower()]
    except KeyError:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}") from None


def norm(a, kind: str = "fro") -> float:
    """Frobenius, induced 1 (max column sum) or induced inf (max row sum) norm.

    All three are submultiplicative.
    """
    kind = normalize_norm_kind(kind)
    a = np.asarray(a)
    if kind == "fro":
        return float(np.linalg.norm(a, "fro"))
    if kind == "one":
        return float(np.abs(a).sum(axis=0).max())
    return float(np.abs(a).sum(axis=1).max())


def trace(a) -> complex:
    return complex(np.trace(np.asarray(a)))


@dataclass(frozen=True)
class LuFactors:
    """Partial-pivoting LU factors with ``A[perm] = L @ U``.

    ``lu`` holds L (unit lower, below the diagonal) and U packed together;
    ``piv`` keeps the LAPACK swap sequence used by the solver.
    """

    perm: np.ndarray
    lu: np.ndarray
    piv: np.ndarray
    sign: complex
    scale: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    @property
    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def det(self) -> complex:
        return complex(self.sign * np.prod(np.diag(self.lu)))


def _swaps_to_perm(piv: np.ndarray) -> tuple[np.ndarray, int]:
    perm = np.arange(len(piv))
    nswaps = 0
    for i, p in enumerate(piv):
        if p != i:
            perm[[i, p]] = perm[[p, i]]
            nswaps += 1
    return perm, nswaps


def lu_factor(a, threshold: float = PIVOT_THRESHOLD) -> LuFactors:
    """Factor ``a`` with partial pivoting.

    Raises :class:`SingularPivotError` when some pivot is smaller than
    ``threshold * ||a||_fro``.
    """
    a = as_mat(a)
    scale = norm(a)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if smallest <= threshold * scale:
        raise SingularPivotError(
            f"pivot {smallest:.3e} below threshold {threshold * scale:.3e}",
            pivot=smallest,
            threshold=threshold * scale,
        )
    perm, nswaps = _swaps_to_perm(piv)
    lu.flags.writeable = False
    return LuFactors(perm=perm, lu=lu, piv=piv, sign=(-1.0) ** nswaps, scale=scale)


def lu_solve(f: LuFactors, rhs) -> np.ndarray:
    rhs = np.asarray(rhs, dtype=np.complex128)
    if rhs.shape[0] != f.n:
        raise DimensionError(f"rhs has {rhs.shape[0]} rows, factors have dimension {f.n}")
    x = sla.lu_solve((f.lu, f.piv), rhs, check_finite=False)
    return _finite(x, "lu_solve")


def det(a) -> complex:
    try:
        return lu_factor(a, threshold=0.0).det()
    except SingularPivotError:
        return 0j


def inv(a) -> np.ndarray:
    a = as_mat(a)
    return lu_solve(lu_factor(a), np.eye(a.shape[0]))
