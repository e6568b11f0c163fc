"""Order and type of the entire function ``f(z) = exp(z a) exp(-z b)``.

The Taylor coefficients are ``C^n 1 / n!``, so both quantities come straight
from a :class:`~semispec.semidistance.CommutatorSequence`.  At exponential
order the type equals ``varrho(a, b)``, which gives a third estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotApplicableError, WindowTooShortError
from .semidistance import CommutatorSequence, tail_window

MIN_N_MAX = 50
ORDER_WINDOW = 0.2


def log_factorials(n_max: int) -> np.ndarray:
    """``log k!`` for k = 0..n_max by exact summation of logs."""
    out = np.zeros(n_max + 1)
    if n_max >= 1:
        out[1:] = np.cumsum(np.log(np.arange(1, n_max + 1, dtype=float)))
    return out


def _log_coefficients(seq: CommutatorSequence) -> np.ndarray:
    return np.asarray(seq.log_norms) - log_factorials(seq.n_max)


def _check(seq: CommutatorSequence) -> tuple[int, int]:
    if seq.n_max < MIN_N_MAX:
        raise WindowTooShortError(f"growth estimates need n_max >= {MIN_N_MAX}, got {seq.n_max}")
    return tail_window(seq.n_max)


def order_raw(seq: CommutatorSequence) -> float:
    """Windowed max of ``n log n / -log||a_n||`` over the tail half.

    Converges like ``1 / log n``; kept as a diagnostic next to
    :func:`order_estimate`.
    """
    lo, hi = _check(seq)
    if seq.terminated:
        return 0.0
    ns = np.arange(max(lo, 2), hi + 1)
    neg = -_log_coefficients(seq)[ns]
    return float(np.max(ns * np.log(ns) / neg))


def order_estimate(seq: CommutatorSequence) -> float:
    """Order of ``f`` from its coefficient norms.

    ``-log||a_n||`` is regressed on ``n log n, n, log n, 1`` over the tail
    half; the order is the reciprocal of the ``n log n`` coefficient.  For
    coefficient norms of the form ``C r^n n^k / n!`` the regression is exact
    up to Stirling's ``1/(12n)`` term, unlike the raw ratio.  Returns 0 for a
    terminated (polynomial) sequence.
    """
    lo, hi = _check(seq)
    if seq.terminated:
        return 0.0
    ns = np.arange(max(lo, 2), hi + 1, dtype=float)
    y = -_log_coefficients(seq)[ns.astype(int)]
    basis = np.column_stack([ns * np.log(ns), ns, np.log(ns), np.ones_like(ns)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    lead = float(coef[0])
    if lead <= 0:
        return math.inf
    return 1.0 / lead


def type_estimate(seq: CommutatorSequence, order: float) -> float:
    """Windowed max of ``(1/e) n exp(log||a_n|| / n)`` over the tail half.

    Only meaningful at exponential order: raises :class:`NotApplicableError`
    unless ``|order - 1| <= 0.2``.  Terminated sequences give 0.
    """
    lo, hi = _check(seq)
    if seq.terminated:
        return 0.0
    if abs(order - 1.0) > ORDER_WINDOW:
        raise NotApplicableError(f"type formula needs exponential order, got order {order:.4g}")
    ns = np.arange(max(lo, 1), hi + 1)
    la = _log_coefficients(seq)[ns]
    return float(np.max(ns * np.exp(la / ns)) / math.e)


@dataclass(frozen=True)
class GrowthEstimate:
    order: float
    type: Optional[float]
    n_used: int
    degenerate: bool
    order_raw: float = 0.0

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "type": self.type,
            "n_used": self.n_used,
            "degenerate": self.degenerate,
            "order_raw": self.order_raw,
        }


def growth_estimate(seq: CommutatorSequence) -> GrowthEstimate:
    """Order and (when applicable) type; ``type`` is None off exponential order."""
    if seq.terminated:
        return GrowthEstimate(0.0, 0.0, seq.terminated_at, True, 0.0)
    order = order_estimate(seq)
    try:
        tau = type_estimate(seq, order)
    except NotApplicableError:
        tau = None
    return GrowthEstimate(order, tau, seq.n_max, False, order_raw(seq))
