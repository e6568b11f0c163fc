"""Spectral semidistance of two matrices.

Three routes are provided:

* :func:`varrho_definition` -- root test on the commutator powers
  ``C^n 1 = sum_k (-1)^k binom(n, k) a^(n-k) b^k``;
* :func:`varrho_geometric` -- ``sup |lambda_i - beta_j|`` over pairs of Riesz
  projections with ``p_i q_j != 0`` (finite spectra);
* :func:`varrho_charf` -- the same supremum with a zero cluster, adding the
  moduli of points whose projections interact with the opposite cluster.

:func:`rho` symmetrizes and :func:`quasinilpotent_equivalent` decides
``rho(a, b) == 0``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .eigensolve import SpectrumDescription, spectrum
from .errors import WindowTooShortError
from .numkernel import as_mat, normalize_norm_kind, norm
from .riesz import DEFAULT_NODES_CAP, ProjectionFamily, projection_family, semisimple_split

DEFAULT_N_MAX = 400
DEFAULT_PRODUCT_TOL = 1e-8
FRAGILE_FACTOR = 10.0
MIN_WINDOW = 10

METHODS = ("definition", "geometric", "charf", "growth", "all")


class FragileResultWarning(UserWarning):
    """A projection product norm sits within a factor 10 of its threshold."""


# ---------------------------------------------------------------------------
# commutator powers


@dataclass(frozen=True)
class CommutatorSequence:
    """``log ||C^n 1||`` for n = 0..n_max (``-inf`` once the iterate is exactly zero)."""

    n_max: int
    log_norms: tuple[float, ...]
    norm_kind: str
    rescale_trace: tuple[float, ...]
    terminated_at: Optional[int] = None

    @property
    def terminated(self) -> bool:
        return self.terminated_at is not None


def commutator_sequence(a, b, n_max: int = DEFAULT_N_MAX, norm_kind: str = "fro") -> CommutatorSequence:
    """Iterate ``c_{n+1} = a c_n - c_n b`` from ``c_0 = 1``.

    Each iterate is rescaled to unit norm and the log scale is accumulated,
    so neither overflow nor underflow can occur.
    """
    a, b = as_mat(a), as_mat(b)
    if a.shape != b.shape:
        from .errors import DimensionError
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    kind = normalize_norm_kind(norm_kind)
    n = a.shape[0]
    c = np.eye(n, dtype=np.complex128)
    s = norm(c, kind)
    logs = [math.log(s)]
    trace = [math.log(s)]
    c = c / s
    acc = logs[0]
    terminated = None
    for k in range(1, n_max + 1):
        c = a @ c - c @ b
        s = norm(c, kind)
        if s == 0.0:
            terminated = k
            break
        c = c / s
        acc += math.log(s)
        logs.append(acc)
        trace.append(acc)
    if terminated is not None:
        logs.extend([-math.inf] * (n_max + 1 - len(logs)))
    return CommutatorSequence(n_max, tuple(logs), kind, tuple(trace), terminated)


@dataclass(frozen=True)
class DefinitionEstimate:
    estimate: float
    uncertainty: float
    tail_fit_slope: float
    max_based: float
    fit_stderr: float
    tail_window: tuple[int, int]

    def __iter__(self):
        # unpacks as (estimate, uncertainty)
        return iter((self.estimate, self.uncertainty))

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "uncertainty": self.uncertainty,
            "tail_fit_slope": self.tail_fit_slope,
            "max_based": self.max_based,
            "fit_stderr": self.fit_stderr,
            "tail_window": list(self.tail_window),
        }


def tail_window(n_max: int) -> tuple[int, int]:
    return n_max // 2, n_max


def varrho_definition(seq: CommutatorSequence) -> DefinitionEstimate:
    """Estimate ``limsup ||C^n 1||^(1/n)`` from the tail half of ``seq``.

    The estimate is ``exp(slope)`` of a least-squares line through
    ``(n, log||c_n||)``; the cross-check is ``max exp(log||c_n|| / n)`` over
    the same window.  Their gap plus the fit's standard error is reported as
    the uncertainty.
    """
    lo, hi = tail_window(seq.n_max)
    if seq.terminated:
        return DefinitionEstimate(0.0, 0.0, -math.inf, 0.0, 0.0, (lo, hi))
    if hi - lo + 1 < MIN_WINDOW:
        raise WindowTooShortError(
            f"tail window [{lo}, {hi}] has fewer than {MIN_WINDOW} points; raise n_max"
        )
    ns = np.arange(lo, hi + 1, dtype=float)
    ys = np.asarray(seq.log_norms[lo:hi + 1])
    coef, cov = np.polyfit(ns, ys, 1, cov="unscaled")
    slope = float(coef[0])
    resid = ys - np.polyval(coef, ns)
    dof = max(len(ns) - 2, 1)
    stderr = float(math.sqrt(max(cov[0, 0], 0.0) * float(resid @ resid) / dof))
    max_log = float(np.max(ys / ns))
    est = math.exp(slope)
    max_based = math.exp(max_log)
    unc = abs(est - max_based) + est * stderr
    return DefinitionEstimate(est, unc, slope, max_based, stderr, (lo, hi))


# ---------------------------------------------------------------------------
# geometric formulas


@dataclass(frozen=True)
class PairTerm:
    """One candidate ``|x - y|`` with the norm of the projection product behind it.

    ``kind`` is ``"point"`` (p_i q_j), ``"lambda"`` (p_i q_0), ``"beta"``
    (p_0 q_j) or ``"zero"`` (p_0 q_0).
    """

    kind: str
    left: complex
    right: complex
    distance: float
    product_norm: float
    threshold: float
    left_index: int = -1
    right_index: int = -1

    @property
    def active(self) -> bool:
        return self.product_norm > self.threshold

    @property
    def fragile(self) -> bool:
        return self.threshold / FRAGILE_FACTOR < self.product_norm < self.threshold * FRAGILE_FACTOR

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "left": [self.left.real, self.left.imag],
            "right": [self.right.real, self.right.imag],
            "distance": self.distance,
            "product_norm": self.product_norm,
            "threshold": self.threshold,
            "active": self.active,
            "fragile": self.fragile,
        }


@dataclass(frozen=True)
class GeometricBreakdown:
    terms: tuple[PairTerm, ...]
    product_threshold: float
    value: float
    branch: str
    rsigma_sup: Optional[float] = None

    @property
    def W(self) -> list[tuple[complex, complex, float, float]]:
        return [(t.left, t.right, t.distance, t.product_norm)
                for t in self.terms if t.kind == "point" and t.active]

    @property
    def W_lambda(self) -> list[tuple[complex, float]]:
        return [(t.left, t.distance) for t in self.terms if t.kind == "lambda" and t.active]

    @property
    def W_beta(self) -> list[tuple[complex, float]]:
        return [(t.right, t.distance) for t in self.terms if t.kind == "beta" and t.active]

    @property
    def sup_W(self) -> float:
        return max((d for _, _, d, _ in self.W), default=0.0)

    @property
    def W_lambda_filtered(self) -> list[tuple[complex, float]]:
        """Elements of W_lambda strictly above sup W."""
        s = self.sup_W
        return [x for x in self.W_lambda if x[1] > s]

    @property
    def W_beta_filtered(self) -> list[tuple[complex, float]]:
        s = self.sup_W
        return [x for x in self.W_beta if x[1] > s]

    @property
    def zero_pair_active(self) -> bool:
        return any(t.active for t in self.terms if t.kind == "zero")

    @property
    def active_terms(self) -> list[PairTerm]:
        return [t for t in self.terms if t.active]

    @property
    def active_set(self) -> frozenset:
        """Active pairs as (kind, left index, right index); comparable across runs."""
        return frozenset((t.kind, t.left_index, t.right_index) for t in self.active_terms)

    @property
    def fragile(self) -> bool:
        return any(t.fragile for t in self.terms)

    @property
    def witness(self) -> Optional[PairTerm]:
        """An active term attaining the supremum."""
        act = self.active_terms
        return max(act, key=lambda t: t.distance) if act else None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "branch": self.branch,
            "rsigma_sup": self.rsigma_sup,
            "product_threshold": self.product_threshold,
            "fragile": self.fragile,
            "zero_pair_active": self.zero_pair_active,
            "W": [t.to_dict() for t in self.terms if t.kind == "point" and t.active],
            "W_lambda": [t.to_dict() for t in self.terms if t.kind == "lambda" and t.active],
            "W_beta": [t.to_dict() for t in self.terms if t.kind == "beta" and t.active],
            "W_lambda_filtered": [abs(x[0]) for x in self.W_lambda_filtered],
            "W_beta_filtered": [abs(x[0]) for x in self.W_beta_filtered],
            "inactive": [t.to_dict() for t in self.terms if not t.active],
        }


@dataclass(frozen=True)
class GeometricOptions:
    cluster_tol: Optional[float] = None
    product_tol: float = DEFAULT_PRODUCT_TOL
    nodes_cap: int = DEFAULT_NODES_CAP
    tol_proj: Optional[float] = None


def _threshold(tol: float, p: np.ndarray, q: np.ndarray) -> float:
    return tol * (1.0 + norm(p)) * (1.0 + norm(q))


def _cluster_tol_for(opts: GeometricOptions, a, b) -> float:
    if opts.cluster_tol is not None:
        return opts.cluster_tol
    return 1e-8 * (1.0 + max(norm(a), norm(b)))


def families(a, b, zero_radius: float = 0.0,
             opts: GeometricOptions = GeometricOptions()) -> tuple[ProjectionFamily, ProjectionFamily]:
    """Validated projection families of ``a`` and ``b`` (shared clustering tolerance)."""
    a, b = as_mat(a), as_mat(b)
    tol = _cluster_tol_for(opts, a, b)
    fa = projection_family(a, spectrum(a, tol, zero_radius), nodes_cap=opts.nodes_cap,
                           tol_proj=opts.tol_proj)
    fb = projection_family(b, spectrum(b, tol, zero_radius), nodes_cap=opts.nodes_cap,
                           tol_proj=opts.tol_proj)
    return fa, fb


def _point_terms(fa: ProjectionFamily, fb: ProjectionFamily, tol: float) -> list[PairTerm]:
    terms = []
    for i, (lam, p) in enumerate(zip(fa.points.values, fa.projections)):
        for j, (beta, q) in enumerate(zip(fb.points.values, fb.projections)):
            terms.append(PairTerm("point", lam, beta, abs(lam - beta), norm(p @ q),
                                  _threshold(tol, p, q), i, j))
    return terms


def _warn_if_fragile(bd: GeometricBreakdown) -> None:
    if bd.fragile:
        warnings.warn(
            "a projection product norm lies within a factor 10 of its threshold; result is fragile",
            FragileResultWarning,
            stacklevel=3,
        )


def breakdown_from_families(fa: ProjectionFamily, fb: ProjectionFamily,
                            product_tol: float = DEFAULT_PRODUCT_TOL) -> GeometricBreakdown:
    """Finite-spectrum supremum over ``p_i q_j != 0`` (zero is an ordinary point)."""
    terms = _point_terms(fa, fb, product_tol)
    value = max((t.distance for t in terms if t.active), default=0.0)
    return GeometricBreakdown(tuple(terms), product_tol, value, "W")


def varrho_geometric(a, b, opts: GeometricOptions = GeometricOptions()) -> tuple[float, GeometricBreakdown]:
    """``sup{|lambda_i - beta_j| : p_i q_j != 0}`` for finite spectra.

    A product counts as nonzero when its norm exceeds
    ``product_tol * (1 + ||p_i||) (1 + ||q_j||)``.  Products within a factor 10
    of that threshold mark the breakdown fragile and emit
    :class:`FragileResultWarning`.
    """
    fa, fb = families(a, b, 0.0, opts)
    bd = breakdown_from_families(fa, fb, opts.product_tol)
    _warn_if_fragile(bd)
    return bd.value, bd


def charf_breakdown_from_families(fa: ProjectionFamily, fb: ProjectionFamily,
                                  product_tol: float = DEFAULT_PRODUCT_TOL) -> GeometricBreakdown:
    terms = _point_terms(fa, fb, product_tol)
    p0, q0 = fa.complement, fb.complement
    a_cluster = fa.points.zero_cluster is not None
    b_cluster = fb.points.zero_cluster is not None
    if b_cluster:
        for i, (lam, p) in enumerate(zip(fa.points.values, fa.projections)):
            terms.append(PairTerm("lambda", lam, 0j, abs(lam), norm(p @ q0),
                                  _threshold(product_tol, p, q0), i, -1))
    if a_cluster:
        for j, (beta, q) in enumerate(zip(fb.points.values, fb.projections)):
            terms.append(PairTerm("beta", 0j, beta, abs(beta), norm(p0 @ q),
                                  _threshold(product_tol, p0, q), -1, j))
    if a_cluster and b_cluster:
        terms.append(PairTerm("zero", 0j, 0j, 0.0, norm(p0 @ q0),
                              _threshold(product_tol, p0, q0), -1, -1))
    active = [t for t in terms if t.active]
    value = max((t.distance for t in active), default=0.0)
    has_w = any(t.kind == "point" for t in active)
    rsigma_sup = None
    if not has_w:
        branch = "W_empty"
        rsigma_sup = max(fa.points.spectral_radius, fb.points.spectral_radius)
    else:
        top = max(active, key=lambda t: (t.distance, t.kind == "point"))
        branch = {"point": "W", "lambda": "W_lambda", "beta": "W_beta"}.get(top.kind, "W")
        if top.kind != "point" and top.distance <= max(t.distance for t in active if t.kind == "point"):
            branch = "W"
    return GeometricBreakdown(tuple(terms), product_tol, value, branch, rsigma_sup)


def varrho_charf(a, b, zero_radius: float,
                 opts: GeometricOptions = GeometricOptions()) -> tuple[float, GeometricBreakdown]:
    """Supremum over the nonzero-point pairs, ``|lambda_i|`` with ``p_i q_0 != 0``
    and ``|beta_j|`` with ``p_0 q_j != 0``, where ``p_0``, ``q_0`` project onto
    the zero clusters of radius ``zero_radius``.

    ``breakdown.branch`` records which set attains the value; when no
    nonzero-point pair is active (``"W_empty"``) ``breakdown.rsigma_sup``
    carries ``max(r(a), r(b))`` for comparison.
    """
    if zero_radius <= 0:
        raise ValueError("zero_radius must be positive for the zero-cluster formula")
    fa, fb = families(a, b, zero_radius, opts)
    bd = charf_breakdown_from_families(fa, fb, opts.product_tol)
    _warn_if_fragile(bd)
    return bd.value, bd


# ---------------------------------------------------------------------------
# symmetrized distance and quasinilpotent equivalence


@dataclass
class SemidistanceReport:
    varrho_ab: float
    varrho_ba: float
    rho: float
    method: str
    values: dict = field(default_factory=dict)
    breakdown_ab: Optional[GeometricBreakdown] = None
    breakdown_ba: Optional[GeometricBreakdown] = None
    definition_ab: Optional[DefinitionEstimate] = None
    definition_ba: Optional[DefinitionEstimate] = None
    growth_ab: Optional[object] = None
    growth_ba: Optional[object] = None
    families: Optional[tuple] = None
    qe_verdict: Optional[bool] = None
    qe_evidence: Optional[object] = None

    @property
    def fragile(self) -> bool:
        return any(bd is not None and bd.fragile for bd in (self.breakdown_ab, self.breakdown_ba))

    def to_dict(self) -> dict:
        out = {
            "varrho_ab": self.varrho_ab,
            "varrho_ba": self.varrho_ba,
            "rho": self.rho,
            "method": self.method,
            "values": {k: {"varrho_ab": v[0], "varrho_ba": v[1], "rho": max(v)}
                       for k, v in self.values.items()},
            "fragile": self.fragile,
            "breakdown_ab": None if self.breakdown_ab is None else self.breakdown_ab.to_dict(),
            "breakdown_ba": None if self.breakdown_ba is None else self.breakdown_ba.to_dict(),
            "definition_diagnostics": None if self.definition_ab is None else {
                "ab": self.definition_ab.to_dict(), "ba": self.definition_ba.to_dict(),
            },
            "growth": None if self.growth_ab is None else {
                "ab": self.growth_ab.to_dict(), "ba": self.growth_ba.to_dict(),
            },
            "qe_verdict": self.qe_verdict,
            "qe_evidence": None if self.qe_evidence is None else self.qe_evidence.to_dict(),
        }
        if self.families is not None:
            fa, fb = self.families
            out["spectra"] = {"a": fa.to_dict(), "b": fb.to_dict()}
        return out


def rho(a, b, method: str = "geometric", *, n_max: int = DEFAULT_N_MAX, norm_kind: str = "fro",
        zero_radius: float = 0.0, opts: GeometricOptions = GeometricOptions()) -> SemidistanceReport:
    """Run ``method`` in both argument orders and report ``max(varrho(a,b), varrho(b,a))``.

    ``method="all"`` runs every route (the zero-cluster route only when
    ``zero_radius > 0``); the headline values then come from the geometric
    route, or the zero-cluster route when it ran.
    """
    from .growth import growth_estimate

    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    a, b = as_mat(a), as_mat(b)
    rep = SemidistanceReport(0.0, 0.0, 0.0, method)
    want = {method} if method != "all" else {"definition", "geometric", "growth"} | (
        {"charf"} if zero_radius > 0 else set())
    primary = None

    if want & {"definition", "growth"}:
        sab = commutator_sequence(a, b, n_max, norm_kind)
        sba = commutator_sequence(b, a, n_max, norm_kind)
        if "definition" in want:
            rep.definition_ab = varrho_definition(sab)
            rep.definition_ba = varrho_definition(sba)
            rep.values["definition"] = (rep.definition_ab.estimate, rep.definition_ba.estimate)
            primary = "definition"
        if "growth" in want:
            rep.growth_ab = growth_estimate(sab)
            rep.growth_ba = growth_estimate(sba)
            tab, tba = rep.growth_ab.type, rep.growth_ba.type
            if tab is not None and tba is not None:
                rep.values["growth"] = (tab, tba)
            primary = primary or "growth"
    if "geometric" in want:
        fa, fb = families(a, b, 0.0, opts)
        rep.families = (fa, fb)
        rep.breakdown_ab = breakdown_from_families(fa, fb, opts.product_tol)
        rep.breakdown_ba = breakdown_from_families(fb, fa, opts.product_tol)
        rep.values["geometric"] = (rep.breakdown_ab.value, rep.breakdown_ba.value)
        primary = "geometric"
    if "charf" in want:
        fa, fb = families(a, b, zero_radius, opts)
        rep.families = (fa, fb)
        rep.breakdown_ab = charf_breakdown_from_families(fa, fb, opts.product_tol)
        rep.breakdown_ba = charf_breakdown_from_families(fb, fa, opts.product_tol)
        rep.values["charf"] = (rep.breakdown_ab.value, rep.breakdown_ba.value)
        primary = "charf"
    if primary is None or primary not in rep.values:
        primary = next(iter(rep.values), None)
    if primary is not None:
        rep.varrho_ab, rep.varrho_ba = rep.values[primary]
        rep.rho = max(rep.varrho_ab, rep.varrho_ba)
    if rep.breakdown_ab is not None:
        _warn_if_fragile(rep.breakdown_ab)
        _warn_if_fragile(rep.breakdown_ba)
    return rep


@dataclass(frozen=True)
class QEEvidence:
    matching: tuple[tuple[complex, complex], ...]
    unmatched_a: tuple[complex, ...]
    unmatched_b: tuple[complex, ...]
    projection_defects: tuple[float, ...]
    semisimple_defect: Optional[float]
    witness: Optional[PairTerm]
    spectrum_tol: float
    projection_tol: float

    def to_dict(self) -> dict:
        cx = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "matching": [[cx(x), cx(y)] for x, y in self.matching],
            "unmatched_a": [cx(z) for z in self.unmatched_a],
            "unmatched_b": [cx(z) for z in self.unmatched_b],
            "projection_defects": list(self.projection_defects),
            "semisimple_defect": self.semisimple_defect,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "spectrum_tol": self.spectrum_tol,
            "projection_tol": self.projection_tol,
        }


def quasinilpotent_equivalent(a, b, tol: Optional[float] = None, zero_radius: float = 0.0,
                              opts: GeometricOptions = GeometricOptions()) -> tuple[bool, QEEvidence]:
    """Decide ``rho(a, b) == 0``: clustered spectra and matching Riesz
    projections coincide.

    A positive verdict is cross-checked against the semisimple parts
    (``||abar - bbar||`` is reported); a negative one carries the active pair
    of largest distance as a lower-bound witness for ``varrho``.
    """
    a, b = as_mat(a), as_mat(b)
    scale = 1.0 + max(norm(a), norm(b))
    if tol is None:
        tol = 1e-8 * scale
    fa, fb = families(a, b, zero_radius, opts)
    proj_tol = opts.tol_proj if opts.tol_proj is not None else 1e-9 * scale

    remaining = list(range(len(fb.points.values)))
    matching, defects, unmatched_a = [], [], []
    for i, lam in enumerate(fa.points.values):
        best = min(remaining, key=lambda j: abs(fb.points.values[j] - lam), default=None)
        if best is None or abs(fb.points.values[best] - lam) > tol \
                or fa.points.multiplicities[i] != fb.points.multiplicities[best]:
            unmatched_a.append(lam)
            continue
        remaining.remove(best)
        matching.append((lam, fb.points.values[best]))
        p, q = fa.projections[i], fb.projections[best]
        defects.append(norm(p - q) / (1.0 + max(norm(p), norm(q))))
    unmatched_b = [fb.points.values[j] for j in remaining]
    verdict = not unmatched_a and not unmatched_b and all(d <= proj_tol for d in defects)

    semi_defect = None
    witness = None
    if verdict:
        sa, sb = semisimple_split(a, fa), semisimple_split(b, fb)
        semi_defect = norm(sa.semisimple - sb.semisimple)
    else:
        if zero_radius > 0:
            bds = [charf_breakdown_from_families(fa, fb, opts.product_tol),
                   charf_breakdown_from_families(fb, fa, opts.product_tol)]
        else:
            bds = [breakdown_from_families(fa, fb, opts.product_tol),
                   breakdown_from_families(fb, fa, opts.product_tol)]
        cands = [bd.witness for bd in bds if bd.witness is not None]
        witness = max(cands, key=lambda t: t.distance) if cands else None
    ev = QEEvidence(tuple(matching), tuple(unmatched_a), tuple(unmatched_b), tuple(defects),
                    semi_defect, witness, tol, proj_tol)
    return verdict, ev
