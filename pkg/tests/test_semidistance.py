import math
import warnings
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semispec.corpus import X1, X2, free_algebra_pair, l1_discretization
from semispec.eigensolve import spectrum
from semispec.errors import WindowTooShortError
from semispec.numkernel import norm
from semispec.riesz import projection_family
from semispec.semidistance import (
    FragileResultWarning,
    GeometricOptions,
    commutator_sequence,
    quasinilpotent_equivalent,
    rho,
    varrho_charf,
    varrho_definition,
    varrho_geometric,
)


def binomial_commutator(a, b, n):
    """C^n 1 by the binomial expansion, independent of the recurrence."""
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    out = np.zeros_like(a)
    for k in range(n + 1):
        out += (-1) ** k * comb(n, k) * np.linalg.matrix_power(a, n - k) @ np.linalg.matrix_power(b, k)
    return out


def spectral_radius(m):
    return max(abs(np.linalg.eigvals(m)))


# --- commutator sequence -------------------------------------------------


def test_sequence_equal_elements_terminates():
    d = np.diag([1.0, 2.0])
    s = commutator_sequence(d, d, 5)
    assert s.log_norms[0] == pytest.approx(math.log(math.sqrt(2)))
    assert all(x == -math.inf for x in s.log_norms[1:])
    assert s.terminated_at == 1


def test_sequence_commuting_diag():
    s = commutator_sequence(np.diag([3.0, 1.0]), np.eye(2), 60)
    for n in range(1, 61):
        assert s.log_norms[n] == pytest.approx(n * math.log(2), abs=1e-12)


def test_sequence_free_algebra_closed_form():
    p = free_algebra_pair()
    s = commutator_sequence(p.a, p.b, 200)
    base = math.log(norm(X1 + X2))
    for n in range(1, 201):
        assert s.log_norms[n] == pytest.approx(base - n * math.log(2), abs=1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_sequence_matches_binomial_expansion(seed):
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((4, 4)) * 0.5
    b = gen.standard_normal((4, 4)) * 0.5
    s = commutator_sequence(a, b, 12)
    for n in range(13):
        direct = norm(binomial_commutator(a, b, n))
        assert s.log_norms[n] == pytest.approx(math.log(direct), abs=1e-8)


@pytest.mark.parametrize("kind", ["fro", "one", "inf"])
def test_sequence_submultiplicative_growth(kind):
    gen = np.random.default_rng(3)
    a = gen.standard_normal((5, 5))
    b = gen.standard_normal((5, 5))
    s = commutator_sequence(a, b, 80, kind)
    bound = math.log(norm(a, kind) + norm(b, kind))
    assert s.log_norms[0] == pytest.approx(math.log(norm(np.eye(5), kind)))
    for n in range(80):
        assert s.log_norms[n + 1] <= s.log_norms[n] + bound + 1e-9


def test_sequence_huge_separation_no_overflow():
    s = commutator_sequence(np.diag([1e3, 0.0]), np.zeros((2, 2)), 400)
    assert s.log_norms[400] == pytest.approx(400 * math.log(1e3), rel=1e-12)


# --- definition route ----------------------------------------------------


def test_definition_commuting():
    est, unc = varrho_definition(commutator_sequence(np.diag([3.0, 1.0]), np.eye(2), 400))
    assert est == pytest.approx(2.0, abs=1e-9)
    assert unc < 1e-6


def test_definition_equal_is_zero():
    d = varrho_definition(commutator_sequence(np.eye(3), np.eye(3), 400))
    assert (d.estimate, d.uncertainty) == (0.0, 0.0)


def test_definition_free_algebra():
    p = free_algebra_pair()
    est, unc = varrho_definition(commutator_sequence(p.a, p.b, 400))
    assert abs(est - 0.5) <= 0.02
    est, unc = varrho_definition(commutator_sequence(p.b, p.a, 400))
    assert abs(est - 1.0) <= 0.02


def test_definition_window_too_short():
    with pytest.raises(WindowTooShortError):
        varrho_definition(commutator_sequence(np.diag([1.0, 0.0]), np.eye(2), 12))


# --- geometric route -----------------------------------------------------


def test_geometric_free_algebra():
    p = free_algebra_pair()
    v, bd = varrho_geometric(p.a, p.b)
    assert v == pytest.approx(0.5, abs=1e-10)
    excluded = [t for t in bd.terms if abs(t.left - 0.5) < 1e-12 and abs(t.right + 0.5) < 1e-12]
    assert len(excluded) == 1 and not excluded[0].active
    v, bd = varrho_geometric(p.b, p.a)
    assert v == pytest.approx(1.0, abs=1e-10)
    assert bd.witness.left == pytest.approx(-0.5) and bd.witness.right == pytest.approx(0.5)


def test_geometric_asymmetry_gap():
    p = free_algebra_pair()
    assert abs(varrho_geometric(p.b, p.a)[0] - varrho_geometric(p.a, p.b)[0]) >= 0.4


def test_geometric_swap_diag():
    v, bd = varrho_geometric(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))
    assert v == pytest.approx(1.0, abs=1e-12)
    active = {(round(t.left.real), round(t.right.real)) for t in bd.active_terms}
    assert active == {(1, 1), (2, 2)} or active == {(1, 2), (2, 1)}
    # index positions 1 and 2 of diag(1,2) meet 2 and 1 of diag(2,1): distinct values
    assert all(t.distance == pytest.approx(1.0) for t in bd.active_terms)


def test_geometric_dichotomy():
    p = l1_discretization(4)
    _, bd = varrho_geometric(p.a, p.b)
    for t in bd.terms:
        assert (t.product_norm > t.threshold) == t.active
    assert not bd.W_lambda and not bd.W_beta and not bd.zero_pair_active


def test_geometric_includes_zero_point():
    # 0 is an ordinary point here
    v, _ = varrho_geometric(np.diag([0.0, 1.0]), np.diag([1.0, 1.0]))
    assert v == pytest.approx(1.0, abs=1e-12)


def test_scalar_case():
    v, _ = varrho_geometric([[2 + 1j]], [[-1.0]])
    assert v == pytest.approx(abs(3 + 1j))
    est, _ = varrho_definition(commutator_sequence([[2 + 1j]], [[-1.0]], 100))
    assert est == pytest.approx(abs(3 + 1j), rel=1e-10)


def test_fragile_warning():
    eps = 2e-8
    s = np.array([[1.0, eps], [0.0, 1.0]])
    b = s @ np.diag([2.0, 1.0]) @ np.linalg.inv(s)
    with pytest.warns(FragileResultWarning):
        _, bd = varrho_geometric(np.diag([1.0, 2.0]), b)
    assert bd.fragile


def test_no_warning_on_clean_input():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        varrho_geometric(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))


# --- zero-cluster route --------------------------------------------------


def test_charf_l1_n2():
    p = l1_discretization(2)
    v, bd = varrho_charf(p.a, p.b, p.zero_radius)
    assert v == pytest.approx(0.5, abs=1e-9)
    assert bd.branch == "W"
    w = bd.witness
    assert (w.left, w.right) == (pytest.approx(0.5), pytest.approx(1.0))


def test_charf_all_matched():
    v, bd = varrho_charf(np.diag([1.0, 0.5, 1e-6]), np.diag([1.0, 0.5, -1e-6]), 1e-3)
    assert v == pytest.approx(0.0, abs=1e-12)
    assert not bd.W_lambda and not bd.W_beta
    assert bd.zero_pair_active


def test_charf_w_empty_branch():
    a = np.diag([0.5, 1e-6, -1e-6])
    b = np.diag([1e-6, 2e-6, -1e-6])
    v, bd = varrho_charf(a, b, 1e-3)
    assert v == pytest.approx(0.5, abs=1e-12)
    assert bd.branch == "W_empty"
    assert bd.rsigma_sup == pytest.approx(0.5)
    assert [lam for lam, _ in bd.W_lambda] == [pytest.approx(0.5)]
    est, _ = varrho_definition(commutator_sequence(a, b, 400))
    assert est == pytest.approx(0.5, abs=0.02)


def test_charf_filtered_lambda_set():
    # p(3) q0 != 0 contributes |3| > sup W = |1 - 1| = 0
    a = np.diag([1.0, 3.0, 0.0])
    b = np.diag([1.0, 0.0, 0.0])
    v, bd = varrho_charf(a, b, 1e-3)
    assert v == pytest.approx(3.0)
    assert bd.branch == "W_lambda"
    assert [lam for lam, _ in bd.W_lambda_filtered] == [pytest.approx(3.0)]


def test_charf_requires_radius():
    with pytest.raises(ValueError):
        varrho_charf(np.eye(2), np.eye(2), 0.0)


# --- rho -----------------------------------------------------------------


def test_rho_free_algebra():
    p = free_algebra_pair()
    rep = rho(p.a, p.b)
    assert (rep.varrho_ab, rep.varrho_ba, rep.rho) == (
        pytest.approx(0.5, abs=1e-10), pytest.approx(1.0, abs=1e-10), pytest.approx(1.0, abs=1e-10))


def test_rho_equal():
    m = np.random.default_rng(0).standard_normal((4, 4))
    for method in ("definition", "geometric"):
        assert rho(m, m, method).rho == pytest.approx(0.0, abs=1e-9)


def test_rho_commuting_symmetric():
    rep = rho(np.diag([3.0, 1.0]), np.eye(2), "all")
    assert rep.values["geometric"] == (pytest.approx(2.0), pytest.approx(2.0))
    assert rep.values["definition"][0] == pytest.approx(2.0, abs=1e-6)
    assert rep.values["growth"][0] == pytest.approx(2.0, rel=0.05)
    assert rep.rho == max(rep.varrho_ab, rep.varrho_ba)


def test_rho_all_uses_charf_when_radius_given():
    p = l1_discretization(3)
    rep = rho(p.a, p.b, "all", zero_radius=p.zero_radius)
    assert rep.method == "all" and "charf" in rep.values
    assert (rep.varrho_ab, rep.varrho_ba) == rep.values["charf"]


def test_rho_unknown_method():
    with pytest.raises(ValueError):
        rho(np.eye(2), np.eye(2), "magic")


def test_report_dict_shape():
    p = free_algebra_pair()
    d = rho(p.a, p.b, "all").to_dict()
    assert set(d["values"]) == {"definition", "geometric", "growth"}
    assert d["breakdown_ab"]["value"] == pytest.approx(0.5)
    assert "spectra" in d and d["definition_diagnostics"]["ab"]["tail_window"] == [200, 400]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 4))
def test_rho_properties(seed, n):
    gen = np.random.default_rng(seed)
    a = np.diag(gen.uniform(-2, 2, n)) + np.triu(gen.standard_normal((n, n)), 1)
    b = np.diag(gen.uniform(-2, 2, n)) + np.triu(gen.standard_normal((n, n)), 1)
    try:
        ab = rho(a, b)
        ba = rho(b, a)
    except Exception:  # near-coincident eigenvalues can legitimately fail validation
        return
    assert ab.varrho_ab >= 0 and ab.varrho_ba >= 0
    assert ab.rho == pytest.approx(ba.rho)
    assert ab.varrho_ab == pytest.approx(ba.varrho_ba)


def _spectral_truncation(m, keep):
    """m restricted to its ``keep`` largest spectral points: m (p_1 + ... + p_keep)."""
    fam = projection_family(m, spectrum(m))
    return m @ sum(fam.projections[:keep])


@pytest.mark.parametrize("N", [4, 6])
def test_truncation_triangle_bound(N):
    # |varrho(a_n, b_n) - varrho(a, b)| <= r(a - a_n) + r(b - b_n) for spectral truncations
    p = l1_discretization(N)
    a, b = np.asarray(p.a), np.asarray(p.b)
    full, _ = varrho_geometric(a, b)
    for keep in range(1, N):
        an, bn = _spectral_truncation(a, keep), _spectral_truncation(b, keep)
        val, _ = varrho_geometric(an, bn)
        bound = spectral_radius(a - an) + spectral_radius(b - bn)
        assert abs(val - full) <= bound + 1e-9


# --- quasinilpotent equivalence -----------------------------------------


def test_qe_jordan_vs_identity():
    ok, ev = quasinilpotent_equivalent([[1.0, 1.0], [0.0, 1.0]], np.eye(2))
    assert ok
    assert ev.semisimple_defect <= 1e-9
    assert ev.witness is None


def test_qe_swap_diag():
    ok, ev = quasinilpotent_equivalent(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))
    assert not ok
    assert ev.witness.distance == pytest.approx(1.0)


def test_qe_identical_corpus_matrix():
    p = l1_discretization(5)
    ok, _ = quasinilpotent_equivalent(p.b, p.b)
    assert ok


def test_qe_same_spectrum_different_projections():
    a = np.array([[1.0, 1.0], [0.0, 2.0]])
    b = np.diag([1.0, 2.0])
    ok, ev = quasinilpotent_equivalent(a, b)
    assert not ok
    assert not ev.unmatched_a and max(ev.projection_defects) > 0.1


def test_qe_with_zero_cluster():
    ok, _ = quasinilpotent_equivalent(np.diag([1.0, 1e-7]), np.diag([1.0, -1e-7]), zero_radius=1e-3)
    assert ok


def test_geometric_options_product_tol():
    # p(1) q(2) has norm ~1e-6 and counts as zero under a loose threshold
    eps = 1e-6
    s = np.array([[1.0, eps], [0.0, 1.0]])
    b = s @ np.diag([1.0, 2.0]) @ np.linalg.inv(s)
    tight, _ = varrho_geometric(np.diag([1.0, 2.0]), b, GeometricOptions(product_tol=1e-9))
    loose, _ = varrho_geometric(np.diag([1.0, 2.0]), b, GeometricOptions(product_tol=1e-4))
    assert tight == pytest.approx(1.0)
    assert loose == pytest.approx(0.0, abs=1e-12)
