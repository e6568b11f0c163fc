import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semispec.errors import ClusteringAmbiguityError, ConvergenceError
from semispec.eigensolve import (
    SpectrumDescription,
    cluster_spectrum,
    eigenvalues,
    hessenberg,
    spectrum,
)
from semispec.numkernel import det, norm


def multiset_distance(x, y):
    """Greedy matching distance between two equal-size multisets."""
    y = list(y)
    worst = 0.0
    for z in sorted(x, key=lambda v: (v.real, v.imag)):
        k = min(range(len(y)), key=lambda i: abs(y[i] - z))
        worst = max(worst, abs(y.pop(k) - z))
    return worst


def test_diag():
    assert sorted(e.real for e in eigenvalues(np.diag([3.0, 1.0]))) == [1.0, 3.0]


def test_nilpotent():
    assert eigenvalues([[0, 1], [0, 0]]) == [0, 0]


def test_l1_block():
    e = eigenvalues([[1, 0], [0.25, 0.25]])
    assert multiset_distance(e, [1, 0.25]) < 1e-14


def test_one_by_one():
    assert eigenvalues([[2 - 1j]]) == [2 - 1j]


def test_hessenberg_form_and_similarity(rng):
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    h = hessenberg(a)
    assert np.all(np.tril(h, -2) == 0)
    assert abs(np.trace(h) - np.trace(a)) < 1e-12 * norm(a)
    assert abs(norm(h) - norm(a)) < 1e-12 * norm(a)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n", [2, 5, 9, 16])
def test_against_lapack(seed, n):
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    if seed % 2:
        a = a.real
    assert multiset_distance(eigenvalues(a), np.linalg.eigvals(a)) < 1e-10 * norm(a)


@pytest.mark.parametrize("seed", range(5))
def test_normal_matrices_accuracy(seed):
    gen = np.random.default_rng(seed)
    q, _ = np.linalg.qr(gen.standard_normal((8, 8)) + 1j * gen.standard_normal((8, 8)))
    lam = gen.standard_normal(8) + 1j * gen.standard_normal(8)
    a = q @ np.diag(lam) @ q.conj().T
    assert multiset_distance(eigenvalues(a), lam) <= 1e-9 * norm(a)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 5))
def test_trace_and_determinant(seed, n):
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    e = eigenvalues(a)
    assert abs(sum(e) - np.trace(a)) <= 1e-8 * norm(a)
    d = det(a)
    assert abs(np.prod(e) - d) <= 1e-6 * abs(d)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(2, 8))
def test_similarity_invariance(seed, n):
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    u, _ = np.linalg.qr(gen.standard_normal((n, n)))
    q = u @ np.diag(np.geomspace(1, 10, n))
    b = np.linalg.inv(q) @ a @ q
    assert multiset_distance(eigenvalues(b), eigenvalues(a)) <= 1e-7 * norm(a)


def test_sweep_budget():
    a = np.random.default_rng(0).standard_normal((6, 6))
    with pytest.raises(ConvergenceError):
        eigenvalues(a, max_sweeps=1)


def test_cluster_merges_near_duplicates():
    s = cluster_spectrum([3, 3 + 1e-12, 1], 1e-9, 0.0)
    assert [m for _, m in s.points] == [2, 1]
    assert s.points[0][0] == pytest.approx(3)
    assert s.points[1][0] == 1
    assert s.zero_cluster is None


def test_cluster_zero():
    s = cluster_spectrum([1, 0.5, 1e-7, -1e-7], 1e-9, 1e-3)
    assert s.points == ((1, 1), (0.5, 1))
    assert s.zero_cluster.swallowed_count == 2
    assert s.dimension == 4


def test_cluster_single():
    s = cluster_spectrum([2j], 1e-9, 0.0)
    assert s.points == ((2j, 1),)
    assert s.spectral_radius == 2


def test_cluster_empty_rejected():
    with pytest.raises(ValueError):
        cluster_spectrum([], 1e-9, 0.0)


def test_cluster_ambiguity():
    # chain 0.9e-3 -- 1.05e-3 -- 1.2e-3 straddles radius 1e-3
    with pytest.raises(ClusteringAmbiguityError):
        cluster_spectrum([0.9e-3, 1.05e-3, 1.2e-3, 1.0], 2e-4, 1e-3)


def test_cluster_ordering_ties_by_argument():
    s = cluster_spectrum([1j, -1, 1, -1j], 1e-9, 0.0)
    assert [p for p, _ in s.points] == sorted([1j, -1, 1, -1j], key=cmath.phase)


def test_exact_zero_without_cluster_is_a_point():
    s = cluster_spectrum([0, 0, 1], 1e-9, 0.0)
    assert s.points == ((1, 1), (0, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=12),
       st.floats(0, 0.5))
def test_cluster_invariants(eigs, zero_radius):
    tol = 1e-6
    try:
        s = cluster_spectrum(eigs, tol, zero_radius)
    except ClusteringAmbiguityError:
        return
    assert s.dimension == len(eigs)
    vals = s.values
    for i in range(len(vals)):
        if zero_radius > 0:
            assert abs(vals[i]) > zero_radius
        for j in range(i + 1, len(vals)):
            assert abs(vals[i] - vals[j]) > tol
    assert s.spectral_radius == max(abs(complex(z)) for z in eigs)
    # idempotence: re-clustering the separated points reproduces them
    again = cluster_spectrum(vals, tol, 0.0)
    assert again.values == vals


def test_spectrum_defaults():
    s = spectrum(np.diag([2.0, 2.0, -1.0]))
    assert isinstance(s, SpectrumDescription)
    assert s.points == ((2, 2), (-1, 1))
    assert s.cluster_tol == pytest.approx(1e-8 * (1 + 3.0))
