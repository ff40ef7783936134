"""Dense linear algebra: frozen cases, numpy cross-oracles, and properties.

The production code never calls the numpy.linalg decomposition routines;
eigh/svd appear here only as independent oracles.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepmult.linalg import (
    DEFAULT_TOL,
    InvalidExponent,
    NoConvergence,
    NotHermitian,
    NotPositive,
    frobenius,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    polar_decompose,
    psd_pseudo_inverse,
    random_unitary,
    schatten_norm,
    singular_values,
    support_projection,
    svd,
)

ATOL = 1e-10


def _random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _complexes(rng_seed, n):
    return _random_complex(np.random.default_rng(rng_seed), n)


# ---------------------------------------------------------------------------
# hermitian_eig


def test_eig_diagonal_matrix():
    vals, vecs = hermitian_eig(np.diag([2.0, -1.0]))
    np.testing.assert_allclose(vals, [-1.0, 2.0], atol=ATOL)
    # eigenvectors permute the identity
    np.testing.assert_allclose(np.abs(vecs), [[0, 1], [1, 0]], atol=ATOL)


def test_eig_swap_matrix():
    vals, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(vals, [-1.0, 1.0], atol=ATOL)


def test_eig_constructed_spectrum_round_trip():
    rng = np.random.default_rng(11)
    v = random_unitary(3, rng)
    h = v @ np.diag([1.0, 2.0, 3.0]) @ v.conj().T
    vals, vecs = hermitian_eig(h)
    np.testing.assert_allclose(vals, [1.0, 2.0, 3.0], atol=1e-10)
    recon = vecs @ np.diag(vals) @ vecs.conj().T
    np.testing.assert_allclose(recon, h, atol=1e-10)


def test_eig_matches_numpy_oracle():
    rng = np.random.default_rng(12)
    for n in (1, 2, 5, 9, 17):
        a = _random_complex(rng, n)
        h = a + a.conj().T
        vals, vecs = hermitian_eig(h)
        np.testing.assert_allclose(vals, np.linalg.eigvalsh(h),
                                   atol=1e-10 * max(1.0, frobenius(h)))
        assert frobenius(vecs.conj().T @ vecs - np.eye(n)) < 1e-10 * n


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_zero_matrix():
    vals, vecs = hermitian_eig(np.zeros((3, 3)))
    np.testing.assert_allclose(vals, np.zeros(3))
    np.testing.assert_allclose(vecs, np.eye(3))


# ---------------------------------------------------------------------------
# svd and singular values


def test_svd_identity():
    u, sigma, v = svd(np.eye(3))
    np.testing.assert_allclose(sigma, np.ones(3))
    np.testing.assert_allclose(u @ np.diag(sigma) @ v.conj().T, np.eye(3),
                               atol=ATOL)


def test_svd_rank_one_frozen():
    a = np.array([[0.0, 2.0], [0.0, 0.0]])
    u, sigma, v = svd(a)
    np.testing.assert_allclose(sigma, [2.0, 0.0], atol=ATOL)
    np.testing.assert_allclose(u @ np.diag(sigma) @ v.conj().T, a, atol=ATOL)
    assert frobenius(u.conj().T @ u - np.eye(2)) < ATOL
    assert frobenius(v.conj().T @ v - np.eye(2)) < ATOL


def test_svd_cross_oracle_and_unitarity():
    rng = np.random.default_rng(13)
    for n in (1, 2, 3, 6, 11):
        a = _random_complex(rng, n)
        u, sigma, v = svd(a)
        scale = max(frobenius(a), 1.0)
        np.testing.assert_allclose(sigma, np.linalg.svd(a, compute_uv=False),
                                   atol=1e-10 * scale)
        assert frobenius(u @ np.diag(sigma) @ v.conj().T - a) < 1e-10 * scale
        assert frobenius(u.conj().T @ u - np.eye(n)) < 1e-10 * n
        assert frobenius(v.conj().T @ v - np.eye(n)) < 1e-10 * n
        assert np.all(np.diff(sigma) <= 1e-12 * scale)


def test_svd_clustered_small_singular_values():
    # degenerate tiny singular values are where naive column extraction of U
    # loses orthogonality; this construction has a double value at 1e-7
    rng = np.random.default_rng(14)
    u0 = random_unitary(4, rng)
    v0 = random_unitary(4, rng)
    a = u0 @ np.diag([1.0, 1e-7, 1e-7, 0.0]) @ v0.conj().T
    u, sigma, v = svd(a)
    assert frobenius(u.conj().T @ u - np.eye(4)) < 1e-10
    assert frobenius(u @ np.diag(sigma) @ v.conj().T - a) < 1e-10


def test_singular_values_agree_with_svd():
    a = _complexes(15, 7)
    np.testing.assert_allclose(singular_values(a), svd(a)[1], atol=1e-10)


# ---------------------------------------------------------------------------
# schatten norms


def test_schatten_frozen_34():
    assert schatten_norm(np.diag([3.0, 4.0]), 2.0, 1.0) == pytest.approx(5.0)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, math.inf])
@pytest.mark.parametrize("n", [1, 4])
def test_schatten_normalized_identity(p, n):
    assert schatten_norm(np.eye(n), p, 1.0 / n) == pytest.approx(1.0)


def test_schatten_matches_direct_formula():
    a = _complexes(16, 5)
    sigma = np.linalg.svd(a, compute_uv=False)
    for p in (1.0, 1.5, 2.0, 4.0):
        for w in (1.0, 0.2):
            want = (w * np.sum(sigma ** p)) ** (1.0 / p)
            assert schatten_norm(a, p, w) == pytest.approx(want, rel=1e-11)
    assert schatten_norm(a, math.inf, 0.2) == pytest.approx(sigma[0], rel=1e-11)


def test_schatten_rejects_bad_exponent_and_weight():
    a = np.eye(2)
    with pytest.raises(InvalidExponent):
        schatten_norm(a, 0.5, 1.0)
    with pytest.raises(InvalidExponent):
        schatten_norm(a, float("nan"), 1.0)
    with pytest.raises(ValueError):
        schatten_norm(a, 2.0, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_schatten_two_norm_squared_is_trace(n, seed):
    a = _random_complex(np.random.default_rng(seed), n)
    two = schatten_norm(a, 2.0, 1.0)
    trace = float(np.real(np.trace(a.conj().T @ a)))
    assert two * two == pytest.approx(trace, rel=1e-9, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.sampled_from([1.0, 1.5, 2.0, 3.0]),
       st.integers(0, 2 ** 32 - 1))
def test_holder_inequality(n, p, seed):
    rng = np.random.default_rng(seed)
    x = _random_complex(rng, n)
    y = _random_complex(rng, n)
    w = 1.0 / n
    q = math.inf if p == 1.0 else p / (p - 1.0)
    lhs = abs(w * np.trace(x @ y))
    rhs = schatten_norm(x, p, w) * schatten_norm(y, q, w)
    assert lhs <= rhs * (1.0 + 1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.sampled_from([1.0, 1.5, 2.0, 3.0]),
       st.integers(0, 2 ** 32 - 1))
def test_schatten_unitary_invariance(n, p, seed):
    rng = np.random.default_rng(seed)
    a = _random_complex(rng, n)
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    base = schatten_norm(a, p, 1.0 / n)
    assert schatten_norm(u @ a @ v, p, 1.0 / n) == pytest.approx(
        base, rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# polar decomposition and support projections


def test_polar_positive_definite_is_identity_isometry():
    rng = np.random.default_rng(17)
    a = _random_complex(rng, 3)
    pos = a @ a.conj().T + 3.0 * np.eye(3)
    w, b = polar_decompose(pos)
    np.testing.assert_allclose(w, np.eye(3), atol=1e-9)
    np.testing.assert_allclose(b, pos, atol=1e-9)


def test_polar_rank_one_frozen():
    w, b = polar_decompose(np.array([[0.0, 2.0], [0.0, 0.0]]))
    np.testing.assert_allclose(b, np.diag([0.0, 2.0]), atol=ATOL)
    np.testing.assert_allclose(w, np.array([[0.0, 1.0], [0.0, 0.0]]), atol=ATOL)


def test_polar_round_trip_invertible():
    rng = np.random.default_rng(18)
    for n in (2, 5, 8):
        a = _random_complex(rng, n) + 3.0 * np.eye(n)
        w, b = polar_decompose(a)
        assert frobenius(a - w @ b) < 1e-10 * frobenius(a)
        assert frobenius(w.conj().T @ w - np.eye(n)) < 1e-9
        vals = np.linalg.eigvalsh(0.5 * (b + b.conj().T))
        assert vals[0] > -1e-9 * max(vals[-1], 1.0)


def test_polar_redecompose_idempotent():
    rng = np.random.default_rng(19)
    a = _random_complex(rng, 4)
    w, b = polar_decompose(a)
    w2, b2 = polar_decompose(w @ b)
    np.testing.assert_allclose(b2, b, atol=1e-9 * max(1.0, frobenius(b)))
    # compare the isometries on the support of B only; the kernel is gauge
    supp = support_projection(b)
    np.testing.assert_allclose(w2 @ supp, w @ supp, atol=1e-8)


def test_support_projection_frozen_cases():
    np.testing.assert_allclose(support_projection(np.diag([0.0, 2.0])),
                               np.diag([0.0, 1.0]), atol=ATOL)
    np.testing.assert_allclose(support_projection(np.zeros((2, 2))),
                               np.zeros((2, 2)), atol=ATOL)


def test_support_projection_thresholds_tiny_eigenvalues():
    rng = np.random.default_rng(20)
    v = random_unitary(3, rng)
    b = v @ np.diag([0.0, 1e-15, 3.0]) @ v.conj().T
    proj = support_projection(b, tol=1e-9)
    assert np.real(np.trace(proj)) == pytest.approx(1.0, abs=1e-9)
    assert frobenius(proj @ proj - proj) < 1e-9
    assert frobenius(proj - proj.conj().T) < 1e-9


def test_support_projection_rejects_negative():
    with pytest.raises(NotPositive):
        support_projection(np.diag([-1.0, 2.0]))


def test_psd_pseudo_inverse():
    rng = np.random.default_rng(21)
    v = random_unitary(3, rng)
    b = v @ np.diag([0.0, 0.5, 4.0]) @ v.conj().T
    bp = psd_pseudo_inverse(b)
    supp = support_projection(b)
    np.testing.assert_allclose(bp @ b, supp, atol=1e-9)
    np.testing.assert_allclose(b @ bp, supp, atol=1e-9)


def test_random_unitary_is_unitary():
    rng = np.random.default_rng(22)
    for n in (1, 3, 9):
        u = random_unitary(n, rng)
        assert frobenius(u.conj().T @ u - np.eye(n)) < 1e-9 * n


# ---------------------------------------------------------------------------
# serialization


def test_matrix_json_round_trip():
    a = _complexes(23, 4)
    back = matrix_from_json(matrix_to_json(a))
    np.testing.assert_allclose(back, a, atol=0)


@pytest.mark.parametrize("bad", [
    None,
    {"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]},
    {"dim": 2, "re": "x", "im": "y"},
    {"re": [[1]], "im": [[0]]},
])
def test_matrix_json_rejects_malformed(bad):
    with pytest.raises(ValueError):
        matrix_from_json(bad)
