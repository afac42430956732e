import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xlzf.numerics import (
    DEFAULT_TOL,
    ToleranceParams,
    kron,
    nullspace_project,
    pseudo_inverse,
    rowspace_projector,
)


def qr_pinv(a):
    """Independent pseudo-inverse oracle via Householder QR (full-rank inputs)."""
    m, n = a.shape
    if m >= n:
        q, r = np.linalg.qr(a)
        return np.linalg.solve(r, q.conj().T)
    return qr_pinv(a.conj().T).conj().T


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_tolerance_params_validation():
    ToleranceParams(1e-12, 1e-9)
    for bad in ((0.0, 0.5), (0.5, 1.0), (-1e-3, 0.5), (0.5, 2.0)):
        with pytest.raises(ValueError):
            ToleranceParams(*bad)


def test_pinv_identity_and_zero():
    np.testing.assert_allclose(pseudo_inverse(np.eye(4)), np.eye(4), atol=1e-14)
    z = np.zeros((3, 5), dtype=complex)
    out = pseudo_inverse(z)
    assert out.shape == (5, 3)
    np.testing.assert_array_equal(out, np.zeros((5, 3)))


def test_pinv_rank_deficient_diagonal():
    a = np.diag([2.0, 0.0])
    got = pseudo_inverse(a)
    # oracle: explicit SVD composition with the same cutoff rule
    u, s, vh = np.linalg.svd(a)
    s_inv = np.where(s > DEFAULT_TOL.rank_rtol * s.max(), 1.0 / np.where(s > 0, s, 1.0), 0.0)
    oracle = vh.conj().T @ np.diag(s_inv) @ u.conj().T
    np.testing.assert_allclose(got, oracle, atol=1e-14)
    np.testing.assert_allclose(got, np.diag([0.5, 0.0]), atol=1e-14)


def test_pinv_empty_rows():
    out = pseudo_inverse(np.zeros((0, 6), dtype=complex))
    assert out.shape == (6, 0)


def test_pinv_rejects_non_finite():
    a = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        pseudo_inverse(a)
    with pytest.raises(ValueError):
        pseudo_inverse(np.array([[np.inf + 0j]]))


def test_pinv_moore_penrose_conditions_100_random():
    rng = np.random.default_rng(42)
    for _ in range(100):
        k = int(rng.integers(1, 65))
        m = int(rng.integers(1, 65))
        a = random_complex(rng, (k, m))
        p = pseudo_inverse(a)
        na = np.linalg.norm(a)
        np_ = np.linalg.norm(p)
        assert np.linalg.norm(a @ p @ a - a) <= 1e-10 * na
        assert np.linalg.norm(p @ a @ p - p) <= 1e-10 * np_
        assert np.linalg.norm((a @ p).conj().T - a @ p) <= 1e-10 * max(na * np_, 1.0)
        assert np.linalg.norm((p @ a).conj().T - p @ a) <= 1e-10 * max(na * np_, 1.0)


def test_pinv_matches_qr_oracle_100_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        k = int(rng.integers(1, 33))
        m = int(rng.integers(1, 33))
        a = random_complex(rng, (k, m))
        oracle = qr_pinv(a)
        got = pseudo_inverse(a)
        assert np.linalg.norm(got - oracle) <= 1e-8 * np.linalg.norm(oracle)


def test_rowspace_projector_examples():
    p = rowspace_projector(np.array([[1.0, 0.0]]))
    np.testing.assert_allclose(p, np.diag([1.0, 0.0]), atol=1e-14)
    p0 = rowspace_projector(np.zeros((0, 3), dtype=complex))
    np.testing.assert_array_equal(p0, np.zeros((3, 3)))


def test_rowspace_projector_full_rank_square_is_identity():
    rng = np.random.default_rng(3)
    # well-conditioned 4x4: unitary factor times a spread-out diagonal
    q, _ = np.linalg.qr(random_complex(rng, (4, 4)))
    a = q @ np.diag([1.0, 2.0, 3.0, 4.0]) @ q.conj().T
    np.testing.assert_allclose(rowspace_projector(a), np.eye(4), atol=1e-10)


def test_nullspace_project_examples():
    h = np.array([1.0, 1.0])
    out = nullspace_project(np.array([[1.0, 0.0]]), h)
    np.testing.assert_allclose(out, [0.0, 1.0], atol=1e-14)
    # empty interference matrix returns the vector unchanged
    np.testing.assert_allclose(nullspace_project(np.zeros((0, 2)), h), h, atol=0)
    # a vector inside the row space is annihilated
    h_t = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    inside = 3.0 * h_t[0] - 2.0 * h_t[1]
    out = nullspace_project(h_t.astype(complex), inside.astype(complex))
    assert np.abs(out).max() <= 1e-12 * np.linalg.norm(inside)


def test_nullspace_project_dimension_mismatch():
    with pytest.raises(ValueError):
        nullspace_project(np.ones((2, 3)), np.ones(4))


@given(k=st.integers(0, 24), m=st.integers(1, 32), seed=st.integers(0, 2**31))
@settings(max_examples=80, deadline=None)
def test_projector_properties_and_complementarity(k, m, seed):
    k = min(k, m)
    rng = np.random.default_rng(seed)
    h_t = random_complex(rng, (k, m))
    h = random_complex(rng, (m,))
    p = rowspace_projector(h_t)
    np.testing.assert_allclose(p @ p, p, atol=1e-10)
    np.testing.assert_allclose(p.conj().T, p, atol=1e-10)
    complement = np.eye(m) - p
    np.testing.assert_allclose(complement @ complement, complement, atol=1e-10)
    np.testing.assert_allclose(nullspace_project(h_t, h) + p @ h, h, atol=1e-10)
    if k:
        residual = np.abs(h_t @ nullspace_project(h_t, h)).max()
        assert residual <= DEFAULT_TOL.residual_tol * np.linalg.norm(h_t) * np.linalg.norm(h)


def test_kron_examples():
    b = np.array([3.0, 4.0, 5.0])
    np.testing.assert_array_equal(kron(np.array([1.0]), b), b)
    np.testing.assert_array_equal(
        kron(np.array([1.0, 2.0]), np.array([1.0, -1.0])), [1.0, -1.0, 2.0, -2.0]
    )


@given(
    na=st.integers(1, 6), nb=st.integers(1, 6), seed=st.integers(0, 2**31)
)
@settings(max_examples=60)
def test_kron_norm_multiplicative_and_ordering(na, nb, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(na) + 1j * rng.standard_normal(na)
    b = rng.standard_normal(nb) + 1j * rng.standard_normal(nb)
    out = kron(a, b)
    assert np.linalg.norm(out) == pytest.approx(
        np.linalg.norm(a) * np.linalg.norm(b), rel=1e-12
    )
    # entrywise products agree up to the ulp-level difference between the
    # vectorized and scalar complex-multiply paths
    for i in range(na):
        for j in range(nb):
            assert abs(out[i * nb + j] - a[i] * b[j]) <= 1e-14 * abs(a[i] * b[j])
