import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from topodist.errors import DomainError, InputFormatError, InsufficientSamplesError, NonFiniteValueError
from topodist.geometry import (
    GaussianStats,
    as_distance_matrix,
    as_feature_matrix,
    estimate_gaussian,
    pairwise_distances,
    psd_eigh,
    spd_sqrt,
)


def test_feature_matrix_validation():
    assert as_feature_matrix([1.0, 2.0]).shape == (2, 1)
    with pytest.raises(NonFiniteValueError):
        as_feature_matrix([[0.0, np.nan]])
    with pytest.raises(InputFormatError):
        as_feature_matrix(np.zeros((0, 3)))
    with pytest.raises(InputFormatError):
        as_feature_matrix(np.zeros((2, 2, 2)))


def test_distance_matrix_validation():
    with pytest.raises(InputFormatError):
        as_distance_matrix([[0.0, 1.0, 2.0]])
    with pytest.raises(DomainError):
        as_distance_matrix([[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(DomainError):
        as_distance_matrix([[1.0, 1.0], [1.0, 0.0]])
    with pytest.raises(DomainError):
        as_distance_matrix([[0.0, -1.0], [-1.0, 0.0]])


def test_pairwise_345():
    d = pairwise_distances([[0, 0], [3, 4]])
    assert d[0, 1] == d[1, 0] == 5.0


def test_pairwise_identical_rows():
    assert pairwise_distances([[1.5, 2.0], [1.5, 2.0]])[0, 1] == 0.0


def test_pairwise_1d_hand():
    d = pairwise_distances([[0], [1], [3]])
    assert sorted(d[np.triu_indices(3, 1)]) == [1.0, 2.0, 3.0]


def test_pairwise_single_point():
    assert pairwise_distances([[1.0, 2.0]]).shape == (1, 1)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(1, 5)), elements=st.floats(-1e3, 1e3)))
def test_pairwise_invariants(x):
    d = pairwise_distances(x)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    explicit = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    np.testing.assert_allclose(d, explicit, rtol=1e-12, atol=1e-9)
    n = len(x)
    slack = 1e-9 * max(1.0, d.max())
    for i in range(n):
        assert np.all(d[i][:, None] <= d[i][None, :] + d + slack)


def test_estimate_two_points():
    s = estimate_gaussian([[0.0], [2.0]])
    assert s.mean[0] == 1.0
    assert s.cov[0, 0] == 2.0


def test_estimate_constant_cloud():
    s = estimate_gaussian(np.full((5, 3), 7.0))
    assert np.all(s.mean == 7.0)
    assert np.all(s.cov == 0.0)


def test_estimate_monte_carlo():
    x = np.random.default_rng(0).standard_normal((1000, 2))
    s = estimate_gaussian(x)
    assert np.all(np.abs(s.mean) < 0.15)
    assert np.all(np.abs(s.cov - np.eye(2)) < 0.15)


def test_estimate_needs_two_rows():
    with pytest.raises(InsufficientSamplesError):
        estimate_gaussian([[1.0, 2.0]])


def test_gaussian_stats_shape_check():
    with pytest.raises(Exception):
        GaussianStats(np.zeros(2), np.eye(3))


def test_spd_sqrt_closed_forms():
    np.testing.assert_array_equal(spd_sqrt(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(spd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-15)


def test_spd_sqrt_eigen_oracle():
    rng = np.random.default_rng(7)
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    lam = rng.uniform(0.1, 5.0, 6)
    a = (q * lam) @ q.T
    a = (a + a.T) / 2
    np.testing.assert_allclose(spd_sqrt(a), (q * np.sqrt(lam)) @ q.T, atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=st.floats(-10, 10)))
def test_spd_sqrt_squares_back(b):
    a = b @ b.T
    r = spd_sqrt(a)
    np.testing.assert_array_equal(r, r.T)
    np.testing.assert_allclose(r @ r, a, atol=1e-7 * max(1.0, np.abs(a).max()))


def test_psd_rejects_indefinite():
    with pytest.raises(DomainError):
        psd_eigh(np.diag([1.0, -1.0]))
    w, _ = psd_eigh(np.diag([1.0, -1e-12]))
    assert w.min() == 0.0
