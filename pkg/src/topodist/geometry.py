"""Point clouds, Euclidean distance matrices and Gaussian moment estimates.

Feature matrices and distance matrices are plain ``float64`` numpy arrays;
the ``as_*`` helpers validate and normalise them at module boundaries.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from topodist.errors import (
    DimensionMismatchError,
    DomainError,
    InputFormatError,
    InsufficientSamplesError,
    NonFiniteValueError,
)

SYMMETRY_TOL = 1e-9
EIGEN_CLAMP = 1e-8


def as_feature_matrix(points) -> np.ndarray:
    """Return ``points`` as a C-contiguous ``(n, m)`` float64 array.

    A 1-D input is read as ``n`` samples of dimension 1.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InputFormatError(f"feature matrix must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputFormatError(f"feature matrix needs n >= 1 and m >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError("feature matrix contains NaN or infinite entries")
    return np.ascontiguousarray(arr)


def as_distance_matrix(dist) -> np.ndarray:
    arr = np.asarray(dist, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputFormatError(f"distance matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError("distance matrix contains NaN or infinite entries")
    if np.any(arr < 0):
        raise DomainError("distance matrix has negative entries")
    if np.any(np.diag(arr) != 0):
        raise DomainError("distance matrix must have a zero diagonal")
    if not np.array_equal(arr, arr.T):
        raise DomainError("distance matrix must be exactly symmetric")
    return np.ascontiguousarray(arr)


def pairwise_distances(points) -> np.ndarray:
    """Full ``(n, n)`` Euclidean distance matrix between the rows of ``points``.

    Each entry is ``sqrt(sum((x_i - x_j) ** 2))`` evaluated pair by pair, so
    the result is exactly symmetric with an exact zero diagonal.
    """
    x = as_feature_matrix(points)
    if x.shape[0] == 1:
        return np.zeros((1, 1))
    return squareform(pdist(x, metric="euclidean"))


@dataclass(frozen=True)
class GaussianStats:
    """Mean vector and covariance matrix of a feature cloud."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatchError(
                f"covariance shape {cov.shape} does not match mean length {mean.size}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


def estimate_gaussian(points) -> GaussianStats:
    """Column means and unbiased (``n - 1``) sample covariance."""
    x = as_feature_matrix(points)
    n = x.shape[0]
    if n < 2:
        raise InsufficientSamplesError(f"need at least 2 samples for a covariance, got {n}")
    mean = x.mean(axis=0)
    centred = x - mean
    cov = centred.T @ centred / (n - 1)
    cov = 0.5 * (cov + cov.T)
    return GaussianStats(mean, cov)


def _check_symmetric(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise DomainError("matrix is not symmetric")


def psd_eigh(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric PSD matrix with roundoff clamping.

    Eigenvalues below ``-1e-8 * max|eigenvalue|`` mean the matrix is
    genuinely indefinite and raise :class:`DomainError`; anything smaller
    in magnitude is clamped to zero.
    """
    a = np.asarray(matrix, dtype=np.float64)
    _check_symmetric(a)
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    tol = EIGEN_CLAMP * np.max(np.abs(w), initial=0.0)
    if w.size and w[0] < -tol:
        raise DomainError(f"matrix is indefinite (smallest eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), v


def spd_sqrt(matrix) -> np.ndarray:
    """Symmetric PSD square root ``S`` with ``S @ S == matrix`` up to roundoff."""
    w, v = psd_eigh(matrix)
    root = (v * np.sqrt(w)) @ v.T
    return 0.5 * (root + root.T)
