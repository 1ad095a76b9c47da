"""Moment-based scores: Frechet distance and kernel MMD."""

import numpy as np

from topodist.errors import DimensionMismatchError, InsufficientSamplesError
from topodist.geometry import GaussianStats, as_feature_matrix, estimate_gaussian, psd_eigh, spd_sqrt


def fid(stats_real: GaussianStats, stats_gen: GaussianStats) -> float:
    """Frechet (Wasserstein-2) distance between two Gaussian fits.

    The trace of ``(S_r S_g)^(1/2)`` is taken through the symmetric matrix
    ``S_r^(1/2) S_g S_r^(1/2)``, which has the same eigenvalues.
    """
    if stats_real.dim != stats_gen.dim:
        raise DimensionMismatchError(
            f"feature dimensions differ ({stats_real.dim} vs {stats_gen.dim})"
        )
    psd_eigh(stats_gen.cov)
    root = spd_sqrt(stats_real.cov)
    eig, _ = psd_eigh(root @ stats_gen.cov @ root)
    diff = stats_real.mean - stats_gen.mean
    value = (
        float(diff @ diff)
        + float(np.trace(stats_real.cov))
        + float(np.trace(stats_gen.cov))
        - 2.0 * float(np.sum(np.sqrt(eig)))
    )
    return max(value, 0.0)


def fid_from_features(features_real, features_gen) -> float:
    return fid(estimate_gaussian(features_real), estimate_gaussian(features_gen))


def polynomial_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``(x . y / d + 1) ** 3`` for every row pair."""
    d = x.shape[1]
    return (x @ y.T / d + 1.0) ** 3


def kid(features_real, features_gen) -> float:
    """Unbiased squared MMD under the cubic polynomial kernel.

    Within-set averages skip the ``i == j`` terms; the cross term averages
    over every pair.
    """
    x = as_feature_matrix(features_real)
    y = as_feature_matrix(features_gen)
    m, n = x.shape[0], y.shape[0]
    if m < 2 or n < 2:
        raise InsufficientSamplesError(f"KID needs at least 2 samples per set, got {m} and {n}")
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(f"feature dimensions differ ({x.shape[1]} vs {y.shape[1]})")
    kxx = polynomial_kernel(x, x)
    kyy = polynomial_kernel(y, y)
    kxy = polynomial_kernel(x, y)
    within_x = (kxx.sum() - np.trace(kxx)) / (m * (m - 1))
    within_y = (kyy.sum() - np.trace(kyy)) / (n * (n - 1))
    return float(within_x + within_y - 2.0 * kxy.mean())
