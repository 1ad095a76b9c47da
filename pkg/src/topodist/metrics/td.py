"""Topology Distance between two equally sized feature clouds."""

from dataclasses import dataclass

import numpy as np

from topodist.errors import DimensionMismatchError, DomainError, SampleCountMismatchError
from topodist.geometry import as_feature_matrix
from topodist.persistence import diagram_dim0, longevity


@dataclass(frozen=True)
class InfinityPolicy:
    """How an infinite living time compares with a finite one.

    ``inf - inf`` counts as 0.  ``inf - x`` counts as ``factor`` times the
    largest finite living time found in either of the two vectors.
    """

    factor: float = 1.05

    def __post_init__(self):
        if not (np.isfinite(self.factor) and self.factor > 1.0):
            raise DomainError(f"infinity factor must be a finite number > 1, got {self.factor}")

    def cap(self, *vectors) -> float:
        finite = [v[np.isfinite(v)] for v in vectors]
        largest = max((float(f.max()) for f in finite if f.size), default=0.0)
        return self.factor * largest


def td_from_longevity(lon_real, lon_gen, inf_policy: InfinityPolicy | None = None) -> float:
    """L2 distance between two sorted longevity vectors of equal length."""
    a = np.asarray(lon_real, dtype=np.float64)
    b = np.asarray(lon_gen, dtype=np.float64)
    if a.shape != b.shape:
        raise SampleCountMismatchError(
            f"longevity vectors differ in length ({a.size} vs {b.size}); "
            "compare clouds with the same number of samples"
        )
    policy = inf_policy or InfinityPolicy()
    inf_a, inf_b = np.isinf(a), np.isinf(b)
    diff = np.zeros_like(a)
    both = ~inf_a & ~inf_b
    diff[both] = a[both] - b[both]
    diff[inf_a ^ inf_b] = policy.cap(a, b)
    return float(np.sqrt(np.sum(diff * diff)))


def td(features_real, features_gen, inf_policy: InfinityPolicy | None = None) -> float:
    """Topology Distance between two feature clouds.

    Both clouds must have the same number of samples and the same feature
    dimension; nothing is subsampled or padded.

    >>> td([[0.0], [1.0], [3.0]], [[0.0], [1.0], [2.0]])
    1.0
    """
    x = as_feature_matrix(features_real)
    y = as_feature_matrix(features_gen)
    if x.shape[0] != y.shape[0]:
        raise SampleCountMismatchError(
            f"sample counts differ ({x.shape[0]} vs {y.shape[0]}); TD needs equal n"
        )
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(f"feature dimensions differ ({x.shape[1]} vs {y.shape[1]})")
    if x.shape[0] == 1:
        return 0.0
    return td_from_longevity(longevity(diagram_dim0(x)), longevity(diagram_dim0(y)), inf_policy)
