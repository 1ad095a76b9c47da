"""Relative living times of 1-cycles and the Geometry Score built on them."""

from dataclasses import dataclass

import numpy as np

from topodist.errors import DegenerateInputError, DomainError
from topodist.geometry import as_distance_matrix
from topodist.persistence import DEFAULT_MAX_POINTS_DIM1, betti_curve, persistence_dim1

DEFAULT_I_MAX = 100


@dataclass(frozen=True)
class RLTVector:
    """Share of the scale axis ``[0, d_max]`` spent at each H1 rank.

    ``values[i - 1]`` is the share at rank ``i`` for ``i = 1 .. i_max``.
    The share at rank 0 and at ranks above ``i_max`` is kept apart in
    ``rank0_mass`` and ``overflow_mass``, so all three sum to 1.
    """

    values: np.ndarray
    i_max: int
    rank0_mass: float = 0.0
    overflow_mass: float = 0.0


def rlt(dist, i_max: int = DEFAULT_I_MAX, max_points: int = DEFAULT_MAX_POINTS_DIM1) -> RLTVector:
    d = as_distance_matrix(dist)
    if i_max < 1:
        raise DomainError(f"i_max must be at least 1, got {i_max}")
    n = d.shape[0]
    if n < 2:
        raise DegenerateInputError("relative living times need at least 2 points")
    d_max = float(d.max())
    if d_max == 0:
        raise DegenerateInputError("all points coincide; relative living times are undefined")

    diagram = persistence_dim1(d, d_max, max_points=max_points)
    scales = np.unique(np.concatenate([[0.0], d[np.triu_indices(n, 1)]]))
    lengths = np.diff(scales)
    ranks = betti_curve(diagram, scales[:-1])
    mass = np.bincount(ranks, weights=lengths / d_max, minlength=i_max + 1)
    return RLTVector(
        values=mass[1 : i_max + 1].copy(),
        i_max=i_max,
        rank0_mass=float(mass[0]),
        overflow_mass=float(mass[i_max + 1 :].sum()),
    )


def mean_rlt(clouds, i_max: int = DEFAULT_I_MAX, max_points: int = DEFAULT_MAX_POINTS_DIM1):
    clouds = list(clouds)
    if not clouds:
        raise DomainError("need at least one cloud")
    return np.mean([rlt(c, i_max, max_points).values for c in clouds], axis=0)


def gs(clouds_real, clouds_gen, i_max: int = DEFAULT_I_MAX, max_points: int = DEFAULT_MAX_POINTS_DIM1) -> float:
    """Plain (not squared) L2 distance between mean RLT vectors.

    Each argument is a list of distance matrices; averaging over several
    random subsets of a large cloud is how big inputs are handled.
    """
    mean_real = mean_rlt(clouds_real, i_max, max_points)
    mean_gen = mean_rlt(clouds_gen, i_max, max_points)
    return float(np.linalg.norm(mean_real - mean_gen))
