"""Vietoris-Rips filtrations and persistent homology in dimensions 0 and 1.

Simplices enter the filtration at the largest of their edge lengths.  Ties
are broken by dimension and then lexicographically by vertex indices, which
makes every diagram reproducible bit for bit.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from topodist import _backend
from topodist.errors import CapacityError, DegenerateInputError, DomainError
from topodist.geometry import as_distance_matrix

DEFAULT_MAX_POINTS_DIM1 = 256


@dataclass(frozen=True, eq=False)
class Filtration:
    """Edges of the complete graph on ``n`` vertices in filtration order.

    ``edge_i[k] < edge_j[k]`` and ``weights`` is nondecreasing; equal
    weights keep lexicographic ``(i, j)`` order.
    """

    n: int
    edge_i: np.ndarray
    edge_j: np.ndarray
    weights: np.ndarray

    @cached_property
    def merge_positions(self) -> np.ndarray:
        """Positions of the spanning-tree (component-merging) edges."""
        return _backend.kruskal_merges(self.edge_i, self.edge_j, self.n)

    @property
    def connect_threshold(self) -> float:
        """Smallest scale at which the 1-skeleton is connected."""
        pos = self.merge_positions
        return float(self.weights[pos[-1]]) if pos.size else 0.0

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of ``(birth, death)`` pairs in one homology dimension.

    Infinite deaths are stored as ``np.inf``.
    """

    dim: int
    births: np.ndarray
    deaths: np.ndarray
    n_points: int

    def __post_init__(self):
        births = np.asarray(self.births, dtype=np.float64).reshape(-1)
        deaths = np.asarray(self.deaths, dtype=np.float64).reshape(-1)
        if births.shape != deaths.shape:
            raise DomainError("births and deaths must have the same length")
        if self.dim not in (0, 1):
            raise DomainError(f"only dimensions 0 and 1 are supported, got {self.dim}")
        if np.any(np.isnan(births)) or np.any(np.isnan(deaths)) or np.any(~np.isfinite(births)):
            raise DomainError("births must be finite and deaths must not be NaN")
        if np.any(births < 0) or np.any(deaths < births):
            raise DomainError("pairs must satisfy 0 <= birth <= death")
        object.__setattr__(self, "births", births)
        object.__setattr__(self, "deaths", deaths)

    @classmethod
    def from_pairs(cls, pairs, dim=0, n_points=None):
        arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
        return cls(dim, arr[:, 0], arr[:, 1], len(arr) if n_points is None else n_points)

    @property
    def pairs(self) -> np.ndarray:
        return np.column_stack([self.births, self.deaths])

    @property
    def is_finite(self) -> np.ndarray:
        return np.isfinite(self.deaths)

    def finite_pairs(self) -> np.ndarray:
        return self.pairs[self.is_finite]

    def infinite_births(self) -> np.ndarray:
        return self.births[~self.is_finite]

    def sorted_pairs(self) -> np.ndarray:
        """Pairs in canonical ``(birth, death)`` lexicographic order."""
        order = np.lexsort((self.deaths, self.births))
        return self.pairs[order]

    def __len__(self):
        return self.births.size

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.n_points == other.n_points
            and np.array_equal(self.sorted_pairs(), other.sorted_pairs())
        )

    __hash__ = None


def _edges_in_order(dist: np.ndarray):
    n = dist.shape[0]
    ii, jj = np.triu_indices(n, 1)
    w = dist[ii, jj]
    order = np.argsort(w, kind="stable")
    return ii[order], jj[order], w[order]


def build_filtration(dist) -> Filtration:
    d = as_distance_matrix(dist)
    n = d.shape[0]
    if n < 2:
        raise DegenerateInputError(f"a filtration needs at least 2 points, got {n}")
    ei, ej, w = _edges_in_order(d)
    return Filtration(n, ei, ej, w)


def persistence_dim0(filt: Filtration) -> PersistenceDiagram:
    """0-dimensional diagram: every class is born at 0, merges kill them.

    The finite deaths are exactly the minimum-spanning-tree edge weights;
    the last surviving component gets an infinite death.
    """
    deaths = np.append(filt.weights[filt.merge_positions], np.inf)
    return PersistenceDiagram(0, np.zeros(filt.n), deaths, filt.n)


def diagram_dim0(points_or_dist, *, is_distance=False) -> PersistenceDiagram:
    """Convenience: dim-0 diagram straight from points (or a distance matrix)."""
    from topodist.geometry import pairwise_distances

    dist = points_or_dist if is_distance else pairwise_distances(points_or_dist)
    return persistence_dim0(build_filtration(dist))


def _triangles(n: int):
    """All ``i < j < k`` vertex triples in lexicographic order.

    Also returns the lexicographic index of the first triple starting with
    each pair ``(i, j)``, as an ``(n, n)`` table.
    """
    ii, jj = np.triu_indices(n, 1)
    counts = n - 1 - jj
    pair_offset = np.zeros((n, n), dtype=np.int64)
    pair_offset[ii, jj] = np.cumsum(counts) - counts
    keep = counts > 0
    ii, jj, counts = ii[keep], jj[keep], counts[keep]
    total = int(counts.sum())
    ti = np.repeat(ii, counts)
    tj = np.repeat(jj, counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    tk = np.arange(total) - starts + tj + 1
    return ti, tj, tk, pair_offset


def persistence_dim1(
    dist,
    max_scale: float,
    max_points: int = DEFAULT_MAX_POINTS_DIM1,
    method: str = "cohomology",
) -> PersistenceDiagram:
    """1-dimensional diagram of the Rips filtration truncated at ``max_scale``.

    ``method="cohomology"`` (default) reduces the edge coboundary matrix,
    visiting edges backwards and clearing the spanning-tree edges, which
    are known in advance to carry no cycle.  ``method="homology"`` reduces
    the triangle boundary matrix and clears its pivot edges from the
    spanning-tree pass instead.  Both yield the same pairs.

    Cycles still open at ``max_scale`` get an infinite death.  Zero-length
    pairs (death == birth) are not reported.
    """
    d = as_distance_matrix(dist)
    n = d.shape[0]
    if n > max_points:
        raise CapacityError(
            f"{n} points exceed the dimension-1 cap of {max_points}; "
            "subsample the cloud (e.g. average over several random subsets)"
        )
    if not max_scale > 0:
        raise DomainError(f"max_scale must be positive, got {max_scale}")
    if method not in ("cohomology", "homology"):
        raise ValueError(f"unknown method {method!r}")
    if n < 3:
        return PersistenceDiagram(1, [], [], n)

    ei, ej, w = _edges_in_order(d)
    keep = w <= max_scale
    ei, ej, w = ei[keep], ej[keep], w[keep]

    ti, tj, tk, pair_offset = _triangles(n)
    tval = np.maximum(np.maximum(d[ti, tj], d[ti, tk]), d[tj, tk])
    lex = np.flatnonzero(tval <= max_scale)
    order = lex[np.argsort(tval[lex], kind="stable")]
    tval = tval[order]

    if method == "cohomology":
        tree = np.zeros(w.size, dtype=np.uint8)
        tree[_backend.kruskal_merges(ei, ej, n)] = 1
        tri_rank = np.full(ti.size, -1, dtype=np.int64)
        tri_rank[order] = np.arange(order.size)
        death_rank = _backend.reduce_coboundary(ei, ej, tree, pair_offset, tri_rank)
        killed = death_rank >= 0
        births = w[killed]
        deaths = tval[death_rank[killed]]
        open_cycle = (tree == 0) & ~killed
    else:
        edge_index = np.full((n, n), -1, dtype=np.int64)
        edge_index[ei, ej] = np.arange(w.size)
        ti, tj, tk = ti[order], tj[order], tk[order]
        faces = np.column_stack([edge_index[ti, tj], edge_index[ti, tk], edge_index[tj, tk]])
        lows = _backend.reduce_triangles(faces)
        killed = lows >= 0
        births = w[lows[killed]]
        deaths = tval[killed]
        cleared = np.zeros(w.size, dtype=np.uint8)
        cleared[lows[killed]] = 1
        open_cycle = cleared == 0
        open_cycle[_backend.kruskal_merges(ei, ej, n, skip=cleared)] = False

    nonzero = deaths > births
    births, deaths = births[nonzero], deaths[nonzero]
    inf_births = w[open_cycle]
    return PersistenceDiagram(
        1,
        np.concatenate([births, inf_births]),
        np.concatenate([deaths, np.full(inf_births.size, np.inf)]),
        n,
    )


def longevity(diagram: PersistenceDiagram) -> np.ndarray:
    """Sorted living times ``death - birth`` of a dim-0 diagram, infinities last."""
    if diagram.dim != 0:
        raise DomainError(f"longevity vectors are defined for dim-0 diagrams, got dim {diagram.dim}")
    return np.sort(diagram.deaths - diagram.births)


def betti_curve(diagram: PersistenceDiagram, scales) -> np.ndarray:
    """Number of classes alive at each scale (``birth <= s < death``)."""
    s = np.asarray(scales, dtype=np.float64)
    born = np.searchsorted(np.sort(diagram.births), s, side="right")
    dead = np.searchsorted(np.sort(diagram.deaths), s, side="right")
    return born - dead
