"""Exact bottleneck and Wasserstein distances between persistence diagrams.

Points may be matched to each other or to their nearest point on the
diagonal.  Infinite bars are matched only with infinite bars, at no cost;
when the two diagrams carry different numbers of them the distance is
infinite.
"""

import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from topodist.errors import DomainError, MetricPreconditionError
from topodist.persistence import PersistenceDiagram


def _finite_parts(d1: PersistenceDiagram, d2: PersistenceDiagram):
    if d1.dim != d2.dim:
        raise MetricPreconditionError(
            f"diagrams are in different homology dimensions ({d1.dim} vs {d2.dim})"
        )
    if np.count_nonzero(~d1.is_finite) != np.count_nonzero(~d2.is_finite):
        return None
    return d1.finite_pairs(), d2.finite_pairs()


def _pair_costs(a: np.ndarray, b: np.ndarray, q: float) -> np.ndarray:
    delta = np.abs(a[:, None, :] - b[None, :, :])
    if math.isinf(q):
        return delta.max(axis=2)
    return (delta**q).sum(axis=2) ** (1.0 / q)


def _diagonal_costs(a: np.ndarray, q: float) -> np.ndarray:
    half = (a[:, 1] - a[:, 0]) / 2.0
    return half if math.isinf(q) else half * 2.0 ** (1.0 / q)


def _check_order(q):
    if not q >= 1:
        raise DomainError(f"norm orders must be >= 1, got {q}")


def _perfect_matching_within(cross, diag_a, diag_b, delta) -> bool:
    m, n = cross.shape
    size = m + n
    # rows: A points then diagonal slots of B; columns: B points then diagonal slots of A
    adj = np.zeros((size, size), dtype=bool)
    adj[:m, :n] = cross <= delta
    adj[np.arange(m), n + np.arange(m)] = diag_a <= delta
    adj[m + np.arange(n), np.arange(n)] = diag_b <= delta
    adj[m:, n:] = True
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def diagram_bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, q: float = math.inf) -> float:
    """Smallest ``delta`` admitting a matching in which no point moves more than ``delta``.

    Exact: binary search over the finite set of candidate costs, each
    step deciding whether a perfect bipartite matching exists.
    """
    _check_order(q)
    parts = _finite_parts(d1, d2)
    if parts is None:
        return math.inf
    a, b = parts
    if a.size == 0 and b.size == 0:
        return 0.0
    cross = _pair_costs(a, b, q)
    diag_a, diag_b = _diagonal_costs(a, q), _diagonal_costs(b, q)
    candidates = np.unique(np.concatenate([[0.0], cross.ravel(), diag_a, diag_b]))
    lo, hi = 0, candidates.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_within(cross, diag_a, diag_b, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def diagram_wasserstein(
    d1: PersistenceDiagram, d2: PersistenceDiagram, p: float = 1.0, q: float = math.inf
) -> float:
    """``(min over matchings of sum |u - eta(u)|_q ** p) ** (1/p)``.

    Solved exactly as a square assignment problem over the diagram points
    plus one diagonal slot per point of the other diagram.  ``p = inf``
    gives the bottleneck distance.
    """
    _check_order(p)
    _check_order(q)
    if math.isinf(p):
        return diagram_bottleneck(d1, d2, q)
    parts = _finite_parts(d1, d2)
    if parts is None:
        return math.inf
    a, b = parts
    m, n = len(a), len(b)
    if m == 0 and n == 0:
        return 0.0
    cost = np.full((m + n, n + m), np.inf)
    cost[:m, :n] = _pair_costs(a, b, q) ** p
    cost[np.arange(m), n + np.arange(m)] = _diagonal_costs(a, q) ** p
    cost[m + np.arange(n), np.arange(n)] = _diagonal_costs(b, q) ** p
    cost[m:, n:] = 0.0
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum() ** (1.0 / p))
