"""Batch harnesses: group-vs-group score matrices, severity sweeps and the
image-manipulation comparison.

Work is spread over a thread pool (``TOPODIST_WORKERS``, default 1) and
always gathered in index order, so outputs do not depend on scheduling.
"""

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from topodist.datagen import (
    DEFAULT_DIM,
    DEFAULT_OFFSET,
    MANIPULATIONS,
    MixtureSpec,
    gaussian_noise,
    make_rng,
    manipulate_batch,
    sample_gaussian,
    sample_matched_mixture,
    synthetic_images,
)
from topodist.errors import DomainError, TopoDistError
from topodist.geometry import as_feature_matrix, estimate_gaussian, pairwise_distances
from topodist.metrics import DEFAULT_I_MAX, InfinityPolicy, fid, kid, mean_rlt, td_from_longevity
from topodist.persistence import diagram_dim0, longevity

GROUP_SIZE = 500
GROUP_COUNT = 10
PAIRED_GROUP_SIZE = 600
PAIRED_GROUPS = 5
SEVERITIES = (0.1, 0.2, 0.3, 0.4, 0.5)
MATRIX_METRICS = ("td", "fid", "kid", "gs")

# stream keys for make_rng(seed, key, ...)
_GAUSSIAN, _MIXTURE, _GS_SUBSETS, _IMAGES, _MANIP, _SWEEP_BASE, _SWEEP_NOISE = range(7)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TOPODIST_WORKERS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items, workers=None):
    items = list(items)
    workers = workers or worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class MetricConfig:
    inf_factor: float = 1.05
    i_max: int = DEFAULT_I_MAX
    gs_subsets: int = 10
    gs_points: int = 64
    seed: int = 0


def paired_groups(seed=0, groups=PAIRED_GROUPS, group_size=PAIRED_GROUP_SIZE, dim=DEFAULT_DIM, offset=DEFAULT_OFFSET):
    """Single-Gaussian groups and moment-matched mixture groups."""
    spec = MixtureSpec.along_first_axis(dim, offset)
    mean, cov = spec.matched_gaussian()
    single = [sample_gaussian(mean, cov, group_size, make_rng(seed, _GAUSSIAN, g)) for g in range(groups)]
    mixture = [sample_matched_mixture(spec, group_size, make_rng(seed, _MIXTURE, g)) for g in range(groups)]
    return single, mixture


def gs_subsets(points, count, size, rng):
    """Distance matrices of ``count`` random ``size``-point subsets."""
    x = as_feature_matrix(points)
    size = min(size, x.shape[0])
    return [pairwise_distances(x[rng.choice(x.shape[0], size, replace=False)]) for _ in range(count)]


def _represent(metric, x, index, cfg: MetricConfig):
    if metric == "td":
        return longevity(diagram_dim0(x)) if len(x) > 1 else np.array([np.inf])
    if metric == "fid":
        return estimate_gaussian(x)
    if metric == "kid":
        return x
    if metric == "gs":
        rng = make_rng(cfg.seed, _GS_SUBSETS, index)
        return mean_rlt(gs_subsets(x, cfg.gs_subsets, cfg.gs_points, rng), cfg.i_max)
    raise DomainError(f"unknown metric {metric!r}; choose from {', '.join(MATRIX_METRICS)}")


def _compare(metric, ra, rb, cfg: MetricConfig) -> float:
    if metric == "td":
        return td_from_longevity(ra, rb, InfinityPolicy(cfg.inf_factor))
    if metric == "fid":
        return fid(ra, rb)
    if metric == "kid":
        return kid(ra, rb)
    return float(np.linalg.norm(ra - rb))


def score_matrix(metric, groups, cfg: MetricConfig | None = None, workers=None) -> np.ndarray:
    """Symmetric ``k x k`` matrix of ``metric`` between every pair of groups."""
    cfg = cfg or MetricConfig()
    groups = [as_feature_matrix(g) for g in groups]
    if metric not in MATRIX_METRICS:
        raise DomainError(f"unknown metric {metric!r}; choose from {', '.join(MATRIX_METRICS)}")

    def represent(idx):
        try:
            return _represent(metric, groups[idx], idx, cfg)
        except TopoDistError as exc:
            raise type(exc)(f"group {idx}: {exc}") from exc

    reps = _ordered_map(represent, range(len(groups)), workers)
    pairs = list(itertools.combinations_with_replacement(range(len(groups)), 2))

    def compare(pair):
        i, j = pair
        try:
            return _compare(metric, reps[i], reps[j], cfg)
        except TopoDistError as exc:
            raise type(exc)(f"groups ({i}, {j}): {exc}") from exc

    values = _ordered_map(compare, pairs, workers)
    out = np.zeros((len(groups), len(groups)))
    for (i, j), v in zip(pairs, values):
        out[i, j] = out[j, i] = v
    return out


def block_summary(matrix, n_first: int) -> dict:
    """Medians of the within-first, within-second and cross blocks.

    Diagonal entries (a group against itself) are left out.
    """
    k = matrix.shape[0]
    first = [matrix[i, j] for i, j in itertools.combinations(range(n_first), 2)]
    second = [matrix[i, j] for i, j in itertools.combinations(range(n_first, k), 2)]
    cross = [matrix[i, j] for i in range(n_first) for j in range(n_first, k)]
    within = first + second
    if not within or not cross:
        raise DomainError("need at least two groups on one side and one on the other")
    med_within, med_cross = float(np.median(within)), float(np.median(cross))
    if med_within != 0:
        ratio = med_cross / med_within
    else:
        ratio = float("inf") if med_cross > 0 else float("nan")
    return {
        "within_a_median": float(np.median(first)) if first else float("nan"),
        "within_b_median": float(np.median(second)) if second else float("nan"),
        "within_median": med_within,
        "cross_median": med_cross,
        "cross_within_ratio": ratio,
    }


def severity_sweep(
    metric="td",
    severities=SEVERITIES,
    seed=0,
    groups=GROUP_COUNT,
    group_size=GROUP_SIZE,
    dim=DEFAULT_DIM,
    perturbation="gaussian",
    constant_level=0.3,
    cfg: MetricConfig | None = None,
    workers=None,
):
    """Mean and std over groups of ``metric(base, perturbed)`` per severity.

    Base groups are ``N(0, I)`` draws.  The ``gaussian`` perturbation adds
    ``severity * z`` noise, reusing the same ``z`` for every severity so
    levels differ only in magnitude; ``constant`` ignores the severity and
    always uses ``constant_level`` (a flat control curve).
    """
    cfg = cfg or MetricConfig(seed=seed)
    severities = [float(s) for s in severities]
    if len(severities) < 2:
        raise DomainError("a sweep needs at least two severity levels")
    if perturbation not in ("gaussian", "constant"):
        raise DomainError(f"unknown perturbation {perturbation!r}")
    bases = [sample_gaussian(np.zeros(dim), np.eye(dim), group_size, make_rng(seed, _SWEEP_BASE, g)) for g in range(groups)]

    def one(task):
        level, g = task
        sigma = level if perturbation == "gaussian" else constant_level
        noisy = gaussian_noise(bases[g], sigma, make_rng(seed, _SWEEP_NOISE, g))
        return _compare(metric, _represent(metric, bases[g], g, cfg), _represent(metric, noisy, g, cfg), cfg)

    tasks = [(s, g) for s in severities for g in range(groups)]
    scores = np.array(_ordered_map(one, tasks, workers)).reshape(len(severities), groups)
    return [(s, float(row.mean()), float(row.std())) for s, row in zip(severities, scores)]


def manipulation_scores(
    seed=0,
    groups=GROUP_COUNT,
    group_size=GROUP_SIZE,
    height=16,
    width=16,
    channels=3,
    metrics=("td", "fid", "kid"),
    cfg: MetricConfig | None = None,
    workers=None,
):
    """Original vs manipulated synthetic images, compared on raw pixels.

    Returns rows ``(manipulation, metric, mean, std)`` over groups.
    """
    cfg = cfg or MetricConfig(seed=seed)
    kinds = list(MANIPULATIONS)

    def one(g):
        images = synthetic_images(group_size, make_rng(seed, _IMAGES, g), height, width, channels)
        flat = images.reshape(group_size, -1)
        out = {}
        for k, kind in enumerate(kinds):
            changed = manipulate_batch(images, kind, make_rng(seed, _MANIP, g, k)).reshape(group_size, -1)
            for metric in metrics:
                out[kind, metric] = _compare(
                    metric, _represent(metric, flat, g, cfg), _represent(metric, changed, g, cfg), cfg
                )
        return out

    per_group = _ordered_map(one, range(groups), workers)
    rows = []
    for kind in kinds:
        for metric in metrics:
            vals = np.array([res[kind, metric] for res in per_group])
            rows.append((kind, metric, float(vals.mean()), float(vals.std())))
    return rows
