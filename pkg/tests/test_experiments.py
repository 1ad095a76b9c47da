import numpy as np
import pytest

from topodist.errors import DomainError, SampleCountMismatchError
from topodist.experiments import (
    MetricConfig,
    block_summary,
    paired_groups,
    manipulation_scores,
    score_matrix,
    severity_sweep,
)


@pytest.fixture(scope="module")
def small_groups():
    a, b = paired_groups(seed=0, groups=3, group_size=60, dim=4)
    return a + b


@pytest.mark.parametrize("metric", ["td", "fid", "kid", "gs"])
def test_matrix_symmetric(small_groups, metric):
    m = score_matrix(metric, small_groups, MetricConfig(gs_subsets=2, gs_points=20))
    assert m.shape == (6, 6)
    np.testing.assert_array_equal(m, m.T)


def test_matrix_identical_groups_td_zero():
    g = np.random.default_rng(0).standard_normal((30, 3))
    m = score_matrix("td", [g, g, g])
    assert np.all(m == 0)


def test_matrix_workers_do_not_change_output(small_groups):
    serial = score_matrix("td", small_groups, workers=1)
    threaded = score_matrix("td", small_groups, workers=4)
    assert serial.tobytes() == threaded.tobytes()


def test_matrix_errors_name_the_groups():
    groups = [np.zeros((5, 2)), np.ones((6, 2))]
    with pytest.raises(SampleCountMismatchError, match=r"groups \(0, 1\)"):
        score_matrix("td", groups)
    with pytest.raises(DomainError):
        score_matrix("nope", groups)


def test_block_summary():
    m = np.array(
        [
            [0, 1, 5, 5],
            [1, 0, 5, 5],
            [5, 5, 0, 3],
            [5, 5, 3, 0],
        ],
        dtype=float,
    )
    s = block_summary(m, 2)
    assert s["within_a_median"] == 1 and s["within_b_median"] == 3
    assert s["within_median"] == 2 and s["cross_median"] == 5
    assert s["cross_within_ratio"] == 2.5
    with pytest.raises(DomainError):
        block_summary(np.zeros((2, 2)), 1)


def test_sweep_shape_and_repeatability():
    kw = dict(severities=[0.0, 0.2, 0.4], groups=3, group_size=50, dim=4, seed=1)
    rows = severity_sweep("td", **kw)
    assert [r[0] for r in rows] == [0.0, 0.2, 0.4]
    assert rows[0][1] == 0.0
    assert rows[1][1] < rows[2][1]
    assert rows == severity_sweep("td", workers=3, **kw)


def test_sweep_constant_control_is_flat():
    rows = severity_sweep("td", [0.1, 0.3, 0.5], groups=3, group_size=50, dim=4, perturbation="constant")
    assert len({r[1] for r in rows}) == 1


def test_sweep_needs_two_levels():
    with pytest.raises(DomainError):
        severity_sweep("td", [0.1])


def test_manipulation_scores_rows():
    rows = manipulation_scores(seed=0, groups=2, group_size=12, height=8, width=8, metrics=("td", "fid"))
    assert [(r[0], r[1]) for r in rows] == [
        (kind, metric)
        for kind in ("pixel_noise", "patch_mask", "patch_exchange")
        for metric in ("td", "fid")
    ]
    assert all(np.isfinite(r[2]) and r[2] >= 0 for r in rows)
