from topodist.metrics.diagrams import diagram_bottleneck, diagram_wasserstein
from topodist.metrics.geometry_score import DEFAULT_I_MAX, RLTVector, gs, mean_rlt, rlt
from topodist.metrics.inception import as_probability_matrix, inception_score, inception_score_std
from topodist.metrics.moments import fid, fid_from_features, kid, polynomial_kernel
from topodist.metrics.report import ScoreReport
from topodist.metrics.td import InfinityPolicy, td, td_from_longevity

__all__ = [
    "DEFAULT_I_MAX",
    "InfinityPolicy",
    "RLTVector",
    "ScoreReport",
    "as_probability_matrix",
    "diagram_bottleneck",
    "diagram_wasserstein",
    "fid",
    "fid_from_features",
    "gs",
    "inception_score",
    "inception_score_std",
    "kid",
    "mean_rlt",
    "polynomial_kernel",
    "rlt",
    "td",
    "td_from_longevity",
]
