import numpy as np

from topodist.errors import DomainError, InputFormatError

ROW_SUM_TOL = 1e-9


def as_probability_matrix(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
        raise InputFormatError(f"probability matrix must be a non-empty 2-D array, got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InputFormatError("probability matrix contains NaN or infinite entries")
    if np.any(p < 0) or np.any(p > 1):
        raise DomainError("probabilities must lie in [0, 1]")
    bad = np.flatnonzero(np.abs(p.sum(axis=1) - 1.0) > ROW_SUM_TOL)
    if bad.size:
        raise DomainError(f"row {bad[0]} does not sum to 1 (sum={p[bad[0]].sum():.12g})")
    return p


def _score(p: np.ndarray) -> float:
    marginal = p.mean(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(p / marginal), 0.0)
    return float(np.exp(terms.sum(axis=1).mean()))


def inception_score(probs, splits: int = 1) -> float:
    """exp of the mean KL divergence between p(y|x) and the marginal p(y).

    With ``splits > 1`` the rows are cut into that many consecutive chunks
    and the mean of the per-chunk scores is returned; see
    :func:`inception_score_std` for the spread.
    """
    return inception_score_std(probs, splits)[0]


def inception_score_std(probs, splits: int = 1) -> tuple[float, float]:
    p = as_probability_matrix(probs)
    if not 1 <= splits <= p.shape[0]:
        raise DomainError(f"splits must be between 1 and {p.shape[0]}, got {splits}")
    scores = [_score(chunk) for chunk in np.array_split(p, splits)]
    return float(np.mean(scores)), float(np.std(scores))
