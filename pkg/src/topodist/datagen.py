"""Seeded synthetic data: Gaussian and moment-matched mixture clouds, and
the pixel noise / patch mask / patch exchange image manipulations.

All randomness flows from an explicit seed through a counter-based Philox
generator, so every output is reproducible across platforms.  Sub-streams
are derived from ``(seed, *keys)`` via :class:`numpy.random.SeedSequence`.
"""

from dataclasses import dataclass

import numpy as np

from topodist.errors import DomainError, InputFormatError
from topodist.geometry import _check_symmetric, psd_eigh

RNG_NAME = "philox"
DEFAULT_DIM = 16
DEFAULT_OFFSET = 5.0


def make_rng(seed, *keys) -> np.random.Generator:
    """Philox generator for ``seed``; passing a Generator returns it unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _cov_factor(cov: np.ndarray) -> np.ndarray:
    """``L`` with ``L @ L.T == cov``; Cholesky when positive definite."""
    _check_symmetric(cov)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        w, v = psd_eigh(cov)
        return v * np.sqrt(w)


def sample_gaussian(mean, cov, n: int, seed) -> np.ndarray:
    mean = np.atleast_1d(np.asarray(mean, dtype=np.float64))
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    if cov.shape != (mean.size, mean.size):
        raise DomainError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    factor = _cov_factor(cov)
    z = make_rng(seed).standard_normal((n, mean.size))
    return mean + z @ factor.T


@dataclass(frozen=True)
class MixtureSpec:
    """Equal-weight mixture of ``N(+offset, cov)`` and ``N(-offset, cov)``.

    Its mean is 0 and its covariance ``cov + offset offset^T``, the same as
    the Gaussian returned by :meth:`matched_gaussian`.
    """

    offset: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        offset = np.atleast_1d(np.asarray(self.offset, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if cov.shape != (offset.size, offset.size):
            raise DomainError(f"covariance shape {cov.shape} does not match offset length {offset.size}")
        psd_eigh(cov)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def along_first_axis(cls, dim: int = DEFAULT_DIM, offset: float = DEFAULT_OFFSET, noise_var: float = 1.0):
        mu = np.zeros(dim)
        mu[0] = offset
        return cls(mu, noise_var * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.offset.size

    def matched_gaussian(self) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros(self.dim), self.cov + np.outer(self.offset, self.offset)


def sample_matched_mixture(spec: MixtureSpec, n: int, seed) -> np.ndarray:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    rng = make_rng(seed)
    signs = 2.0 * rng.integers(0, 2, size=n) - 1.0
    noise = rng.standard_normal((n, spec.dim)) @ _cov_factor(spec.cov).T
    return signs[:, None] * spec.offset + noise


def gaussian_noise(features, sigma: float, seed) -> np.ndarray:
    """Additive isotropic ``N(0, sigma^2)`` perturbation of every entry."""
    x = np.asarray(features, dtype=np.float64)
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    return x + sigma * make_rng(seed).standard_normal(x.shape)


# -- images ------------------------------------------------------------------


def as_image(img) -> np.ndarray:
    """Validate an ``(H, W, C)`` float image with intensities in ``[0, 1]``."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3 or 0 in a.shape:
        raise InputFormatError(f"image must have shape (H, W, C), got {a.shape}")
    if not np.all(np.isfinite(a)) or a.min() < 0 or a.max() > 1:
        raise InputFormatError("image intensities must be finite and within [0, 1]")
    return a


def _cells(img: np.ndarray, grid: int):
    h, w = img.shape[:2]
    if h % grid or w % grid:
        raise DomainError(f"image size {h}x{w} is not divisible into a {grid}x{grid} grid")
    ch, cw = h // grid, w // grid
    return [(slice(r * ch, (r + 1) * ch), slice(c * cw, (c + 1) * cw)) for r in range(grid) for c in range(grid)]


def pixel_noise(img, seed, spread: float = 0.13) -> np.ndarray:
    """Add ``Uniform[(1 - spread) M, (1 + spread) M]`` to every entry, then clip.

    ``M`` is the image's maximum intensity; each channel of each pixel gets
    its own draw.
    """
    a = as_image(img)
    peak = a.max()
    noise = make_rng(seed).uniform((1 - spread) * peak, (1 + spread) * peak, size=a.shape)
    return np.clip(a + noise, 0.0, 1.0)


def patch_mask(img, seed, grid: int = 8, n_cells: int = 7) -> np.ndarray:
    """Fill ``n_cells`` random grid cells, each with one randomly picked pixel."""
    a = as_image(img)
    cells = _cells(a, grid)
    rng = make_rng(seed)
    out = a.copy()
    h, w = a.shape[:2]
    for idx in rng.choice(len(cells), size=n_cells, replace=False):
        y, x = rng.integers(h), rng.integers(w)
        out[cells[idx]] = a[y, x]
    return out


def patch_exchange(img, seed, grid: int = 4, swaps: int = 2) -> np.ndarray:
    """Swap two distinct random grid cells, ``swaps`` times independently."""
    a = as_image(img)
    cells = _cells(a, grid)
    rng = make_rng(seed)
    out = a.copy()
    for _ in range(swaps):
        i, j = rng.choice(len(cells), size=2, replace=False)
        block = out[cells[i]].copy()
        out[cells[i]] = out[cells[j]]
        out[cells[j]] = block
    return out


MANIPULATIONS = {
    "pixel_noise": pixel_noise,
    "patch_mask": patch_mask,
    "patch_exchange": patch_exchange,
}


def synthetic_images(n: int, seed, height: int = 32, width: int = 32, channels: int = 3, blobs: int = 4):
    """``n`` smooth random images: a few coloured Gaussian blobs on a dim background."""
    rng = make_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    yy = yy[None, :, :] / height
    xx = xx[None, :, :] / width
    out = np.empty((n, height, width, channels))
    for k in range(n):
        img = np.broadcast_to(0.2 * rng.random(channels), (height, width, channels)).copy()
        centres = rng.random((blobs, 2))
        widths = 0.05 + 0.2 * rng.random(blobs)
        colours = rng.random((blobs, channels))
        d2 = (yy - centres[:, 0, None, None]) ** 2 + (xx - centres[:, 1, None, None]) ** 2
        bumps = np.exp(-d2 / (2 * widths[:, None, None] ** 2))
        img += np.einsum("bhw,bc->hwc", bumps, colours)
        out[k] = np.clip(img, 0.0, 1.0)
    return out


def manipulate_batch(images, kind: str, seed) -> np.ndarray:
    """Apply one manipulation to every image, drawing from a single stream."""
    op = MANIPULATIONS[kind]
    rng = make_rng(seed)
    return np.stack([op(img, rng) for img in images])
