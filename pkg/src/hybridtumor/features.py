"""PCA reduction of a wavelet plane and the 13-value texture descriptor.

The descriptor mixes two substrates: contrast, correlation, energy,
homogeneity and IDM come from a gray-level co-occurrence matrix of the
quantized PCA-reduced plane; the remaining eight statistics are taken over
the reduced plane's values directly. Computing them over a normalized GLCM
would make the mean a constant 1/L^2.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import NamedTuple, Tuple

import numpy as np

from .errors import DegenerateDataError
from .imaging import GrayImage
from .wavelet import get_filters, swt2

FEATURE_NAMES = (
    "contrast",
    "correlation",
    "energy",
    "homogeneity",
    "mean",
    "std_dev",
    "kurtosis",
    "skewness",
    "variance",
    "smoothness",
    "idm",
    "rms",
    "entropy",
)


# ---------------------------------------------------------------- PCA


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Top-k principal axes of a data matrix (rows = observations).

    ``components`` holds one unit vector per row; ``eigenvalues`` are the
    matching covariance eigenvalues (scatter matrix divided by rows - 1),
    non-increasing.
    """

    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    n_samples: int

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) @ self.components.T

    def inverse_transform(self, scores) -> np.ndarray:
        return np.asarray(scores) @ self.components + self.mean


def pca_fit(X, k: int) -> PcaModel:
    """Fit PCA by eigendecomposition of the centred scatter matrix.

    Successive deflation (remove the projection on each found component,
    then take the leading direction of what is left) produces the same
    ordered basis as taking the top-k eigenvectors at once, which is what
    is done here. Each component's sign is fixed so that its
    largest-magnitude entry is positive.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("pca_fit expects a 2-D matrix")
    rows, cols = X.shape
    if rows < 2:
        raise ValueError("pca_fit needs at least two observations")
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"k={k} out of range [1, {min(rows, cols)}]")
    if not np.any(np.ptp(X, axis=0) > 0):
        raise DegenerateDataError("degenerate data: every column is constant")

    mean = X.mean(axis=0)
    Xc = X - mean
    scatter = Xc.T @ Xc
    evals, evecs = np.linalg.eigh(scatter)
    order = np.argsort(evals, kind="stable")[::-1][:k]
    comps = evecs[:, order].T.copy()
    pivots = np.argmax(np.abs(comps), axis=1)
    signs = np.sign(comps[np.arange(k), pivots])
    comps *= signs[:, None]
    lam = np.maximum(evals[order], 0.0) / (rows - 1)
    return PcaModel(mean=mean, components=comps, eigenvalues=lam, n_samples=rows)


def pca_reduce_image(M, k: int) -> np.ndarray:
    """Rank-k reconstruction of ``M`` from its own principal axes.

    Image rows are observations and image columns are variables, so the
    output keeps ``M``'s shape and can still be read spatially.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or not 1 <= k <= M.shape[1]:
        raise ValueError(f"k={k} out of range for matrix of shape {M.shape}")
    model = pca_fit(M, k)
    return model.inverse_transform(model.transform(M))


# ---------------------------------------------------------------- GLCM


def quantize(M, levels: int) -> np.ndarray:
    """Equal-width binning of [min(M), max(M)] into ``levels`` indices."""
    if levels < 2:
        raise ValueError("levels must be >= 2")
    M = np.asarray(M, dtype=np.float64)
    lo, hi = M.min(), M.max()
    if hi == lo:
        return np.zeros(M.shape, dtype=np.intp)
    idx = np.floor((M - lo) / (hi - lo) * levels).astype(np.intp)
    return np.clip(idx, 0, levels - 1)


@dataclass(frozen=True, eq=False)
class Glcm:
    q: np.ndarray

    @property
    def levels(self) -> int:
        return self.q.shape[0]


def glcm(Mq, offset: Tuple[int, int] = (0, 1), symmetric: bool = True, levels: int = None) -> Glcm:
    """Normalized co-occurrence matrix of pairs ``(Mq[i, j], Mq[i+dr, j+dc])``."""
    Mq = np.asarray(Mq)
    if Mq.ndim != 2 or Mq.shape[0] < 2 or Mq.shape[1] < 2:
        raise ValueError("glcm needs a matrix of at least 2x2")
    if not np.issubdtype(Mq.dtype, np.integer) or (Mq.size and Mq.min() < 0):
        raise ValueError("glcm needs non-negative integer gray levels")
    dr, dc = (int(v) for v in offset)
    rows, cols = Mq.shape
    if (dr, dc) == (0, 0):
        raise ValueError("offset must be non-zero")
    if abs(dr) >= rows or abs(dc) >= cols:
        raise ValueError(f"offset {offset} is larger than the matrix {Mq.shape}")
    if levels is None:
        levels = int(Mq.max()) + 1
    elif Mq.max() >= levels:
        raise ValueError(f"gray level {Mq.max()} exceeds levels={levels}")

    ref = Mq[max(0, -dr) : rows - max(0, dr), max(0, -dc) : cols - max(0, dc)]
    nbr = Mq[max(0, dr) : rows + min(0, dr), max(0, dc) : cols + min(0, dc)]
    counts = np.bincount((ref * levels + nbr).ravel(), minlength=levels * levels)
    counts = counts.reshape(levels, levels).astype(np.float64)
    if symmetric:
        counts = counts + counts.T
    return Glcm(counts / counts.sum())


class HaralickFeatures(NamedTuple):
    contrast: float
    correlation: float
    energy: float
    homogeneity: float
    idm: float


def haralick_features(g: Glcm) -> HaralickFeatures:
    q = g.q
    L = q.shape[0]
    t = np.arange(L, dtype=np.float64)[:, None]
    r = np.arange(L, dtype=np.float64)[None, :]
    dist = np.abs(t - r)

    contrast = float((dist**2 * q).sum())
    energy = float((q**2).sum())
    homogeneity = float((q / (1.0 + dist)).sum())
    # IDM and homogeneity share one expression
    idm = homogeneity

    pt, pr = q.sum(axis=1), q.sum(axis=0)
    lv = np.arange(L, dtype=np.float64)
    mu_t, mu_r = (lv * pt).sum(), (lv * pr).sum()
    sd_t = np.sqrt(((lv - mu_t) ** 2 * pt).sum())
    sd_r = np.sqrt(((lv - mu_r) ** 2 * pr).sum())
    if sd_t == 0 or sd_r == 0:
        correlation = 0.0
    else:
        correlation = float(((t - mu_t) * (r - mu_r) * q).sum() / (sd_t * sd_r))
    return HaralickFeatures(contrast, correlation, energy, homogeneity, idm)


# ---------------------------------------------------------------- statistics


class StatisticalFeatures(NamedTuple):
    mean: float
    std_dev: float
    kurtosis: float
    skewness: float
    variance: float
    smoothness: float
    rms: float
    entropy: float


ENTROPY_LEVELS = 8


def statistical_features(M) -> StatisticalFeatures:
    """Moment statistics over all entries of ``M``.

    Skewness is the standardized third moment and kurtosis the excess
    fourth moment; both are 0 when the entries are constant. Entropy (bits)
    is taken over an 8-level equal-width histogram of the values.
    """
    x = np.asarray(M, dtype=np.float64).ravel()
    if x.size < 2:
        raise ValueError("statistical_features needs at least two entries")
    mean = float(x.mean())
    dev = x - mean
    variance = float((dev**2).mean()) if np.ptp(x) > 0 else 0.0
    # variance can underflow to 0 even when the values differ
    if variance == 0:
        skew = kurt = 0.0
    else:
        z = dev / np.sqrt(variance)
        skew = float((z**3).mean())
        kurt = float((z**4).mean() - 3.0)
    std = float(np.sqrt(variance))
    smoothness = 1.0 - 1.0 / (1.0 + variance)
    rms = float(np.sqrt((x**2).mean()))

    counts = np.bincount(quantize(x, ENTROPY_LEVELS), minlength=ENTROPY_LEVELS)
    p = counts[counts > 0] / x.size
    entropy = float(-(p * np.log2(p)).sum()) + 0.0
    return StatisticalFeatures(mean, std, kurt, skew, variance, smoothness, rms, entropy)


# ---------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class FeatureVector:
    contrast: float
    correlation: float
    energy: float
    homogeneity: float
    mean: float
    std_dev: float
    kurtosis: float
    skewness: float
    variance: float
    smoothness: float
    idm: float
    rms: float
    entropy: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in FEATURE_NAMES], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "FeatureVector":
        values = [float(v) for v in values]
        if len(values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} values, got {len(values)}")
        return cls(*values)


assert tuple(f.name for f in fields(FeatureVector)) == FEATURE_NAMES


@dataclass(frozen=True)
class PipelineConfig:
    wavelet: str = "haar"
    subband: str = "A"
    pca_k: int = 13
    glcm_levels: int = 8
    offset: Tuple[int, int] = (0, 1)
    symmetric: bool = True

    def __post_init__(self):
        get_filters(self.wavelet)
        if self.subband not in ("A", "H", "V", "D"):
            raise ValueError(f"subband must be one of A, H, V, D; got {self.subband!r}")
        if self.pca_k < 1:
            raise ValueError("pca_k must be >= 1")
        if self.glcm_levels < 2:
            raise ValueError("glcm_levels must be >= 2")
        object.__setattr__(self, "offset", tuple(int(v) for v in self.offset))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["offset"] = list(self.offset)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        return cls(**{**d, "offset": tuple(d.get("offset", (0, 1)))})


def extract_features(img: GrayImage, cfg: PipelineConfig = PipelineConfig()) -> FeatureVector:
    sub = swt2(img, get_filters(cfg.wavelet))
    plane = getattr(sub, cfg.subband)
    reduced = pca_reduce_image(plane, cfg.pca_k)
    g = glcm(
        quantize(reduced, cfg.glcm_levels),
        offset=cfg.offset,
        symmetric=cfg.symmetric,
        levels=cfg.glcm_levels,
    )
    h = haralick_features(g)
    s = statistical_features(reduced)
    return FeatureVector(
        contrast=h.contrast,
        correlation=h.correlation,
        energy=h.energy,
        homogeneity=h.homogeneity,
        mean=s.mean,
        std_dev=s.std_dev,
        kurtosis=s.kurtosis,
        skewness=s.skewness,
        variance=s.variance,
        smoothness=s.smoothness,
        idm=h.idm,
        rms=s.rms,
        entropy=s.entropy,
    )
