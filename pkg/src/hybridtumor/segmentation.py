"""Otsu thresholding, binary masks and tumour-area measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DegenerateHistogramError
from .imaging import GrayImage

LEVELS = 256


@dataclass(frozen=True, eq=False)
class Histogram:
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (LEVELS,):
            raise ValueError(f"histogram needs exactly {LEVELS} bins, got {counts.shape}")
        if (counts < 0).any():
            raise ValueError("histogram counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.total


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-pixel foreground flags (1 = white, 0 = black)."""

    values: np.ndarray

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def to_image(self) -> GrayImage:
        return GrayImage(self.values.astype(np.uint8) * 255)


class AreaReport(NamedTuple):
    white_pixels: int
    area_mm2: float


def histogram(img: GrayImage) -> Histogram:
    return Histogram(np.bincount(img.pixels.ravel(), minlength=LEVELS))


def _prefix_sums(hist: Histogram):
    k = np.arange(LEVELS, dtype=np.int64)
    c = hist.counts.astype(np.int64)
    # n0[n], s0[n], q0[n]: count, first and second moment of intensities < n
    # (exact: totals stay far below 2**63 for images up to MAX_PIXELS)
    zero = np.zeros(1, dtype=np.int64)
    n0 = np.concatenate([zero, np.cumsum(c)]).tolist()
    s0 = np.concatenate([zero, np.cumsum(c * k)]).tolist()
    q0 = np.concatenate([zero, np.cumsum(c * k * k)]).tolist()
    return n0, s0, q0


def between_class_variance(hist: Histogram, n: int) -> float:
    """A0 * A1 * (mean0 - mean1)^2 for the split [0, n-1] | [n, 255]; 0 if a class is empty."""
    n0, s0, _ = _prefix_sums(hist)
    total, s_tot = n0[LEVELS], s0[LEVELS]
    a, b = n0[n], total - n0[n]
    if a == 0 or b == 0:
        return 0.0
    sa, sb = s0[n], s_tot - s0[n]
    return float(Fraction((sa * b - sb * a) ** 2, a * b * total * total))


def within_class_variance(hist: Histogram, n: int) -> float:
    """A0 * var0 + A1 * var1 for the split [0, n-1] | [n, 255]."""
    n0, s0, q0 = _prefix_sums(hist)
    total = n0[LEVELS]
    parts = Fraction(0)
    for cnt, s, q in (
        (n0[n], s0[n], q0[n]),
        (total - n0[n], s0[LEVELS] - s0[n], q0[LEVELS] - q0[n]),
    ):
        if cnt:
            # cnt * class variance = q - s^2 / cnt
            parts += Fraction(q) - Fraction(s * s, cnt)
    return float(parts / total)


def total_variance(hist: Histogram) -> float:
    n0, s0, q0 = _prefix_sums(hist)
    total = n0[LEVELS]
    return float(Fraction(q0[LEVELS], total) - Fraction(s0[LEVELS], total) ** 2)


def otsu_threshold(hist: Histogram) -> int:
    """Threshold maximising the between-class variance.

    Class 0 holds intensities below the threshold, class 1 the rest.
    Candidates leaving a class empty are skipped and ties go to the
    smallest threshold. Scores are compared exactly in integer arithmetic:
    with counts a, b and intensity sums sa, sb, the between-class variance
    is (sa*b - sb*a)^2 / (a*b*N^2), so only the numerator over a*b matters.
    """
    total = hist.total
    if total <= 0:
        raise ValueError("histogram is empty")
    n0, s0, _ = _prefix_sums(hist)
    s_tot = s0[LEVELS]
    best_n = -1
    best_num, best_den = 0, 1
    for n in range(1, LEVELS):
        a = n0[n]
        b = total - a
        if a == 0 or b == 0:
            continue
        num = (s0[n] * b - (s_tot - s0[n]) * a) ** 2
        den = a * b
        if best_n < 0 or num * best_den > best_num * den:
            best_n, best_num, best_den = n, num, den
    if best_n < 0:
        raise DegenerateHistogramError("degenerate histogram: all mass in one bin")

    # consistency of class probabilities and means at the chosen split
    p = hist.probabilities
    k = np.arange(LEVELS)
    w0, w1 = p[:best_n].sum(), p[best_n:].sum()
    m0 = (k[:best_n] * p[:best_n]).sum() / w0
    m1 = (k[best_n:] * p[best_n:]).sum() / w1
    mt = (k * p).sum()
    if abs(w0 + w1 - 1.0) > 1e-9 or abs(w0 * m0 + w1 * m1 - mt) > 1e-9 * max(1.0, mt):
        raise ArithmeticError(f"class statistics inconsistent at threshold {best_n}")
    return best_n


def binarize(img: GrayImage, n: int) -> BinaryMask:
    if not 0 <= n <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {n}")
    return BinaryMask((img.pixels >= n).astype(np.uint8))


def tumor_area_mm2(mask: BinaryMask) -> AreaReport:
    """White-pixel count P and area sqrt(P) * 0.264.

    The result is reported in mm^2 by convention, even though
    sqrt(P) * mm/pixel is dimensionally a length.
    """
    p = int(np.count_nonzero(mask.values))
    # 264/1000 instead of 0.264 keeps a single rounding step when sqrt(P) is exact
    return AreaReport(p, math.sqrt(p) * 264.0 / 1000.0)


def segment(img: GrayImage):
    """Otsu threshold, mask and area for one image."""
    n = otsu_threshold(histogram(img))
    mask = binarize(img, n)
    return n, mask, tumor_area_mm2(mask)
