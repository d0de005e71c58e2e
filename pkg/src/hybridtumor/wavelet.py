"""Single-level 2-D stationary (undecimated) wavelet transform.

Filtering is circular and in correlation form::

    y[i] = sum_k f[k] * x[(i + k) mod n]

Rows are filtered first (along axis 1), then columns (along axis 0):

    A = rows lo, cols lo      H = rows lo, cols hi
    V = rows hi, cols lo      D = rows hi, cols hi
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .imaging import GrayImage


@dataclass(frozen=True)
class WaveletFilterPair:
    lo: tuple
    hi: tuple
    name: str = "custom"

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or len(lo) % 2 or not lo:
            raise ValueError("filters must have equal, even, non-zero lengths")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __len__(self):
        return len(self.lo)

    @classmethod
    def from_lowpass(cls, lo: Sequence[float], name: str = "custom") -> "WaveletFilterPair":
        """Build the quadrature-mirror high-pass ``hi[k] = (-1)^k lo[L-1-k]``."""
        lo = list(lo)
        n = len(lo)
        hi = [(-1) ** k * lo[n - 1 - k] for k in range(n)]
        return cls(tuple(lo), tuple(hi), name)


_S = 1.0 / math.sqrt(2.0)
HAAR = WaveletFilterPair((_S, _S), (_S, -_S), "haar")

_R3 = math.sqrt(3.0)
DB2 = WaveletFilterPair.from_lowpass(
    [(1 + _R3) / (4 * math.sqrt(2)), (3 + _R3) / (4 * math.sqrt(2)),
     (3 - _R3) / (4 * math.sqrt(2)), (1 - _R3) / (4 * math.sqrt(2))],
    "db2",
)

FILTERS = {"haar": HAAR, "db1": HAAR, "db2": DB2}


def get_filters(name: str) -> WaveletFilterPair:
    try:
        return FILTERS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; choose from {sorted(FILTERS)}") from None


class SwtSubbands(NamedTuple):
    A: np.ndarray
    H: np.ndarray
    V: np.ndarray
    D: np.ndarray


def _correlate(x: np.ndarray, f: Sequence[float], axis: int) -> np.ndarray:
    out = np.zeros_like(x)
    for k, fk in enumerate(f):
        out += fk * np.roll(x, -k, axis=axis)
    return out


def _convolve(x: np.ndarray, f: Sequence[float], axis: int) -> np.ndarray:
    """Adjoint of :func:`_correlate`."""
    out = np.zeros_like(x)
    for k, fk in enumerate(f):
        out += fk * np.roll(x, k, axis=axis)
    return out


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, GrayImage):
        x = x.pixels
    return np.asarray(x, dtype=np.float64)


def swt2(img, filters: WaveletFilterPair = HAAR) -> SwtSubbands:
    x = _as_matrix(img)
    if x.ndim != 2:
        raise ValueError("swt2 expects a 2-D input")
    if min(x.shape) < len(filters):
        raise ValueError(f"image {x.shape} is smaller than the filter length {len(filters)}")
    lo_rows = _correlate(x, filters.lo, axis=1)
    hi_rows = _correlate(x, filters.hi, axis=1)
    return SwtSubbands(
        A=_correlate(lo_rows, filters.lo, axis=0),
        H=_correlate(lo_rows, filters.hi, axis=0),
        V=_correlate(hi_rows, filters.lo, axis=0),
        D=_correlate(hi_rows, filters.hi, axis=0),
    )


def iswt2(sub: SwtSubbands, filters: WaveletFilterPair = HAAR) -> np.ndarray:
    """Inverse of :func:`swt2` for orthonormal filter pairs.

    Each axis of the undecimated transform is a tight frame with bound 2,
    so the adjoint followed by halving per axis is the exact inverse.
    """
    planes = [np.asarray(p, dtype=np.float64) for p in sub]
    shape = planes[0].shape
    if any(p.shape != shape for p in planes) or len(shape) != 2:
        raise ValueError("subband planes must be 2-D with identical shapes")
    a, h, v, d = planes
    lo_rows = _convolve(a, filters.lo, axis=0) + _convolve(h, filters.hi, axis=0)
    hi_rows = _convolve(v, filters.lo, axis=0) + _convolve(d, filters.hi, axis=0)
    x = _convolve(lo_rows, filters.lo, axis=1) + _convolve(hi_rows, filters.hi, axis=1)
    return x / 4.0
