from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainingDataError


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """Per-feature z-scoring fitted on training data.

    Zero-variance features keep a stored std of 1 so they map to 0.
    """

    mean: np.ndarray
    std: np.ndarray

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureScaler":
        return cls(np.asarray(d["mean"], dtype=np.float64), np.asarray(d["std"], dtype=np.float64))


def fit_scaler(X) -> FeatureScaler:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingDataError("empty dataset")
    if X.shape[0] < 2:
        raise TrainingDataError("fit_scaler needs at least two samples")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    return FeatureScaler(mean, std)
