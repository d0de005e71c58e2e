from __future__ import annotations

import numpy as np

from ..errors import TrainingDataError


def predict_knn(store_X, store_y, query, k: int = 1) -> int:
    """Label of the nearest stored sample(s) by Euclidean distance.

    With ``k == 1`` the nearest sample wins and equal distances go to the
    lowest stored index. With ``k > 1`` the k nearest vote with weight 1/d;
    a zero distance wins outright, and a weighted tie goes to Benign.
    """
    store_X = np.asarray(store_X, dtype=np.float64)
    store_y = np.asarray(store_y)
    n = store_X.shape[0]
    if n == 0:
        raise TrainingDataError("empty KNN store")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    d = np.sqrt(((store_X - np.asarray(query, dtype=np.float64)) ** 2).sum(axis=1))
    if k == 1:
        return int(store_y[int(np.argmin(d))])
    nearest = np.argsort(d, kind="stable")[:k]
    if d[nearest[0]] == 0:
        return int(store_y[nearest[0]])
    votes = np.zeros(2)
    np.add.at(votes, store_y[nearest].astype(np.intp), 1.0 / d[nearest])
    return 1 if votes[1] > votes[0] else 0


def predict_knn_batch(store_X, store_y, queries, k: int = 1) -> np.ndarray:
    return np.array([predict_knn(store_X, store_y, q, k) for q in np.atleast_2d(queries)], dtype=np.int64)
