"""Bagged random forest of CART trees with a plain majority vote."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..errors import TrainingDataError
from .tree import DecisionTreeModel, train_tree


def tree_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for tree ``index``; never depends on worker layout."""
    return np.random.default_rng([int(seed), int(index)])


def _bootstrap_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, n, size=n)


def default_max_features(p: int) -> int:
    return math.ceil(math.sqrt(p))


@dataclass(eq=False)
class RandomForestModel:
    trees: List[DecisionTreeModel]
    seed: int
    max_features: int
    n_trees: int = field(init=False)

    def __post_init__(self):
        if not self.trees:
            raise ValueError("a forest needs at least one tree")
        self.n_trees = len(self.trees)

    def tree_votes(self, X) -> np.ndarray:
        """``(n_trees, n_samples)`` matrix of per-tree labels."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.stack([t.predict(X) for t in self.trees])

    def predict(self, X) -> np.ndarray:
        votes = self.tree_votes(X)
        malignant = votes.sum(axis=0)
        # strict majority; an even split stays Benign
        return (malignant > self.n_trees - malignant).astype(np.int64)


def _grow(args):
    X, y, seed, index, max_features = args
    rng = tree_rng(seed, index)
    idx = _bootstrap_indices(rng, X.shape[0])
    return train_tree(X[idx], y[idx], rng=rng, feature_subset=max_features)


def train_forest(X, y, n_trees: int = 100, seed: int = 0, max_features: int = None, n_jobs: int = 1) -> RandomForestModel:
    """Train ``n_trees`` trees, each on a bootstrap resample of ``(X, y)``.

    Tree ``i`` draws its bootstrap sample and its per-node feature subsets
    from :func:`tree_rng(seed, i) <tree_rng>`, so the forest is identical
    for any ``n_jobs``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingDataError("empty dataset")
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    if max_features is None:
        max_features = default_max_features(X.shape[1])
    jobs = [(X, y, seed, i, max_features) for i in range(n_trees)]
    if n_jobs is not None and n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(_grow, jobs, chunksize=max(1, n_trees // (4 * n_jobs))))
    else:
        trees = [_grow(j) for j in jobs]
    return RandomForestModel(trees, seed=int(seed), max_features=int(max_features))


def predict_forest(forest: RandomForestModel, x) -> int:
    return int(forest.predict(np.asarray(x, dtype=np.float64)[None, :])[0])
