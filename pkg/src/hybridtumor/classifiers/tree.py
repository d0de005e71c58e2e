"""CART classification tree grown with Gini impurity.

Split selection is exact. For a node split into a left part with class
counts (a0, a1), n_L = a0 + a1 and a right part (b0, b1), n_R, the weighted
Gini impurity is

    1 - [ (a0^2 + a1^2) / n_L + (b0^2 + b1^2) / n_R ] / n

so the best split maximises the bracket. That bracket is a ratio of
integers and ties are settled in integer arithmetic, which makes the
lowest-feature / lowest-threshold tie rule deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import TrainingDataError
from .labels import Label


@dataclass(eq=False)
class DecisionTreeModel:
    """Flat node arrays; ``feature[i] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def leaf_label(self, node: int) -> int:
        c0, c1 = self.counts[node]
        return 1 if c1 > c0 else 0

    def apply(self, X) -> np.ndarray:
        """Index of the leaf reached by every row of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(X.shape[0], dtype=np.intp)
        rows = np.arange(X.shape[0])
        while True:
            feat = self.feature[node]
            inner = feat >= 0
            if not inner.any():
                return node
            r, n, f = rows[inner], node[inner], feat[inner]
            go_left = X[r, f] <= self.threshold[n]
            node[inner] = np.where(go_left, self.left[n], self.right[n])

    def predict(self, X) -> np.ndarray:
        leaves = self.apply(X)
        c = self.counts[leaves]
        return (c[:, 1] > c[:, 0]).astype(np.int64)

    # nested records for JSON persistence
    def to_dict(self, node: int = 0) -> dict:
        c = [int(v) for v in self.counts[node]]
        if self.feature[node] < 0:
            return {"label": str(Label(self.leaf_label(node))), "counts": c}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "counts": c,
            "left": self.to_dict(int(self.left[node])),
            "right": self.to_dict(int(self.right[node])),
        }

    @classmethod
    def from_dict(cls, root: dict) -> "DecisionTreeModel":
        feature, threshold, left, right, counts = [], [], [], [], []

        def add(rec):
            i = len(feature)
            feature.append(int(rec.get("feature", -1)))
            threshold.append(float(rec.get("threshold", 0.0)))
            left.append(-1)
            right.append(-1)
            counts.append([int(v) for v in rec["counts"]])
            return i

        # same allocation order as train_tree: children are numbered together
        stack = [(root, add(root))]
        while stack:
            rec, i = stack.pop()
            if "feature" in rec:
                left[i] = add(rec["left"])
                right[i] = add(rec["right"])
                stack.append((rec["right"], right[i]))
                stack.append((rec["left"], left[i]))
        return cls(
            np.array(feature, dtype=np.intp),
            np.array(threshold, dtype=np.float64),
            np.array(left, dtype=np.intp),
            np.array(right, dtype=np.intp),
            np.array(counts, dtype=np.int64).reshape(-1, 2),
        )


def _best_split_on_feature(x: np.ndarray, y: np.ndarray):
    """Best (score numerator, denominator, threshold) along one feature, or None."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = xs.shape[0]
    boundary = np.nonzero(xs[1:] > xs[:-1])[0] + 1  # left part = xs[:i]
    if boundary.size == 0:
        return None
    ones = np.cumsum(ys)
    tot1 = int(ones[-1])
    n_l = boundary.astype(np.int64)
    a1 = ones[boundary - 1].astype(np.int64)
    a0 = n_l - a1
    n_r = n - n_l
    b1 = tot1 - a1
    b0 = n_r - b1
    num = (a0 * a0 + a1 * a1) * n_r + (b0 * b0 + b1 * b1) * n_l
    den = n_l * n_r
    approx = num / den
    top = approx.max()
    best = None
    for j in np.nonzero(approx >= top * (1 - 1e-12))[0]:
        cand = (int(num[j]), int(den[j]))
        if best is None or cand[0] * best[1] > best[0] * cand[1]:
            best, pos = cand, boundary[j]
    lo, hi = xs[pos - 1], xs[pos]
    thr = (lo + hi) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return best[0], best[1], float(thr)


def train_tree(
    X,
    y,
    rng: Optional[np.random.Generator] = None,
    feature_subset: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> DecisionTreeModel:
    """Grow a CART tree until every leaf is pure or cannot be split.

    When ``feature_subset`` is given, each node considers only that many
    features, drawn without replacement from ``rng``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingDataError("empty dataset")
    if y.shape != (X.shape[0],):
        raise ValueError("X and y disagree on the number of samples")
    p = X.shape[1]
    if feature_subset is not None:
        if not 1 <= feature_subset <= p:
            raise ValueError(f"feature_subset must lie in [1, {p}]")
        if rng is None:
            raise ValueError("feature_subset requires an rng")

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(idx):
        c1 = int(y[idx].sum())
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append((idx.size - c1, c1))
        return len(feature) - 1

    root_idx = np.arange(X.shape[0])
    stack = [(new_node(root_idx), root_idx, 0)]
    while stack:
        node, idx, depth = stack.pop()
        c0, c1 = counts[node]
        n = idx.size
        if n < 2 or c0 == 0 or c1 == 0 or (max_depth is not None and depth >= max_depth):
            continue
        if feature_subset is None:
            candidates = range(p)
        else:
            candidates = np.sort(rng.choice(p, size=feature_subset, replace=False))
        yn = y[idx]
        best = None
        for f in candidates:
            found = _best_split_on_feature(X[idx, f], yn)
            if found is None:
                continue
            num, den, thr = found
            if best is None or num * best[1] > best[0] * den:
                best = (num, den, thr, int(f))
        if best is None:
            continue
        num, den, thr, f = best
        # zero-gain splits are kept (XOR-like nodes need one to progress);
        # a split can never raise weighted Gini, so this only guards rounding
        if num * n < (c0 * c0 + c1 * c1) * den:
            continue
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # left subtree first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return DecisionTreeModel(
        np.array(feature, dtype=np.intp),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.intp),
        np.array(right, dtype=np.intp),
        np.array(counts, dtype=np.int64).reshape(-1, 2),
    )


def predict_tree(tree: DecisionTreeModel, x) -> int:
    return int(tree.predict(np.asarray(x, dtype=np.float64)[None, :])[0])
