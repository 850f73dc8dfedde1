"""Bagged CART-style decision trees and the precomputed prediction matrix."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset

LEAF = -1


@dataclass
class DecisionTree:
    """Flat array representation; node 0 is the root and children always
    have larger indices than their parent."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    depth: np.ndarray
    n_classes: int
    n_attrs: int
    max_depth: int
    min_leaf: int

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def tree_depth(self) -> int:
        return int(self.depth.max())

    def predict(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=float)
        if features.ndim != 2 or features.shape[1] != self.n_attrs:
            raise ValueError(
                f"expected {self.n_attrs} attributes, got shape {features.shape}"
            )
        node = np.zeros(features.shape[0], dtype=np.int64)
        rows = np.arange(features.shape[0])
        for _ in range(self.tree_depth):
            feat = self.feature[node]
            internal = feat != LEAF
            if not internal.any():
                break
            r, n = rows[internal], node[internal]
            go_left = features[r, feat[internal]] <= self.threshold[n]
            node[internal] = np.where(go_left, self.left[n], self.right[n])
        return self.value[node].copy()

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "depth": self.depth.tolist(),
            "n_classes": self.n_classes,
            "n_attrs": self.n_attrs,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
        }


def _best_split(x: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int, features: np.ndarray):
    """Return (attribute, threshold) minimising weighted Gini impurity, or None.

    Ties resolve to the lowest attribute index, then the smallest threshold.
    """
    n = x.shape[0]
    order = np.argsort(x[:, features], axis=0, kind="stable")
    xs = np.take_along_axis(x[:, features], order, axis=0)
    onehot = np.eye(n_classes, dtype=np.int64)[y[order]]  # (n, d, K)
    left = np.cumsum(onehot, axis=0)[:-1]
    right = left[-1][None] + onehot[-1][None] - left
    n_left = np.arange(1, n, dtype=float)[:, None]
    n_right = n - n_left
    # n * weighted impurity = n - sum(cL^2)/nL - sum(cR^2)/nR
    score = n - (left**2).sum(axis=2) / n_left - (right**2).sum(axis=2) / n_right
    valid = xs[1:] > xs[:-1]
    valid &= (n_left >= min_leaf) & (n_right >= min_leaf)
    if not valid.any():
        return None
    score = np.where(valid, score, np.inf)
    # attribute-major flattening: argmin picks lowest attribute, then lowest position
    flat = int(np.argmin(score.T))
    d_idx, pos = divmod(flat, n - 1)
    lo, hi = xs[pos, d_idx], xs[pos + 1, d_idx]
    thr = (lo + hi) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return int(features[d_idx]), float(thr)


def fit_tree(
    train: Dataset,
    max_depth: int = 8,
    min_leaf: int = 2,
    seed: int | None = None,
    max_features: int | None = None,
) -> DecisionTree:
    """Greedy top-down Gini induction.

    A node becomes a leaf when it is pure, at ``max_depth``, or when no split
    leaves ``min_leaf`` rows on both sides. Zero-gain splits are allowed so
    that patterns like XOR can be separated. ``seed`` only matters when
    ``max_features`` restricts each node to a random attribute subset.
    """
    if len(train) == 0:
        raise ValueError("empty training set")
    if max_depth < 1 or min_leaf < 1:
        raise ValueError("max_depth and min_leaf must be >= 1")
    x, y, k = train.features, train.labels, train.n_classes
    n_attrs = x.shape[1]
    rng = np.random.default_rng(seed)

    feature, threshold, left, right, value, depth = [], [], [], [], [], []

    def new_node(d: int) -> int:
        for arr, v in ((feature, LEAF), (threshold, 0.0), (left, LEAF), (right, LEAF), (value, 0)):
            arr.append(v)
        depth.append(d)
        return len(feature) - 1

    stack = [(new_node(0), np.arange(len(y)))]
    while stack:
        node, rows = stack.pop()
        counts = np.bincount(y[rows], minlength=k)
        value[node] = int(np.argmax(counts))
        d = depth[node]
        if d >= max_depth or np.count_nonzero(counts) <= 1 or len(rows) < 2 * min_leaf:
            continue
        if max_features is not None and max_features < n_attrs:
            feats = np.sort(rng.choice(n_attrs, size=max_features, replace=False))
        else:
            feats = np.arange(n_attrs)
        found = _best_split(x[rows], y[rows], k, min_leaf, feats)
        if found is None:
            continue
        attr, thr = found
        go_left = x[rows, attr] <= thr
        feature[node], threshold[node] = attr, thr
        left[node] = new_node(d + 1)
        right[node] = new_node(d + 1)
        # push right first so the left subtree is expanded first
        stack.append((right[node], rows[~go_left]))
        stack.append((left[node], rows[go_left]))

    return DecisionTree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.int64),
        depth=np.array(depth, dtype=np.int64),
        n_classes=k,
        n_attrs=n_attrs,
        max_depth=max_depth,
        min_leaf=min_leaf,
    )


@dataclass
class ClassifierPool:
    trees: list[DecisionTree]
    bootstrap_seed: int
    bootstrap_indices: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def m(self) -> int:
        return len(self.trees)

    def to_dict(self) -> dict:
        return {"m": self.m, "bootstrap_seed": self.bootstrap_seed,
                "trees": [t.to_dict() for t in self.trees]}


def fit_bagging(
    train: Dataset,
    m: int = 20,
    max_depth: int = 8,
    min_leaf: int = 2,
    seed: int = 0,
    n_jobs: int = 1,
) -> ClassifierPool:
    """Fit ``m`` trees on bootstrap resamples of ``train``.

    Bootstrap indices are drawn sequentially from one seeded stream before any
    fitting, so ``n_jobs > 1`` yields the same pool as a serial run.
    """
    if m < 1:
        raise ValueError("pool size m must be >= 1")
    rng = np.random.default_rng(seed)
    n = len(train)
    samples = [rng.integers(0, n, size=n) for _ in range(m)]

    def fit_one(idx):
        return fit_tree(train.take(idx), max_depth=max_depth, min_leaf=min_leaf)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as ex:
            trees = list(ex.map(fit_one, samples))
    else:
        trees = [fit_one(idx) for idx in samples]
    return ClassifierPool(trees, seed, samples)


class PredictionMatrix:
    """Base-classifier predictions (m x v) on a labelled evaluation set.

    ``costs`` holds per-classifier evaluation costs and defaults to one unit
    each. The per-class vote tensor is precomputed so a majority vote over any
    mask is a single reduction.
    """

    def __init__(self, preds, labels, n_classes: int | None = None, costs=None):
        preds = np.asarray(preds, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int64)
        if preds.ndim != 2:
            raise ValueError("preds must be an m x v matrix")
        if preds.shape[1] != labels.shape[0]:
            raise ValueError(
                f"{preds.shape[1]} prediction columns but {labels.shape[0]} labels"
            )
        if n_classes is None:
            n_classes = int(max(preds.max(initial=0), labels.max(initial=0))) + 1
        if preds.size and (preds.min() < 0 or preds.max() >= n_classes):
            raise ValueError(f"predictions must lie in [0, {n_classes - 1}]")
        if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
            raise ValueError(f"labels must lie in [0, {n_classes - 1}]")
        if costs is None:
            costs = np.ones(preds.shape[0])
        costs = np.asarray(costs, dtype=float)
        if costs.shape != (preds.shape[0],) or np.any(costs < 0) or not np.all(np.isfinite(costs)):
            raise ValueError("costs must be m finite non-negative values")
        self.preds = preds
        self.labels = labels
        self.n_classes = int(n_classes)
        self.costs = costs
        self.unit_costs = bool(np.all(costs == 1.0))
        self.votes = np.eye(self.n_classes, dtype=np.int32)[preds]  # (m, v, K)

    @property
    def m(self) -> int:
        return self.preds.shape[0]

    @property
    def v(self) -> int:
        return self.preds.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PredictionMatrix):
            return NotImplemented
        return (
            self.n_classes == other.n_classes
            and np.array_equal(self.preds, other.preds)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.costs, other.costs)
        )

    def individual_errors(self) -> np.ndarray:
        return (self.preds != self.labels[None, :]).mean(axis=1)

    def save_csv(self, path: str | Path) -> None:
        """First row true labels, then one row per classifier."""
        table = np.vstack([self.labels[None, :], self.preds])
        np.savetxt(path, table, fmt="%d", delimiter=",")

    @classmethod
    def load_csv(cls, path: str | Path, n_classes: int | None = None, costs=None) -> "PredictionMatrix":
        table = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
        if table.shape[0] < 2:
            raise ValueError(f"{path}: need a label row and at least one classifier row")
        return cls(table[1:], table[0], n_classes=n_classes, costs=costs)


def predict_matrix(pool: ClassifierPool, data: Dataset, costs=None) -> PredictionMatrix:
    if pool.m and data.n_attrs != pool.trees[0].n_attrs:
        raise ValueError(
            f"attribute count mismatch: pool trained on {pool.trees[0].n_attrs}, data has {data.n_attrs}"
        )
    preds = np.vstack([t.predict(data.features) for t in pool.trees])
    return PredictionMatrix(preds, data.labels, data.n_classes, costs)


def simulate_predictions(
    m: int, v: int, n_classes: int, seed: int = 0, accuracy=(0.55, 0.8)
) -> PredictionMatrix:
    """Random prediction matrix: classifier i is right with its own probability
    drawn from ``accuracy`` and otherwise guesses uniformly among wrong classes."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, n_classes, size=v)
    p = rng.uniform(*accuracy, size=m)
    correct = rng.random((m, v)) < p[:, None]
    shift = rng.integers(1, n_classes, size=(m, v))
    preds = np.where(correct, labels[None, :], (labels[None, :] + shift) % n_classes)
    return PredictionMatrix(preds, labels, n_classes)
