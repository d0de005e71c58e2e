"""KNN + random forest + decision tree, fused by a 2-of-3 majority vote."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, NamedTuple

import numpy as np

from ..errors import ModelFormatError, TrainingDataError
from ..features import FEATURE_NAMES, FeatureVector, PipelineConfig
from .forest import RandomForestModel, train_forest
from .knn import predict_knn
from .labels import Label, as_codes
from .scaler import FeatureScaler, fit_scaler
from .tree import DecisionTreeModel, train_tree

FORMAT_NAME = "hybridtumor-ensemble"
FORMAT_VERSION = 1
MEMBERS = ("knn", "forest", "tree")


@dataclass(eq=False)
class EnsembleModel:
    scaler: FeatureScaler
    knn_X: np.ndarray
    knn_y: np.ndarray
    tree: DecisionTreeModel
    forest: RandomForestModel
    config: PipelineConfig = field(default_factory=PipelineConfig)
    k: int = 1
    version: int = FORMAT_VERSION

    def member_predictions(self, X) -> Dict[str, np.ndarray]:
        """Per-member label codes for raw (unscaled) feature rows."""
        Z = self.scaler.transform(np.atleast_2d(X))
        return {
            "knn": np.array([predict_knn(self.knn_X, self.knn_y, z, self.k) for z in Z], dtype=np.int64),
            "forest": self.forest.predict(Z),
            "tree": self.tree.predict(Z),
        }

    def predict(self, X) -> np.ndarray:
        votes = self.member_predictions(X)
        right = sum(votes[m] for m in MEMBERS)  # Malignant votes
        left = len(MEMBERS) - right
        return (right > left).astype(np.int64)


class EnsemblePrediction(NamedTuple):
    label: Label
    votes: Dict[str, Label]


def _as_matrix(features) -> np.ndarray:
    if isinstance(features, FeatureVector):
        return features.as_array()[None, :]
    return np.atleast_2d(np.asarray(features, dtype=np.float64))


def train_ensemble(
    X,
    y,
    cfg: PipelineConfig = PipelineConfig(),
    seed: int = 0,
    n_trees: int = 100,
    k: int = 1,
    n_jobs: int = 1,
) -> EnsembleModel:
    """Fit scaler, 1-NN store, a full-feature tree and a bagged forest.

    All three members see the same standardized training matrix.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingDataError("empty dataset")
    y = as_codes(y)
    if y.shape != (X.shape[0],):
        raise ValueError("X and y disagree on the number of samples")
    if not np.isfinite(X).all():
        raise TrainingDataError("training features must be finite")
    if np.unique(y).size < 2:
        raise TrainingDataError("single-class dataset")
    scaler = fit_scaler(X)
    Z = scaler.transform(X)
    return EnsembleModel(
        scaler=scaler,
        knn_X=Z,
        knn_y=y,
        tree=train_tree(Z, y),
        forest=train_forest(Z, y, n_trees=n_trees, seed=seed, n_jobs=n_jobs),
        config=cfg,
        k=k,
    )


def predict_ensemble(model: EnsembleModel, features) -> EnsemblePrediction:
    votes = {m: Label(int(v[0])) for m, v in model.member_predictions(_as_matrix(features)).items()}
    right = sum(1 for v in votes.values() if v is Label.MALIGNANT)
    left = len(votes) - right
    return EnsemblePrediction(Label.MALIGNANT if right > left else Label.BENIGN, votes)


# ---------------------------------------------------------------- persistence


def model_to_dict(model: EnsembleModel) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": model.version,
        "feature_names": list(FEATURE_NAMES),
        "config": model.config.to_dict(),
        "scaler": model.scaler.to_dict(),
        "knn": {
            "k": model.k,
            "features": model.knn_X.tolist(),
            "labels": [str(Label(int(v))) for v in model.knn_y],
        },
        "tree": model.tree.to_dict(),
        "forest": {
            "seed": model.forest.seed,
            "n_trees": model.forest.n_trees,
            "max_features": model.forest.max_features,
            "trees": [t.to_dict() for t in model.forest.trees],
        },
    }


def model_from_dict(d: dict) -> EnsembleModel:
    if not isinstance(d, dict) or d.get("format") != FORMAT_NAME or d.get("version") != FORMAT_VERSION:
        raise ModelFormatError("unsupported model version")
    try:
        forest = RandomForestModel(
            [DecisionTreeModel.from_dict(t) for t in d["forest"]["trees"]],
            seed=int(d["forest"]["seed"]),
            max_features=int(d["forest"]["max_features"]),
        )
        if forest.n_trees != int(d["forest"]["n_trees"]):
            raise ValueError("tree count mismatch")
        return EnsembleModel(
            scaler=FeatureScaler.from_dict(d["scaler"]),
            knn_X=np.asarray(d["knn"]["features"], dtype=np.float64),
            knn_y=as_codes(d["knn"]["labels"]),
            tree=DecisionTreeModel.from_dict(d["tree"]),
            forest=forest,
            config=PipelineConfig.from_dict(d["config"]),
            k=int(d["knn"]["k"]),
            version=int(d["version"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc


def dumps_model(model: EnsembleModel) -> str:
    return json.dumps(model_to_dict(model), separators=(",", ":")) + "\n"


def save_model(model: EnsembleModel, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path) -> EnsembleModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except UnicodeDecodeError as exc:
        raise ModelFormatError("unsupported model version") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError("unsupported model version") from exc
    return model_from_dict(doc)
