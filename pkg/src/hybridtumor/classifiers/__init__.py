"""Member classifiers and the voting ensemble."""

from .ensemble import (
    EnsembleModel,
    EnsemblePrediction,
    dumps_model,
    load_model,
    predict_ensemble,
    save_model,
    train_ensemble,
)
from .forest import RandomForestModel, predict_forest, train_forest
from .knn import predict_knn
from .labels import Label, as_codes
from .scaler import FeatureScaler, fit_scaler
from .tree import DecisionTreeModel, predict_tree, train_tree

__all__ = [
    "DecisionTreeModel",
    "EnsembleModel",
    "EnsemblePrediction",
    "FeatureScaler",
    "Label",
    "RandomForestModel",
    "as_codes",
    "dumps_model",
    "fit_scaler",
    "load_model",
    "predict_ensemble",
    "predict_forest",
    "predict_knn",
    "predict_tree",
    "save_model",
    "train_ensemble",
    "train_forest",
    "train_tree",
]
