"""Brain-MRI tumour pipeline: Otsu segmentation and area, SWT -> PCA -> GLCM
texture features, and a KNN / random forest / decision tree voting ensemble.
"""

__version__ = "0.1.0"

from .classifiers import Label, predict_ensemble, train_ensemble
from .evaluation import compute_metrics, confusion
from .features import FEATURE_NAMES, FeatureVector, PipelineConfig, extract_features
from .imaging import GrayImage, generate_fixture, load_image
from .segmentation import binarize, histogram, otsu_threshold, tumor_area_mm2

__all__ = [
    "FEATURE_NAMES",
    "FeatureVector",
    "GrayImage",
    "Label",
    "PipelineConfig",
    "binarize",
    "compute_metrics",
    "confusion",
    "extract_features",
    "generate_fixture",
    "histogram",
    "load_image",
    "otsu_threshold",
    "predict_ensemble",
    "train_ensemble",
    "tumor_area_mm2",
]
