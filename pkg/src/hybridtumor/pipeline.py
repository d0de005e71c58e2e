"""End-to-end runs behind the command-line subcommands."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .classifiers import Label, load_model, predict_ensemble, save_model, train_ensemble
from .dataset import CLASS_DIRS, Item, ingest_dataset, split_dataset
from .errors import PipelineError
from .evaluation import ConfusionMatrix, MetricsReport, compute_metrics, confusion
from .features import FEATURE_NAMES, FeatureVector, PipelineConfig, extract_features
from .imaging import AUGMENT_OPS, augment, generate_fixture, load_image, save_pgm, standardize
from .segmentation import segment

log = logging.getLogger(__name__)

MAX_SKIP_FRACTION = 0.10


@dataclass
class RunConfig:
    data: Path
    model: Path
    seed: int = 0
    split: float = 0.85
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    n_trees: int = 100
    k: int = 1
    jobs: int = 1
    augment: bool = False
    positive: Label = Label.BENIGN

    def __post_init__(self):
        if not 0 < self.split < 1:
            raise ValueError(f"split ratio must lie in (0, 1), got {self.split}")


@dataclass
class Evaluation:
    confusion: ConfusionMatrix
    metrics: MetricsReport
    member_accuracy: Dict[str, float]
    n: int


@dataclass
class TrainReport:
    n_train: int
    n_test: int
    n_train_samples: int
    train: Evaluation
    test: Evaluation
    skipped: List[Tuple[str, str]]


def _features_for(path: Path, cfg: PipelineConfig, ops=(None,)) -> List[np.ndarray]:
    img = standardize(load_image(path))
    out = []
    for op in ops:
        view = img if op is None else augment(img, op)
        out.append(extract_features(view, cfg).as_array())
    return out


def extract_dataset(items: List[Item], cfg: PipelineConfig, jobs: int = 1, augmented: bool = False):
    """Features for each item; returns ``(X, y, skipped)``, order preserved.

    With ``augmented`` every image also contributes its five flipped and
    rotated copies.
    """
    ops = (None,) + AUGMENT_OPS if augmented else (None,)

    def work(item):
        path, _ = item
        try:
            return _features_for(path, cfg, ops), None
        except PipelineError as exc:
            return None, str(exc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(it) for it in items]

    rows, labels, skipped = [], [], []
    for (path, label), (feats, err) in zip(items, results):
        if err is not None:
            log.warning("skipping %s: %s", path, err)
            skipped.append((str(path), err))
            continue
        rows.extend(feats)
        labels.extend([int(label)] * len(feats))
    X = np.array(rows, dtype=np.float64).reshape(-1, len(FEATURE_NAMES))
    return X, np.array(labels, dtype=np.int64), skipped


def _check_skips(skipped, total):
    if total and len(skipped) > MAX_SKIP_FRACTION * total:
        raise PipelineError(
            f"{len(skipped)} of {total} images failed feature extraction (limit {MAX_SKIP_FRACTION:.0%})"
        )


def evaluate_model(model, X, y, positive=Label.BENIGN) -> Evaluation:
    members = model.member_predictions(X)
    pred = model.predict(X)
    cm = confusion(pred, y, positive)
    return Evaluation(
        confusion=cm,
        metrics=compute_metrics(cm),
        member_accuracy={m: float(np.mean(v == y)) for m, v in members.items()},
        n=int(len(y)),
    )


def run_train(cfg: RunConfig) -> TrainReport:
    desc = ingest_dataset(cfg.data)
    split = split_dataset(desc, cfg.split, cfg.seed)
    Xtr, ytr, skip_tr = extract_dataset(split.train, cfg.pipeline, cfg.jobs, cfg.augment)
    Xte, yte, skip_te = extract_dataset(split.test, cfg.pipeline, cfg.jobs)
    skipped = skip_tr + skip_te
    _check_skips(skipped, len(split.train) + len(split.test))

    if len(yte) == 0:
        raise PipelineError("no test images left after skipping failures")

    model = train_ensemble(
        Xtr, ytr, cfg.pipeline, seed=cfg.seed, n_trees=cfg.n_trees, k=cfg.k, n_jobs=cfg.jobs
    )
    save_model(model, cfg.model)
    return TrainReport(
        n_train=len(split.train),
        n_test=len(split.test),
        n_train_samples=int(len(ytr)),
        train=evaluate_model(model, Xtr, ytr, cfg.positive),
        test=evaluate_model(model, Xte, yte, cfg.positive),
        skipped=skipped,
    )


def run_evaluate(
    model_path, data, split: Optional[float] = None, seed: int = 0, jobs: int = 1, positive=Label.BENIGN
):
    """Score a saved model on a dataset, or only on its held-out split."""
    model = load_model(model_path)
    desc = ingest_dataset(data)
    items = split_dataset(desc, split, seed).test if split else desc.items()
    X, y, skipped = extract_dataset(items, model.config, jobs)
    _check_skips(skipped, len(items))
    return evaluate_model(model, X, y, positive), skipped


@dataclass
class PredictResult:
    label: Label
    votes: Dict[str, Label]
    features: FeatureVector
    threshold: int
    white_pixels: int
    area_mm2: float


def run_predict(model_path, image_path) -> PredictResult:
    model = load_model(model_path)
    img = standardize(load_image(image_path))
    fv = extract_features(img, model.config)
    pred = predict_ensemble(model, fv)
    n, _, area = segment(img)
    return PredictResult(pred.label, pred.votes, fv, n, area.white_pixels, area.area_mm2)


def run_segment(image_path, out_path):
    img = standardize(load_image(image_path))
    n, mask, area = segment(img)
    try:
        save_pgm(mask.to_image(), out_path)
    except OSError as exc:
        raise PipelineError(f"cannot write {out_path}: {exc.strerror or exc}") from exc
    return n, area


def generate_dataset(root, count: int, seed: int = 0) -> List[Path]:
    """Write ``count`` fixtures per class under ``root`` in the dataset layout."""
    root = Path(root)
    written = []
    for label in Label:
        d = root / CLASS_DIRS[label]
        d.mkdir(parents=True, exist_ok=True)
        for i in range(count):
            # distinct seed per image, stable under changes to count
            img = generate_fixture(str(label), seed * 1_000_003 + i)
            p = d / f"{CLASS_DIRS[label]}_{i:04d}.pgm"
            save_pgm(img, p)
            written.append(p)
    return written
