"""Two-class dataset layout and stratified train/test splitting.

Layout::

    <root>/benign/*.pgm|*.png
    <root>/malignant/*.pgm|*.png
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

import numpy as np

from .classifiers.labels import Label
from .errors import DatasetLayoutError

IMAGE_SUFFIXES = (".pgm", ".png")
CLASS_DIRS = {Label.BENIGN: "benign", Label.MALIGNANT: "malignant"}

Item = Tuple[Path, Label]


@dataclass(frozen=True)
class DatasetDescription:
    benign: Tuple[Path, ...]
    malignant: Tuple[Path, ...]

    def files(self, label: Label) -> Tuple[Path, ...]:
        return self.benign if label == Label.BENIGN else self.malignant

    def items(self) -> List[Item]:
        return [(p, lab) for lab in Label for p in self.files(lab)]


@dataclass(frozen=True)
class Split:
    train: List[Item]
    test: List[Item]


def ingest_dataset(root) -> DatasetDescription:
    root = Path(root)
    for name in CLASS_DIRS.values():
        if not (root / name).is_dir():
            raise DatasetLayoutError(f"missing class directory: {root / name}")
    found = {}
    for label, name in CLASS_DIRS.items():
        d = root / name
        files = sorted(
            (p for p in d.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
            key=lambda p: p.name,
        )
        if not files:
            raise DatasetLayoutError(f"empty class directory: {d}")
        found[label] = tuple(files)
    return DatasetDescription(found[Label.BENIGN], found[Label.MALIGNANT])


def train_count(n: int, ratio: float) -> int:
    """Training share of a class of size ``n``.

    ``floor(ratio * n)`` (with a guard against binary round-off such as
    0.85 * 40 = 33.99...), kept within [1, n - 1] so both sides are
    non-empty. 1278 images at 0.85 give 1086 train / 192 test.
    """
    k = math.floor(ratio * n + 1e-9)
    return min(max(k, 1), n - 1)


def split_dataset(desc: DatasetDescription, ratio: float = 0.85, seed: int = 0) -> Split:
    """Per-class seeded shuffle, then the first ``train_count`` go to training."""
    if not 0 < ratio < 1:
        raise ValueError(f"split ratio must lie in (0, 1), got {ratio}")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for label in Label:
        files = desc.files(label)
        if len(files) < 2:
            raise DatasetLayoutError(f"class {label} needs at least 2 images, found {len(files)}")
        order = rng.permutation(len(files))
        k = train_count(len(files), ratio)
        train += [(files[i], label) for i in order[:k]]
        test += [(files[i], label) for i in order[k:]]
    return Split(train, test)
