"""Binary class labels.

Internally labels are integer codes: 0 = Benign, 1 = Malignant. Every tie
rule in the package resolves to Benign, the lower code.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np


class Label(IntEnum):
    BENIGN = 0
    MALIGNANT = 1

    def __str__(self):
        return self.name.capitalize()

    @classmethod
    def parse(cls, value) -> "Label":
        if isinstance(value, Label):
            return value
        if isinstance(value, str):
            try:
                return cls[value.strip().upper()]
            except KeyError:
                raise ValueError(f"unknown label {value!r}") from None
        return cls(int(value))


def as_codes(labels) -> np.ndarray:
    """Convert any sequence of labels (names, enums or 0/1) to an int array."""
    if isinstance(labels, np.ndarray) and labels.dtype.kind in "iub":
        codes = labels.astype(np.int64)
    else:
        codes = np.array([int(Label.parse(v)) for v in labels], dtype=np.int64)
    if codes.size and (codes.min() < 0 or codes.max() > 1):
        raise ValueError("labels must be Benign (0) or Malignant (1)")
    return codes
