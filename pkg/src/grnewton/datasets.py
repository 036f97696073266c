"""Labeled datasets: LIBSVM sparse-text ingestion and synthetic generators."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, ParseError
from .linalg import Array


@dataclass(frozen=True)
class LabeledDataset:
    """Dense feature matrix (m x n) with labels in {-1, +1}."""

    features: Array
    labels: Array

    def __post_init__(self):
        if self.features.ndim != 2:
            raise InvalidInputError("features must be a 2-D array")
        if self.features.shape[0] == 0:
            raise InvalidInputError("dataset is empty")
        if self.labels.shape != (self.features.shape[0],):
            raise InvalidInputError("labels length must match the number of rows")
        if not np.all(np.isfinite(self.features)):
            raise InvalidInputError("features contain non-finite entries")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise InvalidInputError("labels must be -1 or +1")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


_LABEL_MAP = {"-1": -1.0, "+1": 1.0, "1": 1.0, "0": -1.0}


def load_libsvm(path: str | os.PathLike) -> LabeledDataset:
    """Read a LIBSVM sparse text file into a dense dataset.

    Format: one sample per line, ``label idx:val idx:val ...`` with 1-based
    feature indices. Labels -1/+1 are kept; 0/1 are remapped to -1/+1. The
    dataset dimension is the largest index seen. Malformed lines raise
    :class:`ParseError` carrying the 1-based line number.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise InvalidInputError(f"dataset file not found: {path}")
    rows: list[dict[int, float]] = []
    labels: list[float] = []
    max_index = 0
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            label_tok = tokens[0]
            if label_tok not in _LABEL_MAP:
                raise InvalidInputError(
                    f"line {lineno}: label {label_tok!r} not in {{-1, +1, 0, 1}}"
                )
            entries: dict[int, float] = {}
            for tok in tokens[1:]:
                if ":" not in tok:
                    raise ParseError(f"expected idx:val, got {tok!r}", line=lineno)
                idx_s, val_s = tok.split(":", 1)
                try:
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError as exc:
                    raise ParseError(f"bad feature entry {tok!r}", line=lineno) from exc
                if idx < 1:
                    raise ParseError(f"feature index must be >= 1, got {idx}", line=lineno)
                if not np.isfinite(val):
                    raise ParseError(f"non-finite feature value in {tok!r}", line=lineno)
                entries[idx] = val
                max_index = max(max_index, idx)
            labels.append(_LABEL_MAP[label_tok])
            rows.append(entries)
    if not rows:
        raise InvalidInputError(f"dataset file {path} contains no samples")
    n = max(max_index, 1)
    features = np.zeros((len(rows), n))
    for i, entries in enumerate(rows):
        for idx, val in entries.items():
            features[i, idx - 1] = val
    return LabeledDataset(features=features, labels=np.asarray(labels))


def synthetic_classification(
    m: int,
    n: int,
    seed: int = 0,
    collinear_fraction: float = 0.0,
    collinear_noise: float = 1e-2,
    label_noise: float = 0.25,
    scale: float = 1.0,
) -> LabeledDataset:
    """Deterministic synthetic binary classification data.

    ``collinear_fraction`` of the columns are near-duplicates of earlier
    columns (plus ``collinear_noise``-sized perturbations), which drives
    the logistic Hessian toward singularity at the optimum;
    ``label_noise`` flips that fraction of labels so the data is not
    separable and the optimum stays finite.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n)) * scale
    n_dup = int(collinear_fraction * n)
    for j in range(n - n_dup, n):
        src = rng.integers(0, n - n_dup)
        A[:, j] = A[:, src] + collinear_noise * scale * rng.standard_normal(m)
    truth = rng.standard_normal(n)
    labels = np.sign(A @ truth)
    labels[labels == 0.0] = 1.0
    flip = rng.random(m) < label_noise
    labels[flip] = -labels[flip]
    return LabeledDataset(features=A, labels=labels)
