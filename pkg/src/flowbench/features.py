"""Feature encoding, z-score scaling, and deterministic stratified splitting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from flowbench.flow_data import CANONICAL_COLUMNS, COLUMN_FIELDS, FlowRecord

FEATURE_COLUMNS = [c for c in CANONICAL_COLUMNS if c != "Prediction"]
CATEGORICAL_COLUMNS = (
    "Protocol",
    "Flag",
    "Family",
    "SeedAddress",
    "ExpAddress",
    "IPaddress",
    "Threats",
)

# Code assigned to categorical values never seen while fitting the encoders.
UNSEEN_CODE = -1


@dataclass
class Scaler:
    """Per-column centering plus unit-variance scaling for non-constant columns."""

    mean: np.ndarray
    std: np.ndarray  # population std; exact zeros mark constant columns

    def apply(self, rows: np.ndarray) -> np.ndarray:
        out = rows - self.mean
        nonconstant = self.std > 0
        out[:, nonconstant] /= self.std[nonconstant]
        return out

    def to_json_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Scaler":
        return cls(
            mean=np.asarray(doc["mean"], dtype=np.float64),
            std=np.asarray(doc["std"], dtype=np.float64),
        )


@dataclass
class FeatureMatrix:
    """Numeric design matrix plus the fitted per-column state that built it.

    `rows` is the matrix models consume: z-scored when a scaler was fitted,
    otherwise identical to `encoded` (the raw integer-coded values).
    """

    rows: np.ndarray
    labels: np.ndarray
    column_names: list[str]
    encoders: dict[str, dict[str, int]]
    scaler: Scaler | None
    encoded: np.ndarray

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def rows_for(self, model) -> np.ndarray:
        """Scaled rows for models that want them, raw encoded rows otherwise."""
        return self.rows if getattr(model, "needs_scaling", False) else self.encoded


@dataclass
class SplitPlan:
    """Deterministic holdout partition, optionally carrying a k-fold assignment."""

    seed: int
    train_indices: np.ndarray
    test_indices: np.ndarray
    fold_assignment: np.ndarray | None = None


def fit_transform(records: Sequence[FlowRecord], scale: bool = False) -> FeatureMatrix:
    """Encode records into a FeatureMatrix, fitting encoders (and a scaler).

    Categorical columns map to integer codes by lexicographic rank of the
    vocabulary seen here; numeric columns pass through. With scale=True a
    z-score scaler is fitted on these records and applied to `rows`;
    constant columns are centered only, so they come out as all zeros.
    """
    if not records:
        raise ValueError("fit_transform requires at least one record")
    encoders: dict[str, dict[str, int]] = {}
    columns = []
    for name in FEATURE_COLUMNS:
        raw = [getattr(r, COLUMN_FIELDS[name]) for r in records]
        if name in CATEGORICAL_COLUMNS:
            vocabulary = sorted(set(raw))
            codes = {value: rank for rank, value in enumerate(vocabulary)}
            encoders[name] = codes
            columns.append(
                np.fromiter((codes[v] for v in raw), dtype=np.float64, count=len(raw))
            )
        else:
            columns.append(np.asarray(raw, dtype=np.float64))
    encoded = np.column_stack(columns)
    labels = np.fromiter(
        (int(r.prediction) for r in records), dtype=np.int64, count=len(records)
    )
    scaler = None
    rows = encoded
    if scale:
        scaler = Scaler(mean=encoded.mean(axis=0), std=encoded.std(axis=0))
        rows = scaler.apply(encoded)
    return FeatureMatrix(
        rows=rows,
        labels=labels,
        column_names=list(FEATURE_COLUMNS),
        encoders=encoders,
        scaler=scaler,
        encoded=encoded,
    )


def encode_records(
    records: Sequence[FlowRecord], encoders: dict[str, dict[str, int]]
) -> np.ndarray:
    """Apply fitted encoders; unseen categorical values map to UNSEEN_CODE."""
    if not records:
        return np.empty((0, len(FEATURE_COLUMNS)), dtype=np.float64)
    columns = []
    for name in FEATURE_COLUMNS:
        raw = [getattr(r, COLUMN_FIELDS[name]) for r in records]
        if name in CATEGORICAL_COLUMNS:
            codes = encoders[name]
            columns.append(
                np.fromiter(
                    (codes.get(v, UNSEEN_CODE) for v in raw),
                    dtype=np.float64,
                    count=len(raw),
                )
            )
        else:
            columns.append(np.asarray(raw, dtype=np.float64))
    return np.column_stack(columns)


def transform(matrix: FeatureMatrix, records: Sequence[FlowRecord]) -> np.ndarray:
    """Encode new records with the matrix's fitted encoders and scaler."""
    rows = encode_records(records, matrix.encoders)
    if matrix.scaler is not None:
        rows = matrix.scaler.apply(rows)
    return rows


def stratified_split(labels, test_fraction: float, seed: int) -> SplitPlan:
    """Per-class proportional holdout split, deterministic for a fixed seed.

    Every class contributes round(count * test_fraction) test samples,
    clamped so both sides keep at least one member of each class.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    classes, counts = np.unique(labels, return_counts=True)
    small = classes[counts < 2]
    if small.size:
        raise ValueError(f"class {int(small[0])} has fewer than 2 members")
    rng = np.random.default_rng(seed)
    test_parts, train_parts = [], []
    for cls, count in zip(classes, counts):
        permuted = rng.permutation(np.flatnonzero(labels == cls))
        take = int(np.floor(count * test_fraction + 0.5))
        take = min(max(take, 1), int(count) - 1)
        test_parts.append(permuted[:take])
        train_parts.append(permuted[take:])
    return SplitPlan(
        seed=seed,
        train_indices=np.sort(np.concatenate(train_parts)),
        test_indices=np.sort(np.concatenate(test_parts)),
    )


def k_folds(labels, k: int, seed: int) -> np.ndarray:
    """Stratified fold assignment in [0, k), fold sizes differing by at most one."""
    labels = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise ValueError("k must be at least 2")
    classes, counts = np.unique(labels, return_counts=True)
    smallest = int(counts.min())
    if k > smallest:
        raise ValueError(f"k={k} exceeds the smallest class size ({smallest})")
    # Per-fold class quotas from the sorted label sequence: fold i receives
    # every k-th element, which keeps both fold sizes and class balance tight.
    dense = np.searchsorted(classes, labels)
    ordered = np.sort(dense)
    quota = np.stack(
        [np.bincount(ordered[i::k], minlength=classes.size) for i in range(k)]
    )
    rng = np.random.default_rng(seed)
    assignment = np.empty(labels.size, dtype=np.int64)
    for ci in range(classes.size):
        members = rng.permutation(np.flatnonzero(dense == ci))
        start = 0
        for fold in range(k):
            take = int(quota[fold, ci])
            assignment[members[start : start + take]] = fold
            start += take
    return assignment
