"""Benchmark harness: fit every requested model, score, time, and rank.

The headline leaderboard always comes from the holdout split; k-fold
cross-validation is opt-in and attached per report. A model that fails to
fit becomes an error row instead of aborting the run. Models may be
evaluated in parallel; ordering is by the sort rule, never completion order.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from flowbench.classifiers import MODEL_NAMES, make_model
from flowbench.features import FeatureMatrix, SplitPlan, k_folds
from flowbench.metrics import (
    CVResult,
    accuracy,
    balanced_accuracy,
    confusion,
    cv_evaluate,
    f1,
    roc_curve,
)

SCHEMA_VERSION = 1


@dataclass
class EvalReport:
    """One model's metric row; `status` is "ok" or an error description."""

    model: str
    status: str = "ok"
    accuracy: float | None = None
    balanced_accuracy: float | None = None
    roc_auc_macro: float | None = None
    f1_weighted: float | None = None
    f1_macro: float | None = None
    time_taken_s: float | None = None
    confusion: list[list[int]] | None = None
    cv: CVResult | None = None
    scores: np.ndarray | None = field(default=None, compare=False, repr=False)
    test_labels: np.ndarray | None = field(default=None, compare=False, repr=False)


@dataclass
class Leaderboard:
    """Reports sorted by accuracy desc, balanced accuracy desc, then name."""

    reports: list[EvalReport]
    metadata: dict


@dataclass
class BenchOptions:
    seed: int = 42
    test_fraction: float = 0.2
    folds: int = 0
    workers: int = 1


def run_benchmark(
    matrix: FeatureMatrix,
    plan: SplitPlan,
    model_names,
    options: BenchOptions | None = None,
) -> Leaderboard:
    """Fit each model on the train split, score the test split, rank the results."""
    options = options or BenchOptions()
    names = resolve_model_names(model_names)
    if not names:
        raise ValueError("empty model set")
    n_classes = matrix.n_classes
    train_labels = matrix.labels[plan.train_indices]
    test_labels = matrix.labels[plan.test_indices]
    fold_assignment = plan.fold_assignment
    if options.folds >= 2 and fold_assignment is None:
        fold_assignment = k_folds(matrix.labels, options.folds, options.seed)

    def evaluate(name: str) -> EvalReport:
        model = make_model(name, seed=options.seed)
        rows = matrix.rows_for(model)
        train_rows = rows[plan.train_indices]
        test_rows = rows[plan.test_indices]
        try:
            started = time.perf_counter()
            model.fit(train_rows, train_labels)
            raw_scores = model.predict_scores(test_rows)
            predicted = model.labels_from_scores(raw_scores)
            elapsed = time.perf_counter() - started
            scores = np.zeros((test_rows.shape[0], n_classes), dtype=np.float64)
            scores[:, model.classes_] = raw_scores
            cm = confusion(test_labels, predicted, n_classes)
            report = EvalReport(
                model=name,
                accuracy=accuracy(cm),
                balanced_accuracy=balanced_accuracy(cm),
                roc_auc_macro=macro_auc(test_labels, scores),
                f1_weighted=f1(cm, "weighted"),
                f1_macro=f1(cm, "macro"),
                time_taken_s=elapsed,
                confusion=cm.counts.tolist(),
                scores=scores,
                test_labels=test_labels,
            )
        except Exception as exc:
            return EvalReport(model=name, status=f"error: {exc}")
        if options.folds >= 2:
            report.cv = cv_evaluate(
                lambda: make_model(name, seed=options.seed),
                matrix,
                fold_assignment,
                lambda y_true, y_pred: 1.0
                - accuracy(confusion(y_true, y_pred, n_classes)),
            )
        return report

    if options.workers > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            reports = list(pool.map(evaluate, names))
    else:
        reports = [evaluate(name) for name in names]
    reports.sort(key=_sort_key)
    metadata = {
        "seed": options.seed,
        "test_fraction": options.test_fraction,
        "folds": options.folds,
        "fingerprint": fingerprint(matrix),
        "roc_auc_averaging": "macro one-vs-rest",
        "table_f1_averaging": "weighted",
    }
    return Leaderboard(reports=reports, metadata=metadata)


def macro_auc(y_true, scores: np.ndarray) -> float:
    """Unweighted mean of one-vs-rest AUCs over classes present in y_true."""
    present = np.unique(np.asarray(y_true))
    aucs = [roc_curve(y_true, scores, int(c)).auc for c in present]
    return float(np.mean(aucs))


def fingerprint(matrix: FeatureMatrix) -> dict:
    column_hash = hashlib.sha256(
        ",".join(matrix.column_names).encode("utf-8")
    ).hexdigest()[:16]
    return {"rows": int(matrix.labels.size), "column_hash": column_hash}


def resolve_model_names(model_names) -> list[str]:
    if model_names == "all" or model_names is None:
        return list(MODEL_NAMES)
    names = list(model_names)
    unknown = [n for n in names if n not in MODEL_NAMES]
    if unknown:
        raise ValueError(f"unknown model name(s): {', '.join(unknown)}")
    return names


def _sort_key(report: EvalReport):
    if report.status != "ok":
        return (1, 0.0, 0.0, report.model)
    return (0, -report.accuracy, -report.balanced_accuracy, report.model)


# rendering -------------------------------------------------------------------

_TABLE_COLUMNS = [
    "Model",
    "Accuracy",
    "Balanced Accuracy",
    "ROC AUC",
    "F1 Score",
    "Time Taken",
]


def render(leaderboard: Leaderboard, fmt: str = "table") -> str:
    """Serialize a leaderboard as an aligned table, CSV, or versioned JSON."""
    if fmt == "table":
        return _render_table(leaderboard)
    if fmt == "csv":
        return _render_csv(leaderboard)
    if fmt == "json":
        return json.dumps(to_json_dict(leaderboard), indent=2)
    raise ValueError(f"unknown format {fmt!r}")


def _render_table(leaderboard: Leaderboard) -> str:
    rows = []
    for r in leaderboard.reports:
        if r.status != "ok":
            rows.append([r.model, r.status, "", "", "", ""])
            continue
        rows.append(
            [
                r.model,
                f"{r.accuracy:.2f}",
                f"{r.balanced_accuracy:.2f}",
                f"{r.roc_auc_macro:.2f}",
                f"{r.f1_weighted:.2f}",
                f"{r.time_taken_s:.2f}",
            ]
        )
    widths = [
        max(len(_TABLE_COLUMNS[i]), *(len(row[i]) for row in rows), 0)
        if rows
        else len(_TABLE_COLUMNS[i])
        for i in range(len(_TABLE_COLUMNS))
    ]
    lines = [
        "  ".join(
            name.ljust(widths[i]) if i == 0 else name.rjust(widths[i])
            for i, name in enumerate(_TABLE_COLUMNS)
        )
    ]
    for row in rows:
        lines.append(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            )
        )
    return "\n".join(lines) + "\n"


def _render_csv(leaderboard: Leaderboard) -> str:
    import csv as _csv
    import io as _io

    buffer = _io.StringIO()
    writer = _csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [
            "model",
            "status",
            "accuracy",
            "balanced_accuracy",
            "roc_auc_macro",
            "f1_weighted",
            "f1_macro",
            "time_taken_s",
            "cv_error",
        ]
    )
    for r in leaderboard.reports:
        writer.writerow(
            [
                r.model,
                r.status,
                _fmt(r.accuracy),
                _fmt(r.balanced_accuracy),
                _fmt(r.roc_auc_macro),
                _fmt(r.f1_weighted),
                _fmt(r.f1_macro),
                _fmt(r.time_taken_s),
                _fmt(r.cv.cv_error) if r.cv is not None else "",
            ]
        )
    return buffer.getvalue()


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def to_json_dict(leaderboard: Leaderboard) -> dict:
    reports = []
    for r in leaderboard.reports:
        entry = {
            "model": r.model,
            "status": r.status,
            "accuracy": r.accuracy,
            "balanced_accuracy": r.balanced_accuracy,
            "roc_auc_macro": r.roc_auc_macro,
            "f1_weighted": r.f1_weighted,
            "f1_macro": r.f1_macro,
            "time_taken_s": r.time_taken_s,
            "confusion": r.confusion,
        }
        if r.cv is not None:
            entry["cv"] = {
                "k": r.cv.k,
                "fold_errors": r.cv.fold_errors,
                "cv_error": r.cv.cv_error,
            }
        reports.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": leaderboard.metadata,
        "reports": reports,
    }


def leaderboard_from_json(text: str) -> Leaderboard:
    """Parse the JSON rendering back into an equal Leaderboard."""
    document = json.loads(text)
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported leaderboard schema_version: {version!r}")
    reports = []
    for entry in document["reports"]:
        cv_doc = entry.get("cv")
        reports.append(
            EvalReport(
                model=entry["model"],
                status=entry["status"],
                accuracy=entry["accuracy"],
                balanced_accuracy=entry["balanced_accuracy"],
                roc_auc_macro=entry["roc_auc_macro"],
                f1_weighted=entry["f1_weighted"],
                f1_macro=entry["f1_macro"],
                time_taken_s=entry["time_taken_s"],
                confusion=entry["confusion"],
                cv=CVResult(**cv_doc) if cv_doc is not None else None,
            )
        )
    return Leaderboard(reports=reports, metadata=document["metadata"])
