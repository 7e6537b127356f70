"""Command-line entry point: inspect, correlate, bench, roc, train, predict, synth.

Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 model error.
The --data flag falls back to the UGRANSOME_DATA environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from flowbench.bench import BenchOptions, render, resolve_model_names, run_benchmark
from flowbench.classifiers import (
    ModelFormatError,
    NotFittedError,
    load_model,
    make_model,
    save_model,
)
from flowbench.features import (
    encode_records,
    fit_transform,
    k_folds,
    stratified_split,
)
from flowbench.flow_data import (
    RowError,
    SchemaError,
    ThreatClass,
    parse_dataset,
    records_to_csv,
    summarize,
)
from flowbench.metrics import correlation_to_csv, pearson_matrix, roc_curves, roc_to_csv
from flowbench.synth import generate_records

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_MODEL = 3

_CLASS_TOKENS = [cls.token for cls in ThreatClass]


@dataclass
class RunConfig:
    """Validated flag bundle shared by the data-driven subcommands."""

    data: str
    seed: int
    test_fraction: float
    folds: int
    models: list[str]
    scale: bool
    output: str | None
    format: str
    workers: int = 1


class _UsageError(Exception):
    pass


class _ModelError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="flowbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_data(p):
        p.add_argument(
            "--data",
            default=os.environ.get("UGRANSOME_DATA"),
            help="input CSV path (default: $UGRANSOME_DATA)",
        )

    def add_split(p):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--test-fraction", type=float, default=0.2)
        p.add_argument("--folds", type=int, default=0, help="0 = holdout only")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--no-scale", action="store_true", help="skip z-score scaling")

    def add_output(p, formats):
        p.add_argument("--output", default=None, help="write here instead of stdout")
        p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("inspect", help="dataset summary")
    add_data(p)
    add_output(p, ["text", "json"])
    p.set_defaults(handler=_cmd_inspect)

    p = sub.add_parser("correlate", help="feature/label Pearson correlation CSV")
    add_data(p)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=_cmd_correlate)

    p = sub.add_parser("bench", help="train and rank the model portfolio")
    add_data(p)
    add_split(p)
    p.add_argument("--models", default="all", help="comma-separated names or 'all'")
    add_output(p, ["table", "csv", "json"])
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("roc", help="per-class ROC curve points for one model")
    add_data(p)
    add_split(p)
    p.add_argument("--model", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=_cmd_roc)

    p = sub.add_parser("train", help="fit one model on the whole file and save it")
    add_data(p)
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--no-scale", action="store_true")
    p.add_argument("--output", required=True, help="model JSON path")
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("predict", help="apply a saved model to a CSV")
    add_data(p)
    p.add_argument("--model-file", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("synth", help="generate schema-conformant synthetic data")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--signal-strength", type=float, default=1.0)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_ModelError, ModelFormatError, NotFittedError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (SchemaError, RowError, OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _load_records(path):
    if not path:
        raise _UsageError("--data is required (or set UGRANSOME_DATA)")
    if not Path(path).is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return parse_dataset(path)


def _run_config(args) -> RunConfig:
    if not 0.0 < args.test_fraction < 1.0:
        raise _UsageError("--test-fraction must be in (0, 1)")
    if args.folds != 0 and args.folds < 2:
        raise _UsageError("--folds must be 0 or at least 2")
    if args.workers < 1:
        raise _UsageError("--workers must be at least 1")
    models_arg = getattr(args, "models", "all")
    if models_arg == "all":
        models = resolve_model_names("all")
    else:
        try:
            models = resolve_model_names(
                [m.strip() for m in models_arg.split(",") if m.strip()]
            )
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        if not models:
            raise _UsageError("--models must name at least one model")
    return RunConfig(
        data=args.data,
        seed=args.seed,
        test_fraction=args.test_fraction,
        folds=args.folds,
        models=models,
        scale=not args.no_scale,
        output=args.output,
        format=getattr(args, "format", "table"),
        workers=args.workers,
    )


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_inspect(args) -> int:
    summary = summarize(_load_records(args.data))
    if args.format == "json":
        _emit(json.dumps(summary.to_json_dict(), indent=2), args.output)
        return EXIT_OK
    lines = [
        f"{summary.row_count} rows",
        f"{len(summary.distinct_counts)} data columns",
        f"{summary.family_count} families",
        "classes:",
    ]
    for cls, count in summary.class_counts.items():
        lines.append(f"  {cls.token}: {count}")
    lines.append("families:")
    for family, count in summary.family_counts.items():
        lines.append(f"  {family}: {count}")
    lines.append("distinct values per column:")
    for column, count in summary.distinct_counts.items():
        lines.append(f"  {column}: {count}")
    _emit("\n".join(lines), args.output)
    return EXIT_OK


def _cmd_correlate(args) -> int:
    records = _load_records(args.data)
    matrix = fit_transform(records, scale=False)
    _emit(correlation_to_csv(pearson_matrix(matrix)), args.output)
    return EXIT_OK


def _cmd_bench(args) -> int:
    config = _run_config(args)
    records = _load_records(config.data)
    matrix = fit_transform(records, scale=config.scale)
    plan = stratified_split(matrix.labels, config.test_fraction, config.seed)
    if config.folds >= 2:
        plan.fold_assignment = k_folds(matrix.labels, config.folds, config.seed)
    options = BenchOptions(
        seed=config.seed,
        test_fraction=config.test_fraction,
        folds=config.folds,
        workers=config.workers,
    )
    leaderboard = run_benchmark(matrix, plan, config.models, options)
    _emit(render(leaderboard, config.format), config.output)
    return EXIT_OK


def _cmd_roc(args) -> int:
    config = _run_config(args)
    records = _load_records(config.data)
    matrix = fit_transform(records, scale=config.scale)
    plan = stratified_split(matrix.labels, config.test_fraction, config.seed)
    try:
        model = make_model(args.model, seed=config.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    rows = matrix.rows_for(model)
    try:
        model.fit(rows[plan.train_indices], matrix.labels[plan.train_indices])
        scores = model.predict_scores(rows[plan.test_indices])
    except Exception as exc:
        raise _ModelError(str(exc)) from exc
    curve = roc_curves(matrix.labels[plan.test_indices], scores)
    _emit(roc_to_csv(curve, _CLASS_TOKENS), args.output)
    return EXIT_OK


def _cmd_train(args) -> int:
    records = _load_records(args.data)
    matrix = fit_transform(records, scale=not args.no_scale)
    try:
        model = make_model(args.model, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    try:
        model.fit(matrix.rows_for(model), matrix.labels)
        save_model(
            args.output,
            model,
            encoders=matrix.encoders,
            scaler=matrix.scaler,
            column_names=matrix.column_names,
        )
    except (OSError, ValueError, RuntimeError) as exc:
        raise _ModelError(str(exc)) from exc
    print(f"saved {args.model} to {args.output} ({len(records)} training rows)")
    return EXIT_OK


def _cmd_predict(args) -> int:
    artifact = load_model(args.model_file)
    records = _load_records(args.data)
    rows = encode_records(records, artifact.encoders)
    if artifact.model.needs_scaling and artifact.scaler is not None:
        rows = artifact.scaler.apply(rows)
    try:
        predicted = artifact.model.predict(rows)
    except Exception as exc:
        raise _ModelError(str(exc)) from exc
    lines = ["row,prediction_code,prediction"]
    for i, code in enumerate(predicted):
        lines.append(f"{i},{int(code)},{ThreatClass(int(code)).token}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_synth(args) -> int:
    if args.rows < 1:
        raise _UsageError("--rows must be at least 1")
    if not 0.0 <= args.signal_strength <= 1.0:
        raise _UsageError("--signal-strength must be in [0, 1]")
    records = generate_records(args.rows, args.seed, args.signal_strength)
    _emit(records_to_csv(records), args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
