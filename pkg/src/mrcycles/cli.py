"""Command-line front end.

Subcommands cover the whole pipeline: ``ingest`` turns raw trace files into a
profile dataset, ``fit`` trains the quadratic model, ``predict`` evaluates it,
``eval`` scores it against observed records, ``scale`` fits and applies the
input-size line, ``synth`` fabricates datasets or traces from a ground truth,
and ``report`` renders stored evaluation reports as a table.

Every output file is written to a temporary sibling and atomically renamed
into place, so a failing command never leaves a half-written file behind.
Given the same inputs, flags and seeds, every command produces identical
bytes (``fit`` accepts ``--created-utc`` to pin its one timestamp).
"""
from __future__ import annotations

import argparse
import os
import sys
import warnings
from dataclasses import replace
from pathlib import Path

from . import metrics, modelfile, profiles, scaling, synth, traces
from .regression import NegativePredictionWarning, fit, predict, residual_error


class CliError(Exception):
    """A failure the user can act on; rendered as ``error: ...`` exit 1."""


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    if not path.parent.exists():
        raise CliError(f"output directory {path.parent} does not exist")
    tmp = path.parent / f".{path.name}.tmp.{os.getpid()}"
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _read_dataset(path: str) -> profiles.ProfileDataset:
    try:
        return profiles.read_dataset_file(path)
    except profiles.DatasetFormatError as exc:
        raise CliError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc


def _read_model(path: str) -> modelfile.ModelDocument:
    try:
        return modelfile.read_model_file(path)
    except modelfile.ModelFileError as exc:
        raise CliError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc


def _predict_quietly(model, mappers: int, reducers: int) -> float:
    """predict() with the negative-surface warning routed to stderr."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NegativePredictionWarning)
        value = predict(model, mappers, reducers)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return value


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> None:
    records = []
    for path in sorted(args.input):
        try:
            job = traces.read_trace_file(path)
        except traces.TraceFormatError as exc:
            raise CliError(f"{path}: {exc}") from exc
        except (ValueError, OSError) as exc:
            raise CliError(f"{path}: {exc}") from exc
        records.append(traces.job_record_from_trace(job))
    dataset = profiles.ProfileDataset(args.application, tuple(records))
    _atomic_write(args.output, profiles.format_dataset(dataset))
    print(f"ingested {len(records)} trace file(s) -> {args.output}")


def cmd_fit(args) -> None:
    dataset = _read_dataset(args.input)
    aggregated = profiles.aggregate_repeats(dataset, method=args.agg)
    sizes = sorted({rec.input_size_bytes for rec in aggregated.records})
    if len(sizes) > 1:
        raise CliError(
            f"training records span multiple input sizes {sizes}; "
            "fit on one size and use 'scale' for the others"
        )
    model = fit(aggregated)
    doc = modelfile.ModelDocument(
        application=dataset.application,
        model=model,
        created_utc=args.created_utc or modelfile.utc_now_iso(),
        aggregation=args.agg,
    )
    _atomic_write(args.output, modelfile.format_model_json(doc))
    residual = residual_error(aggregated, model)
    print(
        f"fit {dataset.application}: {len(dataset)} records, "
        f"{len(aggregated)} configurations ({args.agg}), residual {residual:.6g}"
    )
    print(f"wrote {args.output}")


def cmd_predict(args) -> None:
    doc = _read_model(args.input)
    value = _predict_quietly(doc.model, args.mappers, args.reducers)
    if args.format == "json":
        print(
            f'{{"application": {_json_str(doc.application)}, '
            f'"mappers": {args.mappers}, "reducers": {args.reducers}, '
            f'"predicted_cycles": {value!r}}}'
        )
    else:
        print(
            f"{doc.application}: predicted cycles at "
            f"({args.mappers}, {args.reducers}) = {value!r}"
        )


def _json_str(text: str) -> str:
    import json

    return json.dumps(text)


def cmd_eval(args) -> None:
    doc = _read_model(args.model)
    dataset = _read_dataset(args.input)
    aggregated = profiles.aggregate_repeats(dataset, method=doc.aggregation or "mean")
    actual = [rec.total_cycles for rec in aggregated.records]
    predicted = [
        _predict_quietly(doc.model, rec.mappers, rec.reducers)
        for rec in aggregated.records
    ]
    report = metrics.evaluate(actual, predicted)
    rendered_json = metrics.report_to_json(report, dataset.application)
    if args.output:
        _atomic_write(args.output, rendered_json)
    if args.format == "json":
        print(rendered_json, end="")
    else:
        print(metrics.render_report_table([(dataset.application, report)]), end="")
        for name, why in report.notes.items():
            print(f"note {name}: {why}")
    if args.output:
        print(f"wrote {args.output}")


def cmd_scale(args) -> None:
    doc = _read_model(args.input)
    if args.data is None and args.size_bytes is None:
        raise CliError("nothing to do: pass --data to fit and/or --size-bytes to predict")

    if args.data is not None:
        dataset = _read_dataset(args.data)
        line = scaling.fit_scaling_from_dataset(
            dataset, through_origin=args.through_origin
        )
        doc = replace(doc, scaling=line)
        print(
            f"scaling line: slope {line.slope!r}, intercept {line.intercept!r}, "
            f"{line.fitted_points} points"
        )
        if args.output:
            _atomic_write(args.output, modelfile.format_model_json(doc))
            print(f"wrote {args.output}")
    elif args.output:
        raise CliError("--output without --data would rewrite the model unchanged")

    if args.size_bytes is not None:
        if args.mappers is None or args.reducers is None:
            raise CliError("--size-bytes needs --mappers and --reducers")
        if doc.scaling is None:
            raise CliError(
                "model has no scaling line; fit one first (scale --data ...)"
            )
        value = scaling.scale_prediction(
            doc.model, doc.scaling, args.mappers, args.reducers, args.size_bytes
        )
        if args.format == "json":
            print(
                f'{{"application": {_json_str(doc.application)}, '
                f'"mappers": {args.mappers}, "reducers": {args.reducers}, '
                f'"input_size_bytes": {args.size_bytes}, '
                f'"predicted_cycles": {value!r}}}'
            )
        else:
            print(
                f"{doc.application}: predicted cycles at ({args.mappers}, "
                f"{args.reducers}) for {args.size_bytes} bytes = {value!r}"
            )


def cmd_synth(args) -> None:
    truth = _read_truth(args.input)
    if args.seed is not None:
        truth = synth.with_seed(truth, args.seed)
    configs = profiles.training_grid(profiles.DEFAULT_TRAINING_GRID)

    if args.traces:
        out_dir = Path(args.output)
        out_dir.mkdir(parents=True, exist_ok=True)
        for m, r in configs:
            job = synth.generate_trace(
                truth, m, r, machines=args.machines, clock_hz=args.clock_hz
            )
            _atomic_write(out_dir / f"{truth.application}-m{m}-r{r}.csv",
                          traces.format_trace(job))
        print(f"wrote {len(configs)} trace file(s) under {out_dir}")
    else:
        dataset = synth.generate_dataset(
            truth, configs, args.repeats, input_size_bytes=args.size_bytes
        )
        _atomic_write(args.output, profiles.format_dataset(dataset))
        print(
            f"generated {len(dataset)} records "
            f"({len(configs)} configurations x {args.repeats}) -> {args.output}"
        )


def _read_truth(path: str) -> synth.GroundTruth:
    try:
        return synth.read_truth_file(path)
    except synth.TruthFileError as exc:
        raise CliError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc


def cmd_report(args) -> None:
    rows = []
    for path in args.input:
        try:
            name, report = metrics.report_from_json(Path(path).read_text(encoding="utf-8"))
        except (ValueError, OSError) as exc:
            raise CliError(f"{path}: {exc}") from exc
        rows.append((name, report))
    table = metrics.render_report_table(rows)
    if args.output:
        _atomic_write(args.output, table)
        print(f"wrote {args.output}")
    else:
        print(table, end="")


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrcycles",
        description="Profile MapReduce-style jobs in CPU cycles and predict "
        "the cost of unseen configurations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="convert trace files into a profile dataset")
    p.add_argument("--input", nargs="+", required=True, help="trace CSV files")
    p.add_argument("--output", required=True, help="dataset file to write")
    p.add_argument("--application", required=True, help="application name for the dataset")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="fit the quadratic cost surface to a dataset")
    p.add_argument("--input", required=True, help="dataset file")
    p.add_argument("--output", required=True, help="model JSON to write")
    p.add_argument("--agg", choices=profiles.AGGREGATION_METHODS, default="mean",
                   help="how to collapse repeated runs (default mean)")
    p.add_argument("--created-utc", default=None,
                   help="pin the model's creation timestamp (ISO-8601)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="evaluate the fitted surface at one configuration")
    p.add_argument("--input", required=True, help="model JSON")
    p.add_argument("--mappers", type=int, required=True)
    p.add_argument("--reducers", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score a model against observed records")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("--input", required=True, help="dataset file with observed records")
    p.add_argument("--output", default=None, help="also write the report as JSON")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scale", help="fit the input-size line and/or predict at a new size")
    p.add_argument("--input", required=True, help="model JSON")
    p.add_argument("--data", default=None,
                   help="dataset with records at two or more input sizes")
    p.add_argument("--through-origin", action="store_true",
                   help="pin the scaling intercept at zero")
    p.add_argument("--output", default=None, help="model JSON to write (with scaling)")
    p.add_argument("--mappers", type=int, default=None)
    p.add_argument("--reducers", type=int, default=None)
    p.add_argument("--size-bytes", type=int, default=None,
                   help="input size to predict for")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("synth", help="generate synthetic datasets or traces")
    p.add_argument("--input", required=True, help="ground-truth JSON")
    p.add_argument("--output", required=True,
                   help="dataset file, or a directory with --traces")
    p.add_argument("--seed", type=int, default=None, help="override the truth's seed")
    p.add_argument("--repeats", type=int, default=10,
                   help="runs per configuration (dataset mode, default 10)")
    p.add_argument("--size-bytes", type=int, default=None,
                   help="generate at this input size via the truth's size line")
    p.add_argument("--traces", action="store_true",
                   help="write one trace CSV per configuration instead of a dataset")
    p.add_argument("--machines", type=int, default=4,
                   help="machines per synthetic trace (default 4)")
    p.add_argument("--clock-hz", type=float, default=3.0e9,
                   help="machine clock for synthetic traces (default 3e9)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="render stored evaluation reports as a table")
    p.add_argument("--input", nargs="+", required=True, help="report JSON files")
    p.add_argument("--output", default=None, help="write the table instead of printing")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
