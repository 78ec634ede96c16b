"""Command-line entry point.

Commands:
    pcaforest run <config> [--set SECTION.KEY=VALUE ...]
    pcaforest evaluate <model-file> <csv>
    pcaforest roc-plot <roc-csv> [-o <svg>]

Exit codes: 0 success, 1 config or usage error, 2 data error (unreadable
or malformed inputs), 3 numerical failure during training.

The PCAFOREST_OUTPUT_DIR environment variable overrides the configured
output directory; an explicit --set run.output_dir=... beats both.
"""

from __future__ import annotations

import argparse
import os
import sys

from .exceptions import ConfigError, DataError, NumericalError

OUTPUT_DIR_ENV = "PCAFOREST_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse's default usage-error exit code is 2; keep 2 for data errors."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcaforest", description="Train and evaluate the classifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser(
        "run", parents=[], help="execute every experiment cell of a config file"
    )
    p_run.add_argument("config", help="path to the INI config")
    p_run.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config setting (repeatable)",
    )

    p_eval = sub.add_parser("evaluate", help="score a saved model against a labeled CSV")
    p_eval.add_argument("model_file", help="file written by a run (models/*.model)")
    p_eval.add_argument("csv", help="labeled CSV with the columns the model was trained on")

    p_plot = sub.add_parser("roc-plot", help="render a ROC CSV as an SVG")
    p_plot.add_argument("roc_csv", help="file written by a run (roc/*.csv)")
    p_plot.add_argument(
        "-o",
        "--output",
        default=None,
        help="output SVG path (default: the input path with an .svg suffix)",
    )
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    from .experiment import load_config, run

    overrides = list(args.overrides)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        overrides.insert(0, f"run.output_dir={env_dir}")
    config = load_config(args.config, overrides=overrides)
    report = run(config)
    print(f"wrote {len(report.cells)} cells to {report.output_dir}")
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    from .data import load_csv
    from .metrics import confusion, format_report_table, metrics_report, roc_curve
    from .model_io import load_bundle

    bundle = load_bundle(args.model_file)
    ds = load_csv(args.csv, label_column=bundle.label_column, drop_columns=bundle.drop_columns)
    try:
        scores = bundle.scores(ds.features)
        predictions = bundle.predictions(ds.features)
    except ValueError as exc:
        raise DataError(f"{args.csv} does not match the model: {exc}") from exc

    cm = confusion(ds.labels, predictions, positive_label=bundle.positive_label)
    print(f"samples {cm.total}")
    print(f"confusion tp={cm.tp} fp={cm.fp} tn={cm.tn} fn={cm.fn}")
    print(format_report_table({bundle.kind: metrics_report(cm)}), end="")
    try:
        print(f"AUC {roc_curve(scores, ds.labels, bundle.positive_label).auc:.6f}")
    except ValueError:
        print("AUC undefined (labels are single-class)")
    return EXIT_OK


def _cmd_roc_plot(args: argparse.Namespace) -> int:
    from .metrics import roc_from_csv
    from .plots import emit_roc_plot

    try:
        with open(args.roc_csv, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read ROC file {args.roc_csv}: {exc}") from exc
    try:
        curve = roc_from_csv(text)
    except ValueError as exc:
        raise DataError(f"malformed ROC file {args.roc_csv}: {exc}") from exc

    output = args.output
    if output is None:
        root, _ = os.path.splitext(args.roc_csv)
        output = root + ".svg"
    emit_roc_plot(curve, output)
    print(f"wrote {output}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "evaluate": _cmd_evaluate, "roc-plot": _cmd_roc_plot}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
