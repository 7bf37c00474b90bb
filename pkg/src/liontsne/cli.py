"""Command-line surface: fit, map, select-power, eval, plot."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from . import engine, metrics, model_io
from .core import DataError, LionConfig, NumericError
from .power_select import select_power

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_labels(path: str) -> List[str]:
    with open(path) as f:
        labels = [line.strip() for line in f if line.strip()]
    if labels and labels[0].lower() in ("label", "kind"):
        labels = labels[1:]
    if not labels:
        raise DataError(f"{path}: no labels")
    return labels


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--grid expects lo:hi:step, got {text!r}")
    try:
        return tuple(float(v) for v in parts)
    except ValueError:
        raise _UsageError(f"--grid expects numeric lo:hi:step, got {text!r}") from None


def _power_arg(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise _UsageError(f"--power expects 'auto' or a number, got {text!r}") from None


def _ry_percentile_arg(text: str):
    if text == "max":
        return "max"
    try:
        return float(text)
    except ValueError:
        raise _UsageError(
            f"--ry-percentile expects 'max' or a percent, got {text!r}"
        ) from None


def build_parser() -> _Parser:
    parser = _Parser(prog="lion-tsne", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a model from training CSVs")
    p_fit.add_argument("--x", required=True, help="training data CSV (N x K)")
    p_fit.add_argument("--y", required=True, help="training embedding CSV (N x d)")
    p_fit.add_argument("--rx-percentile", type=float, default=99.0)
    p_fit.add_argument("--power", type=_power_arg, default="auto")
    p_fit.add_argument("--k-coef", type=float, default=2.0)
    p_fit.add_argument("--ry-percentile", type=_ry_percentile_arg, default="max")
    p_fit.add_argument("--rclose-percentile", type=float, default=10.0)
    p_fit.add_argument("--grid", type=_parse_grid, default=(0.5, 50.0, 0.5),
                       help="power search grid lo:hi:step")
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--out", required=True, help="output model JSON")

    p_map = sub.add_parser("map", help="map new samples into the embedding")
    p_map.add_argument("--model", required=True)
    p_map.add_argument("--input", required=True, help="new samples CSV (M x K)")
    p_map.add_argument("--output", required=True, help="mapped embeddings CSV")
    p_map.add_argument("--seed", type=int, default=None)
    p_map.add_argument("--kinds", default=None,
                       help="also write per-sample outcome kinds to this CSV")

    p_sel = sub.add_parser("select-power", help="cross-validation power search")
    p_sel.add_argument("--x", required=True)
    p_sel.add_argument("--y", required=True)
    p_sel.add_argument("--rx-percentile", type=float, default=99.0)
    p_sel.add_argument("--grid", type=_parse_grid, default=(0.5, 50.0, 0.5))
    p_sel.add_argument("--out", required=True, help="curve CSV (p, error)")
    p_sel.add_argument("--figure", default=None, help="also render the curve figure")

    p_eval = sub.add_parser("eval", help="run an evaluation test")
    p_eval.add_argument("test", choices=["attribution", "outliers"])
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--input", required=True)
    p_eval.add_argument("--labels", default=None, help="test labels, one per line")
    p_eval.add_argument("--train-labels", default=None, help="training labels, one per line")
    p_eval.add_argument("--kl", action="store_true", help="compute KL divergence per sample")
    p_eval.add_argument("--perplexity", type=float, default=30.0)
    p_eval.add_argument("--k", type=int, default=10)
    p_eval.add_argument("--seed", type=int, default=None)
    p_eval.add_argument("--report", required=True, help="per-sample report CSV")
    p_eval.add_argument("--json", default=None, help="aggregate metrics JSON")
    p_eval.add_argument("--figure", default=None, help="also render the report figure")

    p_plot = sub.add_parser("plot", help="render an SVG scatter of mapped outcomes")
    p_plot.add_argument("--model", required=True)
    p_plot.add_argument("--outcomes", required=True, help="mapped embeddings CSV")
    p_plot.add_argument("--kinds", default=None, help="outcome kinds CSV from map")
    p_plot.add_argument("--no-radius-circles", action="store_true")
    p_plot.add_argument("--out", required=True, help="output SVG")

    return parser


def _cmd_fit(args) -> int:
    x, _ = model_io.load_matrix_csv(args.x)
    y, _ = model_io.load_matrix_csv(args.y)
    config = LionConfig(
        rx_percentile=args.rx_percentile,
        ry_coefficient=args.k_coef,
        ry_percentile=args.ry_percentile,
        rclose_percentile=args.rclose_percentile,
        power=args.power,
        power_search_grid=args.grid,
        seed=args.seed,
    )
    model = engine.fit(x, y, config)
    model_io.save_model(model, args.out)
    print(f"fitted: N={x.shape[0]} K={x.shape[1]} d={y.shape[1]} "
          f"r_x={model.r_x:.6g} r_y={model.r_y:.6g} p={model.power:g}")
    return EXIT_OK


def _cmd_map(args) -> int:
    model = model_io.load_model(args.model)
    xs, _ = model_io.load_matrix_csv(args.input)
    outcomes = engine.map_batch(model, xs, seed=args.seed)
    ys = np.array([o.y for o in outcomes])
    model_io.write_matrix_csv(args.output, ys)
    if args.kinds:
        lines = "kind\n" + "\n".join(o.kind.value for o in outcomes) + "\n"
        model_io._atomic_write(args.kinds, lines)
    print(f"mapped {len(outcomes)} samples")
    return EXIT_OK


def _cmd_select_power(args) -> int:
    x, _ = model_io.load_matrix_csv(args.x)
    y, _ = model_io.load_matrix_csv(args.y)
    from .neighbors import NeighborIndex
    from .core import percentile

    r_x = percentile(NeighborIndex(x).nn_distances(), args.rx_percentile)
    curve = select_power(r_x, x, y, args.grid)
    model_io.write_curve_csv(args.out, curve.grid, curve.errors)
    if args.figure:
        from .figures import power_curve_figure

        power_curve_figure(curve, args.figure)
    print(f"best p = {curve.best_p:g} (r_x={r_x:.6g}, skipped {curve.skipped_count})")
    return EXIT_OK


def _cmd_eval(args) -> int:
    model = model_io.load_model(args.model)
    xs, _ = model_io.load_matrix_csv(args.input)
    if args.test == "attribution":
        if not args.labels or not args.train_labels:
            raise _UsageError("eval attribution requires --labels and --train-labels")
        labels_test = _read_labels(args.labels)
        labels_train = _read_labels(args.train_labels)
        report = metrics.run_attribution_test(
            model, xs, labels_test, labels_train,
            k=args.k, seed=args.seed, compute_kl=args.kl, perplexity=args.perplexity,
        )
    else:
        report = metrics.run_outlier_test(model, xs, seed=args.seed)
    model_io.write_report_csv(args.report, report)
    if args.json:
        model_io.write_report_json(args.json, report)
    if args.figure:
        from .figures import report_figure

        report_figure(report, args.figure)
    for key, value in sorted(report.aggregates.items()):
        print(f"{key}: {value}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    from .core import MapOutcome, OutcomeKind

    model = model_io.load_model(args.model)
    ys, _ = model_io.load_matrix_csv(args.outcomes)
    if args.kinds:
        try:
            kinds = [OutcomeKind(k) for k in _read_labels(args.kinds)]
        except ValueError as exc:
            raise DataError(f"{args.kinds}: {exc}") from None
        if len(kinds) != ys.shape[0]:
            raise DataError("kinds row count does not match outcomes")
    else:
        kinds = [OutcomeKind.INTERPOLATED] * ys.shape[0]
    outcomes = [MapOutcome(y=row, kind=kind) for row, kind in zip(ys, kinds)]
    model_io.render_svg(
        model.y_train, outcomes, model.r_y, args.out,
        show_radius_circles=not args.no_radius_circles,
    )
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {
    "fit": _cmd_fit,
    "map": _cmd_map,
    "select-power": _cmd_select_power,
    "eval": _cmd_eval,
    "plot": _cmd_plot,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
