"""Command-line interface.

Subcommands:
  test          run all three white-noise tests on one panel CSV
  size          run a null-hypothesis rejection-rate experiment
  power         run an alternative-hypothesis rejection-rate experiment
  power-theory  closed-form sum-test power for explicit (A0, A1)
  residual-test factor-regression residuals + sliding-window testing

Exit codes: 0 success, 2 bad configuration or usage, 3 bad input data,
4 filesystem failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, DataError, ParseError
from .factor import build_factor_data, ols_residuals, sliding_window_rates
from .harness import ExperimentConfig, ExperimentKind, emit_power_curve, emit_table, run_experiment
from .panel import read_panel_csv
from .power import PowerInputs, sum_power
from .statistics import run_all

__all__ = ["main"]


def _read_matrix_csv(path: str) -> np.ndarray:
    """Read a headerless numeric CSV as a 2-d array."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            parsed = []
            for col, cell in enumerate(row, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"could not parse {cell.strip()!r} as a number",
                        row=lineno, column=col,
                    ) from None
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path} contains no numeric rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"expected {width} fields, got {len(row)}", row=i + 1)
    out = np.array(rows, dtype=np.float64)
    if not np.isfinite(out).all():
        raise DataError(f"{path} contains non-finite values")
    return out


def _cmd_test(args) -> int:
    panel = read_panel_csv(args.input, header=args.header, center=args.center)
    report = run_all(panel, args.lags, args.alpha)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.csv_header())
        print(report.to_csv_row())
    return 0


def _load_config(args, kind: ExperimentKind) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json_file(
        args.config,
        seed_override=args.seed,
        workers_override=args.workers,
        out_override=args.out,
    )
    if cfg.kind is not kind:
        raise ConfigError(
            f'config "kind" is {cfg.kind.value!r} but the {kind.value} subcommand was invoked'
        )
    return cfg


def _cmd_size(args) -> int:
    cfg = _load_config(args, ExperimentKind.SIZE)
    if cfg.out_path is None:
        raise ConfigError('no output path: set "out" in the config or pass --out')
    results = run_experiment(cfg)
    emit_table(results, cfg.out_path, format=args.format)
    print(f"wrote {len(results)} cells to {cfg.out_path}")
    return 0


def _cmd_power(args) -> int:
    cfg = _load_config(args, ExperimentKind.POWER)
    if cfg.out_path is None:
        raise ConfigError('no output path: set "out" in the config or pass --out')
    results = run_experiment(cfg)
    if args.curve:
        emit_power_curve(results, cfg.out_path)
    else:
        emit_table(results, cfg.out_path, format=args.format)
    print(f"wrote {len(results)} cells to {cfg.out_path}")
    return 0


def _cmd_power_theory(args) -> int:
    a0 = _read_matrix_csv(args.a0)
    a1 = _read_matrix_csv(args.a1)
    inputs = PowerInputs(a0=a0, a1=a1, n=args.n, nu4=args.nu4, alpha=args.alpha)
    print(sum_power(inputs).to_json())
    return 0


def _cmd_residual_test(args) -> int:
    data = build_factor_data(
        args.returns,
        args.factors,
        already_excess=args.already_excess,
        check_dates=args.check_dates,
    )
    residuals = ols_residuals(data)
    summary = sliding_window_rates(residuals, args.window, args.lags, args.alpha)
    print(summary.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdwhite",
        description="High-dimensional white-noise tests, power theory, and Monte Carlo harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="test one panel CSV for white noise")
    p_test.add_argument("--input", required=True, help="panel CSV, rows = time points")
    p_test.add_argument("--K", dest="lags", type=int, required=True,
                        help="number of lags to test (1..n-2)")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--header", action="store_true",
                        help="first CSV row is a header")
    p_test.add_argument("--center", action="store_true",
                        help="subtract column means before testing")
    p_test.add_argument("--format", choices=("json", "csv"), default="json")
    p_test.set_defaults(func=_cmd_test)

    for name, helptext in (
        ("size", "null-hypothesis rejection rates over a config grid"),
        ("power", "alternative-hypothesis rejection rates over a config grid"),
    ):
        p_run = sub.add_parser(name, help=helptext)
        p_run.add_argument("--config", required=True, help="JSON experiment config")
        p_run.add_argument("--seed", type=int, default=None,
                           help="override the config master_seed")
        p_run.add_argument("--workers", type=int, default=None,
                           help="override the config worker count")
        p_run.add_argument("--out", default=None, help="override the config output path")
        p_run.add_argument("--format", choices=("csv", "markdown"), default="csv")
        if name == "power":
            p_run.add_argument("--curve", action="store_true",
                               help="emit a per-m power-curve CSV instead of the flat table")
            p_run.set_defaults(func=_cmd_power)
        else:
            p_run.set_defaults(func=_cmd_size)

    p_pt = sub.add_parser("power-theory", help="closed-form sum-test power under a one-lag MA")
    p_pt.add_argument("--a0", required=True, help="CSV of the lag-0 coefficient matrix")
    p_pt.add_argument("--a1", required=True, help="CSV of the lag-1 coefficient matrix")
    p_pt.add_argument("--n", type=int, required=True, help="sample size")
    p_pt.add_argument("--nu4", type=float, default=3.0, help="innovation fourth moment")
    p_pt.add_argument("--alpha", type=float, default=0.05)
    p_pt.set_defaults(func=_cmd_power_theory)

    p_rt = sub.add_parser("residual-test", help="factor-model residual white-noise testing")
    p_rt.add_argument("--returns", required=True, help="CSV: date column then asset columns")
    p_rt.add_argument("--factors", required=True,
                      help="CSV: date, market excess, SMB, HML, risk-free")
    p_rt.add_argument("--window", type=int, required=True, help="sliding window length")
    p_rt.add_argument("--K", dest="lags", type=int, required=True)
    p_rt.add_argument("--alpha", type=float, default=0.05)
    p_rt.add_argument("--already-excess", action="store_true",
                      help="returns are already in excess of the risk-free rate")
    p_rt.add_argument("--check-dates", action="store_true",
                      help="require date strings to match row by row")
    p_rt.set_defaults(func=_cmd_residual_test)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
