"""Three-factor regression residuals and sliding-window testing.

Each asset's excess return is regressed on an intercept plus the three
classic factors (market excess, size, value); the per-asset residuals
form a panel that is then white-noise tested on every sliding window of
a chosen length, summarizing how often each test rejects.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ConfigError, DataError, ParseError
from .panel import TimeSeriesPanel
from .statistics import run_all

__all__ = [
    "FactorData",
    "SlidingWindowSummary",
    "read_returns_csv",
    "read_factors_csv",
    "build_factor_data",
    "ols_residuals",
    "sliding_window_rates",
]

RANK_TOL = 1e-10
MIN_ROWS = 10
FACTOR_COLUMNS = ("market_excess", "smb", "hml")


@dataclass(frozen=True)
class FactorData:
    """Aligned excess returns and factor observations."""

    excess_returns: np.ndarray = field(repr=False)
    factors: np.ndarray = field(repr=False)
    dates: tuple[str, ...] | None = None
    asset_names: tuple[str, ...] | None = None

    def __post_init__(self):
        y = np.array(self.excess_returns, dtype=np.float64)
        f = np.array(self.factors, dtype=np.float64)
        if y.ndim != 2:
            raise DataError(f"excess returns must be 2-d, got {y.ndim}-d")
        if f.ndim != 2 or f.shape[1] != 3:
            raise DataError(f"factors must be T x 3, got shape {f.shape}")
        if y.shape[0] != f.shape[0]:
            raise DataError(
                f"returns and factors must have equal row counts, got "
                f"{y.shape[0]} and {f.shape[0]}"
            )
        if y.shape[0] < MIN_ROWS:
            raise DataError(f"need at least {MIN_ROWS} rows, got {y.shape[0]}")
        if not np.isfinite(y).all():
            raise DataError("excess returns contain non-finite values")
        if not np.isfinite(f).all():
            raise DataError("factors contain non-finite values")
        for j in range(3):
            if float(np.var(f[:, j])) == 0.0:
                raise DataError(
                    f"factor column {FACTOR_COLUMNS[j]} has zero variance"
                )
        if self.dates is not None and len(self.dates) != y.shape[0]:
            raise DataError(
                f"got {len(self.dates)} dates for {y.shape[0]} observation rows"
            )
        if self.asset_names is not None and len(self.asset_names) != y.shape[1]:
            raise DataError(
                f"got {len(self.asset_names)} asset names for {y.shape[1]} assets"
            )
        y.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "excess_returns", y)
        object.__setattr__(self, "factors", f)

    @property
    def num_periods(self) -> int:
        return self.excess_returns.shape[0]

    @property
    def num_assets(self) -> int:
        return self.excess_returns.shape[1]


@dataclass(frozen=True)
class SlidingWindowSummary:
    """Rejection-rate summary over all length-n sliding windows."""

    window_length: int
    lags: int
    alpha: float
    num_windows: int
    rate_max: float
    rate_sum: float
    rate_fc: float

    def __post_init__(self):
        if self.num_windows < 1:
            raise ConfigError(f"need at least one window, got {self.num_windows}")
        for name in ("rate_max", "rate_sum", "rate_fc"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {r}")

    def to_dict(self) -> dict:
        return {
            "window_length": self.window_length,
            "K": self.lags,
            "alpha": self.alpha,
            "num_windows": self.num_windows,
            "rate_max": self.rate_max,
            "rate_sum": self.rate_sum,
            "rate_fc": self.rate_fc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _read_rows(path: str) -> tuple[list[str], list[list[str]]]:
    """Read a headed CSV, returning (header, data rows), skipping blanks."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = []
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if header is None:
                header = [cell.strip() for cell in row]
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}", row=lineno
                )
            rows.append(row)
    if header is None:
        raise DataError(f"{path} is empty")
    if not rows:
        raise DataError(f"{path} has a header but no data rows")
    return header, rows


def _parse_float(cell: str, lineno: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"could not parse {cell.strip()!r} as a number", row=lineno, column=col
        ) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite value {cell.strip()!r}", row=lineno, column=col)
    return value


def read_returns_csv(path: str) -> tuple[list[str], list[str], np.ndarray]:
    """Read a returns file: a date column then one column per asset.

    Returns (dates, asset names from the header, T x p values).
    """
    header, rows = _read_rows(path)
    if len(header) < 2:
        raise DataError(f"{path} needs a date column plus at least one asset column")
    dates = [row[0].strip() for row in rows]
    values = np.empty((len(rows), len(header) - 1))
    for i, row in enumerate(rows):
        for j, cell in enumerate(row[1:], start=2):
            values[i, j - 2] = _parse_float(cell, i + 2, j)
    return dates, header[1:], values


def read_factors_csv(path: str) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Read a factors file: date, market excess, SMB, HML, risk-free.

    Returns (dates, T x 3 factor matrix, length-T risk-free vector).
    """
    header, rows = _read_rows(path)
    if len(header) != 5:
        raise DataError(
            f"{path} must have exactly 5 columns "
            f"(date, market excess, SMB, HML, risk-free), got {len(header)}"
        )
    dates = [row[0].strip() for row in rows]
    values = np.empty((len(rows), 4))
    for i, row in enumerate(rows):
        for j, cell in enumerate(row[1:], start=2):
            values[i, j - 2] = _parse_float(cell, i + 2, j)
    return dates, values[:, :3], values[:, 3]


def build_factor_data(
    returns_path: str,
    factors_path: str,
    already_excess: bool = False,
    check_dates: bool = False,
) -> FactorData:
    """Load and align the two CSVs into a FactorData.

    Unless ``already_excess`` is set, the risk-free column is subtracted
    from every asset return.  Rows are aligned by order; ``check_dates``
    additionally requires the date strings to agree row by row.
    """
    r_dates, names, returns = read_returns_csv(returns_path)
    f_dates, factors, risk_free = read_factors_csv(factors_path)
    if len(r_dates) != len(f_dates):
        raise DataError(
            f"row-count mismatch: {returns_path} has {len(r_dates)} data rows, "
            f"{factors_path} has {len(f_dates)}"
        )
    if check_dates:
        for i, (a, b) in enumerate(zip(r_dates, f_dates)):
            if a != b:
                raise DataError(
                    f"date mismatch at data row {i + 1}: {a!r} vs {b!r}"
                )
    if not already_excess:
        returns = returns - risk_free[:, None]
    return FactorData(
        excess_returns=returns,
        factors=factors,
        dates=tuple(r_dates),
        asset_names=tuple(names),
    )


def ols_residuals(data: FactorData) -> TimeSeriesPanel:
    """Per-asset least squares on [1, market excess, SMB, HML].

    All assets share the design matrix, so one QR factorization serves
    every regression; the returned panel holds the T x p residuals.
    """
    t = data.num_periods
    design = np.column_stack([np.ones(t), data.factors])
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diagonal(r))
    if diag.min() <= RANK_TOL * diag.max():
        names = ("intercept",) + FACTOR_COLUMNS
        j = int(np.argmin(diag))
        raise DataError(
            f"design matrix is rank deficient (column {names[j]} is numerically "
            f"dependent on the others)"
        )
    coef = solve_triangular(r, q.T @ data.excess_returns)
    residuals = data.excess_returns - design @ coef
    return TimeSeriesPanel(residuals)


def sliding_window_rates(
    panel: TimeSeriesPanel, window: int, lags: int, alpha: float = 0.05
) -> SlidingWindowSummary:
    """Test every length-``window`` sliding window of the panel.

    Window starts run over t = 1..T-window (so there are exactly
    T-window windows), and each rate is the fraction of windows whose
    test rejects at level alpha.
    """
    t = panel.n
    if window < MIN_ROWS:
        raise ConfigError(f"window length must be at least {MIN_ROWS}, got {window}")
    if window >= t:
        raise ConfigError(
            f"window length must be shorter than the panel ({t} rows), got {window}"
        )
    num_windows = t - window
    counts = [0, 0, 0]
    for start in range(num_windows):
        piece = TimeSeriesPanel(panel.values[start : start + window])
        report = run_all(piece, lags, alpha)
        counts[0] += int(report.reject_max)
        counts[1] += int(report.reject_sum)
        counts[2] += int(report.reject_fc)
    return SlidingWindowSummary(
        window_length=window,
        lags=lags,
        alpha=alpha,
        num_windows=num_windows,
        rate_max=counts[0] / num_windows,
        rate_sum=counts[1] / num_windows,
        rate_fc=counts[2] / num_windows,
    )
