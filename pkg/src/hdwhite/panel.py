"""Time-series panels and their lagged sample moments.

A panel holds n observations of a p-dimensional series, one row per time
point.  Autocovariances use the fixed 1/n divisor at every lag and no
mean adjustment; an optional centering step at construction is the only
place the mean is ever touched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DegenerateColumnError, LagError, ParseError

# A column whose sample second moment falls at or below this cannot be
# autocorrelated; the offending column is named in the error.
DEGENERATE_VARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class TimeSeriesPanel:
    """Immutable n x p panel of observations, rows indexed by time."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DataError(f"panel must be 2-dimensional, got {values.ndim} dims")
        n, p = values.shape
        if n < 2:
            raise DataError(f"panel needs at least 2 rows, got {n}")
        if p < 1:
            raise DataError("panel needs at least 1 column")
        bad = np.argwhere(~np.isfinite(values))
        if bad.size:
            r, c = bad[0]
            raise DataError(
                f"panel contains a non-finite value at row {int(r) + 1}, column {int(c) + 1}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, center: bool = False) -> "TimeSeriesPanel":
        """Build a panel from array-like data.

        ``center=True`` subtracts each column's mean once, here and only
        here; all downstream moments use the stored values as-is.
        """
        values = np.asarray(values, dtype=np.float64)
        if center:
            if values.ndim != 2:
                raise DataError(f"panel must be 2-dimensional, got {values.ndim} dims")
            values = values - values.mean(axis=0, keepdims=True)
        return cls(values)


@dataclass(frozen=True)
class LaggedMatrix:
    """A p x p sample moment matrix together with the lag it was taken at."""

    lag: int
    values: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.values.shape[0]


def sample_autocovariance(panel: TimeSeriesPanel, lag: int) -> LaggedMatrix:
    """Lag-k sample autocovariance matrix with divisor n.

    Entry (i, j) is (1/n) * sum_{t=1}^{n-k} x[t+k, i] * x[t, j].  The
    divisor stays n for every lag, and no mean is subtracted.
    """
    x = panel.values
    n = panel.n
    if not isinstance(lag, (int, np.integer)):
        raise LagError(f"lag must be an integer, got {lag!r}")
    if lag < 0 or lag > n - 1:
        raise LagError(f"lag {lag} out of range [0, {n - 1}] for n={n}")
    if lag == 0:
        cov = x.T @ x / n
        cov = (cov + cov.T) / 2.0
    else:
        cov = x[lag:].T @ x[: n - lag] / n
    return LaggedMatrix(lag=int(lag), values=cov)


def sample_autocorrelation(panel: TimeSeriesPanel, lag: int) -> LaggedMatrix:
    """Lag-k sample autocorrelation matrix.

    The lag-k autocovariance is scaled on both sides by the inverse square
    roots of the lag-0 diagonal.  A diagonal entry at or below
    ``DEGENERATE_VARIANCE_TOL`` makes the scaling meaningless and raises,
    naming the first offending column (1-based).
    """
    cov0 = sample_autocovariance(panel, 0).values
    d = np.diagonal(cov0)
    low = np.nonzero(d <= DEGENERATE_VARIANCE_TOL)[0]
    if low.size:
        col = int(low[0]) + 1
        raise DegenerateColumnError(
            f"column {col} has sample variance {d[low[0]]:.3e} <= {DEGENERATE_VARIANCE_TOL:g}; "
            "autocorrelations are undefined"
        )
    inv_scale = 1.0 / np.sqrt(d)
    cov_k = sample_autocovariance(panel, lag).values
    corr = cov_k * np.outer(inv_scale, inv_scale)
    return LaggedMatrix(lag=int(lag), values=corr)


def read_panel_csv(path, header: bool = False, center: bool = False) -> TimeSeriesPanel:
    """Read a panel from CSV: one row per time point, p numeric columns.

    Decimal separator is '.', encoding UTF-8.  ``header=True`` skips the
    first row.  Malformed cells raise ParseError with 1-based row and
    column locations (row numbers count the header row if present).
    """
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, raw in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not raw or all(cell.strip() == "" for cell in raw):
                continue
            if width is None:
                width = len(raw)
            elif len(raw) != width:
                raise ParseError(
                    f"expected {width} columns, found {len(raw)}", row=lineno
                )
            parsed = []
            for colno, cell in enumerate(raw, start=1):
                text = cell.strip()
                try:
                    value = float(text)
                except ValueError:
                    raise ParseError(
                        f"could not parse {text!r} as a number", row=lineno, column=colno
                    ) from None
                if not np.isfinite(value):
                    raise ParseError(
                        f"non-finite value {text!r}", row=lineno, column=colno
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise DataError(f"no data rows found in {path}")
    return TimeSeriesPanel.from_array(np.array(rows, dtype=np.float64), center=center)


def write_panel_csv(panel: TimeSeriesPanel, path, header: bool = False) -> None:
    """Write a panel in the format ``read_panel_csv`` accepts."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"x{j + 1}" for j in range(panel.p)])
        for row in panel.values:
            writer.writerow([repr(float(v)) for v in row])
