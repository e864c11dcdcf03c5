"""The three white-noise tests for a high-dimensional panel.

- Max test: largest root-n scaled absolute entry of the lag-1..K sample
  autocorrelation matrices, squared and recentred so its null limit is an
  extreme-value law.  Powerful against a few large autocorrelations.
- Sum test: a U-statistic aggregating lagged inner products of the
  observations, studentized so its null limit is standard normal.
  Powerful against many small autocorrelations.
- Fisher combination: -2 log of each test's p-value, summed; null limit
  chi-square with 4 degrees of freedom.  Hedges between the two regimes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .distributions import chi2_4_sf, gumbel_sf, std_normal_sf
from .errors import ConfigError, DataError
from .panel import TimeSeriesPanel, sample_autocorrelation

# Guard against log(0) when a p-value underflows to exactly zero.
P_VALUE_FLOOR = 1e-300


@dataclass(frozen=True)
class MaxResult:
    """Outcome of the max test."""

    t_max: float      # sqrt(n) * max_{1<=k<=K} max_{i,j} |corr_ij(k)|
    gumbel_y: float   # t_max^2 - 2 log(K p^2) + log log(K p^2)
    p_value: float
    K: int
    p_dim: int


@dataclass(frozen=True)
class SumResult:
    """Outcome of the sum test."""

    t_sum: float
    trace_sq_hat: float   # U-statistic estimate of tr(Sigma^2)
    sigma_s_hat: float    # plug-in null standard deviation of t_sum
    z_score: float
    p_value: float
    K: int


def _check_lags(n: int, lags: int) -> None:
    if not isinstance(lags, (int, np.integer)):
        raise ConfigError(f"number of lags must be an integer, got {lags!r}")
    if lags < 1 or lags > n - 2:
        raise ConfigError(f"number of lags {lags} out of range [1, {n - 2}] for n={n}")


def max_test(panel: TimeSeriesPanel, lags: int) -> MaxResult:
    """Max test over lags 1..lags.  Lag 0 never enters.

    The max runs over all p^2 entries of each autocorrelation matrix,
    diagonal included.  Requires p >= 2 so the recentring constants are
    defined.
    """
    n, p = panel.n, panel.p
    _check_lags(n, lags)
    if p < 2:
        raise ConfigError(f"max test needs at least 2 columns, got p={p}")
    largest = 0.0
    for k in range(1, lags + 1):
        corr = sample_autocorrelation(panel, k).values
        largest = max(largest, float(np.abs(corr).max()))
    t_max = math.sqrt(n) * largest
    log_np = math.log(lags * p * p)
    y = t_max * t_max - 2.0 * log_np + math.log(log_np)
    return MaxResult(
        t_max=t_max, gumbel_y=y, p_value=gumbel_sf(y), K=int(lags), p_dim=p
    )


def sum_test(panel: TimeSeriesPanel, lags: int) -> SumResult:
    """Sum test over lags 1..lags.

    For each lag l the statistic sums x_t'x_s * x_{t+l}'x_{s+l} over
    ordered pairs t != s with both base indices in 1..n-l, then divides
    by n(n-1).  The studentizer is the U-statistic estimate of tr(Sigma^2)
    built from all ordered pairs.  Everything is computed from the n x n
    Gram matrix, so the cost is O(n^2 p + n^2 K).
    """
    n = panel.n
    if n < 4:
        raise ConfigError(f"sum test needs at least 4 rows, got n={n}")
    _check_lags(n, lags)
    x = panel.values
    gram = x @ x.T
    diag = np.diagonal(gram)
    pairs = n * (n - 1)
    trace_sq_hat = float((gram * gram).sum() - (diag * diag).sum()) / pairs

    total = 0.0
    for l in range(1, lags + 1):
        a = gram[: n - l, : n - l]
        b = gram[l:, l:]
        total += float((a * b).sum()) - float((a.diagonal() * b.diagonal()).sum())
    t_sum = total / pairs

    sigma_s_hat = math.sqrt(2.0 * lags / pairs) * trace_sq_hat
    if not sigma_s_hat > 0.0:
        raise DataError(
            "sum-test scale estimate is zero; the panel's rows are mutually "
            "orthogonal so the statistic cannot be studentized"
        )
    z = t_sum / sigma_s_hat
    return SumResult(
        t_sum=t_sum,
        trace_sq_hat=trace_sq_hat,
        sigma_s_hat=sigma_s_hat,
        z_score=z,
        p_value=std_normal_sf(z),
        K=int(lags),
    )


def fisher_combine(p_max: float, p_sum: float) -> tuple[float, float]:
    """Fisher combination of the two p-values.

    Returns (t_fc, p_fc) where t_fc = -2 log p_max - 2 log p_sum and the
    p-value comes from the chi-square(4) upper tail.  Inputs are floored
    at 1e-300 so an underflowed p-value stays finite.
    """
    for name, value in (("p_max", p_max), ("p_sum", p_sum)):
        if not 0.0 <= value <= 1.0 or math.isnan(value):
            raise ConfigError(f"{name} must lie in [0, 1], got {value}")
    t_fc = -2.0 * math.log(max(p_max, P_VALUE_FLOOR)) - 2.0 * math.log(
        max(p_sum, P_VALUE_FLOOR)
    )
    return t_fc, chi2_4_sf(t_fc)


# Column order of the flat report serialization.  Fixed: downstream
# tooling indexes by position.
REPORT_COLUMNS = (
    "n", "p", "K", "alpha",
    "t_max", "gumbel_y", "p_max",
    "t_sum", "z", "p_sum",
    "t_fc", "p_fc",
    "rej_max", "rej_sum", "rej_fc",
)


@dataclass(frozen=True)
class TestReport:
    """All three tests on one panel, with accept/reject decisions."""

    n: int
    p_dim: int
    K: int
    alpha: float
    max: MaxResult
    sum: SumResult
    t_fc: float
    p_fc: float
    reject_max: bool
    reject_sum: bool
    reject_fc: bool

    def to_flat_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p_dim,
            "K": self.K,
            "alpha": self.alpha,
            "t_max": self.max.t_max,
            "gumbel_y": self.max.gumbel_y,
            "p_max": self.max.p_value,
            "t_sum": self.sum.t_sum,
            "z": self.sum.z_score,
            "p_sum": self.sum.p_value,
            "t_fc": self.t_fc,
            "p_fc": self.p_fc,
            "rej_max": self.reject_max,
            "rej_sum": self.reject_sum,
            "rej_fc": self.reject_fc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_flat_dict())

    @staticmethod
    def csv_header() -> str:
        return ",".join(REPORT_COLUMNS)

    def to_csv_row(self) -> str:
        d = self.to_flat_dict()
        cells = []
        for col in REPORT_COLUMNS:
            v = d[col]
            if isinstance(v, bool):
                cells.append(str(int(v)))
            elif isinstance(v, float):
                cells.append(repr(v))
            else:
                cells.append(str(v))
        return ",".join(cells)


def run_all(panel: TimeSeriesPanel, lags: int, alpha: float) -> TestReport:
    """Run the max, sum, and Fisher-combined tests at level alpha."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    mx = max_test(panel, lags)
    sm = sum_test(panel, lags)
    t_fc, p_fc = fisher_combine(mx.p_value, sm.p_value)
    return TestReport(
        n=panel.n,
        p_dim=panel.p,
        K=int(lags),
        alpha=alpha,
        max=mx,
        sum=sm,
        t_fc=t_fc,
        p_fc=p_fc,
        reject_max=mx.p_value < alpha,
        reject_sum=sm.p_value < alpha,
        reject_fc=p_fc < alpha,
    )
