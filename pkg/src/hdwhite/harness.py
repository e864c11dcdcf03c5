"""Seeded Monte Carlo experiment runner for size and power studies.

An experiment is a grid of cells (scenario, innovation, n, p, K, and a
block size m for alternatives).  Every cell runs R replications; each
replication owns an RNG stream derived purely from (master seed, cell,
replication index), so results are byte-identical for any worker count.
Outputs are a flat CSV, a grouped markdown table, and per-m power-curve
CSVs.
"""

from __future__ import annotations

import csv
import json
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from .dgp import DgpSpec, Innovation, Scenario, gen_alternative_panel, gen_null_panel
from .errors import ConfigError, DataError, NonstationaryDrawError
from .statistics import run_all

__all__ = [
    "ExperimentKind",
    "GridCell",
    "ExperimentConfig",
    "CellResult",
    "run_experiment",
    "emit_table",
    "emit_power_curve",
]

DEFAULT_SIZE_REPLICATIONS = 1000
DEFAULT_POWER_REPLICATIONS = 500
MAX_REDRAWS = 1000


class ExperimentKind(str, Enum):
    SIZE = "size"
    POWER = "power"


@dataclass(frozen=True)
class GridCell:
    """One point of the experimental grid."""

    scenario: Scenario
    innovation: Innovation
    n: int
    p: int
    lags: int
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "innovation", Innovation(self.innovation))
        # Reuse the generator-spec validation so grid cells can never
        # describe a panel the generator would refuse.
        DgpSpec(
            scenario=self.scenario,
            innovation=self.innovation,
            n=self.n,
            p=self.p,
            seed=0,
            m=self.m,
        )
        if not 1 <= self.lags <= self.n - 2:
            raise ConfigError(
                f"number of lags must lie in [1, n-2] = [1, {self.n - 2}], got {self.lags}"
            )

    def key(self) -> int:
        """Stable 32-bit id of the cell, used to derive RNG streams."""
        desc = (
            f"{self.scenario.value}|{self.innovation.value}|n={self.n}|p={self.p}"
            f"|K={self.lags}|m={'' if self.m is None else self.m}"
        )
        return zlib.crc32(desc.encode("ascii"))


@dataclass(frozen=True)
class ExperimentConfig:
    kind: ExperimentKind
    grid: tuple[GridCell, ...]
    replications: int
    alpha: float
    master_seed: int
    workers: int = 1
    out_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ExperimentKind(self.kind))
        object.__setattr__(self, "grid", tuple(self.grid))
        if not self.grid:
            raise ConfigError('"grid": at least one cell is required')
        for i, cell in enumerate(self.grid):
            null_cell = cell.scenario.is_null
            if self.kind is ExperimentKind.SIZE and not null_cell:
                raise ConfigError(
                    f'"grid[{i}].scenario": {cell.scenario.value} is not a null scenario'
                )
            if self.kind is ExperimentKind.POWER and null_cell:
                raise ConfigError(
                    f'"grid[{i}].scenario": {cell.scenario.value} is not an alternative scenario'
                )
        if self.replications < 1:
            raise ConfigError(f'"replications": must be >= 1, got {self.replications}')
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f'"alpha": must lie in (0, 1), got {self.alpha}')
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError(
                f'"master_seed": must be an unsigned 64-bit integer, got {self.master_seed}'
            )
        if self.workers < 1:
            raise ConfigError(f'"workers": must be >= 1, got {self.workers}')

    # -- config-file loading ------------------------------------------------

    _LIST_KEYS = ("scenarios", "innovations", "n", "p", "K", "m")
    _KNOWN_KEYS = _LIST_KEYS + (
        "kind", "replications", "alpha", "master_seed", "workers", "out",
    )

    @classmethod
    def from_mapping(
        cls,
        raw: dict,
        seed_override: int | None = None,
        workers_override: int | None = None,
        out_override: str | None = None,
    ) -> "ExperimentConfig":
        """Build a config from a parsed JSON object.

        List-valued scenarios/innovations/n/p/K/m are expanded into the
        cartesian grid, in the order the lists are written.
        """
        if not isinstance(raw, dict):
            raise ConfigError(f"config root must be an object, got {type(raw).__name__}")
        for key in raw:
            if key not in cls._KNOWN_KEYS:
                raise ConfigError(f'"{key}": unknown config key')

        if "kind" not in raw:
            raise ConfigError('"kind": required ("size" or "power")')
        try:
            kind = ExperimentKind(raw["kind"])
        except ValueError:
            raise ConfigError(
                f'"kind": must be "size" or "power", got {raw["kind"]!r}'
            ) from None

        def as_list(key, value):
            if isinstance(value, (list, tuple)):
                if not value:
                    raise ConfigError(f'"{key}": list must not be empty')
                return list(value)
            return [value]

        def int_list(key):
            values = as_list(key, raw[key])
            out = []
            for i, v in enumerate(values):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise ConfigError(f'"{key}[{i}]": expected an integer, got {v!r}')
                out.append(v)
            return out

        for key in ("scenarios", "n", "p", "K"):
            if key not in raw:
                raise ConfigError(f'"{key}": required')

        scenarios = []
        for i, s in enumerate(as_list("scenarios", raw["scenarios"])):
            try:
                scenarios.append(Scenario(s))
            except ValueError:
                raise ConfigError(f'"scenarios[{i}]": unknown scenario {s!r}') from None
        innovations = []
        for i, s in enumerate(as_list("innovations", raw.get("innovations", "gaussian"))):
            try:
                innovations.append(Innovation(s))
            except ValueError:
                raise ConfigError(f'"innovations[{i}]": unknown innovation {s!r}') from None

        ns, ps, ks = int_list("n"), int_list("p"), int_list("K")
        if kind is ExperimentKind.POWER:
            if "m" not in raw:
                raise ConfigError('"m": required for power experiments')
            ms: list[int | None] = list(int_list("m"))
        elif "m" in raw:
            raise ConfigError('"m": only valid for power experiments')
        else:
            ms = [None]

        grid = []
        for idx, (sc, innov, n, p, k, m) in enumerate(
            product(scenarios, innovations, ns, ps, ks, ms)
        ):
            try:
                grid.append(GridCell(sc, innov, n, p, k, m))
            except ConfigError as exc:
                raise ConfigError(f'"grid[{idx}]" (expanded): {exc}') from None

        replications = raw.get(
            "replications",
            DEFAULT_SIZE_REPLICATIONS
            if kind is ExperimentKind.SIZE
            else DEFAULT_POWER_REPLICATIONS,
        )
        if isinstance(replications, bool) or not isinstance(replications, int):
            raise ConfigError(f'"replications": expected an integer, got {replications!r}')

        master_seed = seed_override if seed_override is not None else raw.get("master_seed")
        if master_seed is None:
            raise ConfigError('"master_seed": required (or pass --seed)')
        if isinstance(master_seed, bool) or not isinstance(master_seed, int):
            raise ConfigError(f'"master_seed": expected an integer, got {master_seed!r}')

        workers = workers_override if workers_override is not None else raw.get("workers", 1)
        if isinstance(workers, bool) or not isinstance(workers, int):
            raise ConfigError(f'"workers": expected an integer, got {workers!r}')

        alpha = raw.get("alpha", 0.05)
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
            raise ConfigError(f'"alpha": expected a number, got {alpha!r}')

        out_path = out_override if out_override is not None else raw.get("out")
        if out_path is not None and not isinstance(out_path, str):
            raise ConfigError(f'"out": expected a string path, got {out_path!r}')

        return cls(
            kind=kind,
            grid=tuple(grid),
            replications=replications,
            alpha=float(alpha),
            master_seed=master_seed,
            workers=workers,
            out_path=out_path,
        )

    @classmethod
    def from_json_file(cls, path: str, **overrides) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path} is not valid JSON: {exc}") from None
        return cls.from_mapping(raw, **overrides)


@dataclass(frozen=True)
class CellResult:
    """Rejection-rate summary of one grid cell."""

    cell: GridCell
    rate_max: float
    rate_sum: float
    rate_fc: float
    replications_used: int
    se_max: float
    se_sum: float
    se_fc: float
    wall_time: float

    def __post_init__(self):
        for name in ("rate_max", "rate_sum", "rate_fc"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {r}")

    @classmethod
    def from_counts(
        cls, cell: GridCell, counts: tuple[int, int, int], reps: int, wall_time: float
    ) -> "CellResult":
        def se(k):
            r = k / reps
            return float(np.sqrt(r * (1.0 - r) / reps))

        return cls(
            cell=cell,
            rate_max=counts[0] / reps,
            rate_sum=counts[1] / reps,
            rate_fc=counts[2] / reps,
            replications_used=reps,
            se_max=se(counts[0]),
            se_sum=se(counts[1]),
            se_fc=se(counts[2]),
            wall_time=wall_time,
        )


def derive_seed(master_seed: int, cell_key: int, rep: int, attempt: int = 0) -> int:
    """Deterministic 128-bit seed for one replication attempt."""
    seq = np.random.SeedSequence([master_seed, cell_key, rep, attempt])
    return int.from_bytes(seq.generate_state(4, np.uint32).tobytes(), "little")


def _replicate(args: tuple) -> tuple[bool, bool, bool]:
    """Run one replication; top-level so process pools can pickle it."""
    (scenario, innovation, n, p, lags, m, master_seed, cell_key, rep, alpha) = args
    for attempt in range(MAX_REDRAWS):
        seed = derive_seed(master_seed, cell_key, rep, attempt)
        spec = DgpSpec(
            scenario=scenario, innovation=innovation, n=n, p=p, seed=seed, m=m
        )
        try:
            if spec.scenario.is_null:
                panel = gen_null_panel(spec)
            else:
                panel = gen_alternative_panel(spec)
            break
        except NonstationaryDrawError:
            continue
    else:
        raise DataError(
            f"exceeded {MAX_REDRAWS} coefficient redraws for cell key {cell_key}, "
            f"replication {rep}"
        )
    report = run_all(panel, lags, alpha)
    return (report.reject_max, report.reject_sum, report.reject_fc)


def _cell_args(cell: GridCell, cfg: ExperimentConfig):
    key = cell.key()
    for rep in range(cfg.replications):
        yield (
            cell.scenario, cell.innovation, cell.n, cell.p, cell.lags, cell.m,
            cfg.master_seed, key, rep, cfg.alpha,
        )


def run_experiment(cfg: ExperimentConfig) -> list[CellResult]:
    """Run every grid cell for the configured replication count.

    Replications are tallied in (cell, replication-index) order, and each
    one derives its RNG stream from (master_seed, cell id, index), so the
    output is identical for any worker count.
    """
    results = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for cell in cfg.grid:
                start = time.perf_counter()
                chunk = max(1, cfg.replications // (cfg.workers * 4))
                outcomes = list(
                    pool.map(_replicate, _cell_args(cell, cfg), chunksize=chunk)
                )
                results.append(_tally(cell, cfg, outcomes, start))
    else:
        for cell in cfg.grid:
            start = time.perf_counter()
            outcomes = [_replicate(args) for args in _cell_args(cell, cfg)]
            results.append(_tally(cell, cfg, outcomes, start))
    return results


def _tally(cell, cfg, outcomes, start) -> CellResult:
    counts = [0, 0, 0]
    for rej in outcomes:
        for i in range(3):
            counts[i] += int(rej[i])
    return CellResult.from_counts(
        cell, tuple(counts), cfg.replications, time.perf_counter() - start
    )


# -- emission ----------------------------------------------------------------

RESULT_COLUMNS = (
    "scenario", "innovation", "n", "p", "K", "m", "replications",
    "rate_max", "rate_sum", "rate_fc", "se_max", "se_sum", "se_fc",
)


def _result_row(res: CellResult) -> list:
    c = res.cell
    return [
        c.scenario.value, c.innovation.value, c.n, c.p, c.lags,
        "" if c.m is None else c.m, res.replications_used,
        repr(res.rate_max), repr(res.rate_sum), repr(res.rate_fc),
        repr(res.se_max), repr(res.se_sum), repr(res.se_fc),
    ]


def emit_table(results: list[CellResult], out_path: str, format: str = "csv") -> str:
    """Write results as a flat CSV or a grouped markdown table.

    The markdown layout mirrors the size-table shape: one block per
    (scenario, innovation), rows ordered by (n, p), and per tested lag
    count a MAX/SUM/FC rate column triple.  Wall times are deliberately
    not emitted so output files are reproducible byte for byte.
    """
    if not results:
        raise ConfigError("refusing to emit an empty result table")
    if format == "csv":
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RESULT_COLUMNS)
            for res in results:
                writer.writerow(_result_row(res))
        return out_path
    if format != "markdown":
        raise ConfigError(f'format must be "csv" or "markdown", got {format!r}')

    blocks: dict[tuple, dict] = {}
    for res in results:
        c = res.cell
        block = blocks.setdefault((c.scenario.value, c.innovation.value), {})
        block[(c.n, c.p, c.lags, c.m)] = res
    lag_values = sorted({res.cell.lags for res in results})
    m_values = sorted({res.cell.m for res in results if res.cell.m is not None})

    lines = []
    for (scenario, innovation), block in blocks.items():
        lines.append(f"## {scenario}, {innovation} innovations")
        lines.append("")
        row_keys = sorted({(n, p, m) for (n, p, _, m) in block})
        header = ["n", "p"] + (["m"] if m_values else [])
        for k in lag_values:
            header += [f"K={k} MAX", f"K={k} SUM", f"K={k} FC"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for (n, p, m) in row_keys:
            row = [str(n), str(p)] + ([str(m)] if m_values else [])
            for k in lag_values:
                res = block.get((n, p, k, m))
                if res is None:
                    row += ["", "", ""]
                else:
                    row += [
                        f"{res.rate_max:.3f}",
                        f"{res.rate_sum:.3f}",
                        f"{res.rate_fc:.3f}",
                    ]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
    return out_path


def emit_power_curve(results: list[CellResult], out_path: str) -> str:
    """Write a per-m rejection-rate CSV for one power-curve design.

    All cells must share (scenario, innovation, n, p, K) and together
    cover every block size m = 1..max(m).
    """
    if not results:
        raise ConfigError("refusing to emit an empty power curve")
    designs = {
        (r.cell.scenario, r.cell.innovation, r.cell.n, r.cell.p, r.cell.lags)
        for r in results
    }
    if len(designs) > 1:
        pretty = sorted(
            f"({s.value}, {i.value}, n={n}, p={p}, K={k})" for (s, i, n, p, k) in designs
        )
        raise ConfigError(
            "power-curve cells must share (scenario, innovation, n, p, K); got "
            + ", ".join(pretty)
        )
    if any(r.cell.m is None for r in results):
        raise ConfigError("power-curve cells must all carry a block size m")
    by_m = {r.cell.m: r for r in sorted(results, key=lambda r: r.cell.m)}
    expected = set(range(1, max(by_m) + 1))
    missing = sorted(expected - set(by_m))
    if missing:
        raise ConfigError(
            f"power curve is missing block sizes {missing}; need every m in 1..{max(by_m)}"
        )
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ("m", "rate_max", "rate_sum", "rate_fc", "se_max", "se_sum", "se_fc")
        )
        for m, res in by_m.items():
            writer.writerow([
                m,
                repr(res.rate_max), repr(res.rate_sum), repr(res.rate_fc),
                repr(res.se_max), repr(res.se_sum), repr(res.se_fc),
            ])
    return out_path
