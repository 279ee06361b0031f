"""Seeded multi-run comparisons on the chance-constrained dominating set problem."""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Sequence

import numpy as np

from .archive import ParetoArchive
from .chance import ConfidenceLevel
from .engine import ALGORITHMS, AlgorithmConfig, Init, make_rng, run
from .graph import Graph, generate_synthetic, load_edge_list
from .instance import StochasticInstance, WeightSetting, generate_weights
from .objectives import ConstraintFunction
from .oracle import Extractor
from .stats import mann_whitney_u

log = logging.getLogger(__name__)

STANDARD_BETAS = (0.2, 0.1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 1e-16)
COMPARISON_PAIRS = (("SEMO2D", "SEMO3D"), ("GSEMO2D", "GSEMO3D"))


def derive_seed(master_seed: int, label: str, index: int) -> int:
    """64-bit seed from a keyed hash, so new labels never shift existing streams."""
    key = int(master_seed).to_bytes(8, "little", signed=False)
    h = hashlib.blake2b(f"{label}\x00{index}".encode(), key=key, digest_size=8)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class ExperimentConfig:
    weight_setting: WeightSetting = WeightSetting.UNIFORM
    algorithms: tuple[str, ...] = ("SEMO2D", "SEMO3D", "GSEMO2D", "GSEMO3D")
    runs: int = 10
    budget: int = 1_000_000
    beta_grid: tuple[float, ...] = STANDARD_BETAS
    master_seed: int = 0
    graph_path: str | None = None
    one_based: bool = True
    graph_model: str = "random-regular"
    graph_n: int = 200
    graph_d: int = 4
    graph_p: float = 0.02
    k: int | None = None
    init: Init = Init.UNIFORM_RANDOM
    n_jobs: int = 1
    archive_dir: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight_setting", WeightSetting(self.weight_setting))
        object.__setattr__(self, "init", Init(self.init))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        if self.runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        if self.budget < 1:
            raise ValueError(f"budget must be at least 1, got {self.budget}")
        for b in self.beta_grid:
            if not 0.0 < b <= 0.5:
                raise ValueError(f"beta values must lie in (0, 0.5], got {b}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; choose from {sorted(ALGORITHMS)}")


_LIST_KEYS = {"algorithms", "beta_grid"}


def loads_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment, lists are comma-separated."""
    types = {f.name: f.type for f in fields(ExperimentConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key == "algorithms":
            values[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "beta_grid":
            values[key] = tuple(float(v) for v in value.split(",") if v.strip())
        elif key == "one_based":
            values[key] = value.lower() in ("1", "true", "yes")
        elif value.lower() in ("", "none"):
            values[key] = None
        elif key in ("runs", "budget", "master_seed", "graph_n", "graph_d", "k", "n_jobs"):
            values[key] = int(value)
        elif key == "graph_p":
            values[key] = float(value)
        else:
            values[key] = value
    return ExperimentConfig(**values)


def dumps_config(config: ExperimentConfig) -> str:
    lines = []
    for f in fields(ExperimentConfig):
        value = getattr(config, f.name)
        if f.name in _LIST_KEYS:
            value = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif hasattr(value, "value"):
            value = value.value
        elif value is None:
            value = "none"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return loads_config(fh.read())


def build_graph(config: ExperimentConfig) -> Graph:
    if config.graph_path:
        return load_edge_list(config.graph_path, one_based=config.one_based)
    rng = make_rng(derive_seed(config.master_seed, "graph", 0))
    if config.graph_model == "random-regular":
        return generate_synthetic("random-regular", config.graph_n, rng, d=config.graph_d)
    return generate_synthetic(config.graph_model, config.graph_n, rng, p=config.graph_p)


def build_instance(config: ExperimentConfig, graph: Graph, run_index: int) -> StochasticInstance:
    """The weights for run ``run_index``, shared by every algorithm."""
    rng = make_rng(derive_seed(config.master_seed, "instance", run_index))
    return generate_weights(config.weight_setting, graph.node_count, rng, degrees=graph.degrees)


@dataclass
class RunResult:
    algorithm: str
    run_index: int
    seed: int
    values: list[float] | None  # one extracted chance value per beta; None when infeasible
    max_population_size: int
    archive_size: int
    wall_time: float


def _run_job(config: ExperimentConfig, graph: Graph, algorithm: str, run_index: int) -> RunResult:
    instance = build_instance(config, graph, run_index)
    k = graph.node_count if config.k is None else config.k
    seed = derive_seed(config.master_seed, algorithm, run_index)
    cfg = AlgorithmConfig.for_algorithm(algorithm, config.budget, seed, k, config.init)
    c = ConstraintFunction.domination(graph)
    record = run(instance, c, cfg)
    if config.archive_dir:
        os.makedirs(config.archive_dir, exist_ok=True)
        path = os.path.join(config.archive_dir, f"{algorithm}_run{run_index:03d}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(record.to_text())
    values = extract_values(record.archive, instance, c, k, config.beta_grid)
    log.info("%s run %d: max population %d, %.1fs", algorithm, run_index,
             record.max_population_size, record.wall_time)
    return RunResult(algorithm, run_index, seed, values, record.max_population_size,
                     len(record.archive), record.wall_time)


def extract_values(
    archive: ParetoArchive, instance: StochasticInstance, c: ConstraintFunction, k: int,
    betas: Sequence[float],
) -> list[float] | None:
    """Best feasible chance value per beta, or None if no member has c(x) >= k."""
    ex = Extractor(archive, instance, c)
    out = []
    for beta in betas:
        hit = ex.min_weight(ConfidenceLevel.from_beta(beta), k)
        if hit is None:
            return None
        out.append(hit[1])
    return out


def _std(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if values.size > 1 else math.nan


@dataclass
class ComparisonReport:
    algorithms: tuple[str, ...]
    betas: tuple[float, ...]
    runs: int
    results: list[list[RunResult]] = field(default_factory=list)  # [algorithm][run]

    def feasible_values(self, a: int, b: int) -> np.ndarray:
        return np.asarray([r.values[b] for r in self.results[a] if r.values is not None], dtype=float)

    def mean(self, a: int, b: int) -> float:
        vals = self.feasible_values(a, b)
        return float(vals.mean()) if vals.size else math.nan

    def std(self, a: int, b: int) -> float:
        return _std(self.feasible_values(a, b))

    def infeasible_runs(self, a: int) -> int:
        return sum(r.values is None for r in self.results[a])

    def population(self, a: int) -> np.ndarray:
        return np.asarray([r.max_population_size for r in self.results[a]], dtype=float)

    def pairs(self) -> list[tuple[int, int]]:
        out = []
        for x, y in COMPARISON_PAIRS:
            if x in self.algorithms and y in self.algorithms:
                out.append((self.algorithms.index(x), self.algorithms.index(y)))
        return out

    def p_value(self, a: int, b: int, beta_index: int) -> float:
        xa = self.feasible_values(a, beta_index)
        xb = self.feasible_values(b, beta_index)
        if xa.size == 0 or xb.size == 0:
            return math.nan
        return mann_whitney_u(xa, xb)


def run_experiment(config: ExperimentConfig, graph: Graph | None = None) -> ComparisonReport:
    """Run every (algorithm, run) job and fold results in (algorithm, run) order."""
    if graph is None:
        graph = build_graph(config)
    jobs = [(a, r) for a in config.algorithms for r in range(config.runs)]
    if config.n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.n_jobs) as pool:
            futures = [pool.submit(_run_job, config, graph, a, r) for a, r in jobs]
            done = [f.result() for f in futures]
    else:
        done = [_run_job(config, graph, a, r) for a, r in jobs]
    report = ComparisonReport(config.algorithms, config.beta_grid, config.runs)
    it = iter(done)
    for _ in config.algorithms:
        report.results.append([next(it) for _ in range(config.runs)])
    return report


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.10g}"


def report_tables(report: ComparisonReport):
    """Two (header, rows, bold) tables: per-beta chance values and population sizes.

    ``bold`` lists (row, column) cells holding the better mean of a compared pair.
    """
    algs = report.algorithms
    pairs = report.pairs()
    header = ["beta"]
    for name in algs:
        header += [f"{name}_mean", f"{name}_std"]
    for a, b in pairs:
        header += [f"p_{algs[a]}_vs_{algs[b]}", f"best_{algs[a]}_vs_{algs[b]}"]
    rows = []
    bold = []
    if algs:
        for bi, beta in enumerate(report.betas):
            row = [_fmt(beta)]
            for ai in range(len(algs)):
                row += [_fmt(report.mean(ai, bi)), _fmt(report.std(ai, bi))]
            for a, b in pairs:
                ma, mb = report.mean(a, bi), report.mean(b, bi)
                if math.isnan(ma) and math.isnan(mb):
                    best = "-"
                elif math.isnan(mb) or (not math.isnan(ma) and ma < mb):
                    best, col = algs[a], 1 + 2 * a
                elif math.isnan(ma) or mb < ma:
                    best, col = algs[b], 1 + 2 * b
                else:
                    best = "tie"
                if best not in ("-", "tie"):
                    bold.append((len(rows), col))
                row += [_fmt(report.p_value(a, b, bi)), best]
            rows.append(row)

    pop_header = ["algorithm", "max_pop_mean", "max_pop_std", "feasible_runs", "infeasible_runs"]
    pop_rows = []
    for ai, name in enumerate(algs):
        pops = report.population(ai)
        pop_rows.append([
            name, _fmt(float(pops.mean())), _fmt(_std(pops)),
            str(report.runs - report.infeasible_runs(ai)), str(report.infeasible_runs(ai)),
        ])
    return (header, rows, bold), (pop_header, pop_rows, [])


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _markdown_text(header, rows, bold) -> str:
    marked = {(r, c) for r, c in bold}
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for ri, row in enumerate(rows):
        cells = [f"**{v}**" if (ri, ci) in marked else v for ci, v in enumerate(row)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit_report(report: ComparisonReport, fmt: str = "csv") -> str:
    """Chance-value table, a blank line, then the population-size table."""
    tables = report_tables(report)
    if fmt == "csv":
        return "\n".join(_csv_text(h, r) for h, r, _ in tables)
    if fmt == "markdown":
        titles = ("### Chance-constrained weight per beta", "### Maximum population size")
        return "\n".join(f"{t}\n\n{_markdown_text(h, r, b)}" for t, (h, r, b) in zip(titles, tables))
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str, fmt: str = "csv") -> list[list[list[str]]]:
    """Tables of cell strings (header row first); markdown emphasis is stripped."""
    tables: list[list[list[str]]] = []
    if fmt == "csv":
        for block in text.strip("\n").split("\n\n"):
            tables.append([row for row in csv.reader(io.StringIO(block))])
        return tables
    current: list[list[str]] | None = None
    for line in text.splitlines():
        if line.startswith("|"):
            cells = [c.strip().strip("*") for c in line.strip().strip("|").split("|")]
            if all(set(c) <= {"-"} for c in cells):
                continue
            if current is None:
                current = []
                tables.append(current)
            current.append(cells)
        else:
            current = None
    return tables


def emit_runs(report: ComparisonReport) -> str:
    """Per-run CSV: one row per (algorithm, run) with max population and per-beta values."""
    header = ["algorithm", "run", "seed", "max_population_size", "archive_size"]
    header += [f"beta={_fmt(b)}" for b in report.betas]
    rows = []
    for per_alg in report.results:
        for r in per_alg:
            vals = ["infeasible"] * len(report.betas) if r.values is None else [_fmt(v) for v in r.values]
            rows.append([r.algorithm, str(r.run_index), str(r.seed), str(r.max_population_size),
                         str(r.archive_size), *vals])
    return _csv_text(header, rows)


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **kw)
