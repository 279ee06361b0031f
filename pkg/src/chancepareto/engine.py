"""GSEMO / SEMO runs under the 2D (penalized) and 3D formulations."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import _kernel
from .archive import ParetoArchive, dumps_archive, loads_archive
from .instance import StochasticInstance
from .objectives import (
    CARDINALITY,
    ConstraintFunction,
    ConstraintKind,
    ObjectiveVector2D,
    ObjectiveVector3D,
    Solution,
    eval_2d,
    eval_3d,
)


class ConfigError(ValueError):
    pass


class MutationOperator(str, enum.Enum):
    STANDARD_BIT = "standard-bit"
    ONE_BIT = "one-bit"
    MIXED_1_2 = "mixed-1-2"


class Formulation(str, enum.Enum):
    TWO_D = "2d"
    THREE_D = "3d"


class Init(str, enum.Enum):
    UNIFORM_RANDOM = "uniform-random"
    ALL_ZEROS = "all-zeros"


_KERNEL_OP = {
    MutationOperator.STANDARD_BIT: _kernel.STANDARD_BIT,
    MutationOperator.ONE_BIT: _kernel.ONE_BIT,
    MutationOperator.MIXED_1_2: _kernel.MIXED_1_2,
}

ALGORITHMS = {
    "SEMO2D": (Formulation.TWO_D, MutationOperator.MIXED_1_2),
    "SEMO3D": (Formulation.THREE_D, MutationOperator.ONE_BIT),
    "GSEMO2D": (Formulation.TWO_D, MutationOperator.STANDARD_BIT),
    "GSEMO3D": (Formulation.THREE_D, MutationOperator.STANDARD_BIT),
}


def make_rng(seed: int) -> np.random.Generator:
    """The engine's random stream: NumPy PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class AlgorithmConfig:
    formulation: Formulation
    mutation: MutationOperator
    budget: int
    seed: int = 0
    k: int | None = None
    init: Init = Init.UNIFORM_RANDOM
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "formulation", Formulation(self.formulation))
        object.__setattr__(self, "mutation", MutationOperator(self.mutation))
        object.__setattr__(self, "init", Init(self.init))
        if int(self.budget) < 1:
            raise ConfigError(f"budget must be at least 1, got {self.budget}")
        if self.formulation is Formulation.TWO_D and self.k is None:
            raise ConfigError("the 2D formulation needs a constraint level k")

    @classmethod
    def for_algorithm(cls, name: str, budget: int, seed: int = 0, k: int | None = None,
                      init: Init | str = Init.UNIFORM_RANDOM) -> "AlgorithmConfig":
        try:
            formulation, mutation = ALGORITHMS[name]
        except KeyError:
            raise ConfigError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None
        if formulation is Formulation.THREE_D:
            k = None
        return cls(formulation, mutation, budget, seed, k, init, name)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        for name, pair in ALGORITHMS.items():
            if pair == (self.formulation, self.mutation):
                return name
        return f"{self.formulation.value}/{self.mutation.value}"

    @property
    def dim(self) -> int:
        return 3 if self.formulation is Formulation.THREE_D else 2

    def validate(self, n: int, c: ConstraintFunction) -> None:
        if self.mutation is MutationOperator.MIXED_1_2 and n < 2:
            raise ConfigError("mixed 1/2-bit mutation needs at least 2 bits")
        if self.formulation is Formulation.TWO_D:
            c_max = c.max_value(n)
            if not 0 <= self.k <= c_max:
                raise ConfigError(f"k={self.k} outside [0, {c_max}]")
        if c.kind is ConstraintKind.DOMINATION and c.graph.node_count != n:
            raise ConfigError(f"graph has {c.graph.node_count} nodes but instance has {n} items")


@dataclass
class RunRecord:
    config: AlgorithmConfig
    n: int
    archive: ParetoArchive
    max_population_size: int
    evaluations_used: int
    wall_time: float

    def to_text(self) -> str:
        cfg = self.config
        header = (
            f"# run algorithm={cfg.label} seed={cfg.seed} budget={cfg.budget} n={self.n} "
            f"formulation={cfg.formulation.value} mutation={cfg.mutation.value} "
            f"k={'-' if cfg.k is None else cfg.k} init={cfg.init.value}\n"
            f"# evaluations={self.evaluations_used} max_population_size={self.max_population_size} "
            f"wall_time={self.wall_time:.6f}\n"
        )
        return header + dumps_archive(self.archive, self.n)

    @classmethod
    def from_text(cls, text: str) -> "RunRecord":
        lines = text.splitlines()
        if len(lines) < 3 or not lines[0].startswith("# run "):
            raise ValueError("not a run record")
        head = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        stats = dict(tok.split("=", 1) for tok in lines[1].split()[1:])
        k = None if head["k"] == "-" else int(head["k"])
        config = AlgorithmConfig(
            Formulation(head["formulation"]), MutationOperator(head["mutation"]),
            int(head["budget"]), int(head["seed"]), k, Init(head["init"]), head["algorithm"],
        )
        archive, n = loads_archive("\n".join(lines[2:]))
        return cls(config, n, archive, int(stats["max_population_size"]),
                   int(stats["evaluations"]), float(stats["wall_time"]))


def mutate(x: Solution, op: MutationOperator | str, rng: np.random.Generator) -> Solution:
    """Offspring of ``x``; draws from ``rng`` in the same order as the compiled loop."""
    op = MutationOperator(op)
    n = x.n
    if op is MutationOperator.MIXED_1_2 and n < 2:
        raise ConfigError("mixed 1/2-bit mutation needs at least 2 bits")
    bits = x.bits.copy()
    if op is MutationOperator.ONE_BIT:
        bits[_uniform_index(rng, n)] ^= True
    elif op is MutationOperator.MIXED_1_2:
        if rng.random() < 0.5:
            bits[_uniform_index(rng, n)] ^= True
        else:
            i = _uniform_index(rng, n)
            j = _uniform_index(rng, n - 1)
            if j >= i:
                j += 1
            bits[i] ^= True
            bits[j] ^= True
    else:
        log_q = math.log1p(-1.0 / n)
        pos = -1
        while True:
            gap = math.floor(math.log(1.0 - rng.random()) / log_q)
            if gap >= n:
                break
            pos += int(gap) + 1
            if pos >= n:
                break
            bits[pos] ^= True
    return Solution(bits)


def _uniform_index(rng, m: int) -> int:
    return min(int(rng.random() * m), m - 1)


def _initial_solution(n: int, init: Init, rng) -> Solution:
    if init is Init.ALL_ZEROS:
        return Solution.zeros(n)
    return Solution(rng.random(n) < 0.5)


def _evaluator(instance: StochasticInstance, c: ConstraintFunction, config: AlgorithmConfig):
    if config.formulation is Formulation.THREE_D:
        return lambda x: eval_3d(instance, x, c)
    return lambda x: eval_2d(instance, x, config.k, c)


def _as_row(vec) -> tuple[float, float, float]:
    return (vec[0], vec[1], float(vec[2])) if len(vec) == 3 else (vec[0], vec[1], 0.0)


def _graph_arrays(c: ConstraintFunction):
    if c.kind is ConstraintKind.DOMINATION:
        return _kernel.DOMINATION, np.ascontiguousarray(c.graph.indptr), np.ascontiguousarray(c.graph.indices)
    return _kernel.CARDINALITY, np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)


def _archive_from_arrays(pop_bits, pop_obj, slot, size, max_size, dim) -> ParetoArchive:
    archive = ParetoArchive(dim)
    for i in range(size):
        row = pop_obj[i]
        if dim == 3:
            vec = ObjectiveVector3D(float(row[0]), float(row[1]), int(row[2]))
        else:
            vec = ObjectiveVector2D(float(row[0]), float(row[1]))
        archive._solutions.append(Solution(pop_bits[slot[i]].astype(bool)))
        archive._vectors.append(vec)
    archive.max_size_seen = int(max_size)
    return archive


def run(
    instance: StochasticInstance,
    c: ConstraintFunction = CARDINALITY,
    config: AlgorithmConfig | None = None,
    checkpoint: Callable[[int, ParetoArchive], None] | None = None,
    checkpoint_every: int = 10_000,
) -> RunRecord:
    """Run one algorithm for exactly ``config.budget`` offspring evaluations.

    The initial solution is evaluated and inserted first and is not counted
    against the budget.  With ``checkpoint`` the loop pauses every
    ``checkpoint_every`` iterations and passes the iteration count and a
    snapshot of the archive.
    """
    if config is None:
        raise ConfigError("a run needs an AlgorithmConfig")
    n = instance.n
    config.validate(n, c)
    started = time.perf_counter()
    rng = make_rng(config.seed)
    dim = config.dim

    x0 = _initial_solution(n, config.init, rng)
    f0 = _evaluator(instance, c, config)(x0)
    cap = 64
    pop_bits = np.zeros((cap, n), dtype=np.uint8)
    pop_obj = np.zeros((cap, 3), dtype=np.float64)
    pop_bits[0] = x0.bits
    pop_obj[0] = _as_row(f0)
    slot = np.arange(cap)
    size, max_size = 1, 1

    c_kind, indptr, indices = _graph_arrays(c)
    k = -1 if config.k is None else int(config.k)
    op = _KERNEL_OP[config.mutation]
    step = config.budget if checkpoint is None else max(1, int(checkpoint_every))
    done = 0
    while done < config.budget:
        iters = min(step, config.budget - done)
        pop_bits, pop_obj, slot, size, max_size = _kernel.evolve(
            pop_bits, pop_obj, slot, size, max_size, iters, rng,
            instance.mu, instance.var, c_kind, indptr, indices, dim, k, op,
        )
        done += iters
        if checkpoint is not None:
            checkpoint(done, _archive_from_arrays(pop_bits, pop_obj, slot, size, max_size, dim))

    archive = _archive_from_arrays(pop_bits, pop_obj, slot, size, max_size, dim)
    return RunRecord(config, n, archive, int(max_size), config.budget, time.perf_counter() - started)


def run_reference(
    instance: StochasticInstance, c: ConstraintFunction, config: AlgorithmConfig
) -> RunRecord:
    """Pure-Python loop over :class:`ParetoArchive`; slow, for cross-checking :func:`run`."""
    n = instance.n
    config.validate(n, c)
    started = time.perf_counter()
    rng = make_rng(config.seed)
    evaluate = _evaluator(instance, c, config)
    archive = ParetoArchive(config.dim)
    x0 = _initial_solution(n, config.init, rng)
    archive.try_insert(x0, evaluate(x0))
    for _ in range(config.budget):
        parent = archive.sample_uniform(rng)
        y = mutate(parent, config.mutation, rng)
        archive.try_insert(y, evaluate(y))
    return RunRecord(config, n, archive, archive.max_size_seen, config.budget,
                     time.perf_counter() - started)


def with_seed(config: AlgorithmConfig, seed: int) -> AlgorithmConfig:
    return replace(config, seed=int(seed))
