"""Ground truth for small instances and extraction of chance-constrained optima.

Three independent routes to the same answers:

* ``greedy_optimum`` / ``build_extreme_set``: the k cheapest items under
  f_lambda for every ordering-relevant lambda;
* ``enumerate_solutions`` / ``exhaustive_front``: brute force over {0,1}^n;
* ``extract_min_weight`` / ``extract_max_c``: queries answered from any
  collection of solutions (an archive, an extreme set or the full front).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .archive import ParetoArchive
from .chance import ConfidenceLevel, item_scores, lambda_breakpoints
from .instance import StochasticInstance
from .objectives import (
    CARDINALITY,
    ConstraintFunction,
    ConstraintKind,
    ObjectiveVector3D,
    Solution,
    as_bits,
    constraint_value,
)

EXHAUSTIVE_MAX_N = 24


def _item_order(instance: StochasticInstance, lam: float) -> np.ndarray:
    idx = np.arange(instance.n)
    if lam == 1.0:
        return np.lexsort((idx, instance.var, instance.mu))
    if lam == 0.0:
        return np.lexsort((idx, instance.mu, instance.var))
    return np.lexsort((idx, item_scores(instance, lam)))


def greedy_optimum(instance: StochasticInstance, k: int, lam: float) -> Solution:
    """The first ``k`` items in increasing f_lambda order; ties go to the lower index.

    At lam = 1 items are ordered lexicographically by (mu, var), at lam = 0 by
    (var, mu).
    """
    if not 0 <= k <= instance.n:
        raise ValueError(f"k={k} outside [0, {instance.n}]")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")
    return Solution.from_indices(instance.n, _item_order(instance, float(lam))[:k])


def _sums(instance: StochasticInstance, bits: np.ndarray) -> tuple[float, float]:
    mu = 0.0
    var = 0.0
    for i in np.flatnonzero(bits):
        mu += float(instance.mu[i])
        var += float(instance.var[i])
    return mu, var


@dataclass
class ExtremeSet:
    """Greedy f_lambda optima for every k and every probed lambda.

    ``entries[(k, j)]`` holds the solution for ``lambdas[j]`` with exactly k items
    and its (mu, v).
    """

    n: int
    lambdas: tuple[float, ...]
    entries: dict[tuple[int, int], tuple[Solution, tuple[float, float]]] = field(default_factory=dict)

    def members(self) -> list[tuple[Solution, ObjectiveVector3D]]:
        """Distinct solutions as (solution, (mu, v, |x|_1)) pairs."""
        seen: dict[Solution, ObjectiveVector3D] = {}
        for (k, _), (sol, (mu, var)) in sorted(self.entries.items()):
            seen.setdefault(sol, ObjectiveVector3D(mu, var, k))
        return list(seen.items())

    def __len__(self):
        return len(self.entries)


def build_extreme_set(instance: StochasticInstance) -> ExtremeSet:
    bp = lambda_breakpoints(instance)
    lambdas = (0.0, *bp.midpoints, 1.0)
    out = ExtremeSet(instance.n, lambdas)
    for j, lam in enumerate(lambdas):
        order = _item_order(instance, lam)
        for k in range(instance.n + 1):
            sol = Solution.from_indices(instance.n, order[:k])
            out.entries[(k, j)] = (sol, _sums(instance, sol.bits))
    return out


@dataclass(frozen=True)
class SolutionTable:
    """Every x in {0,1}^n with its weight sums and constraint value.

    Row r is the solution whose bit i equals bit i of the integer r.
    """

    n: int
    mu: np.ndarray
    var: np.ndarray
    c: np.ndarray
    popcount: np.ndarray

    def solution(self, row: int) -> Solution:
        return Solution([(int(row) >> i) & 1 for i in range(self.n)])


def enumerate_solutions(instance: StochasticInstance, c: ConstraintFunction = CARDINALITY) -> SolutionTable:
    n = instance.n
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
    rows = np.arange(1 << n, dtype=np.int64)
    mu = np.zeros(rows.size)
    var = np.zeros(rows.size)
    popcount = np.zeros(rows.size, dtype=np.int64)
    for i in range(n):
        # Adding 0.0 for unselected items keeps the index-order sum exact.
        sel = ((rows >> i) & 1).astype(bool)
        mu += np.where(sel, instance.mu[i], 0.0)
        var += np.where(sel, instance.var[i], 0.0)
        popcount += sel
    if c.kind is ConstraintKind.CARDINALITY:
        cvals = popcount.copy()
    else:
        graph = c.graph
        if graph.node_count != n:
            raise ValueError("graph and instance sizes differ")
        cvals = np.zeros(rows.size, dtype=np.int64)
        for u in range(n):
            closed = 1 << u
            for v in graph.neighbors(u):
                closed |= 1 << int(v)
            cvals += (rows & closed) != 0
    return SolutionTable(n, mu, var, cvals, popcount)


def exhaustive_front(
    instance: StochasticInstance, c: ConstraintFunction = CARDINALITY
) -> list[tuple[ObjectiveVector3D, Solution]]:
    """All non-dominated (mu, v, c) vectors over {0,1}^n, one witness each.

    The witness is the lowest-numbered solution (bit i = item i) attaining the
    vector.  Output is sorted by c descending, then mu, then v.
    """
    table = enumerate_solutions(instance, c)
    order = np.lexsort((np.arange(table.mu.size), table.var, table.mu, -table.c))
    front_mu: list[float] = []
    front_var: list[float] = []
    result: list[tuple[ObjectiveVector3D, Solution]] = []

    pos = 0
    total = order.size
    while pos < total:
        level = table.c[order[pos]]
        end = pos
        while end < total and table.c[order[end]] == level:
            end += 1
        # Staircase of everything on the front at strictly higher c.
        if front_mu:
            hi_mu = np.asarray(front_mu)
            hi_order = np.argsort(hi_mu, kind="stable")
            hi_mu = hi_mu[hi_order]
            hi_min_var = np.minimum.accumulate(np.asarray(front_var)[hi_order])
        new_mu: list[float] = []
        new_var: list[float] = []
        best_var = math.inf
        last = None
        for r in order[pos:end]:
            m, v = table.mu[r], table.var[r]
            if last == (m, v):
                continue
            last = (m, v)
            # Within a level rows arrive by (mu, v): a row survives iff its v
            # beats every earlier row's v.
            if v >= best_var:
                continue
            best_var = v
            if front_mu:
                j = np.searchsorted(hi_mu, m, side="right")
                if j > 0 and hi_min_var[j - 1] <= v:
                    continue
            new_mu.append(m)
            new_var.append(v)
            result.append((ObjectiveVector3D(float(m), float(v), int(level)), table.solution(r)))
        front_mu.extend(new_mu)
        front_var.extend(new_var)
        pos = end
    return result


def _member_arrays(members, instance: StochasticInstance, c: ConstraintFunction):
    if isinstance(members, ParetoArchive):
        members = list(members)
    sols: list[Solution] = []
    mus, vars_, cs = [], [], []
    for item in members:
        if isinstance(item, Solution):
            sol = item
        else:
            sol = item[0] if isinstance(item[0], Solution) else item[1]
        bits = as_bits(sol, instance.n)
        m, v = _sums(instance, bits)
        sols.append(sol if isinstance(sol, Solution) else Solution(bits))
        mus.append(m)
        vars_.append(v)
        cs.append(constraint_value(c, bits))
    return sols, np.asarray(mus, dtype=float), np.asarray(vars_, dtype=float), np.asarray(cs, dtype=np.int64)


class Extractor:
    """Caches member weight sums so many (k, alpha) / (B, alpha) queries are cheap."""

    def __init__(self, members, instance: StochasticInstance, c: ConstraintFunction = CARDINALITY):
        self.instance = instance
        self.sols, self.mu, self.var, self.c = _member_arrays(members, instance, c)
        self._sqrt_var = np.sqrt(self.var)
        self.popcount = np.asarray([s.popcount for s in self.sols], dtype=np.int64)

    def chance_values(self, cl: ConfidenceLevel) -> np.ndarray:
        return self.mu + cl.k_alpha * self._sqrt_var

    def _pick(self, candidates: np.ndarray) -> int:
        if candidates.size == 1:
            return int(candidates[0])
        return int(min(candidates, key=lambda i: (self.popcount[i], tuple(self.sols[i].bits))))

    def min_weight(self, cl: ConfidenceLevel, k: int) -> tuple[Solution, float] | None:
        ok = np.flatnonzero(self.c >= k)
        if ok.size == 0:
            return None
        w = self.chance_values(cl)[ok]
        best = w.min()
        i = self._pick(ok[w == best])
        return self.sols[i], float(best)

    def max_c(self, cl: ConfidenceLevel, budget: float) -> tuple[Solution, int] | None:
        w = self.chance_values(cl)
        ok = np.flatnonzero(w <= budget)
        if ok.size == 0:
            return None
        cbest = self.c[ok].max()
        ok = ok[self.c[ok] == cbest]
        wbest = w[ok].min()
        i = self._pick(ok[w[ok] == wbest])
        return self.sols[i], int(cbest)


def extract_min_weight(
    members: ParetoArchive | Iterable,
    instance: StochasticInstance,
    cl: ConfidenceLevel,
    k: int,
    c: ConstraintFunction = CARDINALITY,
) -> tuple[Solution, float] | None:
    """Member with c(x) >= k minimizing mu(x) + K_alpha sqrt(v(x)).

    Ties go to fewer set bits, then the lexicographically smaller bit string.
    ``None`` when no member reaches c(x) >= k.
    """
    return Extractor(members, instance, c).min_weight(cl, k)


def extract_max_c(
    members: ParetoArchive | Iterable,
    instance: StochasticInstance,
    cl: ConfidenceLevel,
    budget: float,
    c: ConstraintFunction = CARDINALITY,
) -> tuple[Solution, int] | None:
    """Member with mu(x) + K_alpha sqrt(v(x)) <= budget maximizing c(x); ties go to smaller weight."""
    if budget < 0:
        raise ValueError(f"budget must be non-negative, got {budget}")
    return Extractor(members, instance, c).max_c(cl, budget)


def quantile_optima(
    members, instance: StochasticInstance, cl: ConfidenceLevel, c: ConstraintFunction = CARDINALITY
) -> list[tuple[Solution, float]]:
    """x_alpha^k for k = 0..c_max, skipping levels no member reaches."""
    ex = members if isinstance(members, Extractor) else Extractor(members, instance, c)
    out = []
    for k in range(c.max_value(instance.n) + 1):
        hit = ex.min_weight(cl, k)
        if hit is not None:
            out.append(hit)
    return out


def budget_probe_grid(values: Iterable[float]) -> list[float]:
    """The given chance values plus midpoints between consecutive distinct ones."""
    vals = sorted(set(float(v) for v in values))
    grid = list(vals)
    grid.extend((a + b) / 2.0 for a, b in zip(vals[:-1], vals[1:]))
    return sorted(grid)


def exhaustive_min_weight(table: SolutionTable, cl: ConfidenceLevel, k: int) -> float | None:
    """Brute-force min of mu + K sqrt(v) over all x with c(x) >= k."""
    ok = table.c >= k
    if not ok.any():
        return None
    return float((table.mu[ok] + cl.k_alpha * np.sqrt(table.var[ok])).min())


def exhaustive_max_c(table: SolutionTable, cl: ConfidenceLevel, budget: float) -> int:
    """Brute-force max c(x) subject to mu + K sqrt(v) <= budget."""
    w = table.mu + cl.k_alpha * np.sqrt(table.var)
    return int(table.c[w <= budget].max())
