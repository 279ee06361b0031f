"""Two-sided Mann-Whitney U test with midrank ties."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

EXACT_MAX_TOTAL = 20


def _doubled_midranks(values: np.ndarray) -> np.ndarray:
    """2 * midrank of each value (integers, so comparisons stay exact)."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.int64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        # positions i..j share ranks i+1..j+1, midrank (i+j+2)/2
        ranks[order[i : j + 1]] = i + j + 2
        i = j + 1
    return ranks


def _tie_term(values: np.ndarray) -> float:
    _, counts = np.unique(values, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


def _exact_pvalue(ranks2: np.ndarray, n1: int, stat2: int) -> float:
    """P(|2U - n1 n2| >= |observed|) over all equally likely splits of the ranks."""
    n = ranks2.size
    n2 = n - n1
    max_sum = int(ranks2.sum())
    # ways[j, s]: subsets of size j with doubled-rank sum s
    ways = np.zeros((n1 + 1, max_sum + 1), dtype=np.float64)
    ways[0, 0] = 1.0
    for r in ranks2:
        r = int(r)
        ways[1:, r:] += ways[:-1, : max_sum + 1 - r].copy()
    sums = np.arange(max_sum + 1)
    two_u = sums - n1 * (n1 + 1)
    observed = abs(stat2 - n1 * n2)
    extreme = np.abs(two_u - n1 * n2) >= observed
    total = ways[n1].sum()
    return float(min(1.0, ways[n1, extreme].sum() / total))


def _asymptotic_pvalue(all_values: np.ndarray, n1: int, u: float) -> float:
    n = all_values.size
    n2 = n - n1
    mean = n1 * n2 / 2.0
    var = n1 * n2 / 12.0 * ((n + 1) - _tie_term(all_values) / (n * (n - 1))) if n > 1 else 0.0
    if var <= 0:
        return 1.0
    z = max(abs(u - mean) - 0.5, 0.0) / math.sqrt(var)
    return float(min(1.0, math.erfc(z / math.sqrt(2.0))))


def mann_whitney_u(
    sample_a: Sequence[float], sample_b: Sequence[float], method: str = "auto"
) -> float:
    """Two-sided p-value of the Mann-Whitney U test.

    ``method`` is ``"exact"`` (enumerate every assignment of the pooled
    midranks), ``"asymptotic"`` (Normal approximation with tie and continuity
    corrections) or ``"auto"``, which is exact when the pooled size is at most 20.
    """
    a = np.asarray(sample_a, dtype=float).reshape(-1)
    b = np.asarray(sample_b, dtype=float).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    if np.isnan(a).any() or np.isnan(b).any():
        raise ValueError("samples must not contain NaN")
    if method == "auto":
        method = "exact" if a.size + b.size <= EXACT_MAX_TOTAL else "asymptotic"
    pooled = np.concatenate([a, b])
    ranks2 = _doubled_midranks(pooled)
    n1 = a.size
    stat2 = int(ranks2[:n1].sum()) - n1 * (n1 + 1)  # 2 * U_a
    if method == "exact":
        return _exact_pvalue(ranks2, n1, stat2)
    if method == "asymptotic":
        return _asymptotic_pvalue(pooled, n1, stat2 / 2.0)
    raise ValueError(f"unknown method {method!r}")
