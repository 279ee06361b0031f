"""Independent reference computations used only by the tests."""

import itertools
import math

import numpy as np


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def bisect_upper_quantile(beta: float, tol: float = 1e-13) -> float:
    """x with P(Z > x) = beta, by bisection on the erfc survival function."""
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if normal_sf(mid) > beta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_quantile(alpha: float) -> float:
    """x with P(Z <= x) = alpha; the tail mass 1 - alpha is exact in floating point for alpha >= 0.5."""
    if alpha >= 0.5:
        return bisect_upper_quantile(1.0 - alpha)
    return -bisect_upper_quantile(alpha)


def naive_domination(adjacency, bits) -> int:
    n = len(adjacency)
    count = 0
    for u in range(n):
        if bits[u] or any(bits[v] for v in adjacency[u]):
            count += 1
    return count


def all_bitstrings(n):
    return [np.array(b, dtype=bool) for b in itertools.product([0, 1], repeat=n)]


def brute_f_lambda_min(mu, var, k, lam):
    """Minimum of lam*mu(x) + (1-lam)*v(x) over all x with exactly k items."""
    best = math.inf
    for combo in itertools.combinations(range(len(mu)), k):
        value = lam * sum(mu[i] for i in combo) + (1 - lam) * sum(var[i] for i in combo)
        best = min(best, value)
    return best


def brute_chance_min(mu, var, k, k_alpha):
    best = math.inf
    for combo in itertools.combinations(range(len(mu)), k):
        m = sum(mu[i] for i in combo)
        v = sum(var[i] for i in combo)
        best = min(best, m + k_alpha * math.sqrt(v))
    return best


def brute_max_items(mu, var, budget, k_alpha):
    """Largest |x| over all subsets with mu(x) + K sqrt(v(x)) <= budget."""
    n = len(mu)
    best = 0
    for mask in range(1 << n):
        items = [i for i in range(n) if mask >> i & 1]
        m = sum(mu[i] for i in items)
        v = sum(var[i] for i in items)
        if m + k_alpha * math.sqrt(v) <= budget:
            best = max(best, len(items))
    return best


def exact_mwu_enumeration(a, b):
    """Two-sided exact Mann-Whitney p by enumerating every split of the pooled midranks."""
    pooled = list(a) + list(b)
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        for t in range(i, j + 1):
            ranks[order[t]] = (i + j + 2) / 2.0
        i = j + 1
    n1, n2 = len(a), len(b)
    mean = n1 * n2 / 2.0
    u_obs = sum(ranks[:n1]) - n1 * (n1 + 1) / 2.0
    extreme = total = 0
    for combo in itertools.combinations(range(len(pooled)), n1):
        u = sum(ranks[t] for t in combo) - n1 * (n1 + 1) / 2.0
        total += 1
        if abs(u - mean) >= abs(u_obs - mean) - 1e-12:
            extreme += 1
    return extreme / total
