"""Compiled inner loop for the GSEMO family.

Random draws come only from ``rng.random()`` on a NumPy ``Generator``, which
numba advances in place, so the pure-Python reference in ``engine`` and this
kernel consume identical streams.  Per iteration the order is: one draw for
the parent index, then the mutation draws.
"""

import math

import numpy as np
from numba import njit

CARDINALITY = 0
DOMINATION = 1

STANDARD_BIT = 0
ONE_BIT = 1
MIXED_1_2 = 2


@njit(cache=True)
def uniform_index(rng, m):
    i = int(rng.random() * m)
    if i >= m:
        i = m - 1
    return i


@njit(cache=True)
def mutate_inplace(child, op, rng):
    n = child.shape[0]
    if op == ONE_BIT:
        i = uniform_index(rng, n)
        child[i] ^= 1
    elif op == MIXED_1_2:
        if rng.random() < 0.5:
            i = uniform_index(rng, n)
            child[i] ^= 1
        else:
            i = uniform_index(rng, n)
            j = uniform_index(rng, n - 1)
            if j >= i:
                j += 1
            child[i] ^= 1
            child[j] ^= 1
    else:
        # Geometric gaps between flipped positions: same law as n Bernoulli(1/n) trials.
        log_q = math.log1p(-1.0 / n)
        pos = -1
        while True:
            gap = math.floor(math.log(1.0 - rng.random()) / log_q)
            if gap >= n:
                break
            pos += int(gap) + 1
            if pos >= n:
                break
            child[pos] ^= 1


@njit(cache=True)
def evaluate(bits, mu, var, c_kind, indptr, indices, covered):
    m = 0.0
    v = 0.0
    cnt = 0
    n = bits.shape[0]
    for i in range(n):
        if bits[i]:
            m += mu[i]
            v += var[i]
            cnt += 1
    if c_kind == CARDINALITY:
        return m, v, cnt
    covered[:] = 0
    for u in range(n):
        if bits[u]:
            covered[u] = 1
            for p in range(indptr[u], indptr[u + 1]):
                covered[indices[p]] = 1
    c = 0
    for u in range(covered.shape[0]):
        c += covered[u]
    return m, v, c


@njit(cache=True)
def objective(bits, mu, var, c_kind, indptr, indices, covered, dim, k, mu_total, var_total, out):
    m, v, c = evaluate(bits, mu, var, c_kind, indptr, indices, covered)
    if dim == 3:
        out[0] = m
        out[1] = v
        out[2] = c
    elif c >= k:
        out[0] = m
        out[1] = v
        out[2] = 0.0
    else:
        gap = k - c
        out[0] = gap * (1.0 + mu_total)
        out[1] = gap * (1.0 + var_total)
        out[2] = 0.0


@njit(cache=True)
def try_insert(obj, slot, size, y):
    """Archive update on the objective table; returns the position for ``y`` or -1.

    ``obj`` rows and ``slot`` entries are compacted in place (stable order);
    the caller stores y's bits in a free slot and records it at the returned
    position.  The third objective is maximized; 2D archives store 0 there so
    it never decides a comparison.
    """
    y0 = y[0]
    y1 = y[1]
    y2 = y[2]
    for i in range(size):
        if obj[i, 0] <= y0 and obj[i, 1] <= y1 and obj[i, 2] >= y2:
            if obj[i, 0] != y0 or obj[i, 1] != y1 or obj[i, 2] != y2:
                return -1
    out = 0
    for i in range(size):
        if y0 <= obj[i, 0] and y1 <= obj[i, 1] and y2 >= obj[i, 2]:
            continue
        if out != i:
            obj[out, 0] = obj[i, 0]
            obj[out, 1] = obj[i, 1]
            obj[out, 2] = obj[i, 2]
            slot[out], slot[i] = slot[i], slot[out]
        out += 1
    obj[out, 0] = y0
    obj[out, 1] = y1
    obj[out, 2] = y2
    return out


@njit(cache=True)
def evolve(pop_bits, pop_obj, slot, size, max_size, iters, rng,
           mu, var, c_kind, indptr, indices, dim, k, op):
    """Run ``iters`` GSEMO iterations; returns (pop_bits, pop_obj, slot, size, max_size).

    Member i has objectives ``pop_obj[i]`` and bits ``pop_bits[slot[i]]``;
    ``slot[size:]`` lists the free bit rows.  Arrays double when full.
    """
    n = mu.shape[0]
    mu_total = 0.0
    var_total = 0.0
    for i in range(n):
        mu_total += mu[i]
        var_total += var[i]
    n_nodes = indptr.shape[0] - 1
    covered = np.zeros(max(n_nodes, 1), dtype=np.uint8)
    y = np.empty(3, dtype=np.float64)
    for _ in range(iters):
        if size == pop_obj.shape[0]:
            cap = 2 * size
            nb = np.empty((cap, n), dtype=np.uint8)
            no = np.empty((cap, 3), dtype=np.float64)
            ns = np.arange(cap)
            nb[:size] = pop_bits[:size]
            no[:size] = pop_obj[:size]
            ns[:size] = slot[:size]
            pop_bits = nb
            pop_obj = no
            slot = ns
        parent = uniform_index(rng, size)
        # slot[size] is free: build the child there.
        child = pop_bits[slot[size]]
        child[:] = pop_bits[slot[parent]]
        mutate_inplace(child, op, rng)
        objective(child, mu, var, c_kind, indptr, indices, covered, dim, k, mu_total, var_total, y)
        pos = try_insert(pop_obj, slot, size, y)
        if pos >= 0:
            # The child's slot sits at index ``size`` and compaction only swaps
            # entries below it, so move it to ``pos``.
            slot[pos], slot[size] = slot[size], slot[pos]
            size = pos + 1
            if size > max_size:
                max_size = size
    return pop_bits, pop_obj, slot, size, max_size
