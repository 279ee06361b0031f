"""Undirected simple graphs, edge-list ingestion and the domination count."""

from __future__ import annotations

import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .objectives import as_bits

log = logging.getLogger(__name__)

_DECLARED_N = re.compile(r"^[%#]+\s*n\s*=\s*(\d+)")


class EdgeListFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Compressed adjacency: neighbors of u are ``indices[indptr[u]:indptr[u+1]]``, sorted."""

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    dropped_duplicates: int = field(default=0, compare=False)
    dropped_self_loops: int = field(default=0, compare=False)

    @classmethod
    def from_edges(cls, node_count: int, edges) -> "Graph":
        """Build a simple undirected graph, dropping self-loops and repeated edges."""
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        seen: set[tuple[int, int]] = set()
        loops = dups = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{node_count - 1}")
            if u == v:
                loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                dups += 1
                continue
            seen.add(key)
        neighbors: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in seen:
            neighbors[u].append(v)
            neighbors[v].append(u)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        for u, nb in enumerate(neighbors):
            nb.sort()
            indptr[u + 1] = indptr[u] + len(nb)
        indices = np.fromiter((v for nb in neighbors for v in nb), dtype=np.int64, count=int(indptr[-1]))
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return cls(node_count, indptr, indices, dups, loops)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        nodes = sorted(g.nodes())
        index = {u: i for i, u in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in g.edges()))

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(u).tolist() for u in range(self.node_count)]

    def edges(self):
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def domination_count(self, x) -> int:
        return domination_count(self, x)

    def summary(self) -> dict:
        hist = Counter(self.degrees.tolist())
        return {
            "n": self.node_count,
            "m": self.edge_count,
            "degree_histogram": dict(sorted(hist.items())),
        }

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None


def domination_count(graph: Graph, x) -> int:
    """Number of nodes that are selected or adjacent to a selected node."""
    bits = as_bits(x, graph.node_count)
    covered = bits.copy()
    for u in np.flatnonzero(bits):
        covered[graph.indices[graph.indptr[u] : graph.indptr[u + 1]]] = True
    return int(covered.sum())


def load_edge_list(
    path: str | os.PathLike, one_based: bool = True, node_count: int | None = None
) -> Graph:
    """Read whitespace-separated ``u v`` pairs.

    Lines starting with ``%`` or ``#`` are comments, except that a comment of
    the form ``# n=<count>`` declares the node count (isolated trailing nodes
    survive a save/load round trip this way).  Tokens after the second
    on a line (edge weights, timestamps) are ignored.  In MatrixMarket files
    (first line ``%%MatrixMarket``) the first data line is the size line and is
    used as the node count.  Without ``node_count`` the graph has as many
    nodes as the largest index seen.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    matrix_market = bool(lines) and lines[0].startswith("%%MatrixMarket")
    offset = 1 if one_based else 0
    edges: list[tuple[int, int]] = []
    declared = node_count
    size_line_pending = matrix_market
    max_index = -1
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] in "%#":
            m = _DECLARED_N.match(stripped)
            if m and declared is None:
                declared = int(m.group(1))
            continue
        tokens = stripped.split()
        if size_line_pending:
            size_line_pending = False
            try:
                rows = int(tokens[0])
            except ValueError:
                raise EdgeListFormatError(f"bad MatrixMarket size line {stripped!r}", lineno) from None
            if declared is None:
                declared = rows
            continue
        if len(tokens) < 2:
            raise EdgeListFormatError(f"expected 'u v', got {stripped!r}", lineno)
        try:
            u, v = int(tokens[0]) - offset, int(tokens[1]) - offset
        except ValueError:
            raise EdgeListFormatError(f"non-integer node id in {stripped!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(
                f"node id below {offset} in {stripped!r} ({'1' if one_based else '0'}-based input)", lineno
            )
        max_index = max(max_index, u, v)
        edges.append((u, v))

    n = max_index + 1 if declared is None else declared
    if max_index >= n:
        raise ValueError(f"edge references node {max_index + offset} but only {n} nodes declared")
    graph = Graph.from_edges(n, edges)
    if graph.dropped_duplicates or graph.dropped_self_loops:
        log.warning(
            "%s: dropped %d duplicate edges and %d self-loops",
            path, graph.dropped_duplicates, graph.dropped_self_loops,
        )
    return graph


def save_edge_list(graph: Graph, path: str | os.PathLike, one_based: bool = True) -> None:
    offset = 1 if one_based else 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={graph.node_count} m={graph.edge_count}\n")
        for u, v in graph.edges():
            fh.write(f"{u + offset} {v + offset}\n")


def generate_synthetic(model: str, n: int, rng: np.random.Generator, **params) -> Graph:
    """Random graph stand-ins for repository instances.

    ``model`` is ``"random-regular"`` (needs ``d``) or ``"erdos-renyi"`` (needs ``p``).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    seed = int(rng.integers(0, 2**32))
    if model == "random-regular":
        d = int(params["d"])
        if d < 0 or (d > 0 and d >= n):
            raise ValueError(f"degree d={d} impossible for n={n}")
        if (n * d) % 2:
            raise ValueError(f"n*d must be even, got n={n}, d={d}")
        g = nx.random_regular_graph(d, n, seed=seed)
    elif model == "erdos-renyi":
        p = float(params["p"])
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {p}")
        g = nx.gnp_random_graph(n, p, seed=seed)
    else:
        raise ValueError(f"unknown graph model {model!r}")
    g.add_nodes_from(range(n))
    return Graph.from_networkx(g)
