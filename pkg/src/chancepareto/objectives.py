"""Solutions, the 2- and 3-objective fitness functions, and their dominance relations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Union

import numpy as np

from .instance import StochasticInstance

if TYPE_CHECKING:
    from .graph import Graph


class Solution:
    """A bit string x in {0,1}^n.

    Bits are held as a read-only boolean array; equality and hashing go by
    content.  Ordering (``<``) is lexicographic on the bit string read from
    item 0 onwards.
    """

    __slots__ = ("bits", "popcount")

    def __init__(self, bits):
        arr = np.array(bits, dtype=bool).reshape(-1)
        arr.setflags(write=False)
        self.bits = arr
        self.popcount = int(arr.sum())

    @classmethod
    def zeros(cls, n: int) -> "Solution":
        return cls(np.zeros(n, dtype=bool))

    @classmethod
    def ones(cls, n: int) -> "Solution":
        return cls(np.ones(n, dtype=bool))

    @classmethod
    def from_string(cls, text: str) -> "Solution":
        """Parse ``"0110"``-style text, first character is item 0."""
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls([ch == "1" for ch in text])

    @classmethod
    def from_indices(cls, n: int, indices) -> "Solution":
        arr = np.zeros(n, dtype=bool)
        arr[list(indices)] = True
        return cls(arr)

    @classmethod
    def from_hex(cls, text: str, n: int) -> "Solution":
        """Inverse of :meth:`to_hex`."""
        value = int(text, 16) if text else 0
        if value >> n:
            raise ValueError(f"hex string {text!r} has bits beyond n={n}")
        return cls([(value >> i) & 1 for i in range(n)])

    @property
    def n(self) -> int:
        return int(self.bits.size)

    def to_hex(self) -> str:
        """Hex encoding with item i as bit i of the integer (item 0 least significant)."""
        value = 0
        for i in np.flatnonzero(self.bits)[::-1]:
            value |= 1 << int(i)
        width = max(1, (self.n + 3) // 4)
        return format(value, f"0{width}x")

    def flip(self, *positions: int) -> "Solution":
        arr = self.bits.copy()
        for p in positions:
            arr[p] = not arr[p]
        return Solution(arr)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __lt__(self, other: "Solution"):
        return tuple(self.bits) < tuple(other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __str__(self):
        return "".join("1" if b else "0" for b in self.bits)

    def __repr__(self):
        return f"Solution('{self}')"


def as_bits(x, n: int | None = None) -> np.ndarray:
    """Boolean view of a Solution or bit sequence, checked against ``n``."""
    bits = x.bits if isinstance(x, Solution) else np.asarray(x, dtype=bool).reshape(-1)
    if n is not None and bits.size != n:
        raise ValueError(f"solution has length {bits.size}, instance has {n} items")
    return bits


class ObjectiveVector2D(NamedTuple):
    mu_hat: float
    v_hat: float


class ObjectiveVector3D(NamedTuple):
    mu: float
    v: float
    c: int


ObjectiveVector = Union[ObjectiveVector2D, ObjectiveVector3D]


class Dominance(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    NONE = "none"

    def __bool__(self):
        return self is not Dominance.NONE


class ConstraintKind(str, enum.Enum):
    CARDINALITY = "cardinality"
    DOMINATION = "domination-count"


@dataclass(frozen=True)
class ConstraintFunction:
    """c(x): either |x|_1 or the number of graph nodes dominated by x."""

    kind: ConstraintKind
    graph: "Graph | None" = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ConstraintKind(self.kind))
        if self.kind is ConstraintKind.DOMINATION and self.graph is None:
            raise ValueError("domination-count constraint needs a graph")

    @classmethod
    def cardinality(cls) -> "ConstraintFunction":
        return cls(ConstraintKind.CARDINALITY)

    @classmethod
    def domination(cls, graph: "Graph") -> "ConstraintFunction":
        return cls(ConstraintKind.DOMINATION, graph)

    def max_value(self, n: int) -> int:
        if self.kind is ConstraintKind.CARDINALITY:
            return n
        return self.graph.node_count

    def __call__(self, x) -> int:
        return constraint_value(self, x)


CARDINALITY = ConstraintFunction.cardinality()


def constraint_value(c: ConstraintFunction, x) -> int:
    if c.kind is ConstraintKind.CARDINALITY:
        return int(as_bits(x).sum())
    return c.graph.domination_count(x)


def _sums(instance: StochasticInstance, bits: np.ndarray) -> tuple[float, float]:
    # Index-order accumulation matches the compiled engine bit for bit.
    mu = 0.0
    var = 0.0
    for i in np.flatnonzero(bits):
        mu += float(instance.mu[i])
        var += float(instance.var[i])
    return mu, var


def eval_3d(instance: StochasticInstance, x, c: ConstraintFunction = CARDINALITY) -> ObjectiveVector3D:
    bits = as_bits(x, instance.n)
    mu, var = _sums(instance, bits)
    return ObjectiveVector3D(mu, var, constraint_value(c, bits))


def eval_2d(
    instance: StochasticInstance, x, k: int, c: ConstraintFunction = CARDINALITY
) -> ObjectiveVector2D:
    """Penalized (mu, v): plain sums when c(x) >= k, else (k - c(x)) times (1 + total)."""
    bits = as_bits(x, instance.n)
    if not 0 <= k <= c.max_value(instance.n):
        raise ValueError(f"k={k} outside [0, {c.max_value(instance.n)}]")
    cx = constraint_value(c, bits)
    if cx >= k:
        return ObjectiveVector2D(*_sums(instance, bits))
    gap = k - cx
    return ObjectiveVector2D(gap * (1.0 + instance.mu_total), gap * (1.0 + instance.var_total))


def dominates_2d(a: ObjectiveVector2D, b: ObjectiveVector2D) -> Dominance:
    """Dominance of ``a`` over ``b`` when minimizing both components."""
    if a[0] <= b[0] and a[1] <= b[1]:
        if a[0] == b[0] and a[1] == b[1]:
            return Dominance.WEAK
        return Dominance.STRONG
    return Dominance.NONE


def dominates_3d(a: ObjectiveVector3D, b: ObjectiveVector3D) -> Dominance:
    """Dominance of ``a`` over ``b``: mu and v minimized, c maximized."""
    if a[0] <= b[0] and a[1] <= b[1] and a[2] >= b[2]:
        if a[0] == b[0] and a[1] == b[1] and a[2] == b[2]:
            return Dominance.WEAK
        return Dominance.STRONG
    return Dominance.NONE


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> Dominance:
    if len(a) == 3:
        return dominates_3d(a, b)
    return dominates_2d(a, b)
