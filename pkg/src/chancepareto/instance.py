"""Stochastic item instances: expected weights, variances, generators and a text format."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstanceValidationError(ValueError):
    """Raised when expected weights or variances fall below 1."""


class WeightSetting(str, enum.Enum):
    UNIFORM = "uniform"
    UNIFORM_FIXED = "uniform-fixed"
    DEGREE_BASED = "degree-based"


@dataclass(frozen=True, eq=False)
class StochasticInstance:
    """n items with independent Normal weights N(mu_i, var_i).

    ``mu`` and ``var`` are stored as read-only float64 arrays.
    """

    mu: np.ndarray
    var: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64).reshape(-1)
        var = np.array(self.var, dtype=np.float64).reshape(-1)
        if mu.shape != var.shape:
            raise InstanceValidationError(
                f"mu has {mu.size} entries but var has {var.size}"
            )
        if mu.size == 0:
            raise InstanceValidationError("an instance needs at least one item")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(var))):
            raise InstanceValidationError("weights must be finite")
        bad = np.flatnonzero((mu < 1) | (var < 1))
        if bad.size:
            i = int(bad[0])
            raise InstanceValidationError(
                f"item {i}: need mu >= 1 and var >= 1, got mu={mu[i]!r}, var={var[i]!r}"
            )
        mu.setflags(write=False)
        var.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "var", var)

    @property
    def n(self) -> int:
        return int(self.mu.size)

    @property
    def mu_max(self) -> float:
        return float(self.mu.max())

    @property
    def v_max(self) -> float:
        return float(self.var.max())

    @property
    def mu_total(self) -> float:
        return _seq_sum(self.mu)

    @property
    def var_total(self) -> float:
        return _seq_sum(self.var)

    def __eq__(self, other):
        if not isinstance(other, StochasticInstance):
            return NotImplemented
        return np.array_equal(self.mu, other.mu) and np.array_equal(self.var, other.var)

    def __hash__(self):
        return hash((self.mu.tobytes(), self.var.tobytes()))

    def __repr__(self):
        return f"StochasticInstance(n={self.n})"


def _seq_sum(values) -> float:
    # Left-to-right accumulation, the same order the compiled engine uses.
    total = 0.0
    for value in values:
        total += float(value)
    return total


def generate_weights(
    setting: WeightSetting | str,
    n: int,
    rng: np.random.Generator,
    degrees: Sequence[int] | None = None,
) -> StochasticInstance:
    """Draw an instance for one of the three experimental weight settings.

    uniform: mu_i in {n..2n}, var_i in {n^2..2n^2}, integers drawn uniformly.
    uniform-fixed: mu_i as in uniform, var_i = 2n^2.
    degree-based: mu_i = (n + deg_i)^5 / n^4, var_i as in uniform.
    """
    setting = WeightSetting(setting)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if degrees is not None and len(degrees) != n:
        raise ValueError(f"expected {n} degrees, got {len(degrees)}")
    if setting is WeightSetting.DEGREE_BASED and degrees is None:
        raise ValueError("degree-based weights need node degrees")

    if setting is WeightSetting.DEGREE_BASED:
        deg = np.asarray(degrees, dtype=np.float64)
        if np.any(deg < 0):
            raise ValueError("degrees must be non-negative")
        mu = (n + deg) ** 5 / float(n) ** 4
    else:
        mu = rng.integers(n, 2 * n, endpoint=True, size=n).astype(np.float64)

    if setting is WeightSetting.UNIFORM_FIXED:
        var = np.full(n, 2.0 * n * n)
    else:
        var = rng.integers(n * n, 2 * n * n, endpoint=True, size=n).astype(np.float64)
    return StochasticInstance(mu, var)


def format_number(value: float) -> str:
    """Shortest decimal text that parses back to exactly ``value``."""
    value = float(value)
    if value.is_integer() and abs(value) < 2.0**53:
        return str(int(value))
    return repr(value)


def dumps_instance(instance: StochasticInstance) -> str:
    lines = [str(instance.n)]
    lines.extend(
        f"{format_number(m)} {format_number(v)}" for m, v in zip(instance.mu, instance.var)
    )
    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> StochasticInstance:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise InstanceFormatError("missing item count", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise InstanceFormatError(f"item count is not an integer: {lines[0]!r}", line=1) from None
    if n < 1:
        raise InstanceFormatError(f"item count must be positive, got {n}", line=1)
    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != n:
        raise InstanceFormatError(f"expected {n} item lines, found {len(body)}", line=len(lines))

    mu = np.empty(n)
    var = np.empty(n)
    for i, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != 2:
            raise InstanceFormatError(f"expected 'mu var', got {line!r}", line=i + 2)
        try:
            mu[i] = float(tokens[0])
            var[i] = float(tokens[1])
        except ValueError:
            raise InstanceFormatError(f"non-numeric value in {line!r}", line=i + 2) from None
    return StochasticInstance(mu, var)


def load_instance(path: str | os.PathLike) -> StochasticInstance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def save_instance(instance: StochasticInstance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(instance))
