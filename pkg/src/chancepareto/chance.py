"""Normal quantiles and the scalarizations used to rank solutions.

``chance_value`` is the deterministic equivalent of the chance constraint,
mu(x) + K_alpha * sqrt(v(x)).  ``f_lambda`` is the weighted sum of expected
weight and variance whose per-cardinality minimizers are the extreme points
of the (mu, v) front, and ``lambda_breakpoints`` lists where the item order
under ``f_lambda`` can change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .instance import StochasticInstance
from .objectives import as_bits

__all__ = [
    "normal_quantile",
    "normal_isf",
    "ConfidenceLevel",
    "chance_value",
    "f_lambda",
    "item_scores",
    "LambdaBreakpoints",
    "lambda_breakpoints",
]

# Acklam's rational approximation, relative error about 1.15e-9 before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002499106e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _lower_quantile(p: float) -> float:
    """Quantile for 0 < p <= 0.5, computed without forming 1 - p."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    else:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    # One Halley step against the erfc-based CDF; erfc keeps relative accuracy in the tail.
    e = 0.5 * math.erfc(-x / _SQRT2) - p
    u = e * _SQRT2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def normal_quantile(alpha: float) -> float:
    """Inverse standard Normal CDF.

    Absolute error is below 1e-10 on (0, 1); the result is exactly
    antisymmetric, ``normal_quantile(1 - a) == -normal_quantile(a)`` whenever
    ``1 - a`` is representable.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if alpha == 0.5:
        return 0.0
    if alpha < 0.5:
        return _lower_quantile(alpha)
    return -_lower_quantile(1.0 - alpha)


def normal_isf(beta: float) -> float:
    """Upper-tail quantile: the x with P(Z > x) = beta.

    Use this instead of ``normal_quantile(1 - beta)`` for tiny beta, where
    ``1 - beta`` is not representable (``1 - 1e-16`` rounds to ``1 - 1.11e-16``).
    """
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta!r}")
    if beta == 0.5:
        return 0.0
    if beta < 0.5:
        return -_lower_quantile(beta)
    return _lower_quantile(1.0 - beta)


@dataclass(frozen=True)
class ConfidenceLevel:
    """A reliability level alpha in [1/2, 1) and its cached quantile K_alpha.

    ``beta = 1 - alpha`` is kept alongside because the experiments specify
    levels as tail masses down to 1e-16.
    """

    alpha: float
    k_alpha: float = field(repr=False)
    beta: float = field(repr=False)

    @classmethod
    def from_alpha(cls, alpha: float) -> "ConfidenceLevel":
        alpha = float(alpha)
        if not 0.5 <= alpha < 1.0:
            raise ValueError(f"alpha must lie in [0.5, 1), got {alpha!r}")
        return cls(alpha, normal_quantile(alpha), 1.0 - alpha)

    @classmethod
    def from_beta(cls, beta: float) -> "ConfidenceLevel":
        beta = float(beta)
        if not 0.0 < beta <= 0.5:
            raise ValueError(f"beta must lie in (0, 0.5], got {beta!r}")
        return cls(1.0 - beta, normal_isf(beta), beta)


def _weight_sums(instance: StochasticInstance, x) -> tuple[float, float]:
    bits = as_bits(x, instance.n)
    mu = 0.0
    var = 0.0
    for i in np.flatnonzero(bits):
        mu += float(instance.mu[i])
        var += float(instance.var[i])
    return mu, var


def chance_value(instance: StochasticInstance, x, cl: ConfidenceLevel) -> float:
    """mu(x) + K_alpha * sqrt(v(x))."""
    mu, var = _weight_sums(instance, x)
    return mu + cl.k_alpha * math.sqrt(var)


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")
    return lam


def item_scores(instance: StochasticInstance, lam: float) -> np.ndarray:
    """f_lambda(e_i) = lam * mu_i + (1 - lam) * var_i for every item."""
    lam = _check_lambda(lam)
    return lam * instance.mu + (1.0 - lam) * instance.var


def f_lambda(instance: StochasticInstance, x, lam: float) -> float:
    """lam * mu(x) + (1 - lam) * v(x).

    An integer ``x`` is read as an item index and scores that single item.
    """
    lam = _check_lambda(lam)
    if isinstance(x, (int, np.integer)):
        return lam * float(instance.mu[x]) + (1.0 - lam) * float(instance.var[x])
    mu, var = _weight_sums(instance, x)
    return lam * mu + (1.0 - lam) * var


@dataclass(frozen=True)
class LambdaBreakpoints:
    values: tuple[float, ...]
    midpoints: tuple[float, ...]

    @property
    def interior(self) -> tuple[float, ...]:
        return self.values[1:-1]


def _merge_close(values: np.ndarray, rtol: float) -> list[float]:
    kept: list[float] = []
    for lam in values:
        lam = float(lam)
        if kept and abs(lam - kept[-1]) <= rtol * max(1.0, abs(lam)):
            continue
        kept.append(lam)
    return kept


def lambda_breakpoints(instance: StochasticInstance, rtol: float = 1e-12) -> LambdaBreakpoints:
    """Weights where two items swap places in the f_lambda order.

    A pair (i, j) contributes when var_i < var_j and mu_i > mu_j, at
    (var_j - var_i) / ((mu_i - mu_j) + (var_j - var_i)).  Values within
    ``rtol * max(1, |lam|)`` of the previous kept value are merged.
    """
    mu = instance.mu
    var = instance.var
    dmu = mu[:, None] - mu[None, :]
    dvar = var[None, :] - var[:, None]
    mask = (dvar > 0) & (dmu > 0)
    lams = dvar[mask] / (dmu[mask] + dvar[mask])
    interior = _merge_close(np.sort(lams), rtol)
    values = (0.0, *interior, 1.0)
    midpoints = tuple((a + b) / 2.0 for a, b in zip(values[:-1], values[1:]))
    return LambdaBreakpoints(values, midpoints)
