"""Scikit-learn style front end.

Items are rows of a ``(n_items, 2)`` array holding expected weight and
variance.  ``fit`` computes a population (by evolution or greedily), and the
``select*`` methods answer chance-constrained queries from it::

    opt = ChanceParetoOptimizer("GSEMO3D", budget=200_000, random_state=0).fit(X)
    mask = opt.select(beta=1e-4, k=5)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_array, check_is_fitted

from .chance import ConfidenceLevel
from .engine import ALGORITHMS, AlgorithmConfig, run
from .graph import Graph
from .instance import StochasticInstance
from .objectives import CARDINALITY, ConstraintFunction
from .oracle import Extractor, build_extreme_set


def check_items(X) -> StochasticInstance:
    """Validate an ``(n_items, 2)`` array of (expected weight, variance) rows."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns (mu, var), got {X.shape[1]}")
    return StochasticInstance(X[:, 0], X[:, 1])


def _confidence(alpha, beta) -> ConfidenceLevel:
    if (alpha is None) == (beta is None):
        raise ValueError("pass exactly one of alpha or beta")
    return ConfidenceLevel.from_alpha(alpha) if beta is None else ConfidenceLevel.from_beta(beta)


class _SelectorMixin:
    def _extractor(self) -> Extractor:
        check_is_fitted(self, "extractor_")
        return self.extractor_

    def select(self, k=None, alpha=None, beta=None) -> np.ndarray:
        """Boolean item mask minimizing mu + K_alpha sqrt(v) subject to c(x) >= k.

        Raises ``LookupError`` if the population holds no solution with c(x) >= k.
        """
        k = self._default_k() if k is None else k
        hit = self._extractor().min_weight(_confidence(alpha, beta), k)
        if hit is None:
            raise LookupError(f"no solution with c(x) >= {k} in the population")
        return hit[0].bits.copy()

    def chance_values(self, betas, k=None) -> np.ndarray:
        """Best chance-constrained weight for each tail mass in ``betas`` (NaN when infeasible)."""
        k = self._default_k() if k is None else k
        ex = self._extractor()
        out = []
        for b in np.atleast_1d(betas):
            hit = ex.min_weight(ConfidenceLevel.from_beta(float(b)), k)
            out.append(np.nan if hit is None else hit[1])
        return np.asarray(out)

    def select_budget(self, budget, alpha=None, beta=None) -> np.ndarray:
        """Boolean item mask maximizing c(x) subject to mu + K_alpha sqrt(v) <= budget."""
        hit = self._extractor().max_c(_confidence(alpha, beta), float(budget))
        if hit is None:
            raise LookupError(f"no solution within budget {budget}")
        return hit[0].bits.copy()

    def _default_k(self):
        return self.constraint_.max_value(self.instance_.n)


class ChanceParetoOptimizer(_SelectorMixin, BaseEstimator):
    """GSEMO-family optimizer for chance-constrained subset selection.

    Parameters
    ----------
    algorithm : {"SEMO2D", "SEMO3D", "GSEMO2D", "GSEMO3D"}
    budget : int
        Offspring evaluations.
    k : int or None
        Constraint level of the 2D formulation; defaults to the largest
        attainable constraint value (all items, or all graph nodes).
    init : {"uniform-random", "all-zeros"}
    random_state : int, RandomState or None
        Integers are used directly as the 64-bit engine seed.
    """

    def __init__(self, algorithm="GSEMO3D", budget=100_000, k=None, init="uniform-random",
                 random_state=None):
        self.algorithm = algorithm
        self.budget = budget
        self.k = k
        self.init = init
        self.random_state = random_state

    def fit(self, X, y=None, graph: Graph | None = None):
        """Run the optimizer; ``graph`` switches c(x) to the domination count."""
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        instance = check_items(X)
        c = CARDINALITY if graph is None else ConstraintFunction.domination(graph)
        if isinstance(self.random_state, (int, np.integer)):
            seed = int(self.random_state)
        else:
            seed = int(check_random_state(self.random_state).randint(0, 2**63 - 1, dtype=np.int64))
        k = c.max_value(instance.n) if self.k is None else self.k
        config = AlgorithmConfig.for_algorithm(self.algorithm, self.budget, seed, k, self.init)
        record = run(instance, c, config)

        self.instance_ = instance
        self.constraint_ = c
        self.record_ = record
        self.archive_ = record.archive
        self.max_population_size_ = record.max_population_size
        self.n_evaluations_ = record.evaluations_used
        self.n_features_in_ = 2
        self.extractor_ = Extractor(record.archive, instance, c)
        return self

    def _default_k(self):
        return self.constraint_.max_value(self.instance_.n) if self.k is None else self.k


class ExtremePointOracle(_SelectorMixin, BaseEstimator):
    """Greedy f_lambda optima for every cardinality and every ordering-relevant lambda.

    Answers the same queries as :class:`ChanceParetoOptimizer` under the
    cardinality constraint, without search.
    """

    def fit(self, X, y=None):
        instance = check_items(X)
        self.instance_ = instance
        self.constraint_ = CARDINALITY
        self.extreme_set_ = build_extreme_set(instance)
        self.n_features_in_ = 2
        self.extractor_ = Extractor(self.extreme_set_.members(), instance, CARDINALITY)
        return self
