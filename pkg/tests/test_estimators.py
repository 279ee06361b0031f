import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from chancepareto.chance import ConfidenceLevel
from chancepareto.estimators import ChanceParetoOptimizer, ExtremePointOracle, check_items
from chancepareto.graph import generate_synthetic
from chancepareto.instance import generate_weights
from oracles import brute_chance_min


@pytest.fixture
def X():
    inst = generate_weights("uniform", 10, np.random.default_rng(0))
    return np.column_stack([inst.mu, inst.var])


def test_params_and_clone():
    est = ChanceParetoOptimizer(algorithm="SEMO3D", budget=500, random_state=3)
    assert est.get_params() == {"algorithm": "SEMO3D", "budget": 500, "k": None,
                                "init": "uniform-random", "random_state": 3}
    assert clone(est).get_params() == est.get_params()
    est.set_params(budget=10)
    assert est.budget == 10


def test_check_items():
    with pytest.raises(ValueError):
        check_items(np.ones((3, 3)))
    with pytest.raises(ValueError):
        check_items(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        check_items([[0.5, 1.0]])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ChanceParetoOptimizer().select(beta=0.1, k=1)


def test_fit_and_query(X):
    est = ChanceParetoOptimizer("GSEMO3D", budget=100_000, random_state=0).fit(X)
    assert est.n_evaluations_ == 100_000
    assert est.max_population_size_ >= len(est.archive_)
    mask = est.select(k=4, beta=1e-4)
    assert mask.dtype == bool and mask.sum() >= 4
    vals = est.chance_values([0.1, 1e-4], k=4)
    want = min(brute_chance_min(X[:, 0], X[:, 1], j, ConfidenceLevel.from_beta(1e-4).k_alpha)
               for j in range(4, 11))
    assert vals[1] == pytest.approx(want, rel=1e-12)
    budget_mask = est.select_budget(vals[1], beta=1e-4)
    assert budget_mask.sum() >= 4
    with pytest.raises(ValueError):
        est.select(k=4, alpha=0.9, beta=0.1)


def test_same_seed_same_archive(X):
    a = ChanceParetoOptimizer("GSEMO2D", budget=2000, k=5, random_state=1).fit(X)
    b = ChanceParetoOptimizer("GSEMO2D", budget=2000, k=5, random_state=1).fit(X)
    assert list(a.archive_) == list(b.archive_)


def test_unreachable_level_raises(X):
    est = ChanceParetoOptimizer("SEMO3D", budget=1, init="all-zeros", random_state=0).fit(X)
    with pytest.raises(LookupError):
        est.select(k=5, beta=0.1)


def test_graph_fit():
    rng = np.random.default_rng(2)
    g = generate_synthetic("random-regular", 12, rng, d=3)
    inst = generate_weights("degree-based", 12, rng, degrees=g.degrees)
    est = ChanceParetoOptimizer("GSEMO3D", budget=20_000, random_state=0)
    est.fit(np.column_stack([inst.mu, inst.var]), graph=g)
    mask = est.select(beta=0.01)
    assert g.domination_count(mask) == 12


def test_unknown_algorithm(X):
    with pytest.raises(ValueError):
        ChanceParetoOptimizer("RLS").fit(X)


def test_extreme_point_oracle_matches_brute_force(X):
    oracle = ExtremePointOracle().fit(X)
    for beta in (0.2, 1e-8, 1e-16):
        k_alpha = ConfidenceLevel.from_beta(beta).k_alpha
        for k in range(11):
            want = min(brute_chance_min(X[:, 0], X[:, 1], j, k_alpha) for j in range(k, 11))
            assert oracle.chance_values([beta], k=k)[0] == pytest.approx(want, rel=1e-12)
