import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chancepareto.instance import StochasticInstance, generate_weights  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_instance(rng):
    return generate_weights("uniform", 8, rng)


def random_instances(count, n_range=(6, 12), seed=2024):
    """Scaled-down uniform-setting instances: mu in {n..2n}, var in {n^2..2n^2}."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        out.append(generate_weights("uniform", n, rng))
    return out


def make_instance(mu, var):
    return StochasticInstance(np.asarray(mu, float), np.asarray(var, float))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
