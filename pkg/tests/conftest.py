import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gedgen.graph import LabeledGraph, running_example_graph

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def example_graph() -> LabeledGraph:
    return running_example_graph()


def random_labeled(rng: np.random.Generator, n: int, m: int, p: float = 0.4) -> LabeledGraph:
    upper = np.triu(rng.random((n, n)) < p, 1).astype(np.int64)
    return LabeledGraph(tuple(rng.integers(1, m + 1, size=n)), upper + upper.T, m)
