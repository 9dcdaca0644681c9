import random

import pytest
from hypothesis import settings

from rzdg import _backend
from rzdg.graphs import Graph

settings.register_profile("repo", deadline=None)
settings.load_profile("repo")

BACKENDS = ["python"] + (["cython"] if _backend.compiled_kernels is not None else [])


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges([str(i) for i in range(n)], edges)


def seeded_graphs(count: int = 500, seed: int = 20240611, max_n: int = 16):
    """Reproducible graphs with 1..max_n vertices and edge densities 0.1 to 0.8."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        p = (0.1, 0.3, 0.5, 0.8)[i % 4]
        out.append(random_graph(rng, n, p))
    return out


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
