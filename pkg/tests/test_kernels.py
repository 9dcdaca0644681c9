import itertools
import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BACKENDS, random_graph
from rzdg import _backend, _pykernels
from rzdg.graphs import cartesian_product, zero_divisor_graph
from rzdg.rings import ring_from_modulus
from rzdg.solver import _greedy, gamma_r_brute

needs_compiled = pytest.mark.skipif(_backend.compiled_kernels is None, reason="compiled kernels not built")


def root_bound(closed, pick_cost, allow_single):
    n = len(closed)
    cov = sorted((c.bit_count() for c in closed), reverse=True)
    return _pykernels._cover_bound(cov, n, pick_cost, allow_single)


@given(st.integers(1, 12), st.floats(0, 1), st.integers(0, 2**32))
@settings(max_examples=200)
def test_cover_bound_is_admissible(n, p, seed):
    g = random_graph(random.Random(seed), n, p)
    assert root_bound(g.closed, 2, True) <= gamma_r_brute(g)
    dom = min(
        k for k in range(n + 1)
        for combo in itertools.combinations(range(n), k)
        if _or(g.closed, combo) == (1 << n) - 1
    )
    assert root_bound(g.closed, 1, False) <= dom


def _or(closed, combo):
    m = 0
    for u in combo:
        m |= closed[u]
    return m


@needs_compiled
@pytest.mark.parametrize("a, b", [(10, 12), (25, 25), (8, 27), (9, 49), (16, 18)])
def test_backends_walk_the_same_tree_on_products(a, b):
    g = cartesian_product(zero_divisor_graph(ring_from_modulus(a)), zero_divisor_graph(ring_from_modulus(b)))
    closed = g.closed
    w, picks, singles = _greedy(closed, 2, True)
    results = [
        kern.branch_and_bound(closed, 2, True, w, picks, singles, 10**7, 0.0)
        for kern in (_backend.python_kernels, _backend.compiled_kernels)
    ]
    assert results[0] == results[1]


@needs_compiled
def test_backends_agree_on_random_graphs():
    rng = random.Random(99)
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 40), rng.choice([0.05, 0.1, 0.3, 0.6]))
        for pick_cost, allow_single in ((2, True), (1, False)):
            w, picks, singles = _greedy(g.closed, pick_cost, allow_single)
            py = _backend.python_kernels.branch_and_bound(g.closed, pick_cost, allow_single, w, picks, singles, 5000, 0.0)
            cy = _backend.compiled_kernels.branch_and_bound(g.closed, pick_cost, allow_single, w, picks, singles, 5000, 0.0)
            assert py == cy


@needs_compiled
def test_budget_exhaustion_is_identical_across_backends():
    g = random_graph(random.Random(5), 60, 0.08)
    w, picks, singles = _greedy(g.closed, 2, True)
    py = _backend.python_kernels.branch_and_bound(g.closed, 2, True, w, picks, singles, 100, 0.0)
    cy = _backend.compiled_kernels.branch_and_bound(g.closed, 2, True, w, picks, singles, 100, 0.0)
    assert py == cy and py[4] is False


@pytest.mark.parametrize("name", BACKENDS)
def test_brute_kernels_on_wide_graphs(name):
    kern = _backend.python_kernels if name == "python" else _backend.compiled_kernels
    rng = random.Random(1)
    for n in (0, 1, 17, 64 + 3 if name == "cython" else 14):
        if n > kern.BRUTE_HARD_CAP:
            with pytest.raises(ValueError):
                kern.brute_roman(random_graph(rng, n, 0.2).closed)
            continue
        g = random_graph(rng, n, 0.25)
        w, mask = kern.brute_roman(g.closed)
        cov = _or(g.closed, [u for u in range(n) if mask >> u & 1])
        assert w == 2 * bin(mask).count("1") + n - bin(cov).count("1")


def test_wide_bitsets_in_search():
    # more than 64 vertices exercises multi-word rows in the compiled kernel
    g = random_graph(random.Random(8), 150, 0.04)
    for name in BACKENDS:
        kern = _backend.python_kernels if name == "python" else _backend.compiled_kernels
        w, picks, singles = _greedy(g.closed, 2, True)
        out = kern.branch_and_bound(g.closed, 2, True, w, picks, singles, 20000, 0.0)
        cov = _or(g.closed, out[1])
        assert out[0] == 2 * len(out[1]) + len(out[2])
        assert cov | sum(1 << v for v in out[2]) == (1 << g.n) - 1


def test_pure_python_can_be_forced():
    env = dict(os.environ, RZDG_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import rzdg; print(rzdg.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_compiled
def test_compiled_backend_is_default():
    env = {k: v for k, v in os.environ.items() if k != "RZDG_PURE_PYTHON"}
    out = subprocess.run(
        [sys.executable, "-c", "import rzdg; print(rzdg.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "cython"
