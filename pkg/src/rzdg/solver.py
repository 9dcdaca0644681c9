"""Exact Roman domination and domination numbers.

For a fixed set V2 of 2-valued vertices the cheapest completion puts 1 on
every vertex outside N[V2], so gamma_R(G) = min over V2 of
2|V2| + |V - N[V2]|.  Both solvers below search over V2 only: the
branch-and-bound in the kernels, and an exhaustive oracle for small graphs.
Disconnected graphs are solved one component at a time.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from rzdg import _backend
from rzdg.errors import GraphError, InfeasibleError
from rzdg.graphs import Graph

DEFAULT_TIME_BUDGET = 10.0
DEFAULT_NODE_BUDGET = 10**8
BRUTE_CAP = 20


@dataclass(frozen=True)
class RomanAssignment:
    """f : V -> {0, 1, 2}, stored per vertex index."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v not in (0, 1, 2) for v in self.values):
            raise ValueError("Roman assignment values must be 0, 1 or 2")

    @classmethod
    def from_sets(cls, n: int, ones: Sequence[int], twos: Sequence[int]) -> "RomanAssignment":
        values = [0] * n
        for v in ones:
            values[v] = 1
        for v in twos:
            values[v] = 2
        return cls(tuple(values))

    def part(self, i: int) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.values) if x == i)

    @property
    def partition(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(V0, V1, V2)."""
        return self.part(0), self.part(1), self.part(2)

    @property
    def weight(self) -> int:
        return sum(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SolveReport:
    value: int
    certificate: RomanAssignment | tuple[int, ...]
    optimal: bool
    nodes: int
    elapsed: float

    @property
    def elapsed_ms(self) -> int:
        return int(round(self.elapsed * 1000))

    def to_json_dict(self, timing: bool = True) -> dict:
        if isinstance(self.certificate, RomanAssignment):
            cert = list(self.certificate.values)
        else:
            cert = list(self.certificate)
        return {
            "value": self.value,
            "optimal": self.optimal,
            "certificate": cert,
            "nodes": self.nodes,
            "elapsed_ms": self.elapsed_ms if timing else 0,
        }


def rdf_is_valid(g: Graph, f: RomanAssignment | Sequence[int]) -> bool:
    values = f.values if isinstance(f, RomanAssignment) else tuple(f)
    if len(values) != g.n:
        raise GraphError(f"assignment has {len(values)} values for {g.n} vertices")
    twos = 0
    for v, x in enumerate(values):
        if x not in (0, 1, 2):
            raise GraphError(f"value {x!r} at vertex {v} is not in {{0,1,2}}")
        if x == 2:
            twos |= 1 << v
    return all(x != 0 or g.adj[v] & twos for v, x in enumerate(values))


def is_dominating_set(g: Graph, s: Sequence[int]) -> bool:
    cov = 0
    for v in s:
        cov |= g.closed[v]
    return cov == (1 << g.n) - 1


def _greedy(closed: Sequence[int], pick_cost: int, allow_single: bool):
    """Repeatedly take the vertex covering most uncovered vertices (lowest index on ties)."""
    n = len(closed)
    uncovered = (1 << n) - 1
    picks = []
    while uncovered:
        best_u, best_gain = -1, 0
        for u in range(n):
            gain = (closed[u] & uncovered).bit_count()
            if gain > best_gain:
                best_u, best_gain = u, gain
        if allow_single and best_gain <= pick_cost:
            break
        picks.append(best_u)
        uncovered &= ~closed[best_u]
    singles = [v for v in range(n) if uncovered >> v & 1]
    return pick_cost * len(picks) + len(singles), picks, singles


def greedy_upper_bound(g: Graph) -> RomanAssignment:
    """A valid RDF from max-coverage greedy; a 2 is placed only where it covers 3 or more."""
    _, picks, singles = _greedy(g.closed, 2, True)
    return RomanAssignment.from_sets(g.n, singles, picks)


def _kernels(backend: str | None):
    if backend is None:
        return _backend.kernels
    if backend == "python":
        return _backend.python_kernels
    if backend == "cython":
        if _backend.compiled_kernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _backend.compiled_kernels
    raise ValueError(f"unknown backend {backend!r}")


def _solve(g: Graph, pick_cost: int, allow_single: bool, time_budget: float,
           node_budget: int, threads: int, backend: str | None):
    kern = _kernels(backend)
    start = time.perf_counter()
    comps = g.components()

    def run(comp):
        local = g.closed if len(comp) == g.n else g.subgraph(comp).closed
        w, picks, singles = _greedy(local, pick_cost, allow_single)
        remaining = 0.0
        if time_budget and time_budget > 0:
            remaining = max(1e-6, time_budget - (time.perf_counter() - start))
        w, picks, singles, nodes, complete = kern.branch_and_bound(
            local, pick_cost, allow_single, w, picks, singles, node_budget, remaining
        )
        return (
            w,
            [comp[u] for u in picks],
            [comp[v] for v in singles],
            nodes,
            complete,
        )

    if threads > 1 and len(comps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, comps))
    else:
        results = [run(c) for c in comps]

    value = sum(r[0] for r in results)
    picks = sorted(u for r in results for u in r[1])
    singles = sorted(v for r in results for v in r[2])
    nodes = sum(r[3] for r in results)
    optimal = all(r[4] for r in results)
    return value, picks, singles, nodes, optimal, time.perf_counter() - start


def gamma_r_exact(g: Graph, time_budget: float = DEFAULT_TIME_BUDGET,
                  node_budget: int = DEFAULT_NODE_BUDGET, threads: int = 1,
                  backend: str | None = None) -> SolveReport:
    """Roman domination number by branch-and-bound.

    If a budget runs out the best assignment found so far is returned with
    ``optimal=False``; its weight is then only an upper bound.
    """
    value, picks, singles, nodes, optimal, elapsed = _solve(
        g, 2, True, time_budget, node_budget, threads, backend
    )
    cert = RomanAssignment.from_sets(g.n, singles, picks)
    assert cert.weight == value and rdf_is_valid(g, cert)
    return SolveReport(value, cert, optimal, nodes, elapsed)


def gamma_exact(g: Graph, time_budget: float = DEFAULT_TIME_BUDGET,
                node_budget: int = DEFAULT_NODE_BUDGET, threads: int = 1,
                backend: str | None = None) -> SolveReport:
    """Domination number; the certificate is a sorted tuple of vertex indices."""
    value, picks, _, nodes, optimal, elapsed = _solve(
        g, 1, False, time_budget, node_budget, threads, backend
    )
    cert = tuple(picks)
    assert len(cert) == value and is_dominating_set(g, cert)
    return SolveReport(value, cert, optimal, nodes, elapsed)


def _brute_input(g: Graph, cap: int):
    if g.n > cap:
        raise InfeasibleError(f"brute force capped at {cap} vertices, graph has {g.n}")
    return g.closed


def gamma_r_brute(g: Graph, cap: int = BRUTE_CAP, backend: str | None = None) -> int:
    """Roman domination number by enumerating every candidate V2."""
    return _kernels(backend).brute_roman(_brute_input(g, cap))[0]


def gamma_brute(g: Graph, cap: int = BRUTE_CAP, backend: str | None = None) -> int:
    return _kernels(backend).brute_dom(_brute_input(g, cap))[0]
