"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are repeated in the terminal summary) or directly with
``python tests/test_acceptance.py``.  Each criterion returns a payload of
computed values (no timings); the determinism criterion re-runs the others
and compares payloads byte for byte.
"""

from __future__ import annotations

import itertools
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import seeded_graphs  # noqa: E402
from rzdg import harness  # noqa: E402
from rzdg.graphs import (  # noqa: E402
    Graph,
    cartesian_product,
    census_string,
    complete_graph,
    complete_multipartite,
    component_census,
    cycle_graph,
    metrics,
    path_graph,
    total_graph,
    zero_divisor_graph,
)
from rzdg.rings import alpha, beta, is_zero_divisor, prime_ideals, ring_from_modulus  # noqa: E402
from rzdg.solver import gamma_brute, gamma_exact, gamma_r_brute, gamma_r_exact  # noqa: E402

PAIR_VERTEX_LIMIT = 300
BOUND_NODE_BUDGET = 10_000
SWEEP_MAX_N = 200
SWEEP_TIME_LIMIT = 300.0


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    payload: object = field(default=None, repr=False)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number:2d}: {self.title} -- {self.detail}"


LINES: list[str] = []


def _record(outcome: Outcome) -> Outcome:
    line = outcome.line()
    print(line)
    LINES.append(line)
    return outcome


# -- criteria -----------------------------------------------------------------------


def criterion_1(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    g = zero_divisor_graph(ring_from_modulus(25))
    rep = gamma_r_exact(g, threads=threads)
    ms = (time.perf_counter() - start) * 1000
    ok = g.n == 4 and g.edge_count == 6 and g.is_complete() and rep.value == 2 and rep.optimal
    return Outcome(1, "Gamma(Z25) = K4, gamma_R = 2, < 10 ms", ok and ms < 10,
                   f"n={g.n} m={g.edge_count} gamma_R={rep.value} in {ms:.2f} ms",
                   [g.n, g.edge_count, rep.value])


def criterion_2(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    bad = []
    values = []
    for n in range(1, 31):
        want = math.ceil(2 * n / 3)
        got = gamma_r_exact(path_graph(n), threads=threads)
        values.append(got.value)
        if got.value != want or not got.optimal:
            bad.append(f"P{n}")
        if n >= 3:
            got = gamma_r_exact(cycle_graph(n), threads=threads)
            values.append(got.value)
            if got.value != want or not got.optimal:
                bad.append(f"C{n}")
    secs = time.perf_counter() - start
    return Outcome(2, "gamma_R(P_n), gamma_R(C_n) = ceil(2n/3), < 5 s", not bad and secs < 5,
                   f"58 graphs, mismatches={bad or 0}, {secs:.2f} s", values)


def criterion_3(threads: int = 1) -> Outcome:
    bad = []
    values = []
    for n in range(2, 31):
        v = gamma_r_exact(complete_graph(n), threads=threads).value
        values.append(v)
        if v != 2:
            bad.append(f"K{n}")
    vectors = [v for r in range(2, 5) for v in itertools.combinations_with_replacement(range(1, 6), r)]
    for sizes in vectors:
        low = min(sizes)
        want = 2 if low == 1 else 3 if low == 2 else 4
        got = gamma_r_exact(complete_multipartite(list(sizes)), threads=threads)
        values.append(got.value)
        if got.value != want or not got.optimal:
            bad.append("K" + ",".join(map(str, sizes)))
    return Outcome(3, "complete and complete multipartite table", not bad,
                   f"K_2..K_30 and {len(vectors)} part vectors, mismatches={bad or 0}", values)


def _criterion4_instances():
    graphs = [(f"random#{i}", g) for i, g in enumerate(seeded_graphs())]
    for n in range(4, 101):
        g = zero_divisor_graph(ring_from_modulus(n))
        if 0 < g.n <= 20:
            graphs.append((f"Z{n}", g))
    return graphs


_ORACLE_CACHE: dict = {}


def _oracle_values(threads: int):
    """(name, bnb gamma_R, brute gamma_R, bnb gamma, brute gamma, optimal flags) per instance."""
    rows = []
    for name, g in _criterion4_instances():
        r = gamma_r_exact(g, threads=threads)
        d = gamma_exact(g, threads=threads)
        rows.append((name, r.value, gamma_r_brute(g), d.value, gamma_brute(g), r.optimal and d.optimal))
    return rows


def criterion_4(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    rows = _oracle_values(threads)
    _ORACLE_CACHE[threads] = rows
    secs = time.perf_counter() - start
    bad = [r[0] for r in rows if r[1] != r[2] or r[3] != r[4] or not r[5]]
    rings = sum(1 for r in rows if r[0].startswith("Z"))
    return Outcome(4, "branch-and-bound = brute force, < 60 s", not bad and secs < 60,
                   f"{len(rows) - rings} random graphs + {rings} Gamma(Z_n), mismatches={len(bad)}, {secs:.1f} s",
                   [list(r) for r in rows])


def criterion_5(threads: int = 1) -> Outcome:
    rows = _ORACLE_CACHE.get(threads) or _oracle_values(threads)
    bad = [r[0] for r in rows if not (r[4] <= r[2] <= 2 * r[4])]
    return Outcome(5, "gamma <= gamma_R <= 2 gamma on criterion-4 instances", not bad,
                   f"{len(rows)} instances, failures={bad or 0}", [[r[2], r[4]] for r in rows])


def criterion_6(threads: int = 1) -> Outcome:
    bad = 0
    total = 0
    equal_count = 0
    for n in range(1, 7):
        pairs = list(itertools.combinations(range(n), 2))
        labels = [str(i) for i in range(n)]
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            g = Graph.from_edges(labels, edges)
            equal = gamma_brute(g) == gamma_r_brute(g)
            equal_count += equal
            total += 1
            if equal != (not edges):
                bad += 1
    return Outcome(6, "gamma = gamma_R iff no edges, all graphs on <= 6 vertices", bad == 0,
                   f"{total} labelled graphs, {equal_count} with equality, failures={bad}",
                   [total, equal_count, bad])


def criterion_7(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    structure_bad, bound_bad, values = [], [], []
    rings = [ring_from_modulus(n) for n in range(2, 344) if ring_from_modulus(n).is_local]
    for ring in rings:
        t = total_graph(ring)
        b, a = beta(ring), alpha(ring)
        if is_zero_divisor(ring, ring.from_integer(2)):
            want = {f"K{b}": a}
        else:
            want = {f"K{b}": 1}
            if a > 1:
                bip = f"K{b},{b}" if b > 1 else "K2"
                want[bip] = (a - 1) // 2
        got = component_census(t)
        if got != want:
            structure_bad.append(str(ring))
        rep = gamma_r_exact(t, threads=threads)
        values.append([str(ring), census_string(got), rep.value])
        if not (rep.optimal and 3 <= rep.value <= 2 * a):
            bound_bad.append(f"{ring}: gamma_R={rep.value}, 2*alpha={2 * a}")
    t8 = gamma_r_brute(total_graph(ring_from_modulus(8)))
    t9 = gamma_r_brute(total_graph(ring_from_modulus(9)))
    secs = time.perf_counter() - start
    ok = not structure_bad and not bound_bad and t8 == 4 and t9 == 6 and secs < 30
    detail = (f"{len(rings)} prime powers; structure failures={structure_bad or 0}; "
              f"bound failures={bound_bad or 0}; oracle T(Z8)={t8}, T(Z9)={t9}; {secs:.1f} s")
    return Outcome(7, "total graph decomposition and 3 <= gamma_R <= 2 alpha, p^k <= 343", ok, detail,
                   [values, t8, t9])


def _pair_moduli():
    """Every n whose zero-divisor graph has between 1 and PAIR_VERTEX_LIMIT vertices."""
    # |Gamma(Z_n)| = n - phi(n) - 1 >= sqrt(n) - 1 for composite n, so n <= (limit + 1)^2
    top = (PAIR_VERTEX_LIMIT + 1) ** 2
    phi = list(range(top + 1))
    for p in range(2, top + 1):
        if phi[p] == p:
            for m in range(p, top + 1, p):
                phi[m] -= phi[m] // p
    return {n: n - phi[n] - 1 for n in range(4, top + 1) if 1 <= n - phi[n] - 1 <= PAIR_VERTEX_LIMIT}


def criterion_8(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    sizes = _pair_moduli()
    ns = sorted(sizes)
    graphs: dict[int, Graph] = {}
    delta: dict[int, int] = {}

    def gamma_graph(n):
        if n not in graphs:
            graphs[n] = zero_divisor_graph(ring_from_modulus(n))
            delta[n] = metrics(graphs[n]).max_degree
        return graphs[n]

    bad, exact, values = [], 0, []
    pairs = 0
    for i, a in enumerate(ns):
        for b in ns[i:]:
            if sizes[a] * sizes[b] > PAIR_VERTEX_LIMIT:
                continue
            g1, g2 = gamma_graph(a), gamma_graph(b)
            bound = g1.n * g2.n - delta[a] - delta[b] + 1
            rep = gamma_r_exact(cartesian_product(g1, g2), node_budget=BOUND_NODE_BUDGET, threads=threads)
            pairs += 1
            exact += rep.optimal
            values.append([a, b, bound, rep.value])
            if rep.value > bound:
                bad.append(f"Z{a}*Z{b}")
    secs = time.perf_counter() - start
    return Outcome(8, "gamma_R(Gamma(Z_a) box Gamma(Z_b)) <= mn - r1 - r2 + 1, product <= 300 vertices",
                   not bad, f"{pairs} pairs over {len(ns)} moduli, {exact} solved exactly, "
                   f"rest witnessed by incumbent, failures={bad or 0}, {secs:.1f} s", values)


def criterion_9(threads: int = 1) -> Outcome:
    bad, values = [], []
    count = 0
    for n in range(2, 201):
        ring = ring_from_modulus(n)
        g = zero_divisor_graph(ring)
        if g.n == 0:
            continue
        count += 1
        smallest = min(p.size for p in prime_ideals(ring))
        rep = gamma_r_exact(g, threads=threads)
        values.append([n, smallest, rep.value])
        if not rep.optimal or rep.value > 2 * (smallest - 1):
            bad.append(f"Z{n}")
    return Outcome(9, "gamma_R(Gamma(Z_n)) <= 2(|P| - 1), n <= 200", not bad,
                   f"{count} moduli, failures={bad or 0}", values)


def _oracle_confirms(row: harness.TheoremCheck) -> bool | None:
    """Re-derive a VIOLATED row's computed gamma_R by brute force when small enough."""
    if "*" in row.instance or not isinstance(row.computed, int) or isinstance(row.computed, bool):
        return None
    case = harness.make_case(row.instance)
    g = case.total if row.claim.startswith("T4.2") else case.graph
    if g.n > 20:
        return None
    return gamma_r_brute(g) == row.computed


def criterion_10(threads: int = 1) -> Outcome:
    start = time.perf_counter()
    report = harness.run_suite(harness.SweepSpec(max_n=SWEEP_MAX_N, threads=threads))
    secs = time.perf_counter() - start
    fired = {r.claim for r in report.rows if r.hypotheses_met}
    dead = sorted(set(harness.CLAIMS) - fired)
    infeasible = report.summary[harness.INFEASIBLE]
    pinned = harness.load_pinned(harness.default_pinned_path())
    observed = {r.key() for r in report.violated()}
    expected = {k for k, s in pinned.items() if s == harness.VIOLATED}
    checks = [_oracle_confirms(r) for r in report.violated()]
    oracle_bad = sum(1 for c in checks if c is False)
    oracle_checked = sum(1 for c in checks if c is not None)
    ok = secs < SWEEP_TIME_LIMIT and not dead and infeasible == 0 and observed == expected and oracle_bad == 0
    detail = (f"{len(report.rows)} rows in {secs:.1f} s; claims without a row={dead or 0}; "
              f"INFEASIBLE={infeasible}; VIOLATED={len(observed)} vs pinned {len(expected)} "
              f"(unpinned={len(observed - expected)}, missing={len(expected - observed)}); "
              f"brute-force rechecked {oracle_checked} violations, disagreements={oracle_bad}")
    return Outcome(10, "verify --all --max-n 200", ok, detail, harness.report_to_json(report, timing=False))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]

_FIRST_RUN: dict[int, Outcome] = {}


def first_run(number: int) -> Outcome:
    if number not in _FIRST_RUN:
        _FIRST_RUN[number] = CRITERIA[number - 1]()
    return _FIRST_RUN[number]


def _payload(outcome: Outcome) -> str:
    return json.dumps(outcome.payload, sort_keys=True)


def criterion_11() -> Outcome:
    first = [_payload(first_run(i)) for i in range(1, 11)]
    second = [_payload(fn()) for fn in CRITERIA]
    _ORACLE_CACHE.pop(4, None)
    threaded = [_payload(fn(threads=4)) for fn in CRITERIA]
    differ = [i + 1 for i in range(10) if not (first[i] == second[i] == threaded[i])]
    return Outcome(11, "criteria 1-10 reproduce byte for byte (repeat and --threads 4)", not differ,
                   f"reports differing={differ or 0}")


# -- pytest entry points ----------------------------------------------------------------


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    outcome = _record(first_run(number))
    assert outcome.passed, outcome.line()


@pytest.mark.slow
def test_criterion_11_determinism():
    outcome = _record(criterion_11())
    assert outcome.passed, outcome.line()


def test_random_graph_corpus_is_seeded():
    a = [g.adj for g in seeded_graphs()]
    b = [g.adj for g in seeded_graphs()]
    assert a == b and len(a) == 500 and max(len(x) for x in a) <= 16


if __name__ == "__main__":
    results = [_record(first_run(i)) for i in range(1, 11)]
    results.append(_record(criterion_11()))
    sys.exit(0 if all(r.passed for r in results) else 1)
