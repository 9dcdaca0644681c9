import json
import pickle
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from rzdg.errors import CapacityError, GraphError, ParseError
from rzdg.graphs import (
    INFINITE,
    Graph,
    cartesian_product,
    census_string,
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    component_census,
    cycle_graph,
    diameter,
    empty_graph,
    export,
    from_json,
    metrics,
    named_graph,
    parse_named,
    path_graph,
    star_graph,
    to_dot,
    to_json,
    total_graph,
    zero_divisor_graph,
)
from rzdg.rings import alpha, beta, is_zero_divisor, parse_ring, ring_from_modulus, zero_divisor_set


def edge_labels(g):
    return {frozenset((g.labels[u], g.labels[v])) for u, v in g.edges()}


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(("a", "b"), (0b10, 0))
    with pytest.raises(GraphError):
        Graph(("a",), (0b1,))
    with pytest.raises(GraphError):
        Graph(("a", "a"), (0, 0))
    with pytest.raises(GraphError):
        Graph.from_edges(["a", "b"], [(0, 0)])


def test_zero_divisor_graph_examples():
    g = zero_divisor_graph(ring_from_modulus(25))
    assert g.labels == ("5", "10", "15", "20")
    assert g.is_complete() and g.edge_count == 6
    g4 = zero_divisor_graph(ring_from_modulus(4))
    assert g4.labels == ("2",) and g4.edge_count == 0
    g6 = zero_divisor_graph(ring_from_modulus(6))
    assert edge_labels(g6) == {frozenset({"2", "3"}), frozenset({"3", "4"})}
    assert zero_divisor_graph(ring_from_modulus(7)).n == 0


@pytest.mark.parametrize("n", list(range(2, 201)))
def test_zero_divisor_graph_edges_exhaustive(n):
    r = ring_from_modulus(n)
    g = zero_divisor_graph(r)
    expected = {x for x in range(1, n) if any(x * y % n == 0 for y in range(1, n))}
    assert {int(s) for s in g.labels} == expected
    verts = [int(s) for s in g.labels]
    for i, x in enumerate(verts):
        for j, y in enumerate(verts):
            if i != j:
                assert g.has_edge(i, j) == (x * y % n == 0)


def test_product_ring_labels():
    g = zero_divisor_graph(parse_ring("Z2xZ3"))
    assert set(g.labels) == {"(1,0)", "(0,1)", "(0,2)"}
    assert g.edge_count == 2


def test_total_graph_examples():
    t8 = total_graph(ring_from_modulus(8))
    assert census_string(component_census(t8)) == "2*K4"
    t9 = total_graph(ring_from_modulus(9))
    assert census_string(component_census(t9)) == "K3 + K3,3"
    t2 = total_graph(ring_from_modulus(2))
    assert t2.n == 2 and t2.edge_count == 0


def test_total_graph_definition():
    for lit in ["Z12", "Z2xZ4", "Z3xZ3", "Z27"]:
        r = parse_ring(lit)
        t = total_graph(r)
        elems = list(r.elements())
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                if i != j:
                    assert t.has_edge(i, j) == is_zero_divisor(r, r.add(x, y))


def prime_powers(limit):
    out = []
    for n in range(2, limit + 1):
        r = ring_from_modulus(n)
        if r.is_local:
            out.append(r)
    return out


@pytest.mark.parametrize("ring", prime_powers(343), ids=str)
def test_total_graph_structure_for_local_rings(ring):
    t = total_graph(ring)
    z = {ring.index(x) for x in zero_divisor_set(ring)}
    b, a = beta(ring), alpha(ring)
    # zero-divisors form a clique with no edges to the regular elements
    for v in z:
        assert all(t.has_edge(v, u) for u in z if u != v)
        assert all(u in z for u in t.neighbors(v))
    two_in_z = is_zero_divisor(ring, ring.from_integer(2))
    for v in range(t.n):
        if v in z or two_in_z:
            assert t.degree(v) == b - 1
        else:
            assert t.degree(v) == b
    census = component_census(t)
    if two_in_z:
        assert census == {f"K{b}": a}
    else:
        bip = f"K{b},{b}" if b > 1 else "K2"
        expected = {f"K{b}": 1}
        if a > 1:
            expected[bip] = (a - 1) // 2
        assert census == expected


def test_cartesian_product_examples():
    k2 = complete_graph(2)
    sq = cartesian_product(k2, k2)
    assert sq.n == 4 and sq.edge_count == 4 and all(sq.degree(v) == 2 for v in range(4))
    assert diameter(sq) == 2
    grid = cartesian_product(path_graph(2), path_graph(3))
    assert grid.n == 6 and grid.edge_count == 7
    with pytest.raises(GraphError):
        cartesian_product(empty_graph(0), k2)


def test_product_with_one_vertex_factor_is_the_other_factor():
    h = zero_divisor_graph(ring_from_modulus(9))
    p = cartesian_product(zero_divisor_graph(ring_from_modulus(4)), h)
    assert p.adj == h.adj
    assert [s.split(",")[1].rstrip(")") for s in p.labels] == list(h.labels)


def test_cartesian_product_cap(monkeypatch):
    monkeypatch.setenv("RZDG_MAX_VERTICES", "50")
    with pytest.raises(CapacityError):
        cartesian_product(path_graph(8), path_graph(8))


@given(st.integers(1, 7), st.integers(1, 7), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
@settings(max_examples=80)
def test_product_degrees_add(n1, n2, p1, p2, seed):
    rng = random.Random(seed)
    g, h = random_graph(rng, n1, p1), random_graph(rng, n2, p2)
    prod = cartesian_product(g, h)
    assert prod.n == n1 * n2
    for x in range(n1):
        for y in range(n2):
            assert prod.degree(x * n2 + y) == g.degree(x) + h.degree(y)


@given(st.integers(0, 14), st.floats(0, 1), st.integers(0, 2**32))
@settings(max_examples=80)
def test_graph_invariants(n, p, seed):
    g = random_graph(random.Random(seed), n, p)
    for u in range(n):
        assert not g.has_edge(u, u)
        for v in range(n):
            assert g.has_edge(u, v) == g.has_edge(v, u)
    comps = g.components()
    assert sorted(v for c in comps for v in c) == list(range(n))
    m = metrics(g)
    assert sum(m.degrees) == 2 * g.edge_count
    assert m.max_degree == max(m.degrees, default=0)


def test_named_families():
    assert complete_graph(4).edge_count == 6
    assert complete_bipartite(2, 4).edge_count == 8
    assert cycle_graph(3).adj == complete_graph(3).adj
    assert star_graph(9).adj == complete_bipartite(1, 9).adj
    assert complete_multipartite([3, 3, 3]).edge_count == 27
    assert empty_graph(5).edge_count == 0
    assert parse_named("kbip:2,4").edge_count == 8
    assert parse_named("multi:3,3,3").n == 9
    assert named_graph("path", 5).edge_count == 4
    for bad in ["path", "path:", "cycle:2", "path:0", "kbip:2", "bogus:3", "path:x"]:
        with pytest.raises(ParseError):
            parse_named(bad)


def test_diameter():
    assert diameter(complete_graph(4)) == 1
    assert diameter(path_graph(3)) == 2
    assert diameter(empty_graph(0)) == 0
    assert diameter(empty_graph(1)) == 0
    assert diameter(zero_divisor_graph(ring_from_modulus(7))) == 0
    assert diameter(empty_graph(2)) is INFINITE
    assert diameter(cycle_graph(9)) == 4
    assert pickle.loads(pickle.dumps(INFINITE)) is INFINITE


def test_metrics_examples():
    assert metrics(complete_graph(4)).max_degree == 3
    g6 = zero_divisor_graph(ring_from_modulus(6))
    m = metrics(g6)
    assert m.max_degree == 2 and g6.labels[m.degrees.index(2)] == "3"
    t8 = total_graph(ring_from_modulus(8))
    assert set(metrics(t8).degrees) == {3}


def test_census_names():
    assert component_census(complete_graph(2)) == {"K2": 1}
    assert component_census(complete_bipartite(3, 3)) == {"K3,3": 1}
    assert component_census(path_graph(4)) == {"other4": 1}
    assert census_string(component_census(empty_graph(2))) == "2*K1"


def test_export_formats():
    one = Graph(("2",), (0,))
    assert to_dot(one) == 'graph {\n  "2";\n}\n'
    assert json.loads(to_json(complete_graph(2))) == {"n": 2, "labels": ["0", "1"], "edges": [[0, 1]]}
    g = zero_divisor_graph(ring_from_modulus(25))
    dot = export(g, "dot")
    assert dot.count(" -- ") == 6 and dot.count(";") == 10
    data = json.loads(export(g, "json"))
    assert data["n"] == 4 and len(data["edges"]) == 6
    assert data["edges"] == sorted(data["edges"])
    assert from_json(export(g, "json")) == g
    with pytest.raises(ValueError):
        export(g, "png")
