"""Immutable simple graphs with bitmask adjacency, plus algebraic constructors."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from rzdg import config
from rzdg.errors import CapacityError, GraphError, ParseError
from rzdg.rings import RingSpec, zero_divisor_mask


class _Infinite:
    """Diameter marker for disconnected graphs."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; ``adj[v]`` is the neighbour bitmask of ``v``."""

    labels: tuple[str, ...]
    adj: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "adj", tuple(int(a) for a in self.adj))
        n = len(self.labels)
        if len(self.adj) != n:
            raise GraphError("labels and adjacency differ in length")
        if len(set(self.labels)) != n:
            raise GraphError("vertex labels must be unique")
        full = (1 << n) - 1
        for v, mask in enumerate(self.adj):
            if mask & ~full or mask < 0:
                raise GraphError(f"vertex {v} has a neighbour out of range")
            if mask >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            m = mask
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {u})")
                m ^= low

    @classmethod
    def _trusted(cls, labels: tuple[str, ...], adj: tuple[int, ...]) -> "Graph":
        """Skip validation; for constructors that are symmetric by construction."""
        g = object.__new__(cls)
        object.__setattr__(g, "labels", labels)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, labels: Sequence, edges: Iterable[tuple[int, int]]) -> "Graph":
        n = len(labels)
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(tuple(labels), tuple(adj))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    @cached_property
    def closed(self) -> tuple[int, ...]:
        """Closed-neighbourhood bitmasks N[v]."""
        return tuple(a | (1 << v) for v, a in enumerate(self.adj))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; new vertex i is ``vertices[i]``."""
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices) or any(not 0 <= v < self.n for v in pos):
            raise GraphError("subgraph vertices must be distinct and in range")
        adj = []
        for v in vertices:
            mask = 0
            for u in _bits(self.adj[v]):
                if u in pos:
                    mask |= 1 << pos[u]
            adj.append(mask)
        return Graph._trusted(tuple(self.labels[v] for v in vertices), tuple(adj))

    def components(self) -> list[tuple[int, ...]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(tuple(_bits(comp)))
        return out

    def is_complete(self) -> bool:
        full = (1 << self.n) - 1
        return all(c == full for c in self.closed)

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_cap(n: int) -> None:
    cap = config.max_vertices()
    if n > cap:
        raise CapacityError(f"graph with {n} vertices exceeds cap {cap}")


# -- algebraic constructors ------------------------------------------------


def _row_masks(matrix: np.ndarray) -> tuple[int, ...]:
    """Boolean adjacency matrix -> per-row Python-int bitmasks (bit j = column j)."""
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def _relation(ring: RingSpec, op: str, verts: np.ndarray, target: np.ndarray) -> np.ndarray:
    """``M[i, j]`` iff ``op(verts[i], verts[j])`` lies in ``target`` (a mask over indices); no diagonal."""
    n = len(verts)
    out = np.zeros((n, n), dtype=bool)
    step = max(1, (1 << 22) // max(1, n * len(ring.factors)))
    for lo in range(0, n, step):
        out[lo:lo + step] = target[ring._combine(op, verts[lo:lo + step], verts)]
    np.fill_diagonal(out, False)
    return out


def zero_divisor_graph(ring: RingSpec) -> Graph:
    """Gamma(R): vertices Z(R)* , x ~ y iff xy = 0."""
    zd = zero_divisor_mask(ring)
    zd[ring.index(ring.zero)] = False
    verts = np.flatnonzero(zd)
    _check_cap(len(verts))
    is_zero = np.zeros(ring.order, dtype=bool)
    is_zero[ring.index(ring.zero)] = True
    adj = _row_masks(_relation(ring, "mul", verts, is_zero))
    labels = tuple(ring.label(ring.element_at(int(i))) for i in verts)
    return Graph._trusted(labels, adj)


def total_graph(ring: RingSpec) -> Graph:
    """T(Gamma(R)): vertices R, x ~ y iff x + y lies in Z(R) (0 included)."""
    _check_cap(ring.order)
    verts = np.arange(ring.order)
    adj = _row_masks(_relation(ring, "add", verts, zero_divisor_mask(ring)))
    labels = tuple(ring.label(ring.element_at(i)) for i in range(ring.order))
    return Graph._trusted(labels, adj)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G box H; vertex (x, y) has index x * |H| + y and label ``(lx,ly)``."""
    if g.n == 0 or h.n == 0:
        raise GraphError("cartesian product of an empty graph")
    n = g.n * h.n
    _check_cap(n)
    hn = h.n
    adj = []
    for x in range(g.n):
        for y in range(hn):
            mask = h.adj[y] << (x * hn)
            for x2 in _bits(g.adj[x]):
                mask |= 1 << (x2 * hn + y)
            adj.append(mask)
    labels = tuple(f"({a},{b})" for a in g.labels for b in h.labels)
    return Graph._trusted(labels, tuple(adj))


# -- named families ----------------------------------------------------------


def complete_graph(n: int) -> Graph:
    _sizes(n)
    full = (1 << n) - 1
    return Graph(_int_labels(n), tuple(full ^ (1 << v) for v in range(n)))


def empty_graph(n: int) -> Graph:
    if n < 0:
        raise GraphError("size must be nonnegative")
    return Graph(_int_labels(n), (0,) * n)


def path_graph(n: int) -> Graph:
    _sizes(n)
    return Graph.from_edges(_int_labels(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(_int_labels(n), [(i, (i + 1) % n) for i in range(n)])


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    _sizes(*sizes)
    if not sizes:
        raise GraphError("need at least one part")
    n = sum(sizes)
    full = (1 << n) - 1
    adj = []
    start = 0
    for s in sizes:
        part = ((1 << s) - 1) << start
        adj.extend([full & ~part] * s)
        start += s
    return Graph(_int_labels(n), tuple(adj))


def complete_bipartite(a: int, b: int) -> Graph:
    return complete_multipartite([a, b])


def star_graph(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def _sizes(*sizes: int) -> None:
    for s in sizes:
        if not isinstance(s, int) or s < 1:
            raise GraphError(f"size parameters must be positive integers, got {s!r}")


def _int_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


_NAMED = {
    "complete": (complete_graph, 1),
    "k": (complete_graph, 1),
    "empty": (empty_graph, 1),
    "path": (path_graph, 1),
    "cycle": (cycle_graph, 1),
    "star": (star_graph, 1),
    "kbip": (complete_bipartite, 2),
    "complete_bipartite": (complete_bipartite, 2),
    "multi": (None, None),
    "complete_multipartite": (None, None),
}


def named_graph(kind: str, *params: int) -> Graph:
    if kind not in _NAMED:
        raise GraphError(f"unknown graph family {kind!r}")
    fn, arity = _NAMED[kind]
    if fn is None:
        return complete_multipartite(list(params))
    if len(params) != arity:
        raise GraphError(f"{kind} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


def parse_named(literal: str) -> Graph:
    """Parse ``kind:params`` such as ``path:5``, ``kbip:2,4``, ``multi:3,3,3``."""
    kind, sep, rest = literal.strip().partition(":")
    if not sep or not rest:
        raise ParseError(f"bad graph literal {literal!r}; expected kind:params")
    try:
        params = [int(p) for p in rest.split(",")]
    except ValueError:
        raise ParseError(f"bad graph parameters in {literal!r}") from None
    try:
        return named_graph(kind, *params)
    except GraphError as exc:
        raise ParseError(f"bad graph literal {literal!r}: {exc}") from None


# -- metrics -----------------------------------------------------------------


def eccentricity(g: Graph, s: int) -> int | _Infinite:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for u in _bits(g.adj[v]):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    if len(dist) < g.n:
        return INFINITE
    return max(dist.values())


def diameter(g: Graph) -> int | _Infinite:
    """Maximum eccentricity; 0 for graphs with at most one vertex."""
    if g.n <= 1:
        return 0
    best = 0
    for s in range(g.n):
        e = eccentricity(g, s)
        if e is INFINITE:
            return INFINITE
        best = max(best, e)
    return best


@dataclass(frozen=True)
class Metrics:
    max_degree: int
    degrees: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]


def metrics(g: Graph) -> Metrics:
    degrees = tuple(g.degree(v) for v in range(g.n))
    return Metrics(max(degrees, default=0), degrees, tuple(g.components()))


def component_shape(g: Graph, comp: Sequence[int]) -> str:
    """Name a component: ``K4`` (complete), ``K3,3`` (complete bipartite), else ``other<n>``.

    K_{1,1} is reported as ``K2``.
    """
    sub = g.subgraph(comp)
    if sub.is_complete():
        return f"K{sub.n}"
    full = (1 << sub.n) - 1
    right = sub.adj[0]
    left = full & ~right
    if right:
        if all(sub.adj[v] == right for v in _bits(left)) and all(
            sub.adj[v] == left for v in _bits(right)
        ):
            a, b = sorted((left.bit_count(), right.bit_count()))
            return f"K{a},{b}"
    return f"other{sub.n}"


def component_census(g: Graph) -> dict[str, int]:
    census: dict[str, int] = {}
    for comp in g.components():
        shape = component_shape(g, comp)
        census[shape] = census.get(shape, 0) + 1
    return dict(sorted(census.items(), key=lambda kv: _shape_key(kv[0])))


def _shape_key(shape: str):
    if shape.startswith("other"):
        return (2, int(shape[5:]), 0)
    body = shape[1:]
    if "," in body:
        a, b = body.split(",")
        return (1, int(a), int(b))
    return (0, int(body), 0)


def census_string(census: dict[str, int]) -> str:
    """``{"K3": 1, "K3,3": 1}`` -> ``K3 + K3,3``; counts above one as ``3*K4``."""
    parts = []
    for shape, count in sorted(census.items(), key=lambda kv: _shape_key(kv[0])):
        parts.append(shape if count == 1 else f"{count}*{shape}")
    return " + ".join(parts) if parts else "empty"


# -- export ------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph) -> str:
    lines = ["graph {"]
    for label in g.labels:
        lines.append(f"  {_dot_quote(label)};")
    for u, v in g.edges():
        lines.append(f"  {_dot_quote(g.labels[u])} -- {_dot_quote(g.labels[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "labels": list(g.labels), "edges": [list(e) for e in g.edges()]}


def to_json(g: Graph) -> str:
    return json.dumps(to_json_dict(g))


def from_json(text: str) -> Graph:
    data = json.loads(text)
    g = Graph.from_edges(data["labels"], [tuple(e) for e in data["edges"]])
    if g.n != data["n"]:
        raise GraphError("n does not match the label count")
    return g


def export(g: Graph, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(g)
    if fmt == "json":
        return to_json(g)
    raise ValueError(f"unknown export format {fmt!r}")
