"""Catalog of quantitative claims about Roman domination on ring graphs, and a
sweep runner that checks each claim against exact solver output.

The solver is ground truth.  A claim whose prediction disagrees with it is
reported as VIOLATED; nothing is reconciled.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable

from rzdg import solver
from rzdg.errors import ParseError
from rzdg.graphs import (
    INFINITE,
    Graph,
    cartesian_product,
    census_string,
    component_census,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    diameter,
    parse_named,
    path_graph,
    total_graph,
    zero_divisor_graph,
)
from rzdg.rings import (
    RingSpec,
    is_prime,
    is_zero_divisor,
    parse_ring,
    prime_ideals,
    ring_from_modulus,
    subset_is_ideal,
    zero_divisor_set,
)

CONFIRMED = "CONFIRMED"
VIOLATED = "VIOLATED"
SKIPPED = "SKIPPED"
INFEASIBLE = "INFEASIBLE"
STATUSES = (CONFIRMED, VIOLATED, SKIPPED, INFEASIBLE)

DEFAULT_PAIR_MAX_VERTICES = 300
DEFAULT_BOUND_NODE_BUDGET = 20_000


# -- instance facts ------------------------------------------------------------


@dataclass(frozen=True)
class InstanceFacts:
    factor_count: int
    factor_orders: tuple[int, ...]
    factor_diameters: tuple[Any, ...]
    factor_is_field: tuple[bool, ...]
    local: bool
    principal: bool
    zd_ideal: bool


def classify_instance(ring: RingSpec) -> InstanceFacts:
    """Hypothesis facts for a ring: per-factor order and diam(Gamma(R_i)), locality, Z(R) ideal."""
    diams = []
    for p, k in ring.factors:
        diams.append(diameter(zero_divisor_graph(RingSpec(((p, k),)))))
    return InstanceFacts(
        factor_count=len(ring.factors),
        factor_orders=ring.moduli,
        factor_diameters=tuple(diams),
        factor_is_field=tuple(k == 1 for _, k in ring.factors),
        local=ring.is_local,
        # every Z_{p^k} is a principal ideal ring, and so is any finite product of them
        principal=True,
        zd_ideal=subset_is_ideal(ring, zero_divisor_set(ring)),
    )


# -- cases -------------------------------------------------------------------------


@dataclass(frozen=True)
class Budgets:
    time_budget: float = solver.DEFAULT_TIME_BUDGET
    node_budget: int = solver.DEFAULT_NODE_BUDGET
    bound_node_budget: int = DEFAULT_BOUND_NODE_BUDGET


class RingCase:
    family = "ring"

    def __init__(self, ring: RingSpec, budgets: Budgets = Budgets()):
        self.ring = ring
        self.budgets = budgets
        self.descriptor = str(ring)

    def _solve(self, fn, g):
        return fn(g, time_budget=self.budgets.time_budget, node_budget=self.budgets.node_budget)

    @cached_property
    def facts(self) -> InstanceFacts:
        return classify_instance(self.ring)

    @cached_property
    def graph(self) -> Graph:
        return zero_divisor_graph(self.ring)

    @cached_property
    def roman(self) -> solver.SolveReport:
        return self._solve(solver.gamma_r_exact, self.graph)

    @cached_property
    def domination(self) -> solver.SolveReport:
        return self._solve(solver.gamma_exact, self.graph)

    @cached_property
    def zd(self) -> tuple:
        return zero_divisor_set(self.ring)

    @cached_property
    def beta(self) -> int:
        return len(self.zd)

    @cached_property
    def alpha(self) -> int:
        return self.ring.order // self.beta

    @cached_property
    def total(self) -> Graph:
        return total_graph(self.ring)

    @cached_property
    def total_roman(self) -> solver.SolveReport:
        return self._solve(solver.gamma_r_exact, self.total)

    @cached_property
    def zd_mask(self) -> int:
        zset = set(self.zd)
        return sum(1 << i for i, x in enumerate(self.ring.elements()) if x in zset)


class PairCase:
    family = "pair"

    def __init__(self, a: int, b: int, budgets: Budgets = Budgets()):
        self.a, self.b = a, b
        self.budgets = budgets
        self.ring1 = ring_from_modulus(a)
        self.ring2 = ring_from_modulus(b)
        self.descriptor = f"Z{a}*Z{b}"

    @cached_property
    def g1(self) -> Graph:
        return zero_divisor_graph(self.ring1)

    @cached_property
    def g2(self) -> Graph:
        return zero_divisor_graph(self.ring2)

    @cached_property
    def product(self) -> Graph:
        return cartesian_product(self.g1, self.g2)

    @cached_property
    def bounded_roman(self) -> solver.SolveReport:
        return solver.gamma_r_exact(
            self.product,
            time_budget=self.budgets.time_budget,
            node_budget=self.budgets.bound_node_budget,
        )

    @cached_property
    def roman(self) -> solver.SolveReport:
        return solver.gamma_r_exact(
            self.product, time_budget=self.budgets.time_budget, node_budget=self.budgets.node_budget
        )

    @cached_property
    def roman2(self) -> solver.SolveReport:
        return solver.gamma_r_exact(
            self.g2, time_budget=self.budgets.time_budget, node_budget=self.budgets.node_budget
        )


class GraphCase:
    def __init__(self, family: str, params: tuple[int, ...], budgets: Budgets = Budgets()):
        self.family = family
        self.params = params
        self.budgets = budgets
        kind = {"multipartite": "multi"}.get(family, family)
        self.descriptor = f"{kind}:" + ",".join(map(str, params))
        build = {
            "path": lambda: path_graph(params[0]),
            "cycle": lambda: cycle_graph(params[0]),
            "complete": lambda: complete_graph(params[0]),
            "multipartite": lambda: complete_multipartite(list(params)),
        }[family]
        self.graph = build()

    @cached_property
    def roman(self) -> solver.SolveReport:
        return solver.gamma_r_exact(
            self.graph, time_budget=self.budgets.time_budget, node_budget=self.budgets.node_budget
        )


# -- outcomes ------------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    hypotheses_met: bool
    predicted: Any = None
    computed: Any = None
    status: str = SKIPPED
    exact: bool = True


def _skip(computed=None) -> Outcome:
    return Outcome(False, None, computed, SKIPPED)


def _equal(predicted, report: solver.SolveReport) -> Outcome:
    if not report.optimal:
        return Outcome(True, predicted, report.value, INFEASIBLE, False)
    status = CONFIRMED if report.value == predicted else VIOLATED
    return Outcome(True, predicted, report.value, status)


def _within(lo: int, hi: int, report: solver.SolveReport) -> Outcome:
    """Interval claim; a non-optimal incumbent still certifies an upper bound with lo <= 0."""
    value = report.value
    if not report.optimal:
        if lo <= 0 and value <= hi:
            return Outcome(True, [lo, hi], value, CONFIRMED, False)
        return Outcome(True, [lo, hi], value, INFEASIBLE, False)
    status = CONFIRMED if lo <= value <= hi else VIOLATED
    return Outcome(True, [lo, hi], value, status)


def _match(predicted, computed) -> Outcome:
    return Outcome(True, predicted, computed, CONFIRMED if predicted == computed else VIOLATED)


# -- claim predicates ------------------------------------------------------------------


def _two_factor_diams(case: RingCase):
    f = case.facts
    if f.factor_count != 2:
        return None
    return f.factor_diameters


def _diam_claim(accept: Callable[[Any, Any], bool]):
    """Two local factors whose diameters (in some order) satisfy ``accept``; predicts 4."""

    def evaluate(case: RingCase) -> Outcome:
        d = _two_factor_diams(case)
        if d is None or not (accept(d[0], d[1]) or accept(d[1], d[0])):
            return _skip()
        return _equal(4, case.roman)

    return evaluate


def _t32(case: RingCase) -> Outcome:
    d = _two_factor_diams(case)
    if d is None or d != (0, 0):
        return _skip()
    if min(case.facts.factor_orders) < 5:
        return _skip(case.roman.value)
    return _equal(4, case.roman)


def _e21(case: RingCase) -> Outcome:
    if case.ring.modulus != 25:
        return _skip()
    g = case.graph
    shape = census_string(component_census(g))
    computed = f"{shape} gamma_R={case.roman.value}"
    if not case.roman.optimal:
        return Outcome(True, "K4 gamma_R=2", computed, INFEASIBLE, False)
    return _match("K4 gamma_R=2", computed)


def _t31(case: RingCase) -> Outcome:
    f = case.facts
    if not (f.local and f.principal and case.graph.n >= 1):
        return _skip()
    return _equal(2, case.roman)


def _t310(case: RingCase) -> Outcome:
    f = case.facts
    if f.factor_count < 3 or not all(f.factor_is_field):
        return _skip()
    return _equal(2 * f.factor_count, case.roman)


def _t311(case: RingCase) -> Outcome:
    f = case.facts
    if f.factor_count < 3:
        return _skip()
    return _equal(2 * f.factor_count, case.roman)


def _zn_factors(case: RingCase):
    if case.ring.modulus is None:
        return None
    return case.ring.factors


def _t312a(case: RingCase) -> Outcome:
    fs = _zn_factors(case)
    if fs is None or len(fs) < 3:
        return _skip()
    return _equal(2 * len(fs), case.roman)


def _t312b(case: RingCase) -> Outcome:
    fs = _zn_factors(case)
    if fs is None or len(fs) != 2:
        return _skip()
    (p1, m1), (p2, m2) = fs
    if not (m1 >= 2 or m2 >= 2 or (m1 == m2 == 1 and p1 >= 3 and p2 >= 3)):
        return _skip()
    return _equal(4, case.roman)


def _t312c(case: RingCase) -> Outcome:
    fs = _zn_factors(case)
    if fs is None:
        return _skip()
    local = len(fs) == 1 and fs[0][1] >= 2
    twice_prime = (
        len(fs) == 2
        and fs[0][1] == fs[1][1] == 1
        and {fs[0][0] == 2, fs[1][0] == 2} == {True, False}
    )
    if not (local or twice_prime):
        return _skip()
    return _equal(2, case.roman)


def _t313(case: RingCase) -> Outcome:
    if case.graph.n == 0:
        return _skip()
    smallest = min(p.size for p in prime_ideals(case.ring))
    return _within(0, 2 * (smallest - 1), case.roman)


def _czp2(case: RingCase) -> Outcome:
    fs = _zn_factors(case)
    if fs is None or len(fs) != 1 or fs[0][1] != 2 or fs[0][0] <= 3:
        return _skip()
    p = fs[0][0]
    g = case.graph
    shape = f"K{g.n}" if g.is_complete() else census_string(component_census(g))
    predicted = f"K{p - 1} gamma_R=2"
    computed = f"{shape} gamma_R={case.roman.value}"
    if not case.roman.optimal:
        return Outcome(True, predicted, computed, INFEASIBLE, False)
    return _match(predicted, computed)


def _e22a(case: RingCase) -> Outcome:
    g = case.graph
    degrees = {g.degree(v) for v in range(g.n)}
    if len(degrees) != 1 or min(degrees) < 3:
        return _skip()
    report = case.roman
    if not report.optimal:
        return Outcome(True, "{2,4}", report.value, INFEASIBLE, False)
    return Outcome(True, "{2,4}", report.value, CONFIRMED if report.value in (2, 4) else VIOLATED)


def _p22(case: RingCase) -> Outcome:
    if case.graph.n == 0:
        return _skip()
    dom = case.domination
    if not dom.optimal:
        return Outcome(True, None, case.roman.value, INFEASIBLE, False)
    return _within(dom.value, 2 * dom.value, case.roman)


def _p23(case: RingCase) -> Outcome:
    g = case.graph
    if g.n == 0:
        return _skip()
    r, d = case.roman, case.domination
    predicted = g.edge_count == 0
    computed = r.value == d.value
    if not (r.optimal and d.optimal):
        return Outcome(True, predicted, computed, INFEASIBLE, False)
    return _match(predicted, computed)


def _l41(case: RingCase) -> Outcome:
    if not case.facts.zd_ideal:
        return _skip()
    t = case.total
    z = case.zd_mask
    complete = all((t.closed[v] & z) == z for v in _bits(z))
    disjoint = all(t.adj[v] & ~z == 0 for v in _bits(z))
    return _match(True, complete and disjoint)


def _degree_pattern(zdeg: Iterable[int], regdeg: Iterable[int]) -> str:
    def fmt(s):
        s = sorted(set(s))
        return ",".join(map(str, s)) if s else "-"

    return f"Z:{fmt(zdeg)} Reg:{fmt(regdeg)}"


def _s4_degree(case: RingCase) -> Outcome:
    if not case.facts.zd_ideal:
        return _skip()
    beta = case.beta
    z = case.zd_mask
    t = case.total
    two_in_z = is_zero_divisor(case.ring, case.ring.from_integer(2))
    has_reg = case.ring.order > beta
    if two_in_z:
        predicted = _degree_pattern([beta - 1], [beta - 1] if has_reg else [])
    else:
        predicted = _degree_pattern([beta - 1], [beta] if has_reg else [])
    zdeg = [t.degree(v) for v in range(t.n) if z >> v & 1]
    regdeg = [t.degree(v) for v in range(t.n) if not z >> v & 1]
    return _match(predicted, _degree_pattern(zdeg, regdeg))


def _t42_bounds(case: RingCase) -> Outcome:
    if not case.facts.zd_ideal:
        return _skip()
    return _within(3, 2 * case.alpha, case.total_roman)


def _t42_structure(case: RingCase) -> Outcome:
    if not case.facts.zd_ideal:
        return _skip()
    beta, alpha = case.beta, case.alpha
    if is_zero_divisor(case.ring, case.ring.from_integer(2)):
        predicted = {f"K{beta}": alpha}
    else:
        bip = f"K{beta},{beta}" if beta > 1 else "K2"
        predicted = {f"K{beta}": 1}
        if alpha > 1:
            predicted[bip] = predicted.get(bip, 0) + (alpha - 1) // 2
    return _match(census_string(predicted), census_string(component_census(case.total)))


def _p38(case: PairCase) -> Outcome:
    g1, g2 = case.g1, case.g2
    r1 = max((g1.degree(v) for v in range(g1.n)), default=0)
    r2 = max((g2.degree(v) for v in range(g2.n)), default=0)
    return _within(0, g1.n * g2.n - r1 - r2 + 1, case.bounded_roman)


def _c39(case: PairCase) -> Outcome:
    if case.g1.n != 1 or len(zero_divisor_set(case.ring2)) < 2:
        return _skip()
    same = case.product.adj == case.g2.adj
    out = _equal(case.roman2.value, case.roman)
    if not case.roman2.optimal:
        return Outcome(True, case.roman2.value, case.roman.value, INFEASIBLE, False)
    if not same and out.status == CONFIRMED:
        return Outcome(True, out.predicted, out.computed, VIOLATED)
    return out


def _p21(case: GraphCase) -> Outcome:
    return _equal(math.ceil(2 * case.params[0] / 3), case.roman)


def _s2_complete(case: GraphCase) -> Outcome:
    if case.params[0] < 2:
        return _skip()
    return _equal(2, case.roman)


def _s2_multipartite(case: GraphCase) -> Outcome:
    parts = case.params
    if len(parts) < 2:
        return _skip()
    low = min(parts)
    return _equal(2 if low == 1 else 3 if low == 2 else 4, case.roman)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- catalog --------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    id: str
    family: str
    statement: str
    evaluate: Callable[[Any], Outcome] = field(repr=False)


CATALOG: tuple[Claim, ...] = (
    Claim("P2.1-path", "path", "gamma_R(P_n) = ceil(2n/3)", _p21),
    Claim("P2.1-cycle", "cycle", "gamma_R(C_n) = ceil(2n/3)", _p21),
    Claim("P2.2", "ring", "gamma(G) <= gamma_R(G) <= 2 gamma(G) on Gamma(R)", _p22),
    Claim("P2.3", "ring", "gamma(G) = gamma_R(G) iff G has no edges, on Gamma(R)", _p23),
    Claim("S2-complete", "complete", "gamma_R(K_n) = 2 for n >= 2", _s2_complete),
    Claim(
        "S2-multipartite",
        "multipartite",
        "complete multipartite: smallest part 1 -> 2, 2 -> 3, >= 3 -> 4",
        _s2_multipartite,
    ),
    Claim("E2.1", "ring", "Gamma(Z_25) = K_4 and gamma_R = 2", _e21),
    Claim("E2.2a", "ring", "Gamma(R) regular of degree >= 3 -> gamma_R in {2, 4}", _e22a),
    Claim("T3.1", "ring", "finite principal ideal local ring S -> gamma_R(Gamma(S)) = 2", _t31),
    Claim(
        "T3.2", "ring", "R1 x R2, both diam 0, |R1|, |R2| >= 5 -> gamma_R = 4", _t32
    ),
    Claim("T3.3", "ring", "R1 x R2, diameters 0 and 1 -> gamma_R = 4", _diam_claim(lambda a, b: a == 0 and b == 1)),
    Claim("T3.4", "ring", "R1 x R2, diameters 1 and 1 -> gamma_R = 4", _diam_claim(lambda a, b: a == 1 and b == 1)),
    Claim("T3.5", "ring", "R1 x R2, diameters 0 and 2 -> gamma_R = 4", _diam_claim(lambda a, b: a == 0 and b == 2)),
    Claim(
        "T3.6",
        "ring",
        "R1 x R2, diam(R1) in {1, 2}, diam(R2) = 2 -> gamma_R = 4",
        _diam_claim(lambda a, b: a in (1, 2) and b == 2),
    ),
    Claim(
        "R3.7",
        "ring",
        "product of two local rings with diameters <= 2 -> gamma_R = 4",
        _diam_claim(lambda a, b: a is not INFINITE and b is not INFINITE and a <= 2 and b <= 2),
    ),
    Claim(
        "P3.8",
        "pair",
        "gamma_R(Gamma(R1) box Gamma(R2)) <= mn - r1 - r2 + 1",
        _p38,
    ),
    Claim(
        "C3.9",
        "pair",
        "|Z(R1)*| = 1, |Z(R2)| >= 2 -> Gamma(R1) box Gamma(R2) = Gamma(R2), same gamma_R",
        _c39,
    ),
    Claim("CZp2-complete", "ring", "n = p^2, p > 3 -> Gamma(Z_n) = K_{p-1}, gamma_R = 2", _czp2),
    Claim("T3.10", "ring", "product of n >= 3 integral domains -> gamma_R = 2n", _t310),
    Claim("T3.11", "ring", "product of n >= 3 local rings -> gamma_R = 2n", _t311),
    Claim("T3.12a", "ring", "n with k >= 3 distinct primes -> gamma_R(Gamma(Z_n)) = 2k", _t312a),
    Claim(
        "T3.12b",
        "ring",
        "n = p1^m1 p2^m2 with m1 >= 2 or m2 >= 2 or (m1 = m2 = 1, p1, p2 >= 3) -> gamma_R = 4",
        _t312b,
    ),
    Claim("T3.12c", "ring", "n = p^m (m >= 2) or n = 2p (p >= 3) -> gamma_R = 2", _t312c),
    Claim("T3.13", "ring", "gamma_R(Gamma(R)) <= 2(|P| - 1), P a smallest prime ideal", _t313),
    Claim(
        "L4.1",
        "ring",
        "Z(R) ideal -> Z(R) induces a complete subgraph of T(Gamma(R)) with no edges to Reg(R)",
        _l41,
    ),
    Claim(
        "S4-degree",
        "ring",
        "Z(R) ideal -> degrees in T(Gamma(R)) are beta - 1 (2 in Z(R)) or beta - 1 / beta",
        _s4_degree,
    ),
    Claim("T4.2-bounds", "ring", "Z(R) ideal -> 3 <= gamma_R(T(Gamma(R))) <= 2 alpha", _t42_bounds),
    Claim(
        "T4.2-structure",
        "ring",
        "Z(R) ideal -> T(Gamma(R)) = K_beta + (alpha-1) K_beta, or K_beta + (alpha-1)/2 K_{beta,beta}",
        _t42_structure,
    ),
)

CLAIMS = {c.id: c for c in CATALOG}
_CLAIM_INDEX = {c.id: i for i, c in enumerate(CATALOG)}


def resolve_claims(ids: Iterable[str] | None) -> list[str]:
    """Expand ids; a prefix such as ``T4.2`` or ``P2.1`` selects its sub-claims."""
    if ids is None:
        return [c.id for c in CATALOG]
    out = []
    for raw in ids:
        raw = raw.strip()
        if not raw:
            continue
        if raw in CLAIMS:
            matched = [raw]
        else:
            matched = [c.id for c in CATALOG if c.id.startswith(raw) and c.id[len(raw)] in "-abc"]
        if not matched:
            raise KeyError(f"unknown claim id {raw!r}")
        out.extend(m for m in matched if m not in out)
    return sorted(out, key=_CLAIM_INDEX.__getitem__)


# -- rows and reports -------------------------------------------------------------------


@dataclass
class TheoremCheck:
    claim: str
    instance: str
    hypotheses_met: bool
    predicted: Any
    computed: Any
    status: str
    elapsed_ms: int = 0
    exact: bool = True

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def key(self) -> str:
        return f"{self.claim}:{self.instance}"


def predict(claim_id: str, instance) -> Any:
    """The claim's prediction on ``instance``, or the SKIPPED marker if its hypothesis fails."""
    out = check(claim_id, instance)
    return out.predicted if out.hypotheses_met else SKIPPED


def make_case(instance, budgets: Budgets = Budgets()):
    """Build a case from a descriptor: ``Z9``, ``Z2xZ2xZ2``, ``Z4*Z9``, ``path:5`` ..."""
    if isinstance(instance, RingSpec):
        return RingCase(instance, budgets)
    if not isinstance(instance, str):
        raise TypeError(f"unsupported instance {instance!r}")
    text = instance.strip()
    if "*" in text:
        left, _, right = text.partition("*")
        r1, r2 = parse_ring(left), parse_ring(right)
        if r1.modulus is None or r2.modulus is None:
            raise ParseError("pair instances take Z<n> factors")
        return PairCase(r1.modulus, r2.modulus, budgets)
    if ":" in text:
        kind, _, rest = text.partition(":")
        params = tuple(int(p) for p in rest.split(","))
        family = {"multi": "multipartite", "k": "complete"}.get(kind, kind)
        if family not in ("path", "cycle", "complete", "multipartite"):
            parse_named(text)
            raise ParseError(f"no claims take {kind!r} instances")
        return GraphCase(family, params, budgets)
    return RingCase(parse_ring(text), budgets)


def _evaluate(claim: Claim, case) -> TheoremCheck:
    if claim.family != case.family:
        raise ValueError(f"claim {claim.id} does not apply to {case.family} instances")
    start = time.perf_counter()
    out = claim.evaluate(case)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return TheoremCheck(
        claim.id, case.descriptor, out.hypotheses_met, out.predicted, out.computed,
        out.status, elapsed, out.exact,
    )


def check(claim_id: str, instance, budgets: Budgets = Budgets()) -> TheoremCheck:
    claim = CLAIMS[claim_id]
    case = instance if hasattr(instance, "descriptor") else make_case(instance, budgets)
    return _evaluate(claim, case)


# -- sweeps ------------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """What to check.

    Graph families run for vertex counts in ``[min_n, max_n]``; ring claims run on Z_n and on
    the non-cyclic products of prime powers with order at most ``max_order``
    (defaults to ``max_n``); pair claims on Z_a, Z_b with ``a <= b <= pair_max_n``
    (default ``max_n``) whose product has at most ``pair_max_vertices`` vertices.
    """

    claims: tuple[str, ...] | None = None
    min_n: int = 1
    max_n: int = 100
    max_order: int | None = None
    prime_powers: bool = False
    pair_max_n: int | None = None
    pair_max_vertices: int = DEFAULT_PAIR_MAX_VERTICES
    multipartite_max_parts: int = 4
    multipartite_max_size: int = 5
    budgets: Budgets = Budgets()
    threads: int = 1


def _prime_powers(limit: int) -> list[tuple[int, int]]:
    out = []
    for p in range(2, limit + 1):
        if not is_prime(p):
            continue
        k, q = 1, p
        while q <= limit:
            out.append((p, k))
            k += 1
            q *= p
    return sorted(out)


def non_cyclic_products(max_order: int) -> list[RingSpec]:
    """Products of >= 2 prime powers with a repeated prime (not isomorphic to any Z_n)."""
    pps = _prime_powers(max_order // 2)
    out = []

    def extend(start, chosen, order):
        if len(chosen) >= 2:
            primes = [p for p, _ in chosen]
            if len(set(primes)) < len(primes):
                out.append(RingSpec(tuple(chosen)))
        for i in range(start, len(pps)):
            p, k = pps[i]
            q = p**k
            if order * q > max_order:
                continue
            extend(i, chosen + [(p, k)], order * q)

    extend(0, [], 1)
    return sorted(out, key=lambda r: (r.order, r.factors))


def ring_instances(spec: SweepSpec) -> list[RingSpec]:
    top = spec.max_order if spec.max_order is not None else spec.max_n
    lo = max(2, spec.min_n)
    rings = []
    for n in range(lo, top + 1):
        fs = ring_from_modulus(n)
        if spec.prime_powers and not fs.is_local:
            continue
        rings.append(fs)
    if not spec.prime_powers:
        rings.extend(r for r in non_cyclic_products(top) if r.order >= lo)
    return sorted(rings, key=lambda r: (r.order, r.modulus is None, r.factors))


def pair_instances(spec: SweepSpec) -> list[tuple[int, int]]:
    top = spec.pair_max_n if spec.pair_max_n is not None else spec.max_n
    sizes = {}
    for n in range(max(2, spec.min_n), top + 1):
        if is_prime(n):
            continue
        sizes[n] = n - 1 - sum(1 for x in range(1, n) if math.gcd(x, n) == 1)
    out = []
    for a in sizes:
        for b in sizes:
            if a <= b and sizes[a] * sizes[b] <= spec.pair_max_vertices:
                out.append((a, b))
    return out


def _multipartite_vectors(max_parts: int, max_size: int) -> list[tuple[int, ...]]:
    out = []
    for r in range(2, max_parts + 1):
        out.extend(itertools.combinations_with_replacement(range(1, max_size + 1), r))
    return sorted(out, key=lambda v: (sum(v), len(v), v))


def _tasks(spec: SweepSpec, claim_ids: list[str]) -> list[tuple[str, Any, list[str]]]:
    by_family: dict[str, list[str]] = {}
    for cid in claim_ids:
        by_family.setdefault(CLAIMS[cid].family, []).append(cid)
    tasks = []
    lo = max(1, spec.min_n)
    if "path" in by_family:
        tasks += [("path", (n,), by_family["path"]) for n in range(lo, spec.max_n + 1)]
    if "cycle" in by_family:
        tasks += [("cycle", (n,), by_family["cycle"]) for n in range(max(3, lo), spec.max_n + 1)]
    if "complete" in by_family:
        tasks += [("complete", (n,), by_family["complete"]) for n in range(lo, spec.max_n + 1)]
    if "multipartite" in by_family:
        vectors = _multipartite_vectors(spec.multipartite_max_parts, spec.multipartite_max_size)
        tasks += [
            ("multipartite", v, by_family["multipartite"])
            for v in vectors
            if lo <= sum(v) <= spec.max_n
        ]
    if "ring" in by_family:
        tasks += [("ring", r.factors + ((r.modulus,),), by_family["ring"]) for r in ring_instances(spec)]
    if "pair" in by_family:
        tasks += [("pair", ab, by_family["pair"]) for ab in pair_instances(spec)]
    return tasks


def _run_task(task, budgets: Budgets) -> list[TheoremCheck]:
    family, params, claim_ids = task
    if family == "ring":
        *factors, (modulus,) = params
        case = RingCase(RingSpec(tuple(factors), modulus=modulus), budgets)
    elif family == "pair":
        case = PairCase(params[0], params[1], budgets)
    else:
        case = GraphCase(family, tuple(params), budgets)
    return [_evaluate(CLAIMS[cid], case) for cid in claim_ids]


def _run_task_star(args):
    return _run_task(*args)


@dataclass
class Report:
    rows: list[TheoremCheck]

    @property
    def summary(self) -> dict[str, int]:
        counts = {s: 0 for s in STATUSES}
        for r in self.rows:
            counts[r.status] += 1
        return counts

    def violated(self) -> list[TheoremCheck]:
        return [r for r in self.rows if r.status == VIOLATED]


def run_suite(spec: SweepSpec) -> Report:
    """Run every selected claim over the sweep; rows ordered by claim, then instance."""
    claim_ids = resolve_claims(spec.claims)
    tasks = _tasks(spec, claim_ids)
    if spec.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            chunks = list(pool.map(_run_task_star, [(t, spec.budgets) for t in tasks], chunksize=4))
    else:
        chunks = [_run_task(t, spec.budgets) for t in tasks]
    seq = {}
    rows = []
    for i, chunk in enumerate(chunks):
        for row in chunk:
            seq[id(row)] = i
            rows.append(row)
    rows.sort(key=lambda r: (_CLAIM_INDEX[r.claim], seq[id(r)]))
    return Report(rows)


# -- serialization -------------------------------------------------------------------------

CSV_COLUMNS = ("claim", "instance", "hypotheses_met", "predicted", "computed", "status", "elapsed_ms")


def _row_dict(row: TheoremCheck, timing: bool) -> dict:
    d = asdict(row)
    if not timing:
        d["elapsed_ms"] = 0
    return d


def report_to_json(report: Report, timing: bool = True) -> str:
    return json.dumps([_row_dict(r, timing) for r in report.rows], indent=1) + "\n"


def report_from_json(text: str) -> Report:
    return Report([TheoremCheck(**d) for d in json.loads(text)])


def render_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ",".join(render_value(x) for x in v) + "]"
    return str(v)


def report_to_csv(report: Report, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        d = _row_dict(r, timing)
        w.writerow([render_value(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def summary_line(report: Report) -> str:
    s = report.summary
    return " ".join(f"{k}={s[k]}" for k in STATUSES)


def report_to_markdown(report: Report, timing: bool = True) -> str:
    lines = [f"**{summary_line(report)}**", ""]
    lines.append("| " + " | ".join(CSV_COLUMNS) + " |")
    lines.append("|" + "---|" * len(CSV_COLUMNS))
    for r in report.rows:
        d = _row_dict(r, timing)
        cells = [render_value(d[c]).replace("|", "\\|") for c in CSV_COLUMNS]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def report_to_text(report: Report, timing: bool = True) -> str:
    lines = []
    violated = report.violated()
    if violated:
        lines.append(f"!! {len(violated)} VIOLATED row(s)")
    lines.append(summary_line(report))
    per_claim: dict[str, dict[str, int]] = {}
    for r in report.rows:
        per_claim.setdefault(r.claim, {s: 0 for s in STATUSES})[r.status] += 1
    for cid, counts in per_claim.items():
        lines.append(f"  {cid:16s} " + " ".join(f"{k}={counts[k]}" for k in STATUSES))
    for r in violated:
        lines.append(
            f"VIOLATED {r.claim} {r.instance}: predicted {render_value(r.predicted)}, "
            f"computed {render_value(r.computed)}"
        )
    return "\n".join(lines) + "\n"


def pinned_from_report(report: Report) -> dict[str, str]:
    return {r.key(): r.status for r in report.violated()}


def load_pinned(path) -> dict[str, str]:
    with open(path) as fh:
        return json.load(fh)


def dump_pinned(pinned: dict[str, str]) -> str:
    return json.dumps(dict(sorted(pinned.items())), indent=1) + "\n"


def compare_pinned(report: Report, pinned: dict[str, str]) -> tuple[list[str], list[str]]:
    """Violations not pinned, and pinned violations not observed (among rows present)."""
    observed = {r.key(): r.status for r in report.rows}
    unexpected = sorted(k for k, s in observed.items() if s == VIOLATED and pinned.get(k) != VIOLATED)
    missing = sorted(
        k for k, s in pinned.items() if s == VIOLATED and k in observed and observed[k] != VIOLATED
    )
    return unexpected, missing


def default_pinned_path():
    from importlib.resources import files

    return files("rzdg").joinpath("data/pinned_expectations.json")
