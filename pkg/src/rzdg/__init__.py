"""Zero-divisor graphs of finite commutative rings and exact Roman domination."""

from rzdg._backend import BACKEND
from rzdg.graphs import (
    INFINITE,
    Graph,
    cartesian_product,
    diameter,
    export,
    metrics,
    named_graph,
    total_graph,
    zero_divisor_graph,
)
from rzdg.rings import (
    RingSpec,
    alpha,
    is_zero_divisor,
    parse_ring,
    prime_ideals,
    ring_from_modulus,
    ring_product,
    subset_is_ideal,
    zero_divisor_set,
)
from rzdg.solver import (
    RomanAssignment,
    SolveReport,
    gamma_brute,
    gamma_exact,
    gamma_r_brute,
    gamma_r_exact,
    greedy_upper_bound,
    rdf_is_valid,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INFINITE",
    "Graph",
    "RingSpec",
    "RomanAssignment",
    "SolveReport",
    "alpha",
    "cartesian_product",
    "diameter",
    "export",
    "gamma_brute",
    "gamma_exact",
    "gamma_r_brute",
    "gamma_r_exact",
    "greedy_upper_bound",
    "is_zero_divisor",
    "metrics",
    "named_graph",
    "parse_ring",
    "prime_ideals",
    "rdf_is_valid",
    "ring_from_modulus",
    "ring_product",
    "subset_is_ideal",
    "total_graph",
    "zero_divisor_graph",
    "zero_divisor_set",
]
