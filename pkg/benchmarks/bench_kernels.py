"""Compare the compiled and pure-Python search kernels on the same instances.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Both backends receive identical inputs and must return identical results
(value, certificate, node count); the script exits 1 otherwise.
"""

import argparse
import json
import random
import statistics
import sys
import time

from rzdg import _backend
from rzdg.graphs import Graph, cartesian_product, zero_divisor_graph
from rzdg.rings import parse_ring, ring_from_modulus
from rzdg.solver import _greedy


def random_graph(seed, n, p):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges([str(i) for i in range(n)], edges)


def product(a, b):
    return cartesian_product(zero_divisor_graph(ring_from_modulus(a)), zero_divisor_graph(ring_from_modulus(b)))


def instances():
    return [
        ("bnb", "Gamma(Z10) box Gamma(Z12)", product(10, 12)),
        ("bnb", "Gamma(Z25) box Gamma(Z27)", product(25, 27)),
        ("bnb", "Gamma(Z16) box Gamma(Z18)", product(16, 18)),
        ("bnb", "Gamma(Z2xZ2xZ2xZ2xZ3)", zero_divisor_graph(parse_ring("Z2xZ2xZ2xZ2xZ3"))),
        ("bnb", "random n=60 p=0.08", random_graph(5, 60, 0.08)),
        ("bnb", "random n=90 p=0.05", random_graph(6, 90, 0.05)),
        ("dom", "random n=70 p=0.06", random_graph(7, 70, 0.06)),
        ("brute", "random n=20 p=0.2", random_graph(8, 20, 0.2)),
        ("brute", "random n=22 p=0.15", random_graph(9, 22, 0.15)),
        ("brute", "random n=26 p=0.08", random_graph(10, 26, 0.08)),
    ]


def run(kern, kind, g, node_budget):
    closed = g.closed
    if kind == "brute":
        return kern.brute_roman(closed)
    pick_cost, allow_single = (2, True) if kind == "bnb" else (1, False)
    w, picks, singles = _greedy(closed, pick_cost, allow_single)
    return kern.branch_and_bound(closed, pick_cost, allow_single, w, picks, singles, node_budget, 0.0)


def timed(kern, kind, g, node_budget, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = run(kern, kind, g, node_budget)
        times.append(time.perf_counter() - start)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--node-budget", type=int, default=200_000)
    ap.add_argument("--json", help="also write results to this file")
    args = ap.parse_args(argv)

    if _backend.compiled_kernels is None:
        print("compiled kernels are not available; build the extension first", file=sys.stderr)
        return 2
    rows = []
    mismatch = False
    print(f"{'instance':34s} {'kind':5s} {'n':>4s} {'value':>6s} {'nodes':>9s} "
          f"{'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for kind, name, g in instances():
        py, tpy = timed(_backend.python_kernels, kind, g, args.node_budget, args.repeat)
        cy, tcy = timed(_backend.compiled_kernels, kind, g, args.node_budget, args.repeat)
        same = list(py) == list(cy)
        mismatch |= not same
        nodes = py[3] if kind != "brute" else None
        row = {"instance": name, "kind": kind, "n": g.n, "value": py[0], "nodes": nodes,
               "python_s": tpy, "cython_s": tcy, "speedup": tpy / tcy if tcy else float("inf"),
               "identical": same}
        rows.append(row)
        print(f"{name:34s} {kind:5s} {g.n:4d} {py[0]:6d} {'-' if nodes is None else nodes:>9} {tpy:10.4f} {tcy:10.4f} "
              f"{row['speedup']:7.1f}x{'' if same else '  MISMATCH'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
