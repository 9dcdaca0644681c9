"""Command-line front end: ``rzdg graph|solve|verify|bound``.

Exit codes: 0 success, 1 usage or parse error, 2 infeasible or budget
exhausted, 3 strict-mode violation.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from rzdg import __version__, harness, solver
from rzdg.errors import CapacityError, InfeasibleError, RzdgError
from rzdg.graphs import (
    Graph,
    cartesian_product,
    census_string,
    component_census,
    diameter,
    export,
    metrics,
    parse_named,
    to_json_dict,
    total_graph,
    zero_divisor_graph,
)
from rzdg.rings import parse_ring

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_STRICT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Usage(Exception):
    pass


def _add_input(p: argparse.ArgumentParser, total: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--ring", help="ring literal, e.g. Z25 or Z2xZ3")
    src.add_argument("--named", help="named graph, e.g. path:5, kbip:2,4, multi:3,3,3")
    if total:
        p.add_argument("--total", action="store_true", help="use the total graph T(Gamma(R))")


def _add_budgets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-budget", type=float, default=solver.DEFAULT_TIME_BUDGET,
                   help="seconds per instance (default %(default)s)")
    p.add_argument("--node-budget", type=int, default=solver.DEFAULT_NODE_BUDGET,
                   help="search nodes per component (default %(default)s)")
    p.add_argument("--threads", type=int, default=1)


def _add_common(p: argparse.ArgumentParser, formats, default="text") -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--no-banner", action="store_true",
                   help="omit the timestamp header and zero all timings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rzdg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rzdg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("graph", help="build and export a graph")
    _add_input(g)
    _add_common(g, ("text", "json", "dot"))
    g.add_argument("--stats", action="store_true",
                   help="add vertex/edge counts, max degree, diameter and component census")

    s = sub.add_parser("solve", help="exact gamma_R (or gamma) with a certificate")
    _add_input(s)
    _add_budgets(s)
    _add_common(s, ("text", "json"))
    s.add_argument("--domination", action="store_true", help="compute gamma instead of gamma_R")

    v = sub.add_parser("verify", help="check catalog claims over a sweep")
    which = v.add_mutually_exclusive_group()
    which.add_argument("--claims", help="comma-separated claim ids or prefixes (e.g. T4.2)")
    which.add_argument("--all", action="store_true", help="every catalog claim (default)")
    v.add_argument("--min-n", type=int, default=1)
    v.add_argument("--max-n", type=int, default=100)
    v.add_argument("--max-order", type=int, help="largest ring order (default: --max-n)")
    v.add_argument("--pair-max-n", type=int, help="largest modulus in product pairs (default: --max-n)")
    v.add_argument("--prime-powers", action="store_true", help="restrict rings to Z_{p^k}")
    v.add_argument("--bound-node-budget", type=int, default=harness.DEFAULT_BOUND_NODE_BUDGET,
                   help="node budget for bound-only claims (default %(default)s)")
    _add_budgets(v)
    _add_common(v, ("text", "json", "csv", "md"))
    v.add_argument("--strict", action="store_true", help="exit 3 if any row is VIOLATED")
    v.add_argument("--pinned", nargs="?", const="", metavar="FILE",
                   help="compare VIOLATED rows with a pinned file (bundled file if no FILE); exit 3 on mismatch")
    v.add_argument("--write-pinned", metavar="FILE", help="write this run's VIOLATED rows as a pinned file")

    b = sub.add_parser("bound", help="Cartesian-product bound mn - r1 - r2 + 1")
    b.add_argument("--ring1", required=True)
    b.add_argument("--ring2", required=True)
    _add_budgets(b)
    _add_common(b, ("text", "json"))
    b.add_argument("--strict", action="store_true", help="exit 3 if the bound fails")
    return parser


def _graph_from(args) -> Graph:
    if args.ring:
        ring = parse_ring(args.ring)
        return total_graph(ring) if args.total else zero_divisor_graph(ring)
    if getattr(args, "total", False):
        raise _Usage("--total needs --ring")
    return parse_named(args.named)


def _stats(g: Graph) -> dict:
    m = metrics(g)
    d = diameter(g)
    return {
        "vertices": g.n,
        "edges": g.edge_count,
        "max_degree": m.max_degree,
        "diameter": d if isinstance(d, int) else str(d),
        "components": census_string(component_census(g)),
    }


def _banner(args) -> str:
    if args.no_banner:
        return ""
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    mark = {"json": None, "csv": None, "dot": "//", "md": "<!--", "text": "#"}[args.format]
    if mark is None:
        return ""
    text = f"rzdg {__version__} {stamp}"
    return f"<!-- {text} -->\n" if mark == "<!--" else f"{mark} {text}\n"


def cmd_graph(args) -> tuple[str, int]:
    g = _graph_from(args)
    stats = _stats(g) if args.stats else None
    if args.format == "json":
        d = to_json_dict(g)
        if stats:
            d["stats"] = stats
        return json.dumps(d) + "\n", EXIT_OK
    if args.format == "dot":
        head = "".join(f"// {k}: {v}\n" for k, v in stats.items()) if stats else ""
        return head + export(g, "dot"), EXIT_OK
    lines = [f"vertices: {' '.join(g.labels)}"]
    lines += [f"{g.labels[u]} -- {g.labels[v]}" for u, v in g.edges()]
    if stats:
        lines += [f"{k}: {v}" for k, v in stats.items()]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_solve(args) -> tuple[str, int]:
    g = _graph_from(args)
    fn = solver.gamma_exact if args.domination else solver.gamma_r_exact
    rep = fn(g, time_budget=args.time_budget, node_budget=args.node_budget, threads=args.threads)
    code = EXIT_OK if rep.optimal else EXIT_BUDGET
    timing = not args.no_banner
    if args.format == "json":
        return json.dumps(rep.to_json_dict(timing=timing)) + "\n", code
    name = "gamma" if args.domination else "gamma_R"
    lines = [f"{name} = {rep.value}", f"optimal: {'yes' if rep.optimal else 'no (budget exhausted)'}"]
    if args.domination:
        lines.append("dominating set: " + " ".join(g.labels[v] for v in rep.certificate))
    else:
        _, v1, v2 = rep.certificate.partition
        lines.append("V2:" + "".join(" " + g.labels[v] for v in v2))
        lines.append("V1:" + "".join(" " + g.labels[v] for v in v1))
    lines.append(f"nodes: {rep.nodes}")
    if timing:
        lines.append(f"elapsed_ms: {rep.elapsed_ms}")
    return "\n".join(lines) + "\n", code


def cmd_verify(args) -> tuple[str, int]:
    ids = None
    if args.claims:
        try:
            ids = tuple(harness.resolve_claims(args.claims.split(",")))
        except KeyError as exc:
            raise _Usage(exc.args[0]) from None
    spec = harness.SweepSpec(
        claims=ids,
        min_n=args.min_n,
        max_n=args.max_n,
        max_order=args.max_order,
        prime_powers=args.prime_powers,
        pair_max_n=args.pair_max_n,
        budgets=harness.Budgets(args.time_budget, args.node_budget, args.bound_node_budget),
        threads=args.threads,
    )
    report = harness.run_suite(spec)
    timing = not args.no_banner
    render = {
        "text": harness.report_to_text,
        "json": harness.report_to_json,
        "csv": harness.report_to_csv,
        "md": harness.report_to_markdown,
    }[args.format]
    out = render(report, timing=timing)

    code = EXIT_OK
    if report.summary[harness.INFEASIBLE]:
        code = EXIT_BUDGET
    violated = report.violated()
    if violated:
        print(f"rzdg: {len(violated)} VIOLATED row(s)", file=sys.stderr)
        if args.strict:
            code = EXIT_STRICT
    if args.write_pinned:
        with open(args.write_pinned, "w") as fh:
            fh.write(harness.dump_pinned(harness.pinned_from_report(report)))
    if args.pinned is not None:
        path = args.pinned or harness.default_pinned_path()
        unexpected, missing = harness.compare_pinned(report, harness.load_pinned(path))
        for key in unexpected:
            print(f"rzdg: unpinned violation {key}", file=sys.stderr)
        for key in missing:
            print(f"rzdg: pinned violation not observed {key}", file=sys.stderr)
        if unexpected or missing:
            code = EXIT_STRICT
    return out, code


def cmd_bound(args) -> tuple[str, int]:
    r1, r2 = parse_ring(args.ring1), parse_ring(args.ring2)
    g1, g2 = zero_divisor_graph(r1), zero_divisor_graph(r2)
    if g1.n == 0 or g2.n == 0:
        raise InfeasibleError("both zero-divisor graphs must be nonempty")
    prod = cartesian_product(g1, g2)
    m1, m2 = metrics(g1).max_degree, metrics(g2).max_degree
    bound = g1.n * g2.n - m1 - m2 + 1
    rep = solver.gamma_r_exact(prod, time_budget=args.time_budget, node_budget=args.node_budget,
                               threads=args.threads)
    holds = rep.value <= bound
    code = EXIT_OK
    if not holds:
        code = EXIT_BUDGET if not rep.optimal else (EXIT_STRICT if args.strict else EXIT_OK)
    data = {
        "m": g1.n, "n": g2.n, "r1": m1, "r2": m2, "bound": bound,
        "gamma_R": rep.value, "optimal": rep.optimal, "holds": holds,
    }
    if args.format == "json":
        return json.dumps(data) + "\n", code
    lines = [f"{k}: {v}" for k, v in data.items()]
    return "\n".join(lines) + "\n", code


COMMANDS = {"graph": cmd_graph, "solve": cmd_solve, "verify": cmd_verify, "bound": cmd_bound}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = COMMANDS[args.command](args)
    except _Usage as exc:
        print(f"rzdg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapacityError, InfeasibleError) as exc:
        print(f"rzdg: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RzdgError, ValueError) as exc:
        print(f"rzdg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _banner(args) + out
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
