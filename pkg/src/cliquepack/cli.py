"""Command-line front end: count, solve, dynamic, gen.

Reports are line-oriented ``key=value`` text on stdout (or one JSON document
with ``--json``); solutions are written as one clique per line using the
input file's external node labels.  Exit status: 0 success, 2 parse or usage
error, 3 capacity/timeout refusals.
"""

from __future__ import annotations

import argparse
import json
import resource
import sys
import time
from dataclasses import dataclass, field

from .dynamic import DynamicState, UpdateOp, parse_update_stream, replay
from .enumeration import compute_node_scores
from .generate import watts_strogatz_edges, write_edge_list
from .graph import (
    ORDER_DEGREE,
    ORDER_KINDS,
    Graph,
    ParseError,
    build_ordering,
    orient,
    read_edge_list,
)
from .oracle import (
    DEFAULT_TIME_BUDGET,
    CapacityError,
    OracleTimeout,
    build_clique_graph,
    exact_mis,
)
from .solvers import (
    DEFAULT_GC_CAP_BYTES,
    MemoryGuardError,
    SolutionSet,
    solve_gc,
    solve_hg,
    solve_lp,
)

ALGORITHMS = ("hg", "gc", "l", "lp", "opt")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAPACITY = 3


@dataclass
class RunReport:
    """Machine-readable run summary; field order is the emission order."""

    algorithm: str
    k: int
    n: int
    m: int
    tau: int | None = None
    solution_size: int | None = None
    wall_load_s: float | None = None
    wall_score_s: float | None = None
    wall_solve_s: float | None = None
    peak_rss_kb: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "algorithm": self.algorithm,
            "k": self.k,
            "n": self.n,
            "m": self.m,
        }
        for name in ("tau", "solution_size", "wall_load_s", "wall_score_s",
                     "wall_solve_s", "peak_rss_kb"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        out.update(self.extra)
        return out

    def emit(self, fp, as_json: bool) -> None:
        data = self.to_dict()
        if as_json:
            fp.write(json.dumps(data, indent=2) + "\n")
        else:
            for key, value in data.items():
                if isinstance(value, float):
                    fp.write(f"{key}={value:.6f}\n")
                elif isinstance(value, list):
                    fp.write(f"{key}={','.join(str(x) for x in value)}\n")
                else:
                    fp.write(f"{key}={value}\n")


def _peak_rss_kb() -> int:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss


def write_solution(sol: SolutionSet, g: Graph, fp) -> None:
    """One clique per line, members as sorted external labels, lines sorted."""
    for members in sorted(g.to_external(c) for c in sol.cliques):
        fp.write(" ".join(str(x) for x in members) + "\n")


def read_solution(lines, g: Graph) -> SolutionSet:
    """Parse a solution file back into internal ids (for validation)."""
    cliques = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            labels = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer label in {line!r}", lineno) from None
        members = []
        for lab in labels:
            u = g.id_of(lab)
            if u is None:
                raise ParseError(f"unknown node label {lab}", lineno)
            members.append(u)
        cliques.append(tuple(sorted(members)))
    return SolutionSet.from_cliques(g.n, cliques)


def _quantile(sorted_values: list[float], q: float) -> float:
    if not sorted_values:
        return 0.0
    idx = min(len(sorted_values) - 1, int(q * len(sorted_values)))
    return sorted_values[idx]


def _cmd_count(args) -> int:
    t0 = time.perf_counter()
    g = read_edge_list(args.graph)
    t1 = time.perf_counter()
    scores = compute_node_scores(orient(g, build_ordering(g, ORDER_DEGREE)), args.k,
                                 threads=args.threads)
    t2 = time.perf_counter()
    s = scores.s_n
    nonzero = [x for x in s if x]
    report = RunReport(
        algorithm="count",
        k=args.k,
        n=g.n,
        m=g.m,
        tau=scores.tau,
        wall_load_s=t1 - t0,
        wall_score_s=t2 - t1,
        peak_rss_kb=_peak_rss_kb(),
        extra={
            "s_n_min": min(s, default=0),
            "s_n_max": max(s, default=0),
            "s_n_mean": (sum(s) / len(s)) if s else 0.0,
            "s_n_zero_nodes": len(s) - len(nonzero),
        },
    )
    report.emit(sys.stdout, args.json)
    if args.label_map:
        with open(args.label_map, "w", encoding="utf-8") as fp:
            g.write_label_map(fp)
    return EXIT_OK


def _default_output(args) -> str:
    return args.output or f"{args.graph}.k{args.k}.{args.algo}.cliques"


def _cmd_solve(args) -> int:
    t0 = time.perf_counter()
    g = read_edge_list(args.graph)
    t1 = time.perf_counter()
    tau = None
    if args.algo == "hg":
        sol = solve_hg(g, args.k, build_ordering(g, args.ordering))
    elif args.algo == "gc":
        sol = solve_gc(g, args.k, cap_bytes=args.gc_cap_bytes,
                       strict_ties=not args.relaxed_ties)
    elif args.algo in ("l", "lp"):
        pruning = args.algo == "lp" and not args.no_prune
        sol = solve_lp(g, args.k, pruning=pruning, threads=args.threads,
                       strict_ties=not args.relaxed_ties)
    elif args.algo == "opt":
        cg = build_clique_graph(g, args.k)
        tau = len(cg.cliques)
        sol = exact_mis(cg, time_budget=args.opt_timeout_secs)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown algorithm {args.algo!r}")
    t2 = time.perf_counter()

    out_path = _default_output(args)
    with open(out_path, "w", encoding="utf-8") as fp:
        write_solution(sol, g, fp)
    report = RunReport(
        algorithm=args.algo,
        k=args.k,
        n=g.n,
        m=g.m,
        tau=tau,
        solution_size=sol.size,
        wall_load_s=t1 - t0,
        wall_solve_s=t2 - t1,
        peak_rss_kb=_peak_rss_kb(),
        extra={"solution_file": out_path},
    )
    report.emit(sys.stdout, args.json)
    return EXIT_OK


def _cmd_dynamic(args) -> int:
    t0 = time.perf_counter()
    g = read_edge_list(args.graph)
    with open(args.stream, "r", encoding="utf-8") as fp:
        raw_ops = parse_update_stream(fp)
    # Streams speak external labels; unknown labels surface as per-op errors.
    ops = []
    for op in raw_ops:
        u = g.id_of(op.u)
        v = g.id_of(op.v)
        ops.append(UpdateOp(op.kind, u if u is not None else -1,
                            v if v is not None else -1))
    t1 = time.perf_counter()
    sol = solve_lp(g, args.k, pruning=not args.no_prune, threads=args.threads,
                   strict_ties=not args.relaxed_ties)
    state = DynamicState(g, args.k, sol)
    t2 = time.perf_counter()
    metrics = replay(state, ops, verify=args.verify)
    t3 = time.perf_counter()

    final = state.solution()
    out_path = args.output or f"{args.graph}.k{args.k}.dynamic.cliques"
    with open(out_path, "w", encoding="utf-8") as fp:
        write_solution(final, g, fp)

    lat = sorted(metrics.latencies)
    extra = {
        "solution_file": out_path,
        "ops_total": len(ops),
        "ops_applied": metrics.applied,
        "ops_errors": len(metrics.errors),
        "size_initial": sol.size,
        "size_final": final.size,
        "size_min": min(metrics.sizes, default=sol.size),
        "size_max": max(metrics.sizes, default=sol.size),
        "index_size_final": state.index_size,
        "latency_p50_s": _quantile(lat, 0.50),
        "latency_p90_s": _quantile(lat, 0.90),
        "latency_p99_s": _quantile(lat, 0.99),
        "latency_max_s": lat[-1] if lat else 0.0,
    }
    if args.json:
        extra["size_trajectory"] = metrics.sizes
        extra["index_size_trajectory"] = metrics.index_sizes
        extra["errors"] = [f"op {i}: {msg}" for i, msg in metrics.errors]
    report = RunReport(
        algorithm="dynamic",
        k=args.k,
        n=g.n,
        m=g.m,
        solution_size=final.size,
        wall_load_s=t1 - t0,
        wall_score_s=t2 - t1,
        wall_solve_s=t3 - t2,
        peak_rss_kb=_peak_rss_kb(),
        extra=extra,
    )
    report.emit(sys.stdout, args.json)
    return EXIT_OK


def _cmd_gen(args) -> int:
    edges = watts_strogatz_edges(args.n, args.mean_degree, args.rewire_prob, args.seed)
    with open(args.output, "w", encoding="utf-8") as fp:
        write_edge_list(edges, fp)
    report = RunReport(
        algorithm="gen",
        k=0,
        n=args.n,
        m=len(edges),
        peak_rss_kb=_peak_rss_kb(),
        extra={
            "mean_degree": args.mean_degree,
            "rewire_prob": args.rewire_prob,
            "seed": args.seed,
            "output": args.output,
        },
    )
    report.emit(sys.stdout, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliquepack",
        description="Near-optimal maximum sets of disjoint k-cliques, "
                    "static and under edge updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_threads=True):
        p.add_argument("--json", action="store_true", help="emit the report as JSON")
        if with_threads:
            p.add_argument("--threads", type=int, default=1,
                           help="worker threads for the per-root search phases")

    p_count = sub.add_parser("count", help="count k-cliques and node scores")
    p_count.add_argument("graph", help="edge-list file")
    p_count.add_argument("--k", type=int, required=True)
    p_count.add_argument("--label-map", help="write 'internal external' lines here")
    common(p_count)
    p_count.set_defaults(func=_cmd_count)

    p_solve = sub.add_parser("solve", help="compute a disjoint k-clique set")
    p_solve.add_argument("graph", help="edge-list file")
    p_solve.add_argument("--k", type=int, required=True)
    p_solve.add_argument("--algo", choices=ALGORITHMS, default="lp")
    p_solve.add_argument("--ordering", choices=ORDER_KINDS, default=ORDER_DEGREE,
                         help="node ordering for --algo hg")
    p_solve.add_argument("--no-prune", action="store_true",
                         help="disable score-driven pruning in lp")
    p_solve.add_argument("--relaxed-ties", action="store_true",
                         help="skip the strict total clique ordering (faster)")
    p_solve.add_argument("--gc-cap-bytes", type=int, default=DEFAULT_GC_CAP_BYTES,
                         help="memory budget for gc's materialized cliques")
    p_solve.add_argument("--opt-timeout-secs", type=float, default=DEFAULT_TIME_BUDGET)
    p_solve.add_argument("-o", "--output", help="solution file path")
    common(p_solve)
    p_solve.set_defaults(func=_cmd_solve)

    p_dyn = sub.add_parser("dynamic", help="replay an edge-update stream")
    p_dyn.add_argument("graph", help="edge-list file")
    p_dyn.add_argument("--k", type=int, required=True)
    p_dyn.add_argument("--stream", required=True,
                       help="update stream: '+ u v' / '- u v' lines")
    p_dyn.add_argument("--verify", action="store_true",
                       help="cross-check state against a scratch rebuild after every op")
    p_dyn.add_argument("--no-prune", action="store_true")
    p_dyn.add_argument("--relaxed-ties", action="store_true")
    p_dyn.add_argument("-o", "--output", help="final solution file path")
    common(p_dyn)
    p_dyn.set_defaults(func=_cmd_dynamic)

    p_gen = sub.add_parser("gen", help="generate a small-world edge list")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--mean-degree", type=int, required=True)
    p_gen.add_argument("--rewire-prob", type=float, default=0.1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)
    common(p_gen, with_threads=False)
    p_gen.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CapacityError, OracleTimeout, MemoryGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
