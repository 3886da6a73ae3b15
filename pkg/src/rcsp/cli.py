"""Command-line interface: solve single instances, generate benchmark
suites with tightness-based budgets, run algorithm comparisons to CSV,
and time the compiled kernels against the pure-Python fallback.

Exit codes for ``solve``: 0 optimal, 2 infeasible, 3 timeout, 1 usage or
parse errors.  The RCSP_TIMEOUT environment variable supplies the default
timeout (seconds).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time as _time
from fractions import Fraction

from . import kernels
from .baseline import SearchConfig, solve_rcbda
from .bounds import initialize
from .enhanced import reconstruct_paths, solve_rcebda
from .graph import (
    GraphFormatError,
    MultiCostGraph,
    ProblemInstance,
    build_scenario_graph,
    load_dimacs_gr,
    load_edge_list,
)
from .instancegen import grid_graph, grid_instance, tightness_limits
from .oracle import oracle_answer
from .parallel import solve_parallel
from .status import SolveStatus
from .vectors import INF, fmt

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_TIMEOUT = 3

BENCH_COLUMNS = [
    "map",
    "algo",
    "pair_id",
    "delta",
    "k",
    "status",
    "cost1",
    "resources",
    "runtime_ms",
    "expansions_fwd",
    "expansions_bwd",
    "generated",
    "matches",
    "solutions",
]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this CLI promises exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _add_graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="edge-list graph file (toy fixtures)")
    p.add_argument("--dimacs-dist", help="DIMACS .gr distance layer")
    p.add_argument("--dimacs-time", help="DIMACS .gr time layer")
    p.add_argument("--k", type=int, choices=(3, 4), help="cost dimension for DIMACS scenarios")


def _load_graph(args) -> MultiCostGraph:
    if args.graph:
        if args.dimacs_dist or args.dimacs_time:
            raise _UsageError("--graph conflicts with --dimacs-dist/--dimacs-time")
        return load_edge_list(args.graph)
    if args.dimacs_dist and args.dimacs_time:
        if not args.k:
            raise _UsageError("DIMACS scenarios require --k {3,4}")
        dist = load_dimacs_gr(args.dimacs_dist)
        tim = load_dimacs_gr(args.dimacs_time)
        return build_scenario_graph(dist, tim, args.k)
    raise _UsageError("supply --graph or both --dimacs-dist and --dimacs-time")


def _default_timeout() -> float | None:
    raw = os.environ.get("RCSP_TIMEOUT")
    return float(raw) if raw else None


def _parse_limits(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise _UsageError(f"bad --limits value {text!r}; expected e.g. 4,4") from None


def _parse_delta_pct(value: str) -> Fraction:
    try:
        pct = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"bad --delta value {value!r}") from None
    if not 0 <= pct <= 100:
        raise _UsageError("--delta is a percentage in [0,100]")
    return pct / 100


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    if args.limits and args.delta is not None:
        raise _UsageError("--limits conflicts with --delta")
    if not args.limits and args.delta is None:
        raise _UsageError("supply --limits or --delta")
    if args.trace and args.algo != "rcebda":
        raise _UsageError("--trace requires --algo rcebda")
    graph = _load_graph(args)

    if args.limits:
        limits = _parse_limits(args.limits)
    else:
        limits = tightness_limits(graph, args.start, args.goal, _parse_delta_pct(args.delta))
        if limits is None:
            _emit_solve(args, None, "Infeasible", INF, [], [], {})
            return EXIT_INFEASIBLE

    problem = ProblemInstance(graph, args.start, args.goal, limits)
    config = SearchConfig(timeout=args.timeout)
    trace_fh = open(args.trace, "w", encoding="ascii") if args.trace else None

    def trace_cb(ev):
        trace_fh.write(
            f"{ev.iteration} {ev.direction} {ev.state} g={fmt(ev.g)} f={fmt(ev.f)} {ev.action}\n"
        )

    try:
        if args.algo == "rcbda":
            init = initialize(problem, reduce=False)
            res = solve_rcbda(problem, init, config)
            status, cost1 = res.status, res.cost1
            vectors, paths, stats = [], [], res.stats.as_dict()
        elif args.algo in ("rcebda", "rcebda-par"):
            solver = solve_rcebda if args.algo == "rcebda" else solve_parallel
            kw = {"trace": trace_cb} if (trace_fh and args.algo == "rcebda") else {}
            res = solver(problem, config, **kw)
            status, cost1 = res.status, res.solutions.f1
            vectors = sorted(res.solutions.vectors())
            paths = reconstruct_paths(res, problem) if status is SolveStatus.OPTIMAL else []
            stats = res.stats.as_dict()
        elif args.algo == "oracle":
            st, cost1, front = oracle_answer(problem)
            status, vectors, paths, stats = st, sorted(front), [], {}
        else:  # pragma: no cover - argparse restricts choices
            raise _UsageError(f"unknown algorithm {args.algo}")
    finally:
        if trace_fh:
            trace_fh.close()

    status_name = status.value if isinstance(status, SolveStatus) else str(status)
    _emit_solve(args, limits, status_name, cost1, vectors, paths, stats)
    return {
        "Optimal": EXIT_OK,
        "Infeasible": EXIT_INFEASIBLE,
        "Timeout": EXIT_TIMEOUT,
    }.get(status_name, EXIT_OK)


def _emit_solve(args, limits, status, cost1, vectors, paths, stats) -> None:
    if args.format == "json":
        doc = {
            "algo": args.algo,
            "backend": kernels.BACKEND,
            "status": status,
            "limits": list(limits) if limits else None,
            "cost1": None if cost1 == INF else cost1,
            "solutions": [list(v) for v in vectors],
            "paths": [{"states": list(p), "cost": list(c)} for p, c in paths],
            "stats": stats,
        }
        print(json.dumps(doc, indent=2))
        return
    print(f"status: {status}")
    print(f"cost1: {'inf' if cost1 == INF else cost1}")
    for v in vectors:
        print(f"solution cost {fmt(v)}")
    for p, c in paths:
        print(f"path {'-'.join(str(s) for s in p)} cost {fmt(c)}")
    if stats:
        print(f"elapsed_ms: {stats['elapsed_ms']}")


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    graph = _load_graph(args)
    deltas = [int(d) for d in args.deltas.split(",")]
    pairs = []
    with open(args.pairs, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            s, g = line.split()
            pairs.append((int(s), int(g)))

    out = open(args.out, "w", encoding="ascii") if args.out else sys.stdout
    try:
        out.write("# rcsp instances\n")
        out.write("# pair_id delta_pct k start goal reachable limits...\n")
        for pid, (s, g) in enumerate(pairs):
            for pct in deltas:
                limits = tightness_limits(graph, s, g, Fraction(pct, 100))
                if limits is None:
                    out.write(f"{pid} {pct} {graph.k} {s} {g} 0 -\n")
                else:
                    lim = " ".join(str(r) for r in limits)
                    out.write(f"{pid} {pct} {graph.k} {s} {g} 1 {lim}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def read_instances(path: str) -> list[dict]:
    """Parse a gen-produced instance file; unreachable rows keep limits=None."""
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            pid, pct, k, s, g, reach = parts[:6]
            limits = None
            if reach == "1":
                limits = tuple(int(x) for x in parts[6 : 6 + int(k) - 1])
            rows.append(
                {
                    "pair_id": int(pid),
                    "delta": int(pct),
                    "k": int(k),
                    "start": int(s),
                    "goal": int(g),
                    "limits": limits,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# bench


def _run_algo(algo: str, problem: ProblemInstance, config: SearchConfig):
    """Solve one instance; returns (status, cost1, vectors, stats_or_None)."""
    if algo == "rcbda":
        t0 = _time.perf_counter()
        init = initialize(problem, reduce=False)
        res = solve_rcbda(problem, init, config)
        res.stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
        return res.status, res.cost1, None, res.stats
    if algo == "rcebda":
        res = solve_rcebda(problem, config)
        return res.status, res.solutions.f1, sorted(res.solutions.vectors()), res.stats
    if algo == "rcebda-par":
        res = solve_parallel(problem, config)
        return res.status, res.solutions.f1, sorted(res.solutions.vectors()), res.stats
    if algo == "oracle":
        t0 = _time.perf_counter()
        st, cost1, front = oracle_answer(problem)
        elapsed = (_time.perf_counter() - t0) * 1000
        return st, cost1, sorted(front), elapsed
    raise _UsageError(f"unknown algorithm {algo!r}")


def cmd_bench(args) -> int:
    graph = _load_graph(args)
    algos = args.algos.split(",")
    instances = read_instances(args.instances)
    timeout = args.timeout if args.timeout is not None else (_default_timeout() or 3600.0)
    map_name = args.map or (args.graph or args.dimacs_dist or "map")
    out = open(args.out, "w", newline="", encoding="ascii") if args.out else sys.stdout

    try:
        writer = csv.writer(out)
        writer.writerow(BENCH_COLUMNS)
        per_algo_times: dict[str, list[float]] = {a: [] for a in algos}
        per_algo_solved: dict[str, int] = {a: 0 for a in algos}
        per_algo_total: dict[str, int] = {a: 0 for a in algos}
        for row in instances:
            if row["limits"] is None:
                continue  # unreachable pair, skipped
            problem = ProblemInstance(graph, row["start"], row["goal"], row["limits"])
            for algo in algos:
                per_algo_total[algo] += 1
                try:
                    status, cost1, vectors, stats = _run_algo(
                        algo, problem, SearchConfig(timeout=timeout)
                    )
                except Exception as exc:  # record, never abort the suite
                    writer.writerow(
                        [map_name, algo, row["pair_id"], row["delta"], row["k"],
                         f"Error:{type(exc).__name__}", "", "", "", "", "", "", "", ""]
                    )
                    per_algo_times[algo].append(timeout * 1000)
                    continue
                if isinstance(stats, float):
                    elapsed, s_fwd = stats, None
                else:
                    elapsed, s_fwd = stats.elapsed_ms, stats
                solved = status is SolveStatus.OPTIMAL or status is SolveStatus.INFEASIBLE
                per_algo_solved[algo] += int(solved)
                per_algo_times[algo].append(elapsed if solved else timeout * 1000)
                res_field = (
                    "|".join(",".join(str(c) for c in v[1:]) for v in vectors)
                    if vectors
                    else ""
                )
                writer.writerow(
                    [
                        map_name,
                        algo,
                        row["pair_id"],
                        row["delta"],
                        row["k"],
                        status.value,
                        "" if cost1 == INF else cost1,
                        res_field,
                        f"{elapsed:.3f}",
                        s_fwd.fwd.expanded if s_fwd else "",
                        s_fwd.bwd.expanded if s_fwd else "",
                        (s_fwd.fwd.generated + s_fwd.bwd.generated) if s_fwd else "",
                        (s_fwd.fwd.matches + s_fwd.bwd.matches) if s_fwd else "",
                        len(vectors) if vectors is not None else "",
                    ]
                )
        out.write("\n")
        writer.writerow(["map", "algo", "solved", "total", "t_min_ms", "t_avg_ms", "t_max_ms"])
        for algo in algos:
            times = per_algo_times[algo]
            if times:
                writer.writerow(
                    [
                        map_name,
                        algo,
                        per_algo_solved[algo],
                        per_algo_total[algo],
                        f"{min(times):.3f}",
                        f"{statistics.fmean(times):.3f}",
                        f"{max(times):.3f}",
                    ]
                )
            else:
                writer.writerow([map_name, algo, 0, 0, "", "", ""])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# backend-bench


def cmd_backend_bench(args) -> int:
    """Time the compiled kernels against the pure-Python fallback."""
    side = args.side
    graph = grid_graph(side, seed=args.seed)
    problems = []
    for i in range(args.instances):
        delta = Fraction((i % 5) * 2 + 1, 10)
        prob = grid_instance(graph, seed=args.seed + 1 + i, delta=delta)
        if prob is not None:
            problems.append(prob)

    backends = ["pure-python"]
    if kernels.COMPILED:
        backends.insert(0, "compiled")
    else:
        print("compiled kernels unavailable; timing pure-python only")

    results = {}
    reference = None
    for backend in backends:
        kernels.use(backend)
        t0 = _time.perf_counter()
        answers = []
        for prob in problems:
            res = solve_rcebda(prob)
            answers.append((res.status, res.solutions.f1, tuple(sorted(res.solutions.vectors()))))
        elapsed = _time.perf_counter() - t0
        results[backend] = elapsed
        if reference is None:
            reference = answers
        elif answers != reference:
            print("ERROR: backends disagree on solver results", file=sys.stderr)
            return 1
        print(f"{backend}: {elapsed:.3f} s over {len(problems)} grid instances ({side}x{side})")
    if len(results) == 2:
        speedup = results["pure-python"] / results["compiled"]
        print(f"speedup: {speedup:.1f}x (identical results on all instances)")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="rcsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a single instance")
    _add_graph_flags(p)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--goal", type=int, required=True)
    p.add_argument("--limits", help="resource limits, e.g. 4,4")
    p.add_argument("--delta", help="tightness percentage deriving the limits")
    p.add_argument(
        "--algo", choices=("rcbda", "rcebda", "rcebda-par", "oracle"), default="rcebda"
    )
    p.add_argument("--timeout", type=float, default=_default_timeout())
    p.add_argument("--trace", help="write one line per extraction (rcebda only)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate instance budgets for start/goal pairs")
    _add_graph_flags(p)
    p.add_argument("--pairs", required=True, help="file of 'start goal' lines (0-based ids)")
    p.add_argument("--deltas", default="10,30,50,70,90", help="tightness percentages")
    p.add_argument("--out", help="instance file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run algorithms over an instance file, emit CSV")
    _add_graph_flags(p)
    p.add_argument("--instances", required=True)
    p.add_argument("--algos", default="rcbda,rcebda")
    p.add_argument("--timeout", type=float, default=None, help="seconds per solve (default 3600)")
    p.add_argument("--map", help="map name recorded in the CSV")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("backend-bench", help="compare compiled and pure-python kernels")
    p.add_argument("--side", type=int, default=40, help="grid side length")
    p.add_argument("--instances", type=int, default=6)
    p.add_argument("--seed", type=int, default=20240901)
    p.set_defaults(func=cmd_backend_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
