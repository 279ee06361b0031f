"""Command line interface: generate, run, experiment, certify, stats, graph-summary."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .archive import load_archive
from .chance import ConfidenceLevel
from .engine import ALGORITHMS, AlgorithmConfig, RunRecord, make_rng, run
from .experiments import STANDARD_BETAS, emit_report, emit_runs, load_config, run_experiment
from .graph import generate_synthetic, load_edge_list, save_edge_list
from .instance import WeightSetting, generate_weights, load_instance, save_instance
from .objectives import CARDINALITY, ConstraintFunction
from .oracle import (
    Extractor,
    budget_probe_grid,
    enumerate_solutions,
    exhaustive_max_c,
    exhaustive_min_weight,
)
from .stats import mann_whitney_u


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(args):
    if not getattr(args, "graph", None):
        return None
    return load_edge_list(args.graph, one_based=not args.zero_based)


def _betas(text: str | None):
    if not text:
        return STANDARD_BETAS
    return tuple(float(b) for b in text.split(","))


def cmd_generate(args) -> int:
    rng = make_rng(args.seed)
    if args.what == "graph":
        params = {"d": args.d} if args.model == "random-regular" else {"p": args.p}
        graph = generate_synthetic(args.model, args.n, rng, **params)
        save_edge_list(graph, args.output, one_based=not args.zero_based)
        return 0
    graph = _load_graph(args)
    n = graph.node_count if graph is not None else args.n
    if n is None:
        raise SystemExit("generate instance: pass --n or --graph")
    degrees = graph.degrees if graph is not None else None
    save_instance(generate_weights(args.setting, n, rng, degrees=degrees), args.output)
    return 0


def cmd_run(args) -> int:
    instance = load_instance(args.instance)
    graph = _load_graph(args)
    c = CARDINALITY if graph is None else ConstraintFunction.domination(graph)
    k = args.k if args.k is not None else c.max_value(instance.n)
    config = AlgorithmConfig.for_algorithm(args.algorithm, args.budget, args.seed, k, args.init)
    record = run(instance, c, config)
    _write(record.to_text(), args.output)
    logging.info("max population %d, archive %d, %.2fs",
                 record.max_population_size, len(record.archive), record.wall_time)
    return 0


def cmd_experiment(args) -> int:
    config = load_config(args.config)
    if args.jobs is not None:
        config = replace(config, n_jobs=args.jobs)
    report = run_experiment(config)
    _write(emit_report(report, args.format), args.output)
    if args.runs_output:
        _write(emit_runs(report), args.runs_output)
    return 0


def cmd_certify(args) -> int:
    """Compare an archive's extracted optima with brute force over {0,1}^n."""
    instance = load_instance(args.instance)
    if args.record:
        with open(args.archive, encoding="utf-8") as fh:
            archive = RunRecord.from_text(fh.read()).archive
    else:
        archive, _ = load_archive(args.archive)
    graph = _load_graph(args)
    c = CARDINALITY if graph is None else ConstraintFunction.domination(graph)
    table = enumerate_solutions(instance, c)
    ex = Extractor(archive, instance, c)
    failures = 0
    lines = []
    for beta in _betas(args.betas):
        cl = ConfidenceLevel.from_beta(beta)
        found = []
        for k in range(c.max_value(instance.n) + 1):
            want = exhaustive_min_weight(table, cl, k)
            hit = ex.min_weight(cl, k)
            got = None if hit is None else hit[1]
            if got is not None:
                found.append(got)
            ok = got is not None and want is not None and abs(got - want) <= 1e-9 * max(1.0, abs(want))
            failures += not ok
            lines.append(f"{'PASS' if ok else 'FAIL'} min-weight beta={beta:g} k={k} archive={got} optimum={want}")
        for budget in budget_probe_grid(found):
            want = exhaustive_max_c(table, cl, budget)
            hit = ex.max_c(cl, budget)
            got = None if hit is None else hit[1]
            ok = got == want
            failures += not ok
            lines.append(f"{'PASS' if ok else 'FAIL'} max-c beta={beta:g} B={budget:.10g} archive={got} optimum={want}")
    lines.append(f"{'CERTIFIED' if failures == 0 else 'NOT CERTIFIED'}: {failures} failing queries")
    _write("\n".join(lines) + "\n", args.output)
    return 0 if failures == 0 else 1


def _read_values(path: str) -> list[float]:
    with open(path, encoding="utf-8") as fh:
        return [float(tok) for line in fh for tok in line.replace(",", " ").split()]


def cmd_stats(args) -> int:
    p = mann_whitney_u(_read_values(args.a), _read_values(args.b), method=args.method)
    print(f"{p:.6g}")
    return 0


def cmd_graph_summary(args) -> int:
    graph = load_edge_list(args.graph, one_based=not args.zero_based)
    summary = graph.summary()
    summary["dropped_duplicates"] = graph.dropped_duplicates
    summary["dropped_self_loops"] = graph.dropped_self_loops
    print(json.dumps(summary, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chancepareto", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_opts(p, required=False):
        p.add_argument("--graph", required=required, help="edge-list file")
        p.add_argument("--zero-based", action="store_true", help="node ids in the edge list start at 0")

    g = sub.add_parser("generate", help="generate a weight instance or a synthetic graph")
    g.add_argument("what", choices=["instance", "graph"])
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int)
    g.add_argument("--setting", choices=[s.value for s in WeightSetting], default="uniform")
    g.add_argument("--model", choices=["random-regular", "erdos-renyi"], default="random-regular")
    g.add_argument("--d", type=int, default=4)
    g.add_argument("--p", type=float, default=0.02)
    graph_opts(g)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run one algorithm and write its run record")
    r.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="GSEMO3D")
    r.add_argument("--instance", required=True)
    r.add_argument("--budget", type=int, default=100_000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--k", type=int, help="2D constraint level (default: maximum)")
    r.add_argument("--init", choices=["uniform-random", "all-zeros"], default="uniform-random")
    r.add_argument("-o", "--output")
    graph_opts(r)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="run a key=value experiment config and emit the report")
    e.add_argument("config")
    e.add_argument("--format", choices=["csv", "markdown"], default="csv")
    e.add_argument("-o", "--output")
    e.add_argument("--runs-output", help="also write per-run values as CSV")
    e.add_argument("--jobs", type=int)
    e.set_defaults(func=cmd_experiment)

    c = sub.add_parser("certify", help="check an archive against brute force (n <= 24)")
    c.add_argument("archive", help="archive dump, or a run record with --record")
    c.add_argument("--record", action="store_true")
    c.add_argument("--instance", required=True)
    c.add_argument("--betas", help="comma-separated tail masses (default: the standard grid)")
    c.add_argument("-o", "--output")
    graph_opts(c)
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("stats", help="two-sided Mann-Whitney U p-value of two value files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--method", choices=["auto", "exact", "asymptotic"], default="auto")
    s.set_defaults(func=cmd_stats)

    gs = sub.add_parser("graph-summary", help="print node/edge counts and degree histogram")
    gs.add_argument("graph")
    gs.add_argument("--zero-based", action="store_true")
    gs.set_defaults(func=cmd_graph_summary)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
