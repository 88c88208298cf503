"""
amin-rel command line.

    amin-rel validate NET.json
    amin-rel rel NET.json --engine bat|dfs|ugfm|oracle|all [--targets 4,5]
    amin-rel bench 5..7 --format csv [--long]
    amin-rel gen semi 5 -o sc5.json
    amin-rel gen random 6 --seed 42

Exit codes: 0 ok, 1 violations or engine disagreement, 2 input error,
3 cap or budget exceeded.
"""

import sys
import json
import argparse
import logging
from typing import Dict, List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from amin_rel import __version__
from amin_rel.config import Settings, load_settings
from amin_rel.engines import (
    BudgetExceeded,
    TermCapExceeded,
    brute_force_feasible_count,
    brute_force_reliability,
    feasible_vectors,
    reliability_by_target_subset,
    reliability_frontier,
    reliability_odometer,
    reliability_ugfm,
    ugfm_target_buckets,
)
from amin_rel.model import (
    AminNetwork,
    NetworkFormatError,
    RelabelError,
    StateDistribution,
    UnsupportedNetwork,
    describe_state,
    format_subset,
    load_network,
    n_all,
    network_document,
    subset_of,
    transmitting_nodes,
    validate,
)
from amin_rel.workbench import BenchReport, gen_random_amin, gen_semi_complete, run_bench

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_CAP = 3

AGREEMENT_TOLERANCE = 1e-9

# Largest label space --list will walk
LIST_LIMIT = 100_000

REL_ENGINES = ("bat", "dfs", "ugfm", "oracle")

console = Console()
err_console = Console(stderr=True)


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""

    pass


def configure_logging(args: argparse.Namespace, settings: Settings) -> None:
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


def _parse_targets(text: str, network: AminNetwork) -> List[int]:
    try:
        targets = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise InputError(f"--targets expects comma-separated node labels, got '{text}'")
    if not targets:
        raise InputError("--targets is empty")
    for t in targets:
        if t < 1 or t > network.node_count:
            raise InputError(f"target {t} outside 1..{network.node_count}")
    return targets


def _parse_range(text: str) -> List[int]:
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"bad size range '{text}', expected e.g. 5..7 or 5,6")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _load(args: argparse.Namespace) -> Tuple[AminNetwork, StateDistribution]:
    return load_network(args.network, relabel=args.relabel)


# ============================================================================
# validate
# ============================================================================


def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    try:
        network, dist = _load(args)
    except RelabelError as e:
        print(e)
        return EXIT_VIOLATION

    violations = validate(network, dist)
    for message in violations:
        print(message)
    if violations:
        return EXIT_VIOLATION
    if args.format == "text":
        console.print(
            f"[green]valid[/green]: {network.node_count} nodes, {network.arc_count} arcs, "
            f"targets {format_subset(network.target_mask)}"
        )
    return EXIT_OK


# ============================================================================
# rel
# ============================================================================


def _run_engine(
    name: str,
    network: AminNetwork,
    dist: StateDistribution,
    required: int,
    settings: Settings,
) -> Dict:
    """One engine's result row; cap and budget errors propagate."""
    if name == "bat":
        r, c = reliability_odometer(network, dist, required, threads=settings.threads)
        return {"reliability": r, "feasible": c.feasible, "visited": c.visited,
                "generated": None, "elapsed": c.elapsed}
    if name == "dfs":
        r, c = reliability_frontier(network, dist, required)
        return {"reliability": r, "feasible": c.feasible, "visited": c.visited,
                "generated": None, "elapsed": c.elapsed}
    if name == "ugfm":
        r, s = reliability_ugfm(network, dist, required, cap=settings.ugfm_cap)
        return {"reliability": r, "feasible": None, "visited": None,
                "generated": s.generated, "elapsed": s.elapsed}
    r = brute_force_reliability(network, dist, required, budget=settings.oracle_budget)
    count = brute_force_feasible_count(network, required, budget=settings.oracle_budget)
    return {"reliability": r, "feasible": count, "visited": n_all(network),
            "generated": None, "elapsed": None}


def _buckets(
    engine: str, network: AminNetwork, dist: StateDistribution, settings: Settings
) -> Dict[str, float]:
    if engine == "ugfm":
        buckets, _ = ugfm_target_buckets(network, dist, cap=settings.ugfm_cap)
    elif engine == "bat":
        buckets = reliability_by_target_subset(
            network, dist, engine="odometer", threads=settings.threads
        )
    else:
        buckets = reliability_by_target_subset(network, dist, engine="dfs")
    return {
        ",".join(str(t) for t in sorted(key)) or "-": value
        for key, value in sorted(buckets.items(), key=lambda kv: sorted(kv[0]))
    }


def _print_listing(network: AminNetwork, dist: StateDistribution, required: int) -> None:
    nodes = transmitting_nodes(network)
    table = Table(title="Feasible state vectors")
    table.add_column("#", justify="right")
    table.add_column("X")
    table.add_column("states")
    table.add_column("Pr(X)", justify="right")
    for k, (x, p) in enumerate(feasible_vectors(network, dist, required), start=1):
        states = "; ".join(
            describe_state(network, node, label) for node, label in zip(nodes, x) if label
        )
        table.add_row(str(k), str(x), states, f"{p:.6f}")
    console.print(table)


def cmd_rel(args: argparse.Namespace, settings: Settings) -> int:
    network, dist = _load(args)
    if args.targets:
        targets = _parse_targets(args.targets, network)
        network = network.model_copy(update={"targets": frozenset(targets)})

    violations = validate(network, dist)
    if violations:
        for message in violations:
            err_console.print(message)
        return EXIT_VIOLATION

    required = subset_of(network.targets)
    engines = list(REL_ENGINES) if args.engine == "all" else [args.engine]
    results = {name: _run_engine(name, network, dist, required, settings) for name in engines}

    buckets = None
    if len(network.targets) > 1:
        buckets = _buckets(engines[0], network, dist, settings)

    delta = None
    if len(results) > 1:
        values = [r["reliability"] for r in results.values()]
        delta = max(values) - min(values)

    if args.format == "json":
        doc = {"network": args.network, "targets": sorted(network.targets),
               "engines": results, "buckets": buckets, "delta": delta}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    elif args.format == "csv":
        lines = ["engine,reliability,feasible,visited,generated,elapsed_s"]
        for name, r in results.items():
            cells = [name, repr(r["reliability"])] + [
                "-" if r[k] is None else str(r[k]) for k in ("feasible", "visited", "generated")
            ] + ["-" if r["elapsed"] is None else f"{r['elapsed']:.6f}"]
            lines.append(",".join(cells))
        _emit("\n".join(lines) + "\n", args.output)
    else:
        table = Table(title=f"R for targets {format_subset(required)}")
        for column in ("engine", "R", "feasible", "visited", "generated", "elapsed (s)"):
            table.add_column(column, justify="left" if column == "engine" else "right")
        for name, r in results.items():
            table.add_row(
                name,
                f"{r['reliability']:.6f}",
                *("-" if r[k] is None else str(r[k]) for k in ("feasible", "visited", "generated")),
                "-" if r["elapsed"] is None else f"{r['elapsed']:.6f}",
            )
        console.print(table)
        if buckets:
            for key, value in buckets.items():
                console.print(f"  R({{{key if key != '-' else ''}}}) = {value:.6f}")
        if delta is not None:
            console.print(f"max delta = {delta:.3e}")
        if args.list:
            if n_all(network) > LIST_LIMIT:
                raise InputError(f"--list needs at most {LIST_LIMIT} label vectors")
            _print_listing(network, dist, required)

    if delta is not None and delta > AGREEMENT_TOLERANCE:
        err_console.print(f"[red]engines disagree: delta {delta:.3e}[/red]")
        return EXIT_VIOLATION
    return EXIT_OK


# ============================================================================
# bench / gen
# ============================================================================


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    engines = ["bat", "ugfm", "oracle"] if args.engine == "all" else args.engine.split(",")
    try:
        report = run_bench(
            _parse_range(args.range),
            engines,
            cap=settings.ugfm_cap,
            budget=settings.oracle_budget,
            long=args.long,
            threads=settings.threads,
        )
    except ValueError as e:
        raise InputError(str(e))

    if args.format == "csv":
        _emit(report.to_csv(), args.output)
    elif args.format == "json":
        _emit(report.to_json(), args.output)
    else:
        _print_bench(report)
    return EXIT_OK


def _print_bench(report: BenchReport) -> None:
    table = Table(title="Semi-complete AMIN benchmark")
    columns = ["n", "arcs", "n_all", "n_feasible", "reliability", "t_bat_s",
               "t_ugfm_s", "visited_bat", "generated_ugfm", "delta"]
    for column in columns:
        table.add_column(column, justify="right")
    for row in report.rows:
        data = row.model_dump()
        cells = []
        for column in columns:
            value = data[column]
            if value is None:
                cells.append("N/A" if column == "t_ugfm_s" else "-")
            elif column == "reliability":
                cells.append(f"{value:.6f}")
            elif column in ("t_bat_s", "t_ugfm_s"):
                cells.append(f"{value:.3f}")
            elif column == "delta":
                cells.append(f"{value:.1e}")
            else:
                cells.append(str(value))
        table.add_row(*cells)
    console.print(table)


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    try:
        if args.kind == "semi":
            network, dist = gen_semi_complete(args.n)
        else:
            network, dist = gen_random_amin(
                args.n, args.arc_probability, args.seed, dirichlet=args.dirichlet
            )
    except ValueError as e:
        raise InputError(str(e))
    _emit(json.dumps(network_document(network, dist), indent=2) + "\n", args.output)
    return EXIT_OK


# ============================================================================
# Entry point
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amin-rel",
        description="Exact reliability of acyclic multistate information networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress (INFO)")
    parser.add_argument("--debug", action="store_true", help="Log everything, show tracebacks")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive_int, help="UGFM live monomial cap")
    common.add_argument("--budget", type=_positive_int, help="Oracle enumeration budget")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("-o", "--output", help="Write to this file instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Check a network file")
    p.add_argument("network", help="Network JSON file")
    p.add_argument("--relabel", action="store_true", help="Accept non-topological labels")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("rel", parents=[common], help="Compute reliability")
    p.add_argument("network", help="Network JSON file")
    p.add_argument("--engine", choices=list(REL_ENGINES) + ["all"], default="bat")
    p.add_argument("--targets", help="Comma-separated target nodes, e.g. 4,5")
    p.add_argument("--list", action="store_true", help="List feasible vectors (text format)")
    p.add_argument("--relabel", action="store_true", help="Accept non-topological labels")
    p.set_defaults(handler=cmd_rel)

    p = sub.add_parser("bench", parents=[common], help="Semi-complete benchmark")
    p.add_argument("range", help="Sizes, e.g. 5..7")
    p.add_argument("--engine", default="bat,ugfm", help="bat,ugfm,oracle or all")
    p.add_argument("--long", action="store_true", help="Run BAT for n >= 8")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("gen", parents=[common], help="Generate a network file")
    p.add_argument("kind", choices=["semi", "random"])
    p.add_argument("n", type=int, help="Node count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--arc-probability", type=float, default=0.5)
    p.add_argument("--dirichlet", action="store_true", help="Random node tables")
    p.set_defaults(handler=cmd_gen)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = load_settings(ugfm_cap=args.cap, oracle_budget=args.budget)
    configure_logging(args, settings)

    try:
        return args.handler(args, settings)
    except (NetworkFormatError, RelabelError, UnsupportedNetwork, InputError) as e:
        if args.debug:
            logger.exception("Input error")
        err_console.print(f"[red]error:[/red] {e}")
        return EXIT_INPUT
    except (TermCapExceeded, BudgetExceeded) as e:
        if args.debug:
            logger.exception("Resource cap")
        err_console.print(f"[red]cap exceeded:[/red] {e}")
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
