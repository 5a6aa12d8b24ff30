"""
Command-line front end for weakdeg.

usage:
    python -m weakdeg gen (--odd K | --even K | --for-degree D) [--out PREFIX]
    python -m weakdeg solve GRAPH [--exact | --degeneracy | --chromatic] \
            [--deterministic] [--workers N] [--witness CERT] [--solver-config FILE]
    python -m weakdeg verify GRAPH CERT
    python -m weakdeg audit GRAPH CERT [--format table|json]
    python -m weakdeg oracle GRAPH
    python -m weakdeg corpus --kind regular|small|random [--seed S] [--count N] [--workers N]

example:
    python -m weakdeg gen --odd 1 --out odd1
    python -m weakdeg verify odd1.graph odd1.cert.json

Exit status is 0 on success, 1 when the answer is negative (a certificate
does not verify, an identity or oracle check fails) and 2 on usage, parse,
size-cap or parameter errors.
"""
from argparse import ArgumentParser
import dataclasses
import functools
import logging
import sys
from typing import List, Optional

import yaml

from .audit import AuditError, audit_trace
from .constructions import (
    ConstructionError,
    build_for_degree,
    build_odd,
    construction_summary,
    lift,
    lift_strategy,
    odd_strategy,
)
from .corpus import CORPUS_KINDS, build_corpus, check_corpus_graph
from .engine import read_certificate, verify_certificate, write_certificate
from .graph import WeakDegError, emit_labels, read_graph, write_graph
from .solver import (
    SearchLimits,
    brute_force_weak_degeneracy,
    chromatic_number,
    degeneracy,
    degeneracy_certificate,
    weak_degeneracy,
)
from .workers import resolve_workers, run_parallel

logger = logging.getLogger("weakdeg")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def parse_config(config_data) -> SearchLimits:
    settings = {}
    config_data = config_data or {}

    if "search" in config_data:
        search = config_data["search"] or {}
        if "max_vertices" in search:
            settings["max_search_vertices"] = int(search["max_vertices"])
        if "dominance_pruning" in search:
            settings["dominance_pruning"] = bool(search["dominance_pruning"])
        if "branching" in search:
            settings["branching"] = str(search["branching"])
    if "oracles" in config_data:
        oracles = config_data["oracles"] or {}
        if "brute_force_vertices" in oracles:
            settings["brute_force_vertices"] = int(oracles["brute_force_vertices"])
        if "chromatic_vertices" in oracles:
            settings["chromatic_vertices"] = int(oracles["chromatic_vertices"])
    if "parallel" in config_data:
        parallel = config_data["parallel"] or {}
        if "workers" in parallel:
            settings["workers"] = int(parallel["workers"])

    return SearchLimits(**settings)


def load_limits(path: Optional[str]) -> SearchLimits:
    if path is None:
        return SearchLimits()
    with open(path, "r") as f:
        return parse_config(yaml.safe_load(f))


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[weakdeg] %(message)s"))
    for old in list(logger.handlers):
        logger.removeHandler(old)
    logger.addHandler(handler)
    logger.setLevel(level)


def cmd_gen(args) -> int:
    if args.odd is not None:
        oc = build_odd(args.odd)
        lg, trace = oc.lg, odd_strategy(oc)
    elif args.even is not None:
        oc = build_odd(args.even)
        lg = lift(oc.graph, oc.degree, oc.lg.labels)
        trace = lift_strategy(odd_strategy(oc), oc.graph, oc.degree)
    else:
        certified = build_for_degree(args.for_degree)
        lg, trace = certified.lg, certified.trace

    report = verify_certificate(lg.graph, trace)
    if not report.ok:
        raise ConstructionError(f"generated certificate does not verify: {report}")

    write_graph(lg.graph, f"{args.out}.graph")
    with open(f"{args.out}.labels", "w") as f:
        f.write(emit_labels(lg))
    write_certificate(trace, f"{args.out}.cert.json")
    logger.info(f"wrote {args.out}.graph, {args.out}.labels and {args.out}.cert.json")

    summary = construction_summary(lg, trace)
    print(f"n={summary['n']} d={summary['d']} wd={summary['wd']}")
    return EXIT_OK


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    limits = load_limits(args.solver_config)
    workers = resolve_workers(args.workers, limits, args.deterministic)
    limits = dataclasses.replace(limits, workers=workers)

    if args.mode == "chromatic":
        print(f"chi={chromatic_number(g, limits)}")
        if args.witness:
            logger.warning("--witness is ignored with --chromatic")
        return EXIT_OK

    if args.mode == "degeneracy":
        nd = degeneracy(g)
        print(f"nd={nd.value}")
        witness = degeneracy_certificate(g, nd)
    else:
        result = weak_degeneracy(g, limits, deterministic=args.deterministic or workers == 1)
        logger.info(f"search stats: {result.stats.to_json()}")
        print(f"wd={result.value}")
        witness = result.witness

    if args.witness:
        write_certificate(witness, args.witness)
    return EXIT_OK


def _load_pair(args):
    return read_graph(args.graph), read_certificate(args.certificate)


def cmd_verify(args) -> int:
    g, trace = _load_pair(args)
    report = verify_certificate(g, trace)
    print(report)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_audit(args) -> int:
    g, trace = _load_pair(args)
    report = audit_trace(g, trace.initial_weights(g), trace)
    if args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_table())
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    limits = load_limits(args.solver_config)
    exact = weak_degeneracy(g, limits).value
    brute = brute_force_weak_degeneracy(g, limits)
    match = exact == brute
    print(f"wd={exact} brute={brute} {'match' if match else 'MISMATCH'}")
    return EXIT_OK if match else EXIT_NEGATIVE


def cmd_corpus(args) -> int:
    if args.kind == "random" and args.seed is None:
        raise ValueError("--kind random needs an explicit --seed")
    limits = load_limits(args.solver_config)
    workers = resolve_workers(args.workers, limits, args.deterministic)
    items = build_corpus(args.kind, count=args.count, seed=args.seed)
    logger.info(f"checking {len(items)} {args.kind} graphs")

    rows = run_parallel(functools.partial(check_corpus_graph, limits=limits), items, workers)
    failures = 0
    for row in rows:
        print(row.to_line())
        if row.violations():
            failures += 1
    if failures:
        logger.error(f"{failures} of {len(rows)} graphs failed their checks")
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="weakdeg", description="weakdeg - weak degeneracy solver, constructions and certificates")
    parser.add_argument("-v", "--verbose", help="more logging (repeatable)", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a regular graph with its deletion certificate")
    kind = gen.add_mutually_exclusive_group(required=True)
    kind.add_argument("--odd", help="(2K+1)-regular construction", type=int, metavar="K")
    kind.add_argument("--even", help="lift of the (2K+1)-regular construction, degree 2K+2", type=int, metavar="K")
    kind.add_argument("--for-degree", help="construction for degree D >= 3", type=int, metavar="D", dest="for_degree")
    gen.add_argument("--out", help="output path prefix", default="weakdeg")
    gen.set_defaults(func=cmd_gen)

    solve = commands.add_parser("solve", help="compute wd, nd or chi of a graph")
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument("--exact", help="weak degeneracy (default)", action="store_const", const="exact", dest="mode")
    mode.add_argument("--degeneracy", help="classical degeneracy", action="store_const", const="degeneracy", dest="mode")
    mode.add_argument("--chromatic", help="chromatic number", action="store_const", const="chromatic", dest="mode")
    solve.set_defaults(mode="exact")
    solve.add_argument("graph", help="graph file")
    solve.add_argument("--deterministic", help="single worker, reproducible witness", action="store_true")
    solve.add_argument("--workers", help="worker processes", type=int, default=None)
    solve.add_argument("--witness", help="write the witness certificate here", default=None)
    solve.add_argument("--solver-config", help="yaml solver configuration", default=None, dest="solver_config")
    solve.set_defaults(func=cmd_solve)

    verify = commands.add_parser("verify", help="check a certificate against a graph")
    verify.add_argument("graph", help="graph file")
    verify.add_argument("certificate", help="certificate file")
    verify.set_defaults(func=cmd_verify)

    audit = commands.add_parser("audit", help="print the bookkeeping of a verified certificate")
    audit.add_argument("graph", help="graph file")
    audit.add_argument("certificate", help="certificate file")
    audit.add_argument("--format", help="output format", choices=["table", "json"], default="table")
    audit.set_defaults(func=cmd_audit)

    oracle = commands.add_parser("oracle", help="compare the exact solver with brute force")
    oracle.add_argument("graph", help="graph file")
    oracle.add_argument("--solver-config", help="yaml solver configuration", default=None, dest="solver_config")
    oracle.set_defaults(func=cmd_oracle)

    corpus = commands.add_parser("corpus", help="run the solver checks over a graph corpus")
    corpus.add_argument("--kind", help="corpus kind", choices=CORPUS_KINDS, required=True)
    corpus.add_argument("--seed", help="seed for random corpora", type=int, default=None)
    corpus.add_argument("--count", help="number of random graphs", type=int, default=100)
    corpus.add_argument("--workers", help="worker processes", type=int, default=None)
    corpus.add_argument("--deterministic", help="single worker", action="store_true")
    corpus.add_argument("--solver-config", help="yaml solver configuration", default=None, dest="solver_config")
    corpus.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except AuditError as e:
        logger.error(str(e))
        return EXIT_NEGATIVE
    except (WeakDegError, ValueError, OSError, yaml.YAMLError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
