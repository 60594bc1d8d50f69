"""Command-line front end: ``ncgraph diam|dist|verify|table``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from pathlib import Path

from .checks import SUITES, ReportCache, run_suite
from .errors import CapExceeded, DescriptorError, PreconditionError, UnsupportedFamily
from .families import group_from_descriptor
from .golden import reproduce_table
from .graphcore import MAX_VERTICES, build_quotient_graph, distance_and_path, graph_diameter
from .lattice import intersection_graph_diameter
from .permgrp import Permutation

SCHEMA = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_UNSUPPORTED = 4

TIMING_KEYS = {"timings", "seconds", "wall_time"}


def strip_timing(obj):
    """Copy of a report with every timing field removed."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--time-budget", type=float, default=3600.0, help="seconds per job")
    common.add_argument("--max-vertices", type=int, default=MAX_VERTICES)
    common.add_argument("--no-timing", action="store_true", help="omit timing fields")

    p = _Parser(prog="ncgraph", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("diam", parents=[common], help="diameter of a graph of a group")
    d.add_argument("--group", required=True, help="family:params or file:path")
    d.add_argument("--graph", choices=("nc", "nongen", "intersection"), default="nc")
    d.add_argument("--full", action="store_true", help="search from every vertex, not only class representatives")

    s = sub.add_parser("dist", parents=[common], help="distance between two elements")
    s.add_argument("--group", required=True)
    s.add_argument("--graph", choices=("nc", "nongen"), default="nc")
    s.add_argument("x", help="cycle notation, 0-based points")
    s.add_argument("y")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ["all"], default="all")
    v.add_argument("--q", type=int, nargs="+", help="field sizes for algebraic suites")
    v.add_argument("--n", type=int, nargs="+", help="dimensions or degrees")
    v.add_argument("--group", nargs="+", help="group descriptors for graph suites")

    t = sub.add_parser("table", parents=[common], help="reproduce the reference diameter table")
    t.add_argument("--scale", choices=("desk", "all"), default="desk")
    t.add_argument("--include-long", action="store_true", help="also run long-running rows")
    t.add_argument("--generator-dir", help="directory holding sz8.txt and g2_3.txt")
    return p


def _suite_params(name: str, args) -> dict:
    q, n, groups = args.q, args.n, args.group
    params: dict = {}
    if name in ("binomial", "irreducible-central-power", "diagonal-triple") and q:
        params["qs"] = q
    elif name == "cycle-companion":
        if n:
            params["ns"] = n
        if q:
            params["qs"] = q
    elif name in ("line-stabilizers", "unitary-witnesses", "scalar-obstruction") and (n or q):
        if not (n and q):
            raise DescriptorError(f"suite {name} needs both --n and --q")
        params["pairs"] = list(itertools.product(n, q))
    elif name == "singer" and (n or q):
        if not (n and q):
            raise DescriptorError("suite singer needs both --n and --q")
        params["linear"] = list(itertools.product(n, q))
        params["unitary"] = ()
    elif name in ("derangement", "alternating-bound") and n:
        params["degrees"] = n
    elif name in ("isolated", "induced-subgraph", "intersection-bound", "nc-bound", "nongen-bound") and groups:
        params["descs"] = groups
    return params


def _emit(report: dict, args, csv_rows: list[dict] | None = None) -> None:
    if args.no_timing:
        report = strip_timing(report)
    if args.format == "csv":
        rows = csv_rows if csv_rows is not None else [report]
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else []
        writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _job(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("out", "format", "no_timing")}


def cmd_diam(args) -> int:
    t0 = time.perf_counter()
    G = group_from_descriptor(args.group)
    if args.graph == "intersection":
        rep = intersection_graph_diameter(G)
    else:
        graph = build_quotient_graph(G, args.graph, max_vertices=args.max_vertices, time_budget=args.time_budget)
        rep = graph_diameter(graph, None if args.full else graph.plan, threads=args.threads)
    body = rep.to_dict(timing=True)
    body["timings"]["wall_time"] = time.perf_counter() - t0
    report = {"schema": SCHEMA, "command": "diam", "job": _job(args), "result": body}
    _emit(report, args, [dict(rep.csv_row())])
    return EXIT_OK


def cmd_dist(args) -> int:
    G = group_from_descriptor(args.group)
    x = Permutation.parse(args.x, G.degree)
    y = Permutation.parse(args.y, G.degree)
    graph = build_quotient_graph(G, args.graph, max_vertices=args.max_vertices, time_budget=args.time_budget)
    d, path = distance_and_path(graph, x, y)
    result = {"group": G.name, "graph": args.graph, "x": x.cycle_str(), "y": y.cycle_str(),
              "distance": d, "connected": d is not None, "path": [p.cycle_str() for p in path]}
    report = {"schema": SCHEMA, "command": "dist", "job": _job(args), "result": result}
    _emit(report, args, [{k: result[k] for k in ("group", "graph", "x", "y", "distance")}])
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else [args.suite]
    cache = ReportCache(threads=args.threads)
    results = []
    timings = {}
    for name in names:
        t0 = time.perf_counter()
        for c in run_suite(name, cache=cache, **_suite_params(name, args)):
            print(c.line(), file=sys.stderr)
            results.append({"suite": name, "check": c.name, "params": c.params, "passed": c.passed,
                            "details": c.details})
        timings[name] = round(time.perf_counter() - t0, 3)
    failed = [r for r in results if not r["passed"]]
    report = {"schema": SCHEMA, "command": "verify", "job": _job(args), "passed": not failed,
              "results": results, "timings": timings}
    _emit(report, args, [{"suite": r["suite"], "params": json.dumps(r["params"], sort_keys=True),
                          "passed": r["passed"]} for r in results])
    return EXIT_FAILED if failed else EXIT_OK


def cmd_table(args) -> int:
    def progress(entry):
        print(f"{entry['status']:>12} {entry['group']} computed={entry['computed']} "
              f"expected{'=' if entry['relation'] == 'eq' else '<='}{entry['expected']}", file=sys.stderr)

    entries = reproduce_table(args.scale, args.include_long, args.generator_dir,
                              cache=ReportCache(threads=args.threads), time_budget=args.time_budget,
                              max_vertices=args.max_vertices, progress=progress)
    failed = [e for e in entries if e["scale"] == "desk" and e["status"] != "PASS"]
    report = {"schema": SCHEMA, "command": "table", "job": _job(args), "passed": not failed, "rows": entries}
    _emit(report, args, [{k: e.get(k) for k in ("group", "graph", "relation", "expected", "computed",
                                                 "status", "scale", "provenance")} for e in entries])
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {"diam": cmd_diam, "dist": cmd_dist, "verify": cmd_verify, "table": cmd_table}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except DescriptorError as exc:
        print(f"ncgraph: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedFamily as exc:
        print(f"ncgraph: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceeded as exc:
        print(f"ncgraph: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PreconditionError as exc:
        print(f"ncgraph: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
