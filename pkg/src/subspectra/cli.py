"""Command-line frontend.

Subcommands: spectrum, subdivide, verify, limits, sweep, scan.  Every
output embeds the canonical form of the parsed invocation (as a JSON
field or a leading '#' comment), the seed, and the tolerance settings,
so results are reproducible byte for byte.

Exit codes: 0 success (including all-not-applicable verification),
1 verification check failed, 2 usage or input-format error, 3 dense
capacity exceeded, 4 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import checks, experiments
from .eigen import (
    CapacityError,
    SHIFT_TOLERANCE,
    count_interval,
    eigenpairs_outside,
    extreme_eigenvalues,
    full_spectrum,
)
from .graphs import (
    EdgeSubset,
    GraphFormatError,
    StructuralError,
    format_edge_list,
    internal_paths,
    read_edge_list,
    subdivide,
    subdivide_severed,
)
from .limits import DegreeSequence, full_subdivision_limit, spider_radius_limit

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "SUBSPECTRA_OUTPUT_DIR"

LEMMA_CHOICES = ("decay", "unimodality", "principal", "monotonicity",
                 "hubbound", "all")


def _parse_int_list(text):
    """'1..5' or '1,2,8' (mixable: '1,4..6') -> sorted unique ints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty integer list: {text!r}")
    return sorted(set(out))


def _parse_endpoint(text):
    text = text.strip()
    if text in ("-inf", "-Inf", "-INF"):
        return -math.inf
    if text in ("inf", "Inf", "INF", "+inf"):
        return math.inf
    return float(text)


def _parse_subset(graph, args):
    if args.all:
        return EdgeSubset.all_edges(graph)
    if args.edges is not None:
        return EdgeSubset(graph, _parse_int_list(args.edges))
    if args.subset_file is not None:
        with open(args.subset_file, encoding="utf-8") as fh:
            tokens = fh.read().split()
        if tokens == ["all"]:
            return EdgeSubset.all_edges(graph)
        return EdgeSubset(graph, (int(t) for t in tokens))
    raise StructuralError("no edge subset given: use --all, --edges or --subset-file")


def _canonical_config(args, names):
    parts = [args.command]
    for name in sorted(names):
        value = getattr(args, name)
        if value is None or value is False:
            continue
        flag = "--" + name.replace("_", "-")
        if value is True:
            parts.append(flag)
        else:
            parts.append(f"{flag} {value}")
    if getattr(args, "input", None):
        parts.append(args.input)
    return " ".join(parts)


def _resolve_out(path):
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write_text(path, text):
    path = _resolve_out(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _fmt(value):
    return f"{value:.9g}"


def cmd_spectrum(args):
    graph = read_edge_list(args.input)
    config = _canonical_config(
        args, ("k", "interval", "extremes", "seed", "dense_cap", "tau", "out"))
    lines = [f"# config: {config}"]
    if args.interval:
        lo_text, hi_text = args.interval.split(",", 1)
        result = count_interval(graph, _parse_endpoint(lo_text),
                                _parse_endpoint(hi_text),
                                shift_tolerance=args.tau)
        line = f"count {result.count}"
        if result.ambiguous:
            line += " ambiguous"
        lines.append(line)
    elif args.extremes:
        ks = _parse_int_list(args.k) if args.k else [1]
        values = extreme_eigenvalues(graph, max(ks), "largest", seed=args.seed)
        lines.append(" ".join(_fmt(values[k - 1]) for k in ks))
    else:
        spec = full_spectrum(graph, dense_cap=args.dense_cap)
        if args.k:
            ks = _parse_int_list(args.k)
            lines.append(" ".join(_fmt(spec.kth_largest(k)) for k in ks))
        else:
            lines.append(" ".join(_fmt(w) for w in spec.eigenvalues))
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_subdivide(args):
    graph = read_edge_list(args.input)
    subset = _parse_subset(graph, args)
    config = _canonical_config(
        args, ("all", "edges", "subset_file", "t", "sever", "out"))
    build = subdivide_severed if args.sever else subdivide
    result = build(graph, subset, args.t)
    text = format_edge_list(result, comments=(f"config: {config}",))
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verify_reports(graph, args):
    which = args.lemma
    reports = {}
    if which in ("decay", "unimodality", "all"):
        paths = internal_paths(graph)
        if which in ("decay", "all"):
            pairs = eigenpairs_outside(graph, 2.0, strict=True, seed=args.seed)
            reports["decay"] = [
                checks.check_path_decay(graph, p, pair, epsilon=args.epsilon)
                for pair in pairs for p in paths if p.length >= 2
            ]
        if which in ("unimodality", "all"):
            pairs = eigenpairs_outside(graph, 2.0, strict=False, seed=args.seed)
            reports["unimodality"] = [
                checks.check_unimodality(graph, p, pair)
                for pair in pairs for p in paths
            ]
    if which in ("principal", "all"):
        if graph.is_connected():
            reports["principal"] = [
                checks.check_principal_unimodality(graph, p)
                for p in internal_paths(graph)
            ]
        else:
            reports["principal"] = []
    if which in ("monotonicity", "all"):
        edges = (_parse_int_list(args.edge) if args.edge
                 else range(graph.m))
        reports["monotonicity"] = [
            checks.check_single_subdivision_monotonicity(graph, e)
            for e in edges
        ]
    if which in ("hubbound", "all"):
        subset = _parse_subset(graph, args)
        reports["hubbound"] = [checks.check_hub_bound(graph, subset, args.t)]
    return reports


def cmd_verify(args):
    graph = read_edge_list(args.input)
    config = _canonical_config(
        args, ("lemma", "epsilon", "t", "edge", "all", "edges",
               "subset_file", "seed", "out"))
    reports = _verify_reports(graph, args)
    summary = {"passed": 0, "failed": 0, "not_applicable": 0}
    payload = {"config": config, "checks": {}}
    for name, items in reports.items():
        payload["checks"][name] = [r.to_dict() for r in items]
        for r in items:
            if r.verdict == checks.PASS:
                summary["passed"] += 1
            elif r.verdict == checks.FAIL:
                summary["failed"] += 1
            else:
                summary["not_applicable"] += 1
    payload["summary"] = summary
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if summary["failed"] == 0 else EXIT_CHECK_FAILED


def cmd_limits(args):
    config = _canonical_config(args, ("degrees", "k", "spider", "graph"))
    lines = [f"# config: {config}"]
    if args.spider is not None:
        lines.append(f"{spider_radius_limit(args.spider):.8g}")
    else:
        if args.degrees:
            ds = DegreeSequence(tuple(int(x) for x in args.degrees.split(",")))
        elif args.graph:
            ds = DegreeSequence.of_graph(read_edge_list(args.graph))
        else:
            raise StructuralError("need --degrees, --graph or --spider")
        ks = _parse_int_list(args.k) if args.k else [1]
        lines.append(" ".join(
            f"{full_subdivision_limit(ds, k):.8g}" for k in ks))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sweep(args):
    graph = read_edge_list(args.input)
    subset = _parse_subset(graph, args)
    config = _canonical_config(
        args, ("all", "edges", "subset_file", "t", "k", "sever", "report",
               "seed", "dense_cap", "out", "format"))
    t_grid = _parse_int_list(args.t)
    if args.report == "stabilization":
        result = experiments.run_stabilization(graph, subset, t_grid)
        summary = (f"stabilization over t={t_grid[0]}..{t_grid[-1]}: "
                   f"onsets {result.onsets}")
    else:
        ks = _parse_int_list(args.k) if args.k else [1]
        budget = experiments.SolverBudget(
            dense_cap=args.dense_cap or experiments.DENSE_CAP_DEFAULT,
            seed=args.seed)
        kind = "severed" if args.sever else "stretched"
        result = experiments.run_convergence(graph, subset, kind, ks, t_grid,
                                             budget)
        note = (f", truncated at t={result.truncated_at}"
                if result.truncated_at is not None else "")
        summary = (f"{kind} sweep over {len(result.points)} points, "
                   f"k={ks}{note}")
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv")
                          else "json")
    if args.out:
        experiments.persist(result, _resolve_out(args.out), fmt=fmt,
                            config=config)
    else:
        sys.stdout.write(experiments.to_json(result, config=config))
    print(summary)
    return EXIT_OK


def cmd_scan(args):
    config = _canonical_config(
        args, ("seed", "n", "p", "tmax", "count", "subset_policy", "out"))
    n_lo, n_hi = (int(x) for x in args.n.split("..", 1)) if ".." in args.n \
        else (int(args.n), int(args.n))
    spec = experiments.CorpusSpec(
        count=args.count, n_range=(n_lo, n_hi), edge_probability=args.p,
        subset_policy=args.subset_policy, seed=args.seed)
    results = experiments.scan_conjectures(spec, args.tmax)
    candidates = sum(1 for r in results
                     if r.verdict == experiments.VERDICT_CANDIDATE)
    if args.out:
        text = experiments.to_json(results, config=config)
        _write_text(args.out, text)
    else:
        sys.stdout.write(experiments.to_json(results, config=config))
    print(f"scanned {len(results)} instances: {candidates} "
          f"counterexample-candidates, {len(results) - candidates} "
          f"consistent-in-range")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subspectra",
        description="Adjacency spectra of edge-subdivided graph families.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_subset_flags(p):
        p.add_argument("--all", action="store_true",
                       help="select every edge")
        p.add_argument("--edges", help="edge indices, e.g. 0,2 or 0..3")
        p.add_argument("--subset-file", dest="subset_file",
                       help="file with edge indices or the word 'all'")

    p = sub.add_parser("spectrum", help="eigenvalues or interval counts")
    p.add_argument("input")
    p.add_argument("--k", help="k values for the k-th largest, e.g. 1..5")
    p.add_argument("--interval", help="open interval 'a,b'; -inf/inf allowed")
    p.add_argument("--extremes", action="store_true",
                   help="use the iterative extreme-eigenvalue path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dense-cap", dest="dense_cap", type=int, default=None)
    p.add_argument("--tau", type=float, default=SHIFT_TOLERANCE,
                   help="shift tolerance for interval endpoints")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("subdivide", help="write a stretched/severed member")
    p.add_argument("input")
    add_subset_flags(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--sever", action="store_true",
                   help="stretch to 2t+1 and delete the middle edges")
    p.add_argument("--out")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("verify", help="run eigenvector/count structure checks")
    p.add_argument("input")
    p.add_argument("--lemma", choices=LEMMA_CHOICES, default="all")
    p.add_argument("--epsilon", type=float, default=1e-3,
                   help="tail budget for the decay check")
    p.add_argument("--edge", help="edge indices for the monotonicity check")
    add_subset_flags(p)
    p.add_argument("--t", type=int, default=10,
                   help="subdivision parameter for the hub-bound check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("limits", help="predicted eigenvalue limits")
    p.add_argument("--degrees", help="degree sequence, e.g. 3,3,3,3")
    p.add_argument("--graph", help="edge-list file to take degrees from")
    p.add_argument("--spider", type=int,
                   help="leg count d for the spider radius limit")
    p.add_argument("--k", help="k values, e.g. 4 or 1..5")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("sweep", help="convergence/stabilization sweep")
    p.add_argument("input")
    add_subset_flags(p)
    p.add_argument("--t", required=True, help="t grid, e.g. 1..64")
    p.add_argument("--k", help="k values, e.g. 1..5")
    p.add_argument("--sever", action="store_true",
                   help="sweep the severed family instead of the stretched")
    p.add_argument("--report", choices=("trace", "stabilization"),
                   default="trace")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dense-cap", dest="dense_cap", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scan", help="seeded conjecture scan over a corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", default="8..12", help="vertex range, e.g. 8..12")
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--tmax", type=int, default=20)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--subset-policy", dest="subset_policy",
                   choices=("half", "all"), default="half")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)
    return parser


def _fuse_dash_values(argv):
    """Join '--interval -inf,-2' into '--interval=-inf,-2' so argparse
    does not mistake the value for a flag."""
    out = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token == "--interval" and i + 1 < len(argv):
            out.append(f"--interval={argv[i + 1]}")
            skip = True
        else:
            out.append(token)
    return out


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_fuse_dash_values(list(argv)))
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructuralError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc}\nhint: rerun with --extremes or --interval",
              file=sys.stderr)
        return EXIT_CAPACITY
    except (experiments.PersistError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
