"""Sweep harness over subdivision families: convergence traces for selected
eigenvalues, interval-count stabilization, seeded conjecture scans over
random corpora, and CSV/JSON persistence.

Sweep points are independent; aggregation is always in t order, so runs
with the same seed are reproducible point for point (wall times aside).
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass, field

from .eigen import (
    DENSE_CAP_DEFAULT,
    SHIFT_TOLERANCE,
    CapacityError,
    count_interval,
    extreme_eigenvalues,
    full_spectrum,
)
from .graphs import EdgeSubset, Graph, SubdivisionFamily
from .limits import DegreeSequence, full_subdivision_limit

SCHEMA_VERSION = 1


class PersistError(RuntimeError):
    """I/O failure while writing or reading results; carries the path."""


@dataclass(frozen=True)
class SolverBudget:
    """Caps and seeds for a sweep: dense solves below dense_cap, Krylov
    extremes above it, cross-validated where the sweep first crosses.
    hard_cap, when set, truncates the sweep once members outgrow it."""

    dense_cap: int = DENSE_CAP_DEFAULT
    seed: int = 0
    extreme_tol: float = 1e-10
    max_basis: int | None = None
    shift_tolerance: float = SHIFT_TOLERANCE
    hard_cap: int | None = None


@dataclass(frozen=True)
class TracePoint:
    t: int
    n_vertices: int
    top: tuple                 # k-th largest for each requested k
    bottom: tuple              # k-th smallest for each requested k
    count_above: int
    count_below: int
    ambiguous: bool
    method: str
    wall_time_s: float


@dataclass
class ConvergenceTrace:
    """Selected eigenvalues and interval counts along one family sweep."""

    base_n: int
    base_edges: tuple
    subset_indices: tuple
    kind: str
    ks: tuple
    t_grid: tuple
    points: tuple = ()
    predicted_top: tuple | None = None     # set when the subset is all edges
    predicted_bottom: tuple | None = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    truncated_at: int | None = None
    crossover_check: dict | None = None

    kind_tag = "convergence_trace"

    def column(self, name):
        return tuple(getattr(p, name) for p in self.points)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind_tag,
            "base_n": self.base_n,
            "base_edges": [list(e) for e in self.base_edges],
            "subset_indices": list(self.subset_indices),
            "family": self.kind,
            "ks": list(self.ks),
            "t_grid": list(self.t_grid),
            "points": [
                {
                    "t": p.t, "n_vertices": p.n_vertices,
                    "top": list(p.top), "bottom": list(p.bottom),
                    "count_above": p.count_above, "count_below": p.count_below,
                    "ambiguous": p.ambiguous, "method": p.method,
                    "wall_time_s": p.wall_time_s,
                }
                for p in self.points
            ],
            "predicted_top": None if self.predicted_top is None else list(self.predicted_top),
            "predicted_bottom": None if self.predicted_bottom is None else list(self.predicted_bottom),
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "truncated_at": self.truncated_at,
            "crossover_check": self.crossover_check,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            base_n=data["base_n"],
            base_edges=tuple(tuple(e) for e in data["base_edges"]),
            subset_indices=tuple(data["subset_indices"]),
            kind=data["family"],
            ks=tuple(data["ks"]),
            t_grid=tuple(data["t_grid"]),
            points=tuple(
                TracePoint(
                    t=p["t"], n_vertices=p["n_vertices"],
                    top=tuple(p["top"]), bottom=tuple(p["bottom"]),
                    count_above=p["count_above"], count_below=p["count_below"],
                    ambiguous=p["ambiguous"], method=p["method"],
                    wall_time_s=p["wall_time_s"],
                )
                for p in data["points"]
            ),
            predicted_top=None if data["predicted_top"] is None else tuple(data["predicted_top"]),
            predicted_bottom=None if data["predicted_bottom"] is None else tuple(data["predicted_bottom"]),
            seed=data["seed"],
            tolerances=dict(data["tolerances"]),
            truncated_at=data["truncated_at"],
            crossover_check=data["crossover_check"],
        )


def _validate_grid(t_grid):
    grid = tuple(int(t) for t in t_grid)
    if not grid:
        raise ValueError("t grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("t grid must be strictly increasing")
    if grid[0] < 1:
        raise ValueError("t grid entries must be >= 1")
    return grid


def _selected_eigenvalues(member, ks, budget):
    """(top list, bottom list, method) for the requested k values."""
    kmax = max(ks)
    if member.n <= budget.dense_cap:
        spec = full_spectrum(member, dense_cap=budget.dense_cap)
        top = [spec.kth_largest(k) for k in ks]
        bottom = [spec.kth_smallest(k) for k in ks]
        return top, bottom, "dense"
    largest = extreme_eigenvalues(member, kmax, "largest", seed=budget.seed,
                                  tol=budget.extreme_tol, max_basis=budget.max_basis)
    smallest = extreme_eigenvalues(member, kmax, "smallest", seed=budget.seed,
                                   tol=budget.extreme_tol, max_basis=budget.max_basis)
    top = [largest[k - 1] for k in ks]
    bottom = [smallest[len(smallest) - k] for k in ks]
    return top, bottom, "krylov"


def run_convergence(graph, subset, kind, ks, t_grid, budget=None):
    """Sweep one subdivision family over the t grid, recording the k-th
    largest/smallest eigenvalues and both outside-[-2,2] counts per point.

    When the subset is all of E(G), each column is annotated with its
    degree-sequence limit prediction.  If a member exceeds the dense cap
    and the extreme solver also fails, the trace is returned truncated at
    that t.  At the last dense point before a crossover to the Krylov
    path, both are run and the agreement recorded.
    """
    budget = budget or SolverBudget()
    grid = _validate_grid(t_grid)
    ks = tuple(sorted(set(int(k) for k in ks)))
    if ks[0] < 1:
        raise ValueError("k values must be >= 1")
    family = SubdivisionFamily(graph, subset, kind)
    predicted_top = predicted_bottom = None
    if len(subset) == graph.m and graph.m > 0 and min(graph.degrees()) >= 1:
        ds = DegreeSequence.of_graph(graph)
        predicted_top = tuple(full_subdivision_limit(ds, k) for k in ks)
        predicted_bottom = tuple(-v for v in predicted_top)
    points = []
    truncated_at = None
    crossover_check = None
    prev_dense = None
    for t in grid:
        start = time.perf_counter()
        member = family.member(t)
        if budget.hard_cap is not None and member.n > budget.hard_cap:
            truncated_at = t
            break
        if max(ks) > member.n:
            raise ValueError(f"k={max(ks)} exceeds member size {member.n} at t={t}")
        try:
            top, bottom, method = _selected_eigenvalues(member, ks, budget)
            above = count_interval(member, 2.0, math.inf,
                                   shift_tolerance=budget.shift_tolerance)
            below = count_interval(member, -math.inf, -2.0,
                                   shift_tolerance=budget.shift_tolerance)
        except CapacityError:
            truncated_at = t
            break
        if method == "krylov" and prev_dense is not None and crossover_check is None:
            t_prev, member_prev, top_prev = prev_dense
            cross_top = extreme_eigenvalues(
                member_prev, max(ks), "largest", seed=budget.seed,
                tol=budget.extreme_tol, max_basis=budget.max_basis)
            diff = max(abs(a - cross_top[k - 1]) for a, k in zip(top_prev, ks))
            crossover_check = {"t": t_prev, "max_abs_diff": diff}
        if method == "dense":
            prev_dense = (t, member, top)
        points.append(TracePoint(
            t=t, n_vertices=member.n, top=tuple(top), bottom=tuple(bottom),
            count_above=above.count, count_below=below.count,
            ambiguous=above.ambiguous or below.ambiguous, method=method,
            wall_time_s=time.perf_counter() - start,
        ))
    return ConvergenceTrace(
        base_n=graph.n, base_edges=graph.edges, subset_indices=subset.indices,
        kind=kind, ks=ks, t_grid=grid, points=tuple(points),
        predicted_top=predicted_top, predicted_bottom=predicted_bottom,
        seed=budget.seed,
        tolerances={"dense_cap": budget.dense_cap,
                    "extreme_tol": budget.extreme_tol,
                    "shift_tolerance": budget.shift_tolerance},
        truncated_at=truncated_at, crossover_check=crossover_check,
    )


def stabilization_onset(t_grid, sequence, min_tail=5, tail_fraction=0.25):
    """First grid value after which the sequence is constant to the end,
    or None when the constant tail is shorter than the required window
    (at least min_tail points and tail_fraction of the grid).

    Detection is range-relative: a later oscillation would invalidate it.
    """
    if len(sequence) != len(t_grid):
        raise ValueError("sequence and grid lengths differ")
    window = max(min_tail, math.ceil(tail_fraction * len(sequence)))
    if len(sequence) < window:
        return None
    tail_value = sequence[-1]
    if any(v != tail_value for v in sequence[-window:]):
        return None
    onset = len(sequence) - 1
    while onset > 0 and sequence[onset - 1] == tail_value:
        onset -= 1
    return t_grid[onset]


def oscillation_fingerprint(sequence, max_period=6):
    """Smallest period p (if any) that the sequence settles into after the
    first quarter, plus the distinct values it visits."""
    burn = len(sequence) // 4
    tail = sequence[burn:]
    period = None
    for p in range(1, max_period + 1):
        if len(tail) < 2 * p:
            break
        if all(tail[i] == tail[i + p] for i in range(len(tail) - p)):
            period = p
            break
    return {"period": period, "values": sorted(set(sequence))}


SEQUENCE_NAMES = ("stretched_above", "severed_above",
                  "stretched_below", "severed_below")


@dataclass
class StabilizationReport:
    """The four outside-[-2,2] count sequences over a t grid with detected
    stabilization onsets (range-relative) and an oscillation fingerprint
    for the stretched-family negative-side counts."""

    base_n: int
    base_edges: tuple
    subset_indices: tuple
    t_grid: tuple
    sequences: dict
    onsets: dict
    fingerprint: dict
    ambiguous_points: tuple
    shift_tolerance: float = SHIFT_TOLERANCE

    kind_tag = "stabilization_report"

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind_tag,
            "base_n": self.base_n,
            "base_edges": [list(e) for e in self.base_edges],
            "subset_indices": list(self.subset_indices),
            "t_grid": list(self.t_grid),
            "sequences": {k: list(v) for k, v in self.sequences.items()},
            "onsets": dict(self.onsets),
            "fingerprint": self.fingerprint,
            "ambiguous_points": [list(p) for p in self.ambiguous_points],
            "shift_tolerance": self.shift_tolerance,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            base_n=data["base_n"],
            base_edges=tuple(tuple(e) for e in data["base_edges"]),
            subset_indices=tuple(data["subset_indices"]),
            t_grid=tuple(data["t_grid"]),
            sequences={k: tuple(v) for k, v in data["sequences"].items()},
            onsets=dict(data["onsets"]),
            fingerprint=data["fingerprint"],
            ambiguous_points=tuple(tuple(p) for p in data["ambiguous_points"]),
            shift_tolerance=data["shift_tolerance"],
        )


def run_stabilization(graph, subset, t_grid, shift_tolerance=SHIFT_TOLERANCE):
    """Track all four outside-[-2,2] counts for both family members over
    the grid; boundary-ambiguity flags are attached per point, never
    raised."""
    grid = _validate_grid(t_grid)
    stretched = SubdivisionFamily(graph, subset, "stretched")
    severed = SubdivisionFamily(graph, subset, "severed")
    seqs = {name: [] for name in SEQUENCE_NAMES}
    ambiguous = []
    for t in grid:
        for prefix, family in (("stretched", stretched), ("severed", severed)):
            member = family.member(t)
            above = count_interval(member, 2.0, math.inf,
                                   shift_tolerance=shift_tolerance)
            below = count_interval(member, -math.inf, -2.0,
                                   shift_tolerance=shift_tolerance)
            seqs[f"{prefix}_above"].append(above.count)
            seqs[f"{prefix}_below"].append(below.count)
            if above.ambiguous or below.ambiguous:
                ambiguous.append((t, prefix))
    sequences = {k: tuple(v) for k, v in seqs.items()}
    onsets = {k: stabilization_onset(grid, v) for k, v in sequences.items()}
    return StabilizationReport(
        base_n=graph.n, base_edges=graph.edges, subset_indices=subset.indices,
        t_grid=grid, sequences=sequences, onsets=onsets,
        fingerprint=oscillation_fingerprint(sequences["stretched_below"]),
        ambiguous_points=tuple(ambiguous), shift_tolerance=shift_tolerance,
    )


# -- conjecture scanning -------------------------------------------------------

VERDICT_CONSISTENT = "consistent-in-range"
VERDICT_CANDIDATE = "counterexample-candidate"


@dataclass(frozen=True)
class CorpusSpec:
    """Seeded random-corpus description for the conjecture scanner."""

    count: int
    n_range: tuple = (8, 12)
    edge_probability: float = 0.4
    subset_policy: str = "half"    # "half" | "all"
    seed: int = 0

    def __post_init__(self):
        if self.subset_policy not in ("half", "all"):
            raise ValueError("subset_policy must be 'half' or 'all'")
        if self.count < 0:
            raise ValueError("count must be >= 0")


def _random_instance(rng, spec):
    lo, hi = spec.n_range
    while True:
        n = rng.randint(lo, hi)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < spec.edge_probability
        ]
        if edges:
            break
    graph = Graph(n, edges)
    if spec.subset_policy == "all":
        indices = tuple(range(graph.m))
    else:
        half = max(1, graph.m // 2)
        indices = tuple(sorted(rng.sample(range(graph.m), half)))
    return graph, EdgeSubset(graph, indices)


@dataclass
class ScanInstance:
    """One scanned instance: counts for both families over the grids, the
    compared in-range maxima, and an evidence verdict (never a proof)."""

    instance_id: int
    base_n: int
    base_edges: tuple
    subset_indices: tuple
    t_max: int
    stretched_grid: tuple
    severed_grid: tuple
    stretched_above: tuple
    stretched_below: tuple
    severed_above: tuple
    severed_below: tuple
    below_onset: int | None
    maxima: dict
    guard_violation: bool
    verdict: str
    reasons: tuple

    kind_tag = "scan_instance"

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind_tag,
            "instance_id": self.instance_id,
            "base_n": self.base_n,
            "base_edges": [list(e) for e in self.base_edges],
            "subset_indices": list(self.subset_indices),
            "t_max": self.t_max,
            "stretched_grid": list(self.stretched_grid),
            "severed_grid": list(self.severed_grid),
            "stretched_above": list(self.stretched_above),
            "stretched_below": list(self.stretched_below),
            "severed_above": list(self.severed_above),
            "severed_below": list(self.severed_below),
            "below_onset": self.below_onset,
            "maxima": dict(self.maxima),
            "guard_violation": self.guard_violation,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            instance_id=data["instance_id"],
            base_n=data["base_n"],
            base_edges=tuple(tuple(e) for e in data["base_edges"]),
            subset_indices=tuple(data["subset_indices"]),
            t_max=data["t_max"],
            stretched_grid=tuple(data["stretched_grid"]),
            severed_grid=tuple(data["severed_grid"]),
            stretched_above=tuple(data["stretched_above"]),
            stretched_below=tuple(data["stretched_below"]),
            severed_above=tuple(data["severed_above"]),
            severed_below=tuple(data["severed_below"]),
            below_onset=data["below_onset"],
            maxima=dict(data["maxima"]),
            guard_violation=data["guard_violation"],
            verdict=data["verdict"],
            reasons=tuple(data["reasons"]),
        )


def _scan_counts(graph, subset, t_max):
    """Count sequences for one instance.  The stretched family is sampled
    on 1..2*t_max+2 so that every severed point t has its stretched
    companion 2t+2 on the grid; the severed family is sampled on
    1..t_max."""
    stretched_grid = tuple(range(1, 2 * t_max + 3))
    severed_grid = tuple(range(1, t_max + 1))
    stretched = SubdivisionFamily(graph, subset, "stretched")
    severed = SubdivisionFamily(graph, subset, "severed")
    ga, gb, ha, hb = [], [], [], []
    for t in stretched_grid:
        member = stretched.member(t)
        ga.append(count_interval(member, 2.0, math.inf).count)
        gb.append(count_interval(member, -math.inf, -2.0).count)
    for t in severed_grid:
        member = severed.member(t)
        ha.append(count_interval(member, 2.0, math.inf).count)
        hb.append(count_interval(member, -math.inf, -2.0).count)
    return stretched_grid, severed_grid, tuple(ga), tuple(gb), tuple(ha), tuple(hb)


def _scan_one(instance_id, graph, subset, t_max):
    sg, hg, ga, gb, ha, hb = _scan_counts(graph, subset, t_max)
    guard = False
    for i, t in enumerate(hg):
        j = 2 * t + 2 - 1  # index of 2t+2 on the stretched grid
        if ha[i] > ga[j] or hb[i] > gb[j]:
            guard = True
    below_prefix = gb[:t_max]
    onset = stabilization_onset(sg[:t_max], list(below_prefix))
    maxima = {
        "stretched_above": max(ga), "severed_above": max(ha),
        "stretched_below": max(gb), "severed_below": max(hb),
    }
    reasons = []
    if guard:
        reasons.append("interlacing guard violated: suspect a solver bug")
    if onset is None:
        reasons.append("negative-side count of the stretched family not "
                       "stabilized in range")
    if maxima["severed_above"] != maxima["stretched_above"]:
        reasons.append("in-range maxima above 2 differ between families")
    if maxima["severed_below"] != maxima["stretched_below"]:
        reasons.append("in-range maxima below -2 differ between families")
    verdict = VERDICT_CONSISTENT if not reasons else VERDICT_CANDIDATE
    return ScanInstance(
        instance_id=instance_id, base_n=graph.n, base_edges=graph.edges,
        subset_indices=subset.indices, t_max=t_max,
        stretched_grid=sg, severed_grid=hg,
        stretched_above=ga, stretched_below=gb,
        severed_above=ha, severed_below=hb,
        below_onset=onset, maxima=maxima, guard_violation=guard,
        verdict=verdict, reasons=tuple(reasons),
    )


def scan_conjectures(corpus, t_max):
    """Scan a seeded random corpus for stabilization of the negative-side
    counts and for equality of the in-range count maxima of the two
    families.

    Output is evidence only: each instance is marked consistent-in-range
    or emitted as a counterexample-candidate with its full reproduction
    data (edges, subset, grids, counts).  Instances the solver cannot
    handle are skipped with a logged reason.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    rng = random.Random(corpus.seed)
    results = []
    for i in range(corpus.count):
        graph, subset = _random_instance(rng, corpus)
        try:
            results.append(_scan_one(i, graph, subset, t_max))
        except CapacityError:
            continue
    return results


def rerun_scan_instance(instance):
    """Recompute a candidate bundle from its stored graph and subset;
    the counts must reproduce exactly."""
    graph = Graph(instance.base_n, instance.base_edges)
    subset = EdgeSubset(graph, instance.subset_indices)
    return _scan_one(instance.instance_id, graph, subset, instance.t_max)


# -- persistence ---------------------------------------------------------------

_KINDS = {
    ConvergenceTrace.kind_tag: ConvergenceTrace,
    StabilizationReport.kind_tag: StabilizationReport,
    ScanInstance.kind_tag: ScanInstance,
}


def _envelope(obj, config=None):
    if isinstance(obj, list):
        payload = {"schema_version": SCHEMA_VERSION, "kind": "scan_report",
                   "instances": [o.to_dict() for o in obj]}
    else:
        payload = obj.to_dict()
    if config is not None:
        payload["config"] = config
    return payload


def to_json(obj, config=None):
    return json.dumps(_envelope(obj, config), sort_keys=True, indent=2) + "\n"


def _trace_csv(trace, config=None):
    buf = io.StringIO()
    if config is not None:
        buf.write(f"# config: {config}\n")
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write(f"# seed: {trace.seed}\n")
    buf.write(f"# tolerances: {json.dumps(trace.tolerances, sort_keys=True)}\n")
    if trace.predicted_top is not None:
        preds = ",".join(repr(v) for v in trace.predicted_top)
        buf.write(f"# predicted_top: {preds}\n")
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t", "n_vertices", "count_above", "count_below", "method",
              "wall_time_s"]
    header += [f"top_{k}" for k in trace.ks]
    header += [f"bottom_{k}" for k in trace.ks]
    writer.writerow(header)
    for p in trace.points:
        row = [p.t, p.n_vertices, p.count_above, p.count_below, p.method,
               repr(p.wall_time_s)]
        row += [repr(v) for v in p.top]
        row += [repr(v) for v in p.bottom]
        writer.writerow(row)
    return buf.getvalue()


def _stabilization_csv(report, config=None):
    buf = io.StringIO()
    if config is not None:
        buf.write(f"# config: {config}\n")
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *SEQUENCE_NAMES])
    for i, t in enumerate(report.t_grid):
        writer.writerow([t, *(report.sequences[name][i] for name in SEQUENCE_NAMES)])
    return buf.getvalue()


def persist(obj, path, fmt="json", config=None):
    """Write a trace/report/scan to disk.  Identical objects and config
    produce byte-identical files.  fmt is 'json' or, for traces and
    stabilization reports, 'csv'."""
    if fmt == "json":
        text = to_json(obj, config)
    elif fmt == "csv":
        if isinstance(obj, ConvergenceTrace):
            text = _trace_csv(obj, config)
        elif isinstance(obj, StabilizationReport):
            text = _stabilization_csv(obj, config)
        else:
            raise ValueError(f"csv persistence not defined for {type(obj).__name__}")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise PersistError(f"{path}: {exc}") from exc


def load(path):
    """Reload a JSON result written by persist()."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise PersistError(f"{path}: {exc}") from exc
    kind = data.get("kind")
    if kind == "scan_report":
        return [ScanInstance.from_dict(d) for d in data["instances"]]
    if kind in _KINDS:
        return _KINDS[kind].from_dict(data)
    raise PersistError(f"{path}: unknown result kind {kind!r}")
