"""Numerical verifiers for eigenvector structure on internal paths and for
interval-count behavior under subdivision.

Every check is hypothesis-gated: when a precondition on the eigenvalue
fails (e.g. |value| <= 2 for path decay) the verdict is "not-applicable",
never "fail".  Tolerances: additive 1e-10 for decay bounds, multiplicative
1 + 1e-10 for ratio chains, 1e-9 for endpoint-equality classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import count_interval, eigenpair_at, full_spectrum
from .graphs import (
    EdgeSubset,
    StructuralError,
    high_degree_set,
    subdivide,
    subdivide_severed,
    validate_internal_path,
)

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"

DECAY_TOL = 1e-10          # additive slack on decay bounds
RATIO_TOL = 1e-10          # multiplicative slack on ratio chains
ENDPOINT_EQ_TOL = 1e-9     # endpoint-equality classification
PATTERN_SLACK = 1e-12      # slack on strict monotonicity patterns


@dataclass(frozen=True)
class DistancePartition:
    """Vertex layers by graph distance from a seed set.

    layers[i-1] is the set of vertices at distance i from the seed set;
    boundary is the part of the seed set with a neighbor in layer 1;
    degree_cap is the maximum degree (in the whole graph) over vertices
    outside the seed set.
    """

    graph: object
    seed_set: frozenset
    layers: tuple
    boundary: frozenset
    degree_cap: int

    @classmethod
    def from_seed(cls, graph, seed_vertices):
        seed = frozenset(int(v) for v in seed_vertices)
        if not seed:
            raise StructuralError("seed set is empty")
        for v in seed:
            if not 0 <= v < graph.n:
                raise StructuralError(f"seed vertex {v} out of range")
        adj = graph.adjacency()
        dist = {v: 0 for v in seed}
        frontier = sorted(seed)
        layers = []
        level = 0
        while frontier:
            level += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = level
                        nxt.append(w)
            if nxt:
                layers.append(frozenset(nxt))
            frontier = nxt
        if len(dist) != graph.n:
            raise StructuralError(
                "some vertices are unreachable from the seed set; distance "
                "layers must partition the vertex set"
            )
        boundary = frozenset(
            u for u in seed if any(w not in seed and dist[w] == 1 for w in adj[u])
        )
        outside = [v for v in range(graph.n) if v not in seed]
        cap = max((graph.degree(v) for v in outside), default=0)
        return cls(graph=graph, seed_set=seed, layers=tuple(layers),
                   boundary=boundary, degree_cap=cap)

    @property
    def depth(self):
        return len(self.layers)


@dataclass
class DecayReport:
    """Outcome of a layer/path decay check against geometric bounds."""

    kind: str                      # "partition" | "path"
    eigenvalue: float
    verdict: str
    layer_maxima: tuple = ()
    bounds: tuple = ()
    worst_slack: float = 0.0       # max over layers of (maximum - bound)
    tolerance: float = DECAY_TOL
    tail_parts: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {
            "kind": self.kind,
            "eigenvalue": self.eigenvalue,
            "verdict": self.verdict,
            "layer_maxima": list(self.layer_maxima),
            "bounds": list(self.bounds),
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "tail_parts": self.tail_parts,
            "detail": self.detail,
        }


@dataclass
class UnimodalityReport:
    """Outcome of the |entries| unimodality check along an internal path."""

    eigenvalue: float
    vertices: tuple
    magnitudes: tuple
    minimizer_index: int
    mu: float
    verdict: str
    worst_margin: float = math.inf  # min over pairs of |x_i|(1+tol) - mu^(j-i)|x_j|
    tolerance: float = RATIO_TOL
    detail: str = ""

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {
            "eigenvalue": self.eigenvalue,
            "vertices": list(self.vertices),
            "magnitudes": list(self.magnitudes),
            "minimizer_index": self.minimizer_index,
            "mu": self.mu,
            "verdict": self.verdict,
            "worst_margin": None if self.worst_margin == math.inf else self.worst_margin,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass
class PrincipalPathReport:
    """Classification of the principal eigenvector pattern on one path."""

    vertices: tuple
    case: str                      # "symmetric-valley" | "monotone" | "valley" | ""
    reversed_orientation: bool
    verdict: str
    eigenvalue: float = math.nan
    minimizer_index: int = -1
    detail: str = ""

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {
            "vertices": list(self.vertices),
            "case": self.case,
            "reversed_orientation": self.reversed_orientation,
            "verdict": self.verdict,
            "eigenvalue": self.eigenvalue,
            "minimizer_index": self.minimizer_index,
            "detail": self.detail,
        }


@dataclass
class SubdivisionMonotonicityReport:
    """m(2, inf) before and after subdividing one edge once."""

    edge_index: int
    count_before: object           # IntervalCount
    count_after: object
    verdict: str

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {
            "edge_index": self.edge_index,
            "count_before": self.count_before.to_dict(),
            "count_after": self.count_after.to_dict(),
            "verdict": self.verdict,
        }


@dataclass
class HubBoundReport:
    """The four outside-[-2,2] counts of both family members vs the hub count."""

    t: int
    hub_count: int
    counts: dict                   # name -> IntervalCount
    verdict: str

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {
            "t": self.t,
            "hub_count": self.hub_count,
            "counts": {k: v.to_dict() for k, v in self.counts.items()},
            "verdict": self.verdict,
        }


def _path_entries(path, vector):
    return [float(vector[v]) for v in path.vertices]


def check_partition_decay(graph, partition, pair):
    """Layer maxima of |eigenvector| must fall geometrically away from the
    seed set: M_i <= (k/|value|) M_{i-1} <= (k/|value|)^i M_0, where k is
    the degree cap outside the seed set and M_0 is the boundary maximum.

    Applicable only when |value| > k; otherwise not-applicable.
    """
    if partition.graph != graph:
        raise StructuralError("partition belongs to a different graph")
    lam = abs(pair.value)
    k = partition.degree_cap
    if lam <= k:
        return DecayReport(kind="partition", eigenvalue=pair.value,
                           verdict=NOT_APPLICABLE,
                           detail=f"|value| = {lam:.6g} <= degree cap {k}")
    x = np.abs(np.asarray(pair.vector))
    m0 = max((float(x[v]) for v in partition.boundary), default=0.0)
    maxima = [m0]
    for layer in partition.layers:
        maxima.append(max(float(x[v]) for v in layer))
    ratio = k / lam
    bounds = [m0]
    worst = -math.inf
    ok = True
    for i in range(1, len(maxima)):
        step_bound = ratio * maxima[i - 1]
        power_bound = (ratio ** i) * m0
        bound = min(step_bound, power_bound)
        bounds.append(bound)
        slack = maxima[i] - bound
        worst = max(worst, slack)
        if slack > DECAY_TOL:
            ok = False
    return DecayReport(
        kind="partition", eigenvalue=pair.value,
        verdict=PASS if ok else FAIL,
        layer_maxima=tuple(maxima), bounds=tuple(bounds),
        worst_slack=worst if worst != -math.inf else 0.0,
    )


def _tail_threshold_linear(lam, eps):
    return math.log(2.0 * lam / (eps * (lam - 2.0))) / math.log(lam / 2.0)


def _tail_threshold_squared(lam, eps):
    return math.log(2.0 * lam * lam / (eps * (lam * lam - 4.0))) / (
        2.0 * math.log(lam / 2.0)
    )


def check_path_decay(graph, path, pair, epsilon=1e-3):
    """Geometric decay of |eigenvector| along an internal path for
    |value| > 2.

    With M_j = max(|x_j|, |x_{s-j}|), verifies M_j <= (2/|value|)^j for
    1 <= j <= floor(s/2).  Additionally, with p the ceiled logarithmic
    threshold for the given epsilon, verifies the tail sums
    sum_{j=p}^{s-p} |x_j| < epsilon (linear part) and the analogous
    squared-entry bound, whenever floor(s/2) >= p.
    """
    validate_internal_path(graph, path)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    s = path.length
    if s < 2:
        raise ValueError("path decay needs length >= 2")
    norm = float(np.linalg.norm(pair.vector))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"eigenvector must have unit norm, got {norm}")
    lam = abs(pair.value)
    if lam <= 2.0:
        return DecayReport(kind="path", eigenvalue=pair.value,
                           verdict=NOT_APPLICABLE,
                           detail=f"|value| = {lam:.6g} <= 2")
    xs = _path_entries(path, pair.vector)
    half = s // 2
    maxima = []
    bounds = []
    worst = -math.inf
    ok = True
    for j in range(1, half + 1):
        mj = max(abs(xs[j]), abs(xs[s - j]))
        bound = (2.0 / lam) ** j
        maxima.append(mj)
        bounds.append(bound)
        slack = mj - bound
        worst = max(worst, slack)
        if slack > DECAY_TOL:
            ok = False
    tail_parts = {}
    for name, threshold, weight in (
        ("linear", _tail_threshold_linear(lam, epsilon), 1),
        ("squared", _tail_threshold_squared(lam, epsilon), 2),
    ):
        p = max(math.ceil(threshold), 0)
        applicable = half >= p
        part = {"epsilon": epsilon, "p": p, "applicable": applicable}
        if applicable:
            tail = sum(abs(xs[j]) ** weight for j in range(p, s - p + 1))
            part["tail_sum"] = tail
            part["ok"] = tail < epsilon
            if not part["ok"]:
                ok = False
        tail_parts[name] = part
    return DecayReport(
        kind="path", eigenvalue=pair.value,
        verdict=PASS if ok else FAIL,
        layer_maxima=tuple(maxima), bounds=tuple(bounds),
        worst_slack=worst if worst != -math.inf else 0.0,
        tail_parts=tail_parts,
    )


def check_unimodality(graph, path, pair):
    """|eigenvector| is unimodal along an internal path when |value| >= 2,
    with ratio factor mu = |value| - 1: on the descending side
    |x_i| >= mu^(j-i) |x_j| for i < j <= k-1, and symmetrically on the
    ascending side past the minimizer k (smallest index on ties).
    """
    validate_internal_path(graph, path)
    lam = abs(pair.value)
    xs = _path_entries(path, pair.vector)
    mags = tuple(abs(v) for v in xs)
    if lam < 2.0:
        return UnimodalityReport(
            eigenvalue=pair.value, vertices=path.vertices, magnitudes=mags,
            minimizer_index=-1, mu=lam - 1.0, verdict=NOT_APPLICABLE,
            detail=f"|value| = {lam:.6g} < 2",
        )
    mu = lam - 1.0
    s = path.length
    k = min(range(s + 1), key=lambda j: (mags[j], j))
    worst = math.inf
    ok = True

    def chain_ok(lo, hi, descending):
        nonlocal worst, ok
        for i in range(lo, hi):
            for j in range(i + 1, hi + 1):
                big, small = (mags[i], mags[j]) if descending else (mags[j], mags[i])
                if small == 0.0:
                    continue
                required = (mu ** (j - i)) * small
                margin = big * (1.0 + RATIO_TOL) - required
                worst = min(worst, margin)
                if margin < 0.0:
                    ok = False

    if k >= 2:
        chain_ok(0, k - 1, descending=True)
    if k <= s - 2:
        chain_ok(k + 1, s, descending=False)
    return UnimodalityReport(
        eigenvalue=pair.value, vertices=path.vertices, magnitudes=mags,
        minimizer_index=k, mu=mu, verdict=PASS if ok else FAIL,
        worst_margin=worst,
    )


def _strictly_increasing(seq, slack=PATTERN_SLACK):
    return all(b > a - slack for a, b in zip(seq, seq[1:]))


def check_principal_unimodality(graph, path, pair=None):
    """Pattern of the principal eigenvector along an internal path of a
    connected graph with top eigenvalue above 2.

    Orientation with x_0 > x_s is reversed internally.  Cases:
      * endpoints equal (within 1e-9): strict V-shape into the middle,
        with the mirror symmetry x_i = x_{s-i};
      * x_0 < x_s and x_0 <= x_1: monotone, x_0 <= x_1 < ... < x_s;
      * x_0 < x_s and x_0 > x_1: a valley at some k <= floor(s/2), with
        x_{s-i} > x_i for i below the middle.
    """
    validate_internal_path(graph, path)
    if not graph.is_connected():
        raise ValueError("principal-eigenvector check needs a connected graph")
    if pair is None:
        lam1 = full_spectrum(graph).eigenvalues[0]
        if lam1 <= 2.0:
            return PrincipalPathReport(
                vertices=path.vertices, case="", reversed_orientation=False,
                verdict=NOT_APPLICABLE, eigenvalue=lam1,
                detail=f"top eigenvalue {lam1:.6g} <= 2",
            )
        pair = eigenpair_at(graph, lam1)
    elif pair.value <= 2.0:
        return PrincipalPathReport(
            vertices=path.vertices, case="", reversed_orientation=False,
            verdict=NOT_APPLICABLE, eigenvalue=pair.value,
            detail=f"top eigenvalue {pair.value:.6g} <= 2",
        )
    vec = np.asarray(pair.vector)
    if vec[int(np.argmax(np.abs(vec)))] < 0:
        vec = -vec
    xs = [float(vec[v]) for v in path.vertices]
    verts = path.vertices
    flipped = False
    if xs[0] > xs[-1] + ENDPOINT_EQ_TOL:
        xs = xs[::-1]
        verts = verts[::-1]
        flipped = True
    s = len(xs) - 1
    details = []
    ok = True
    if abs(xs[0] - xs[-1]) <= ENDPOINT_EQ_TOL:
        case = "symmetric-valley"
        mid_lo, mid_hi = s // 2, (s + 1) // 2
        sym_ok = all(abs(xs[i] - xs[s - i]) <= ENDPOINT_EQ_TOL
                     for i in range(s + 1))
        down_ok = _strictly_increasing(xs[mid_lo::-1] if mid_lo else xs[:1])
        up_ok = _strictly_increasing(xs[mid_hi:])
        if not sym_ok:
            details.append("mirror symmetry violated")
        if not (down_ok and up_ok):
            details.append("V-shape violated")
        ok = sym_ok and down_ok and up_ok
        kmin = mid_lo
    elif xs[0] <= xs[1] + PATTERN_SLACK:
        case = "monotone"
        ok = _strictly_increasing(xs[1:]) and xs[0] <= xs[1] + PATTERN_SLACK
        if not ok:
            details.append("monotone increase violated")
        kmin = 0
    else:
        case = "valley"
        kmin = min(range(s + 1), key=lambda j: (xs[j], j))
        half_ok = all(xs[s - i] > xs[i] - PATTERN_SLACK
                      for i in range((s + 1) // 2))
        range_ok = 1 <= kmin <= s // 2
        down_ok = _strictly_increasing(xs[kmin - 1::-1]) and (
            xs[kmin - 1] >= xs[kmin] - PATTERN_SLACK
        )
        up_ok = _strictly_increasing(xs[kmin:])
        for cond, msg in ((half_ok, "mirror inequality violated"),
                          (range_ok, f"minimizer {kmin} outside [1, s/2]"),
                          (down_ok, "descent into the valley violated"),
                          (up_ok, "ascent out of the valley violated")):
            if not cond:
                details.append(msg)
        ok = half_ok and range_ok and down_ok and up_ok
    return PrincipalPathReport(
        vertices=verts, case=case, reversed_orientation=flipped,
        verdict=PASS if ok else FAIL, eigenvalue=pair.value,
        minimizer_index=kmin, detail="; ".join(details),
    )


def check_single_subdivision_monotonicity(graph, edge_index,
                                          shift_tolerance=None):
    """Subdividing one edge once cannot reduce the number of eigenvalues
    above 2.  Returns both inertia counts (with any boundary-ambiguity
    flags surfaced) and the comparison verdict.
    """
    if not 0 <= edge_index < graph.m:
        raise StructuralError(f"edge index {edge_index} out of range")
    kwargs = {}
    if shift_tolerance is not None:
        kwargs["shift_tolerance"] = shift_tolerance
    before = count_interval(graph, 2.0, math.inf, **kwargs)
    refined = subdivide(graph, EdgeSubset(graph, (edge_index,)), 2)
    after = count_interval(refined, 2.0, math.inf, **kwargs)
    return SubdivisionMonotonicityReport(
        edge_index=edge_index, count_before=before, count_after=after,
        verdict=PASS if before.count <= after.count else FAIL,
    )


def check_hub_bound(graph, subset, t):
    """All four outside-[-2,2] counts of the stretched and severed members
    at parameter t are bounded by the number of degree->=3 vertices of
    the base graph.
    """
    hubs = len(high_degree_set(graph))
    stretched = subdivide(graph, subset, t)
    severed = subdivide_severed(graph, subset, t)
    counts = {
        "stretched_above": count_interval(stretched, 2.0, math.inf),
        "severed_above": count_interval(severed, 2.0, math.inf),
        "stretched_below": count_interval(stretched, -math.inf, -2.0),
        "severed_below": count_interval(severed, -math.inf, -2.0),
    }
    ok = all(c.count <= hubs for c in counts.values())
    return HubBoundReport(t=t, hub_count=hubs, counts=counts,
                          verdict=PASS if ok else FAIL)
