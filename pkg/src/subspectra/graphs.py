"""Undirected simple graphs, stretch/sever subdivision families, and
structural queries (degrees, internal paths, hub vertices).

Graphs are immutable after construction; every operation here is a pure
function, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass


class GraphFormatError(ValueError):
    """Malformed edge-list text.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(ValueError):
    """An argument is inconsistent with the graph it refers to."""


class Graph:
    """Simple undirected graph on vertices 0..n-1 with a fixed edge order.

    Edges are stored as (u, v) with u < v, in construction order.  The edge
    order is significant: edge subsets index into it, and subdivision emits
    stretch vertices in this order.
    """

    __slots__ = ("n", "edges", "_adj", "_hash")

    def __init__(self, n, edges):
        n = int(n)
        if n < 1:
            raise StructuralError("graph needs at least one vertex")
        normalized = []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise StructuralError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if not 0 <= u < v < n:
                raise StructuralError(f"edge ({u}, {v}) out of range for n={n}")
            if (u, v) in seen:
                raise StructuralError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            normalized.append((u, v))
        self.n = n
        self.edges = tuple(normalized)
        self._adj = None
        self._hash = hash((n, self.edges))

    @property
    def m(self):
        return len(self.edges)

    def adjacency(self):
        """Per-vertex sorted neighbor lists (computed once, then cached)."""
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        return self._adj

    def neighbors(self, v):
        return self.adjacency()[v]

    def degree(self, v):
        return len(self.adjacency()[v])

    def degrees(self):
        return tuple(len(nbrs) for nbrs in self.adjacency())

    def is_connected(self):
        if self.n == 1:
            return True
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def without_vertex(self, v):
        """The induced subgraph on V - {v}, relabeled to 0..n-2."""
        if not 0 <= v < self.n:
            raise StructuralError(f"vertex {v} out of range")
        if self.n == 1:
            raise StructuralError("cannot delete the only vertex")
        remap = {u: (u if u < v else u - 1) for u in range(self.n) if u != v}
        edges = [(remap[a], remap[b]) for a, b in self.edges if v not in (a, b)]
        return Graph(self.n - 1, edges)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class EdgeSubset:
    """A subset of a graph's edges, held as sorted indices into its edge list."""

    __slots__ = ("graph", "indices")

    def __init__(self, graph, indices):
        idx = tuple(sorted(int(i) for i in indices))
        if len(set(idx)) != len(idx):
            raise StructuralError("duplicate edge indices in subset")
        for i in idx:
            if not 0 <= i < graph.m:
                raise StructuralError(f"edge index {i} out of range (m={graph.m})")
        self.graph = graph
        self.indices = idx

    @classmethod
    def all_edges(cls, graph):
        return cls(graph, range(graph.m))

    @property
    def edges(self):
        return tuple(self.graph.edges[i] for i in self.indices)

    def __len__(self):
        return len(self.indices)

    def __eq__(self, other):
        return (
            isinstance(other, EdgeSubset)
            and self.graph == other.graph
            and self.indices == other.indices
        )

    def __repr__(self):
        return f"EdgeSubset({len(self.indices)} of {self.graph.m} edges)"


def _check_subset(graph, subset, t):
    if t < 1:
        raise ValueError(f"stretch parameter t must be >= 1, got {t}")
    if subset.graph != graph:
        raise StructuralError("edge subset is bound to a different graph")


def subdivide(graph, subset, t):
    """Replace each selected edge uv by a path of length t through t-1 new
    vertices.

    Original vertices keep their ids.  New vertices are appended in edge-index
    order, walking each stretch from the lower-id endpoint, so repeated calls
    produce identical edge lists.  t=1 returns an equal graph.
    """
    _check_subset(graph, subset, t)
    selected = set(subset.indices)
    edges = []
    nxt = graph.n
    for idx, (u, v) in enumerate(graph.edges):
        if idx not in selected or t == 1:
            edges.append((u, v))
            continue
        chain = [u, *range(nxt, nxt + t - 1), v]
        nxt += t - 1
        edges.extend(zip(chain, chain[1:]))
    return Graph(nxt, edges)


def subdivide_severed(graph, subset, t):
    """Stretch each selected edge to length 2t+1 and delete the middle edge.

    Each selected edge uv leaves two dangling chains of t new vertices, one
    hanging off u and one off v.  Stretch vertex ids encode
    (distance-from-endpoint, edge rank, side) with distance varying slowest,
    so the member for t is literally an induced subgraph of the member for
    t+1: its vertices are exactly the ids below graph.n + 2*t*len(subset).
    """
    _check_subset(graph, subset, t)
    ranks = {idx: r for r, idx in enumerate(subset.indices)}
    width = 2 * len(subset.indices)

    def stretch_id(rank, side, dist):
        return graph.n + (dist - 1) * width + 2 * rank + side

    edges = []
    for idx, (u, v) in enumerate(graph.edges):
        if idx not in ranks:
            edges.append((u, v))
            continue
        r = ranks[idx]
        for side, end in ((0, u), (1, v)):
            prev = end
            for dist in range(1, t + 1):
                w = stretch_id(r, side, dist)
                edges.append((prev, w))
                prev = w
    return Graph(graph.n + 2 * t * len(subset.indices), edges)


@dataclass(frozen=True)
class SubdivisionFamily:
    """A base graph, a fixed edge subset, and one of the two family kinds."""

    base: Graph
    subset: EdgeSubset
    kind: str  # "stretched" | "severed"

    KINDS = ("stretched", "severed")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}")
        if self.subset.graph != self.base:
            raise StructuralError("edge subset is bound to a different graph")

    def member(self, t):
        if self.kind == "stretched":
            return subdivide(self.base, self.subset, t)
        return subdivide_severed(self.base, self.subset, t)

    def vertex_count(self, t):
        if self.kind == "stretched":
            return self.base.n + (t - 1) * len(self.subset)
        return self.base.n + 2 * t * len(self.subset)


@dataclass(frozen=True)
class InternalPath:
    """A path v_0..v_s whose interior vertices all have degree 2 in the host.

    Endpoints are the first and last entries; they may coincide when a chain
    of degree-2 vertices closes up on a single branch vertex.
    """

    vertices: tuple

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("an internal path has at least two vertices")

    @property
    def length(self):
        return len(self.vertices) - 1

    @property
    def endpoints(self):
        return self.vertices[0], self.vertices[-1]

    @property
    def interior(self):
        return self.vertices[1:-1]


def validate_internal_path(graph, path):
    """Raise StructuralError unless path is a genuine internal path of graph."""
    adj = graph.adjacency()
    verts = path.vertices
    for v in verts:
        if not 0 <= v < graph.n:
            raise StructuralError(f"path vertex {v} out of range")
    for a, b in zip(verts, verts[1:]):
        if b not in adj[a]:
            raise StructuralError(f"path vertices {a} and {b} are not adjacent")
    degs = graph.degrees()
    for v in verts[1:-1]:
        if degs[v] != 2:
            raise StructuralError(f"interior vertex {v} has degree {degs[v]} != 2")


def _walk_chain(adj, start, first):
    """Follow a degree-2 chain from start through first; stop at the first
    vertex of degree != 2 (or when the walk returns to start)."""
    chain = [start, first]
    prev, cur = start, first
    while len(adj[cur]) == 2 and cur != start:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        chain.append(nxt)
        prev, cur = cur, nxt
    return chain


def _scan_chains(graph):
    adj = graph.adjacency()
    degs = graph.degrees()
    consumed = [False] * graph.n
    paths = []
    for u in range(graph.n):
        if degs[u] == 2:
            continue
        for w in adj[u]:
            if degs[w] != 2 or consumed[w]:
                continue
            chain = _walk_chain(adj, u, w)
            for v in chain[1:-1]:
                consumed[v] = True
            paths.append(InternalPath(tuple(chain)))
    cycles = []
    for v in range(graph.n):
        if degs[v] != 2 or consumed[v]:
            continue
        # leftover component that is a pure degree-2 cycle
        cycle = [v]
        consumed[v] = True
        prev, cur = v, adj[v][0]
        while cur != v:
            consumed[cur] = True
            cycle.append(cur)
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
        cycles.append(tuple(cycle))
    return paths, cycles


def internal_paths(graph):
    """All maximal internal paths with at least one interior vertex.

    Every degree-2 vertex lands on exactly one returned path, except vertices
    on components that are pure degree-2 cycles; those are degenerate (no
    endpoint of degree != 2 exists) and are reported by degree_two_cycles
    instead.
    """
    return _scan_chains(graph)[0]


def degree_two_cycles(graph):
    """Cycles consisting entirely of degree-2 vertices, one tuple each."""
    return _scan_chains(graph)[1]


def high_degree_set(graph):
    """The vertices of degree >= 3 (the branch/hub vertices)."""
    return {v for v, d in enumerate(graph.degrees()) if d >= 3}


# -- small named graphs -------------------------------------------------------

def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(d):
    """K_{1,d}: center 0 with d leaves."""
    if d < 1:
        raise ValueError("a star needs at least one leaf")
    return Graph(d + 1, [(0, i) for i in range(1, d + 1)])


def spider_graph(d, t):
    """The star K_{1,d} with every edge stretched into a path of length t."""
    star = star_graph(d)
    return subdivide(star, EdgeSubset.all_edges(star), t)


def c4_with_pendant():
    """A 4-cycle with one pendant edge; the attachment vertex is 0."""
    return Graph(5, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)])


# -- edge-list text format ----------------------------------------------------
#
#   line 1:  n m
#   then m lines:  u v        with 0 <= u < v < n
#   '#' starts a comment; blank lines are ignored.

def parse_edge_list(text):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            rows.append((lineno, stripped))
    if not rows:
        raise GraphFormatError("empty input, expected a header line 'n m'")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError("header must be 'n m'", line=lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError("header must contain two integers", line=lineno)
    if n < 1 or m < 0:
        raise GraphFormatError("need n >= 1 and m >= 0", line=lineno)
    if len(rows) - 1 != m:
        raise GraphFormatError(
            f"expected {m} edge lines, found {len(rows) - 1}", line=lineno
        )
    edges = []
    for lineno, body in rows[1:]:
        parts = body.split()
        if len(parts) != 2:
            raise GraphFormatError("edge line must be 'u v'", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", line=lineno)
        if not 0 <= u < v < n:
            raise GraphFormatError(
                f"edge ({u}, {v}) violates 0 <= u < v < n={n}", line=lineno
            )
        edges.append((u, v))
    try:
        return Graph(n, edges)
    except StructuralError as exc:
        raise GraphFormatError(str(exc))


def format_edge_list(graph, comments=()):
    lines = [f"# {c}" for c in comments]
    lines.append(f"{graph.n} {graph.m}")
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path):
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(graph, path, comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(graph, comments))
