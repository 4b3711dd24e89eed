"""Seeded corpus builders shared across the test modules."""

import random

import numpy as np

from subspectra import EdgeSubset, Graph


def er_graph(seed, n_lo=5, n_hi=12, p=0.5):
    """Seeded Erdos-Renyi-style graph with at least one edge."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(n_lo, n_hi)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        if edges:
            return Graph(n, edges)


def connected_er_graph(seed, n_lo=6, n_hi=12, p=0.5):
    offset = 0
    while True:
        g = er_graph(seed + 7919 * offset, n_lo, n_hi, p)
        if g.is_connected():
            return g
        offset += 1


def with_attached_path(graph, length, seed):
    """Attach a fresh path of the given length between two distinct
    vertices; the new chain is an internal path of the result."""
    rng = random.Random(seed)
    u = rng.randrange(graph.n)
    v = rng.randrange(graph.n)
    while v == u:
        v = rng.randrange(graph.n)
    chain = [u, *range(graph.n, graph.n + length - 1), v]
    edges = list(graph.edges) + list(zip(chain, chain[1:]))
    return Graph(graph.n + length - 1, edges)


def random_subset(graph, seed, fraction=0.5):
    rng = random.Random(seed)
    count = max(1, int(graph.m * fraction))
    return EdgeSubset(graph, sorted(rng.sample(range(graph.m), count)))


def adjacency_of(graph):
    A = np.zeros((graph.n, graph.n))
    for u, v in graph.edges:
        A[u, v] = A[v, u] = 1.0
    return A


def oracle_eigenvalues(graph):
    """Independent spectrum oracle (LAPACK via numpy), ascending order."""
    return np.linalg.eigvalsh(adjacency_of(graph))
