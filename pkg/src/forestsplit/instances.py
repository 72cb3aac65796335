"""Named graphs and seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import MultiGraph
from .sparsity import find_overfull, min_beta_subgraph


def path_n(n: int) -> MultiGraph:
    if n < 2:
        raise ValueError("a path needs at least two vertices")
    return MultiGraph.from_edges([(i, i + 1) for i in range(n - 1)], n)


def cycle_n(n: int) -> MultiGraph:
    if n < 3:
        raise ValueError("a cycle needs at least three vertices")
    return MultiGraph.from_edges([(i, (i + 1) % n) for i in range(n)], n)


def complete(n: int) -> MultiGraph:
    return MultiGraph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n)


def k4() -> MultiGraph:
    return complete(4)


def petersen() -> MultiGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return MultiGraph.from_edges(outer + spokes + inner, 10)


def dodecahedron() -> MultiGraph:
    # outer 5-cycle, middle 10-cycle, inner 5-cycle
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, 5 + 2 * i) for i in range(5)]
    edges += [(5 + i, 5 + (i + 1) % 10) for i in range(10)]
    edges += [(6 + 2 * i, 15 + i) for i in range(5)]
    edges += [(15 + i, 15 + (i + 1) % 5) for i in range(5)]
    return MultiGraph.from_edges(edges, 20)


def parallel_pair(count: int) -> MultiGraph:
    return MultiGraph.from_edges([(0, 1)] * count, 2)


NAMED = {
    "k4": k4,
    "petersen": petersen,
    "dodecahedron": dodecahedron,
}


def named(name: str) -> MultiGraph:
    """Look up ``k4``, ``petersen``, ``dodecahedron``, ``path_<n>``, ``cycle_<n>`` or ``complete_<n>``."""
    if name in NAMED:
        return NAMED[name]()
    for prefix, fn in (("path_", path_n), ("cycle_", cycle_n), ("complete_", complete)):
        if name.startswith(prefix):
            try:
                return fn(int(name[len(prefix):]))
            except ValueError as exc:
                raise ValueError(f"bad named graph {name!r}: {exc}") from None
    raise ValueError(f"unknown named graph {name!r}")


def random_connected_multigraph(n: int, m: int, rng: random.Random) -> MultiGraph:
    """A random spanning tree plus m-(n-1) uniformly random extra edges (parallel edges allowed)."""
    if n < 2 or m < n - 1:
        raise ValueError("need n >= 2 and m >= n-1")
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    rng.shuffle(edges)
    return MultiGraph.from_edges(edges, n)


@dataclass
class Generated:
    graph: MultiGraph | None
    attempts: int
    rejected_dense: int
    rejected_overfull: int


def generate_sparse(n: int, m: int, k: int, d: int, seed: int, budget: int = 1000) -> Generated:
    """Rejection sampling for a connected (k,d)-sparse multigraph with no (k+1)-overfull subgraph.

    The result is not uniform over that class. ``graph`` is None if the
    attempt budget runs out.
    """
    rng = random.Random(seed)
    dense = overfull = 0
    for attempt in range(1, budget + 1):
        G = random_connected_multigraph(n, m, rng)
        if find_overfull(G, k + 1) is not None:
            overfull += 1
            continue
        if min_beta_subgraph(G, k, d).value < 0:
            dense += 1
            continue
        return Generated(G, attempt, dense, overfull)
    return Generated(None, budget, dense, overfull)
