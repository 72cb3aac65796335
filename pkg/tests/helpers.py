"""Graph corpora and random engine states shared by the tests."""

from __future__ import annotations

import random
from functools import lru_cache

import networkx as nx

from forestsplit.base import ForestDecomposition, forest_decomposition, split_into_parts
from forestsplit.engine.moves import exchange_candidates
from forestsplit.engine.order import AlreadyDone, select_root
from forestsplit.engine.state import RED, RejectedMove, State
from forestsplit.graph import MultiGraph, induced_subgraph
from forestsplit.instances import random_connected_multigraph

PAIRS = [(1, 3), (1, 4), (2, 5), (2, 6)]


@lru_cache(maxsize=None)
def atlas(max_n: int, connected: bool = True) -> tuple[MultiGraph, ...]:
    """Every simple graph with 1..max_n vertices from the networkx atlas (up to isomorphism)."""
    out = []
    for g in nx.graph_atlas_g()[1:]:
        n = g.number_of_nodes()
        if n > max_n:
            continue
        if connected and not nx.is_connected(g):
            continue
        out.append(MultiGraph.from_edges(list(g.edges()), n))
    return tuple(out)


def random_multigraphs(count: int, seed: int, max_n: int = 7, max_m: int = 14) -> list[MultiGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_n)
        m = rng.randint(n - 1, max(n - 1, max_m))
        out.append(random_connected_multigraph(n, m, rng))
    return out


def random_states(seed: int, max_n: int = 12, scramble: int = 6):
    """Yield valid engine states that still have an oversized red component.

    A random graph is split into k+1 forests and cut into parts; each part
    gets a few random legal exchanges, reselecting the root after each one.
    Graphs that give nothing are redrawn, up to 50 times.
    """
    rng = random.Random(seed)
    for _ in range(50):
        k = rng.choice([1, 2])
        d = rng.randint(1, min(4, 2 * (k + 1)))
        n = rng.randint(4, max_n)
        m = rng.randint(k * (n - 1) + 2, (k + 1) * (n - 1))
        G = random_connected_multigraph(n, m, rng)
        dec = forest_decomposition(G, k + 1)
        if not isinstance(dec, ForestDecomposition):
            continue
        _, parts = split_into_parts(G, k, list(dec.assignment))
        found = False
        for p in parts:
            sub = induced_subgraph(G, p.vertices).graph
            colour = [c if c < k else RED for c in p.cls]
            try:
                _, r = select_root(sub, [e for e, c in enumerate(colour) if c == RED], d)
            except AlreadyDone:
                continue
            S = State(sub, k, d, colour, r)
            for _ in range(rng.randint(0, scramble)):
                cands = list(exchange_candidates(S))
                if not cands:
                    break
                b, u, eid = rng.choice(cands)
                try:
                    T = S.exchange(b, u, eid)
                    _, r = select_root(sub, list(T.red_edges), d)
                except (RejectedMove, AlreadyDone):
                    continue
                S = T.with_colour(T.colour, root=r)
            found = True
            yield S
        if found:
            return
