"""Sparsity quantities: beta, fractional arboricity and overfull subgraphs.

Everything is exact. Small graphs (up to ``ENUMERATION_LIMIT`` vertices) are
scanned over all vertex subsets with bitmasks, which yields canonical
witnesses: among optimal sets the one that is smallest, then
lexicographically first by sorted vertex ids. Larger graphs go through a
max-closure (min-cut) computation instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import networkx as nx

from .graph import MultiGraph, SubGraph, reachable

ENUMERATION_LIMIT = 18


def beta_value(v: int, e: int, k: int, d: int) -> int:
    return (k + 1) * (k + d) * v - (k + d + 1) * e - k * k


def beta(H: MultiGraph | SubGraph, k: int, d: int) -> int:
    """(k+1)(k+d)v(H) - (k+d+1)e(H) - k^2. The empty graph gives -k^2."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    return beta_value(H.n, H.m, k, d)


@dataclass(frozen=True)
class BetaReport:
    k: int
    d: int
    value: int
    witness: tuple[int, ...]
    exact: bool = True
    method: str = "enumeration"

    @property
    def sparse(self) -> bool:
        return self.value >= 0

    def to_json(self) -> dict:
        return {"kind": "min_beta", "value_num": self.value, "value_den": 1,
                "witness_vertices": list(self.witness)}


@dataclass(frozen=True)
class DensityReport:
    value: Fraction
    witness: tuple[int, ...]
    witness_edges: int
    method: str = "enumeration"

    @property
    def witness_vertex_count(self) -> int:
        return len(self.witness)

    def to_json(self) -> dict:
        return {"kind": "fractional_arboricity", "value_num": self.value.numerator,
                "value_den": self.value.denominator, "witness_vertices": list(self.witness)}


def overfull_json(witness: Iterable[int] | None, n: int) -> dict:
    return {"kind": f"overfull_{n}", "value_num": 0 if witness is None else 1, "value_den": 1,
            "witness_vertices": [] if witness is None else list(witness)}


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _key(mask: int) -> tuple[int, tuple[int, ...]]:
    return mask.bit_count(), _bits(mask)


def subset_edge_counts(G: MultiGraph) -> list[int]:
    """e(G[S]) for every vertex mask S."""
    n = G.n
    mult = [dict() for _ in range(n)]
    for u, v in G.edges:
        mult[u][v] = mult[u].get(v, 0) + 1
        mult[v][u] = mult[v].get(u, 0) + 1
    # neighbour masks grouped by multiplicity
    layers = []
    for v in range(n):
        by_mult: dict[int, int] = {}
        for u, c in mult[v].items():
            by_mult[c] = by_mult.get(c, 0) | (1 << u)
        layers.append(tuple(by_mult.items()))
    counts = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        c = counts[rest]
        for m, nb in layers[v]:
            c += m * (rest & nb).bit_count()
        counts[mask] = c
    return counts


def _mask_connected(nbr: list[int], mask: int) -> bool:
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = nbr[v] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def _neighbour_masks(G: MultiGraph) -> list[int]:
    nbr = [0] * G.n
    for u, v in G.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    return nbr


def min_beta_subgraph(G: MultiGraph, k: int, d: int, connected_only: bool = True) -> BetaReport:
    """Minimum of beta over nonempty induced subgraphs.

    By default only connected induced subgraphs are considered. That decides
    sparseness exactly, because beta of a disconnected graph is the sum over
    its components plus (components - 1) k^2. With ``connected_only=False``
    the unrestricted minimum is returned instead (diagnostic use).
    """
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    if G.n == 0:
        raise ValueError("graph has no vertices")
    if G.n > ENUMERATION_LIMIT:
        return _min_beta_flow(G, k, d, connected_only)
    counts = subset_edge_counts(G)
    nbr = _neighbour_masks(G)
    a, b, c = (k + 1) * (k + d), k + d + 1, k * k
    best = None
    best_mask = 0
    for mask in range(1, 1 << G.n):
        val = a * mask.bit_count() - b * counts[mask] - c
        if best is not None and val > best:
            continue
        if connected_only and not _mask_connected(nbr, mask):
            continue
        if best is None or val < best or _key(mask) < _key(best_mask):
            best, best_mask = val, mask
    return BetaReport(k, d, best, _bits(best_mask))


def fractional_arboricity(G: MultiGraph) -> DensityReport:
    """Max of e(H)/(v(H)-1) over induced subgraphs with at least two vertices."""
    if G.n < 2:
        raise ValueError("fractional arboricity needs at least two vertices")
    if G.n > ENUMERATION_LIMIT:
        return _arboricity_flow(G)
    counts = subset_edge_counts(G)
    best_num, best_den, best_mask = -1, 1, 0
    for mask in range(1, 1 << G.n):
        v = mask.bit_count()
        if v < 2:
            continue
        e = counts[mask]
        lhs, rhs = e * best_den, best_num * (v - 1)
        if lhs > rhs or (lhs == rhs and _key(mask) < _key(best_mask)):
            best_num, best_den, best_mask = e, v - 1, mask
    return DensityReport(Fraction(best_num, best_den), _bits(best_mask), best_num)


def find_overfull(G: MultiGraph, n: int) -> tuple[int, ...] | None:
    """A vertex set S with e(G[S]) > n(|S|-1), or None when there is none."""
    if n < 1:
        raise ValueError("n must be positive")
    if G.n < 2:
        return None
    rep = fractional_arboricity(G)
    if rep.value > n:
        return rep.witness
    return None


def is_sparse(G: MultiGraph, k: int, d: int) -> bool:
    return min_beta_subgraph(G, k, d).value >= 0


# ---------------------------------------------------------------------------
# max-closure route for larger graphs

def _max_closure_with(G: MultiGraph, q: int, p: int, forced: int) -> set[int]:
    """Vertex set S containing ``forced`` maximizing q*e(S) - p*|S|."""
    net = nx.DiGraph()
    big = q * G.m + p * G.n + 1
    for eid, (u, v) in enumerate(G.edges):
        node = ("e", eid)
        net.add_edge("s", node, capacity=q)
        net.add_edge(node, ("v", u), capacity=big)
        net.add_edge(node, ("v", v), capacity=big)
    for v in range(G.n):
        if v == forced:
            net.add_edge("s", ("v", v), capacity=big)
        else:
            net.add_edge(("v", v), "t", capacity=p)
    if not net.has_node("t"):
        return set(range(G.n))
    _, (side, _) = nx.minimum_cut(net, "s", "t")
    return {node[1] for node in side if isinstance(node, tuple) and node[0] == "v"}


def _components_of(G: MultiGraph, S: set[int]) -> list[tuple[int, ...]]:
    comps = []
    left = set(S)
    while left:
        s = min(left)
        comp = reachable(G, s, allowed=S)
        left -= comp
        comps.append(tuple(sorted(comp)))
    return comps


def _min_beta_flow(G: MultiGraph, k: int, d: int, connected_only: bool) -> BetaReport:
    a, b = (k + 1) * (k + d), k + d + 1
    best = None
    for u in range(G.n):
        S = _max_closure_with(G, b, a, u)
        parts = _components_of(G, S) if connected_only else [tuple(sorted(S))]
        for part in parts:
            e = len(G.edges_within(part))
            val = beta_value(len(part), e, k, d)
            if best is None or (val, len(part), part) < (best[0], len(best[1]), best[1]):
                best = (val, part)
    # Over all sets the closure optimum is exact. Restricted to connected sets it
    # is exact whenever the optimum is nonnegative (then some component of the
    # optimal set is at least as good); otherwise it is only a negative witness.
    exact = (not connected_only) or best[0] >= 0
    return BetaReport(k, d, best[0], best[1], exact=exact, method="flow")


def _arboricity_flow(G: MultiGraph) -> DensityReport:
    # start from the densest single pair
    pair: dict[tuple[int, int], int] = {}
    for u, v in G.edges:
        key = (min(u, v), max(u, v))
        pair[key] = pair.get(key, 0) + 1
    if not pair:
        return DensityReport(Fraction(0), (0, 1), 0, method="flow")
    (u0, v0), c0 = min(pair.items(), key=lambda kv: (-kv[1], kv[0]))
    best = Fraction(c0)
    witness, wit_e = (u0, v0), c0
    while True:
        improved = False
        for u in range(G.n):
            S = _max_closure_with(G, best.denominator, best.numerator, u)
            for part in _components_of(G, S):
                if len(part) < 2:
                    continue
                e = len(G.edges_within(part))
                r = Fraction(e, len(part) - 1)
                if r > best:
                    best, witness, wit_e, improved = r, part, e, True
        if not improved:
            return DensityReport(best, witness, wit_e, method="flow")
