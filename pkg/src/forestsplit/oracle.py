"""Brute-force reference implementations.

These are deliberately plain: no bitmask tricks, no shared helpers beyond the
graph type. Tests compare the fast code paths against them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import MultiGraph


class OracleRefusal(ValueError):
    """The instance exceeds the configured size caps."""


@dataclass
class OracleVerdict:
    feasible: bool
    assignment: list[int] | None = None  # class per edge id, class k is the bounded forest
    nodes: int = 0
    k: int = 0
    d: int = 0

    def forests(self) -> list[list[int]] | None:
        if self.assignment is None:
            return None
        out: list[list[int]] = [[] for _ in range(self.k + 1)]
        for eid, c in enumerate(self.assignment):
            out[c].append(eid)
        return out


class _RollbackUF:
    """Union-find without path compression so unions can be undone."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.edges = [0] * n
        self.history: list[tuple[int, int] | None] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def add(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.edges[ra] += self.edges[rb] + 1
        self.history.append((ra, rb))

    def undo(self):
        ra, rb = self.history.pop()
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]
        self.edges[ra] -= self.edges[rb] + 1


def brute_force_decompose(G: MultiGraph, k: int, d: int, max_vertices: int = 10,
                          max_edges: int | None = 16) -> OracleVerdict:
    """Exhaustive search for k forests plus one forest with components of at most d edges.

    Classes ``0..k-1`` are the unrestricted forests and class ``k`` is the
    bounded one. The unrestricted classes are interchangeable, so an edge may
    only open the next unused one.
    """
    if G.n > max_vertices or (max_edges is not None and G.m > max_edges):
        raise OracleRefusal(f"instance with {G.n} vertices and {G.m} edges exceeds the caps "
                            f"({max_vertices} vertices, {max_edges} edges)")
    n, m = G.n, G.m
    order = sorted(range(m), key=lambda e: (min(G.edges[e]), max(G.edges[e]), e))
    ufs = [_RollbackUF(n) for _ in range(k + 1)]
    sizes = [0] * (k + 1)
    assign = [-1] * m
    verdict = OracleVerdict(False, k=k, d=d)

    def search(pos: int, used_trees: int) -> bool:
        verdict.nodes += 1
        if pos == m:
            return True
        spare = sum(max(0, n - 1 - s) for s in sizes)
        if spare < m - pos:
            return False
        eid = order[pos]
        u, v = G.edges[eid]
        for c in list(range(min(used_trees + 1, k))) + [k]:
            uf = ufs[c]
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv:
                continue
            if c == k and uf.edges[ru] + uf.edges[rv] + 1 > d:
                continue
            uf.add(u, v)
            sizes[c] += 1
            assign[eid] = c
            nxt = used_trees + 1 if c == used_trees and c < k else used_trees
            if search(pos + 1, nxt):
                return True
            uf.undo()
            sizes[c] -= 1
            assign[eid] = -1
        return False

    if search(0, 0):
        verdict.feasible = True
        verdict.assignment = list(assign)
    return verdict


@dataclass
class DensityScan:
    min_beta: int
    min_beta_set: tuple[int, ...]
    arboricity: Fraction | None
    arboricity_set: tuple[int, ...] | None


def _count_edges(G: MultiGraph, S: tuple[int, ...]) -> int:
    s = set(S)
    return sum(1 for u, v in G.edges if u in s and v in s)


def _connected(G: MultiGraph, S: tuple[int, ...]) -> bool:
    s = set(S)
    seen = {S[0]}
    todo = [S[0]]
    while todo:
        x = todo.pop()
        for u, v in G.edges:
            for a, b in ((u, v), (v, u)):
                if a == x and b in s and b not in seen:
                    seen.add(b)
                    todo.append(b)
    return seen == s


def exhaustive_density_scan(G: MultiGraph, k: int, d: int, max_vertices: int = 20) -> DensityScan:
    """Min beta over connected induced subgraphs and max e/(v-1) over all induced ones.

    Subsets are visited by size and then lexicographically; the first optimum
    wins.
    """
    if G.n > max_vertices:
        raise OracleRefusal(f"{G.n} vertices exceeds the cap of {max_vertices}")
    best_beta, beta_set = None, None
    best_arb, arb_set = None, None
    for size in range(1, G.n + 1):
        for S in combinations(range(G.n), size):
            e = _count_edges(G, S)
            if _connected(G, S):
                b = (k + 1) * (k + d) * size - (k + d + 1) * e - k * k
                if best_beta is None or b < best_beta:
                    best_beta, beta_set = b, S
            if size >= 2:
                r = Fraction(e, size - 1)
                if best_arb is None or r > best_arb:
                    best_arb, arb_set = r, S
    return DensityScan(best_beta, beta_set, best_arb, arb_set)


# ---------------------------------------------------------------------------
# legal orders by enumeration

def _tree_parents(G: MultiGraph, edges: list[int], root: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {}
    for eid in edges:
        u, v = G.edges[eid]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent = {root: -1}
    todo = deque([root])
    while todo:
        x = todo.popleft()
        for y in adj.get(x, []):
            if y not in parent:
                parent[y] = x
                todo.append(y)
    return parent


def _red_components(G: MultiGraph, red: list[int]) -> dict[int, int]:
    """vertex -> label (smallest vertex of its red component)."""
    adj: dict[int, list[int]] = {v: [] for v in range(G.n)}
    for eid in red:
        u, v = G.edges[eid]
        adj[u].append(v)
        adj[v].append(u)
    label: dict[int, int] = {}
    for s in range(G.n):
        if s in label:
            continue
        comp = {s}
        todo = [s]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    todo.append(y)
        lo = min(comp)
        for x in comp:
            label[x] = lo
    return label


def exploration_closure(G: MultiGraph, colour: list[int], k: int, root: int) -> set[int]:
    """Vertices reachable from the root by child-to-parent blue steps and red steps."""
    red = [e for e in range(G.m) if colour[e] == -1]
    parents = [_tree_parents(G, [e for e in range(G.m) if colour[e] == b], root) for b in range(k)]
    radj: dict[int, list[int]] = {v: [] for v in range(G.n)}
    for eid in red:
        u, v = G.edges[eid]
        radj[u].append(v)
        radj[v].append(u)
    seen = {root}
    changed = True
    while changed:
        changed = False
        for x in list(seen):
            nxt = list(radj[x])
            nxt += [p[x] for p in parents if p.get(x, -1) >= 0]
            for y in nxt:
                if y not in seen:
                    seen.add(y)
                    changed = True
    return seen


def enumerate_legal_orders(G: MultiGraph, colour: list[int], k: int, root: int):
    """Yield every legal order as a tuple of red-component edge counts.

    A legal order lists the red components of the exploration subgraph, the
    root's first, each later one entered by a blue arc (x, parent(x)) whose
    tail lies in an earlier component.
    """
    H = exploration_closure(G, colour, k, root)
    red = [e for e in range(G.m) if colour[e] == -1]
    label = _red_components(G, red)
    comps = sorted({label[v] for v in H})
    size = {c: sum(1 for e in red if label[G.edges[e][0]] == c) for c in comps}
    parents = [_tree_parents(G, [e for e in range(G.m) if colour[e] == b], root) for b in range(k)]
    enters: dict[int, set[int]] = {c: set() for c in comps}  # component -> components its arcs reach
    for v in H:
        for p in parents:
            w = p.get(v, -1)
            if w >= 0 and label[w] != label[v]:
                enters[label[v]].add(label[w])
    start = label[root]

    def rec(placed: list[int], reach: set[int]):
        if len(placed) == len(comps):
            yield tuple(size[c] for c in placed)
            return
        for c in sorted(reach - set(placed)):
            yield from rec(placed + [c], reach | enters[c])

    yield from rec([start], set(enters[start]))
