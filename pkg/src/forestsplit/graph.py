"""Loop-free multigraphs with stable edge ids.

Vertices are dense integers ``0..n-1``. Edges are numbered in input order and
every other structure in the package refers to edges by id, so parallel edges
never get confused with each other.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {eid} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"edge {eid} is a loop at {u}")
            adj[u].append(eid)
            adj[v].append(eid)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: int | None = None) -> "MultiGraph":
        edges = tuple((int(u), int(v)) for u, v in edges)
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def other(self, eid: int, v: int) -> int:
        a, b = self.edges[eid]
        return b if a == v else a

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges_within(self, vertices: Iterable[int]) -> list[int]:
        """Ids of the edges with both endpoints in ``vertices``."""
        s = set(vertices)
        return [i for i, (u, v) in enumerate(self.edges) if u in s and v in s]

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(reachable(self, 0)) == self.n

    def components(self) -> list[list[int]]:
        """Vertex sets of the connected components, each sorted, ordered by minimum vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if not seen[s]:
                comp = sorted(reachable(self, s))
                for v in comp:
                    seen[v] = True
                out.append(comp)
        return out


@dataclass(frozen=True)
class SubGraph:
    """An induced subgraph that remembers where it came from.

    ``graph`` is relabelled to dense ids ``0..len(vertices)-1``; ``vertices[i]``
    is the original id of local vertex ``i`` and ``edge_ids[j]`` the original
    id of local edge ``j``.
    """

    graph: MultiGraph
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m


def reachable(G: MultiGraph, source: int, allowed: set[int] | None = None) -> set[int]:
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for eid in G.incident(u):
            w = G.other(eid, u)
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                queue.append(w)
    return seen


def parse_edge_list(text: str) -> MultiGraph:
    """Parse lines of ``u v`` pairs. ``#`` starts a comment; blank lines are skipped.

    The vertex count is the largest id plus one. A vertex id that never occurs
    is rejected, since ids are meant to be dense.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected two vertex ids, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError("vertex ids must be nonnegative", lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        edges.append((u, v))
    n = 1 + max((max(e) for e in edges), default=-1)
    used = set()
    for e in edges:
        used.update(e)
    if len(used) != n:
        missing = min(set(range(n)) - used)
        raise GraphFormatError(f"vertex ids are not dense, {missing} never occurs")
    return MultiGraph(n, tuple(edges))


def serialize(G: MultiGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in G.edges)


def induced_subgraph(G: MultiGraph, S: Iterable[int]) -> SubGraph:
    verts = tuple(sorted(set(S)))
    for v in verts:
        if not 0 <= v < G.n:
            raise ValueError(f"unknown vertex {v}")
    local = {v: i for i, v in enumerate(verts)}
    eids = []
    ledges = []
    for eid, (u, v) in enumerate(G.edges):
        if u in local and v in local:
            eids.append(eid)
            ledges.append((local[u], local[v]))
    return SubGraph(MultiGraph(len(verts), tuple(ledges)), verts, tuple(eids))


def forest_path(G: MultiGraph, forest: Iterable[int], x: int, y: int) -> list[int] | None:
    """Edge ids of the path from ``x`` to ``y`` inside the forest, in order.

    Returns ``[]`` when ``x == y`` and ``None`` when they lie in different
    trees. The forest is given as a collection of edge ids of ``G``.
    """
    for v in (x, y):
        if not 0 <= v < G.n:
            raise ValueError(f"unknown vertex {v}")
    if x == y:
        return []
    fset = set(forest)
    back: dict[int, int] = {x: -1}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for eid in G.incident(u):
            if eid in fset:
                w = G.other(eid, u)
                if w not in back:
                    back[w] = eid
                    queue.append(w)
    if y not in back:
        return None
    path = []
    v = y
    while v != x:
        eid = back[v]
        path.append(eid)
        v = G.other(eid, v)
    path.reverse()
    return path


def is_forest(G: MultiGraph, edge_ids: Iterable[int]) -> bool:
    uf = UnionFind(G.n)
    for eid in edge_ids:
        u, v = G.edges[eid]
        if not uf.union(u, v):
            return False
    return True


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of ``a`` and ``b``; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def edge_components(G: MultiGraph, edge_ids: Iterable[int]) -> list[tuple[list[int], list[int]]]:
    """Components of the spanning subgraph ``(V, edge_ids)`` as (vertices, edges) pairs.

    Isolated vertices form their own components. Ordered by minimum vertex.
    """
    uf = UnionFind(G.n)
    eids = list(edge_ids)
    for eid in eids:
        uf.union(*G.edges[eid])
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for v in range(G.n):
        groups.setdefault(uf.find(v), ([], []))[0].append(v)
    for eid in sorted(eids):
        groups[uf.find(G.edges[eid][0])][1].append(eid)
    return sorted(groups.values(), key=lambda g: g[0][0])
