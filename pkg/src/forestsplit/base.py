"""Starting decompositions.

``forest_decomposition`` partitions the edges into n forests by matroid-union
augmentation. ``to_spanning_plus_residual`` refines a (k+1)-forest
partition into k spanning trees plus one leftover forest.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import MultiGraph, edge_components, induced_subgraph
from .sparsity import find_overfull


class InfeasibleRefinement(Exception):
    """No k edge-disjoint spanning trees exist."""


@dataclass(frozen=True)
class ForestDecomposition:
    n: int
    assignment: tuple[int, ...]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for eid, c in enumerate(self.assignment):
            out[c].append(eid)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "assignment": list(self.assignment)}


@dataclass(frozen=True)
class OverfullWitness:
    n: int
    vertices: tuple[int, ...]
    edges: int

    def to_json(self) -> dict:
        return {"n": self.n, "witness_vertices": list(self.vertices), "edges": self.edges}


@dataclass(frozen=True)
class SpanningPlusResidual:
    """k spanning trees (as parent maps toward ``root``) and a residual forest."""

    k: int
    root: int
    parents: tuple[tuple[int, ...], ...]  # parents[b][v] = parent vertex, -1 at the root
    parent_edges: tuple[tuple[int, ...], ...]
    residual: tuple[int, ...]

    def colouring(self, m: int) -> list[int]:
        colour = [-1] * m
        for b, pe in enumerate(self.parent_edges):
            for eid in pe:
                if eid >= 0:
                    colour[eid] = b
        return colour


class _Forests:
    """Several forests over the same vertex set, with path queries."""

    def __init__(self, G: MultiGraph, count: int, cls: list[int]):
        self.G = G
        self.count = count
        self.cls = cls  # class per edge, -1 for unassigned
        self.adj = [[set() for _ in range(G.n)] for _ in range(count)]
        for eid, c in enumerate(cls):
            if 0 <= c < count:
                self._link(c, eid)

    def _link(self, c: int, eid: int):
        u, v = self.G.edges[eid]
        self.adj[c][u].add(eid)
        self.adj[c][v].add(eid)

    def _unlink(self, c: int, eid: int):
        u, v = self.G.edges[eid]
        self.adj[c][u].discard(eid)
        self.adj[c][v].discard(eid)

    def path(self, c: int, x: int, y: int) -> list[int] | None:
        back = {x: -1}
        queue = deque([x])
        adj = self.adj[c]
        while queue:
            u = queue.popleft()
            if u == y:
                out = []
                while u != x:
                    eid = back[u]
                    out.append(eid)
                    u = self.G.other(eid, u)
                return out
            for eid in adj[u]:
                w = self.G.other(eid, u)
                if w not in back:
                    back[w] = eid
                    queue.append(w)
        return None

    def move(self, eid: int, c: int):
        old = self.cls[eid]
        if 0 <= old < self.count:
            self._unlink(old, eid)
        self.cls[eid] = c
        if 0 <= c < self.count:
            self._link(c, eid)

    def augment(self, sources: list[int], targets: range, locked: set[int] = frozenset()) -> tuple[bool, set[int]]:
        """Shortest augmenting path that inserts one of ``sources`` into a class of ``targets``.

        An edge may be displaced from class c by another edge whose ends its
        class-c path joins. Locked edges are never displaced. Returns
        (success, set of edges reached).
        """
        label: dict[int, int] = {}
        queue = deque()
        for s in sources:
            if s not in label:
                label[s] = -1
                queue.append(s)
        while queue:
            g = queue.popleft()
            u, v = self.G.edges[g]
            for c in targets:
                if self.cls[g] == c:
                    continue
                p = self.path(c, u, v)
                if p is None:
                    # g fits into class c: unwind the chain
                    chain = [g]
                    while label[chain[-1]] != -1:
                        chain.append(label[chain[-1]])
                    new_cls = {}
                    dest = c
                    for e in chain:
                        new_cls[e] = dest
                        dest = self.cls[e]
                    for e, cc in new_cls.items():
                        self.move(e, cc)
                    return True, set(label)
                for f in p:
                    if f not in label and f not in locked:
                        label[f] = g
                        queue.append(f)
        return False, set(label)


def forest_decomposition(G: MultiGraph, n: int) -> ForestDecomposition | OverfullWitness:
    """Partition E(G) into n forests, or return an n-overfull vertex set."""
    if n < 1:
        raise ValueError("n must be positive")
    fs = _Forests(G, n, [-1] * G.m)
    for eid in range(G.m):
        ok, reached = fs.augment([eid], range(n))
        if not ok:
            return _overfull_from(G, n, reached)
    return ForestDecomposition(n, tuple(fs.cls))


def _overfull_from(G: MultiGraph, n: int, reached: set[int]) -> OverfullWitness:
    # the component of the stuck edge among reached edges is dense; confirm, else search
    for verts, edges in edge_components(G, reached):
        if edges:
            e = len(G.edges_within(verts))
            if e > n * (len(verts) - 1):
                return OverfullWitness(n, tuple(verts), e)
    wit = find_overfull(G, n)
    assert wit is not None, "augmentation failed but no overfull subgraph exists"
    return OverfullWitness(n, tuple(wit), len(G.edges_within(wit)))


def pack_trees(G: MultiGraph, k: int, cls: list[int]) -> list[int]:
    """Grow classes ``0..k-1`` to a maximum k-forest packing.

    Edges in class ``k`` (or unassigned) are inserted by augmenting paths
    until none exists. Returns the new class list; class k keeps the rest.
    """
    fs = _Forests(G, k, list(cls))
    while True:
        sources = [e for e in range(G.m) if not 0 <= fs.cls[e] < k]
        if not sources:
            break
        ok, _ = fs.augment(sources, range(k))
        if not ok:
            break
    return [c if 0 <= c < k else k for c in fs.cls]


def exchange_closure(G: MultiGraph, k: int, cls: list[int]) -> set[int]:
    """Edges reachable from class-k edges in the exchange digraph of classes 0..k-1."""
    fs = _Forests(G, k, [c if c < k else -1 for c in cls])
    reached = set(e for e in range(G.m) if cls[e] == k)
    queue = deque(reached)
    while queue:
        g = queue.popleft()
        u, v = G.edges[g]
        for c in range(k):
            if cls[g] == c:
                continue
            p = fs.path(c, u, v)
            if p is None:
                raise ValueError("packing is not maximum")
            for f in p:
                if f not in reached:
                    reached.add(f)
                    queue.append(f)
    return reached


def orient(G: MultiGraph, cls: list[int], k: int, root: int) -> SpanningPlusResidual:
    parents, pedges = [], []
    for b in range(k):
        par = [-2] * G.n
        pe = [-1] * G.n
        par[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for eid in G.incident(u):
                if cls[eid] == b:
                    w = G.other(eid, u)
                    if par[w] == -2:
                        par[w] = u
                        pe[w] = eid
                        queue.append(w)
        if -2 in par:
            raise InfeasibleRefinement(f"class {b} does not span")
        parents.append(tuple(par))
        pedges.append(tuple(pe))
    residual = tuple(e for e in range(G.m) if cls[e] == k)
    return SpanningPlusResidual(k, root, tuple(parents), tuple(pedges), residual)


def to_spanning_plus_residual(G: MultiGraph, k: int, d: int | None = None) -> SpanningPlusResidual:
    """k spanning trees plus a forest.

    Starts from a (k+1)-forest decomposition, takes its smallest class as the
    residual forest and grows the other classes by augmentation. The root is
    chosen by the engine's root rule when ``d`` is given and the residual has
    a component with more than d edges, else vertex 0.
    """
    if not G.is_connected():
        raise ValueError("graph is disconnected")
    if G.m < k * (G.n - 1):
        raise InfeasibleRefinement(f"{G.m} edges cannot hold {k} spanning trees on {G.n} vertices")
    dec = forest_decomposition(G, k + 1)
    if isinstance(dec, OverfullWitness):
        raise InfeasibleRefinement(f"graph is {k + 1}-overfull on {list(dec.vertices)}")
    sizes = [0] * (k + 1)
    for c in dec.assignment:
        sizes[c] += 1
    f_cls = min(range(k + 1), key=lambda c: (sizes[c], c))
    relabel = {}
    nxt = 0
    for c in range(k + 1):
        if c != f_cls:
            relabel[c] = nxt
            nxt += 1
    relabel[f_cls] = k
    cls = pack_trees(G, k, [relabel[c] for c in dec.assignment])
    tree_sizes = [sum(1 for c in cls if c == b) for b in range(k)]
    if any(s != G.n - 1 for s in tree_sizes):
        raise InfeasibleRefinement("no k edge-disjoint spanning trees exist")
    root = 0
    if d is not None:
        from .engine.order import select_root, AlreadyDone
        try:
            _, root = select_root(G, [e for e in range(G.m) if cls[e] == k], d)
        except AlreadyDone:
            pass
    return orient(G, cls, k, root)


@dataclass
class Part:
    """A vertex set inside which every blue class is a spanning tree."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]
    cls: tuple[int, ...]  # class per local edge, k for the residual forest


def split_into_parts(G: MultiGraph, k: int, cls: list[int]) -> tuple[list[int], list[Part]]:
    """Maximise the k-forest packing and cut the graph into independent parts.

    After packing, the edges reachable from residual edges in the exchange
    digraph split V into parts. In each part every class restricted to it is
    a spanning tree, every residual edge lies inside a part and all edges
    between parts are blue. Parts can therefore be re-decomposed one at a
    time and glued back without creating cycles. Only parts containing
    residual edges are returned.
    """
    cls = pack_trees(G, k, cls)
    X = exchange_closure(G, k, cls)
    parts = []
    for verts, _ in edge_components(G, X):
        if len(verts) < 2:
            continue
        sub = induced_subgraph(G, verts)
        local_cls = tuple(cls[e] for e in sub.edge_ids)
        if k not in local_cls:
            continue
        parts.append(Part(sub.vertices, sub.edge_ids, local_cls))
    return cls, parts
