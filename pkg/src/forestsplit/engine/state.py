"""Decomposition states: k spanning trees oriented toward a root plus a red forest.

A state is an immutable colouring of the edges (``-1`` red, ``b`` for tree
``b``) together with the root. Orientation is not stored: each tree is
rooted at ``root`` by breadth-first search, so arcs always point toward the
root and an exchange only has to swap two colours.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property

from ..graph import MultiGraph

RED = -1


class RejectedMove(Exception):
    """A move whose preconditions fail."""


class InvalidState(ValueError):
    pass


class State:
    __slots__ = ("graph", "k", "d", "colour", "root", "__dict__")

    def __init__(self, graph: MultiGraph, k: int, d: int, colour, root: int):
        self.graph = graph
        self.k = k
        self.d = d
        self.colour = tuple(colour)
        self.root = root
        self._orient()

    # -- blue trees -------------------------------------------------------

    def _orient(self):
        G, n = self.graph, self.graph.n
        parent, pedge, order = [], [], []
        for b in range(self.k):
            par = [-2] * n
            pe = [-1] * n
            par[self.root] = -1
            seq = [self.root]
            queue = deque([self.root])
            while queue:
                u = queue.popleft()
                for eid in G.incident(u):
                    if self.colour[eid] == b:
                        w = G.other(eid, u)
                        if par[w] == -2:
                            par[w] = u
                            pe[w] = eid
                            seq.append(w)
                            queue.append(w)
            if len(seq) != n or sum(1 for c in self.colour if c == b) != n - 1:
                raise InvalidState(f"tree {b} is not a spanning tree")
            parent.append(par)
            pedge.append(pe)
            order.append(seq)
        self.parent = parent
        self.parent_edge = pedge
        self._bfs_order = order

    @cached_property
    def _euler(self):
        """Per tree, entry and exit times for O(1) descendant tests."""
        n = self.graph.n
        out = []
        for b in range(self.k):
            children = [[] for _ in range(n)]
            for v in self._bfs_order[b][1:]:
                children[self.parent[b][v]].append(v)
            tin, tout = [0] * n, [0] * n
            t = 0
            stack = [(self.root, 0)]
            while stack:
                v, i = stack.pop()
                if i == 0:
                    tin[v] = t
                    t += 1
                if i < len(children[v]):
                    stack.append((v, i + 1))
                    stack.append((children[v][i], 0))
                else:
                    tout[v] = t
            out.append((tin, tout, children))
        return out

    def is_descendant(self, b: int, v: int, u: int) -> bool:
        """True if v lies in the subtree of u in tree b (u counts as its own descendant)."""
        tin, tout, _ = self._euler[b]
        return tin[u] <= tin[v] < tout[u]

    def children(self, b: int, v: int) -> list[int]:
        return self._euler[b][2][v]

    def tree_path_up(self, b: int, v: int, u: int) -> list[int] | None:
        """Vertices of the directed path v -> ... -> u in tree b, or None if u is not an ancestor."""
        if not self.is_descendant(b, v, u):
            return None
        out = [v]
        while v != u:
            v = self.parent[b][v]
            out.append(v)
        return out

    def arc_edge(self, b: int, tail: int, head: int) -> int | None:
        if tail == self.root or self.parent[b][tail] != head:
            return None
        return self.parent_edge[b][tail]

    # -- red forest -------------------------------------------------------

    @cached_property
    def red_edges(self) -> tuple[int, ...]:
        return tuple(e for e, c in enumerate(self.colour) if c == RED)

    @cached_property
    def _red(self):
        G, n = self.graph, self.graph.n
        adj = [[] for _ in range(n)]
        for eid in self.red_edges:
            u, v = G.edges[eid]
            adj[u].append(eid)
            adj[v].append(eid)
        comp = [-1] * n
        comps = []
        for s in range(n):
            if comp[s] >= 0:
                continue
            cid = len(comps)
            verts, edges = [s], []
            comp[s] = cid
            i = 0
            while i < len(verts):
                u = verts[i]
                i += 1
                for eid in adj[u]:
                    w = G.other(eid, u)
                    if comp[w] < 0:
                        comp[w] = cid
                        verts.append(w)
                        edges.append(eid)
            comps.append((tuple(sorted(verts)), tuple(sorted(edges))))
        # BFS keeps one edge per newly reached vertex, so a cycle leaves some edge out
        if sum(len(c[1]) for c in comps) != len(self.red_edges):
            raise InvalidState("red edges contain a cycle")
        return adj, comp, comps

    @property
    def red_adj(self) -> list[list[int]]:
        return self._red[0]

    def comp_of(self, v: int) -> int:
        return self._red[1][v]

    @property
    def comps(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Red components as (vertices, edge ids), indexed by component id."""
        return self._red[2]

    def comp_size(self, cid: int) -> int:
        return len(self._red[2][cid][1])

    def red_degree(self, v: int) -> int:
        return len(self._red[0][v])

    def red_path(self, x: int, y: int) -> list[int] | None:
        """Vertices of the red path from x to y, or None."""
        if self.comp_of(x) != self.comp_of(y):
            return None
        G = self.graph
        back = {x: -1}
        queue = deque([x])
        while queue:
            u = queue.popleft()
            if u == y:
                break
            for eid in self.red_adj[u]:
                w = G.other(eid, u)
                if w not in back:
                    back[w] = u
                    queue.append(w)
        out = [y]
        while out[-1] != x:
            out.append(back[out[-1]])
        out.reverse()
        return out

    def red_edge_between(self, a: int, b: int) -> int | None:
        for eid in self.red_adj[a]:
            if self.graph.other(eid, a) == b:
                return eid
        return None

    @cached_property
    def root_comp(self) -> int:
        return self.comp_of(self.root)

    @cached_property
    def root_key(self) -> tuple[int, frozenset]:
        """Identity of (r, R*) used to decide whether legal orders are comparable."""
        return self.root, frozenset(self.comps[self.root_comp][1])

    @cached_property
    def residue_key(self) -> tuple[int, ...]:
        """Sizes of red components with more than d edges, in decreasing order.

        Comparing these tuples lexicographically is the same as comparing the
        residue vectors, because both look at the largest sizes first.
        """
        return tuple(sorted((len(e) for _, e in self.comps if len(e) > self.d), reverse=True))

    @property
    def done(self) -> bool:
        return not self.residue_key

    # -- moves ------------------------------------------------------------

    def with_colour(self, colour, root: int | None = None) -> "State":
        return State(self.graph, self.k, self.d, colour, self.root if root is None else root)

    def exchange(self, b: int, u: int, red_eid: int) -> "State":
        """Swap the arc (u, parent_b(u)) with the red edge ``red_eid``.

        Requires exactly one end of the red edge to be a descendant of u in
        tree b and the red forest to stay acyclic.
        """
        if self.colour[red_eid] != RED:
            raise RejectedMove("edge is not red")
        if u == self.root:
            raise RejectedMove("the root has no outgoing arc")
        up = self.parent[b][u]
        v, vp = self.graph.edges[red_eid]
        if self.is_descendant(b, v, u) == self.is_descendant(b, vp, u):
            raise RejectedMove("arc is not on the fundamental cycle of the red edge")
        if self.comp_of(u) == self.comp_of(up):
            path = self.red_path(u, up)
            inner = {self.red_edge_between(path[i], path[i + 1]) for i in range(len(path) - 1)}
            if red_eid not in inner:
                raise RejectedMove("red forest would get a cycle")
        colour = list(self.colour)
        colour[self.parent_edge[b][u]] = RED
        colour[red_eid] = b
        return self.with_colour(colour)

    def check(self):
        """Full invariant check; raises InvalidState."""
        if len(self.colour) != self.graph.m:
            raise InvalidState("colouring does not cover the edges")
        if any(not (RED <= c < self.k) for c in self.colour):
            raise InvalidState("colour out of range")
        _ = self._red
        for b in range(self.k):
            for v in range(self.graph.n):
                if v == self.root:
                    continue
                eid = self.parent_edge[b][v]
                if self.colour[eid] != b or self.graph.other(eid, v) != self.parent[b][v]:
                    raise InvalidState("parent arc mismatch")

    def forests(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k + 1)]
        for eid, c in enumerate(self.colour):
            out[c if c >= 0 else self.k].append(eid)
        return out

    def __repr__(self):
        return f"State(n={self.graph.n}, k={self.k}, d={self.d}, root={self.root}, colour={self.colour})"
