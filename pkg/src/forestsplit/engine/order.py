"""Residues, root choice, exploration subgraphs and legal orders."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from ..graph import MultiGraph, edge_components
from .state import State


class AlreadyDone(Exception):
    """Every red component has at most d edges."""


# -- residue ---------------------------------------------------------------

def residue(component_sizes: Sequence[int], d: int, v: int) -> tuple[int, ...]:
    """Counts of components with i edges for i = v-1 down to d+1."""
    return tuple(sum(1 for s in component_sizes if s == i) for i in range(v - 1, d, -1))


def compare(rho1: Sequence[int], rho2: Sequence[int]) -> int:
    """-1, 0 or 1 as rho1 is lexicographically smaller, equal or larger."""
    a, b = tuple(rho1), tuple(rho2)
    return (a > b) - (a < b)


# -- root choice -------------------------------------------------------------

def select_root(G: MultiGraph, red: Sequence[int], d: int) -> tuple[tuple[int, ...], int]:
    """Pick the root component and the root vertex.

    The component is one with the most edges (more than d), lowest minimum
    vertex on ties. The root is its lowest-id vertex of red degree at least
    three; failing that the component is a path and we take the lowest-id
    vertex with at least two edges on either side; failing that (short
    paths, only possible for d <= 2) the lowest-id vertex of largest degree.
    """
    comps = [c for c in edge_components(G, red) if len(c[1]) > d]
    if not comps:
        raise AlreadyDone()
    verts, edges = max(comps, key=lambda c: (len(c[1]), -c[0][0]))
    deg = {v: 0 for v in verts}
    for eid in edges:
        for v in G.edges[eid]:
            deg[v] += 1
    for v in verts:
        if deg[v] >= 3:
            return tuple(verts), v
    # a path: walk it from one end
    ends = [v for v in verts if deg[v] == 1]
    adj = {v: [] for v in verts}
    for eid in edges:
        a, b = G.edges[eid]
        adj[a].append(b)
        adj[b].append(a)
    seq = [ends[0]]
    prev = -1
    while len(seq) < len(verts):
        nxt = [w for w in adj[seq[-1]] if w != prev][0]
        prev = seq[-1]
        seq.append(nxt)
    inner = [seq[i] for i in range(2, len(seq) - 2)]
    if inner:
        return tuple(verts), min(inner)
    return tuple(verts), min(v for v in verts if deg[v] == max(deg.values()))


# -- exploration subgraph and legal orders -----------------------------------

def exploration_subgraph(S: State) -> frozenset[int]:
    """Vertices reachable from the root by red edges and child-to-parent blue arcs."""
    G = S.graph
    seen = {S.root}
    queue = deque([S.root])
    while queue:
        u = queue.popleft()
        nxt = [G.other(eid, u) for eid in S.red_adj[u]]
        if u != S.root:
            nxt += [S.parent[b][u] for b in range(S.k)]
        for w in nxt:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


@dataclass
class LegalOrder:
    comps: list[int]  # red component ids in order, comps[0] is the root component
    values: tuple[int, ...]  # edge counts
    generators: list[tuple[int, int, int, int] | None]  # (tail, head, tree, edge id)
    index: dict[int, int]  # vertex -> 1-based position of its component
    H: frozenset[int]
    exact: bool = True
    aux_parent: dict[int, tuple[int, int]] = field(default_factory=dict)  # v -> (parent, edge id)
    _tin: dict[int, int] = field(default_factory=dict, repr=False)
    _tout: dict[int, int] = field(default_factory=dict, repr=False)

    def i(self, v: int) -> int | float:
        return self.index.get(v, float("inf"))

    def position(self, cid: int) -> int:
        return self.comps.index(cid) + 1

    def aux_ancestor(self, a: int, v: int) -> bool:
        """True if a is an ancestor of v in the auxiliary tree (reflexive)."""
        return self._tin[a] <= self._tin[v] < self._tout[a]

    def parent_comp(self, pos: int) -> int | None:
        """Position of the parent component of the component at ``pos`` (1-based)."""
        gen = self.generators[pos - 1]
        if gen is None:
            return None
        return self.index[gen[0]]


def _component_graph(S: State, H: frozenset[int]):
    comps = sorted({S.comp_of(v) for v in H}, key=lambda c: S.comps[c][0][0])
    enters: dict[int, set[int]] = {c: set() for c in comps}
    arcs: dict[tuple[int, int], tuple[int, int, int, int]] = {}
    for v in H:
        if v == S.root:
            continue
        cv = S.comp_of(v)
        for b in range(S.k):
            w = S.parent[b][v]
            cw = S.comp_of(w)
            if cw != cv:
                enters[cv].add(cw)
                cand = (v, w, b, S.parent_edge[b][v])
                key = (cv, cw)
                if key not in arcs or cand < arcs[key]:
                    arcs[key] = cand
    return comps, enters, arcs


MEMO_LIMIT = 200_000


def minimal_legal_order(S: State, H: frozenset[int] | None = None,
                        prefix: Sequence[int] = ()) -> LegalOrder:
    """The lexicographically smallest legal order.

    Components are appended greedily by edge count. When several candidates
    share the minimum count, the choice can matter later (one of them may
    unlock a smaller component), so ties are resolved by an exact memoised
    search over the set of placed components. Candidates with the same
    count and the same newly unlocked components are interchangeable and
    only the one with the lowest vertex is explored.

    ``prefix`` forces the first components (after the root component) to be
    the given ones, as far as they are legal.
    """
    if H is None:
        H = exploration_subgraph(S)
    comps, enters, arcs = _component_graph(S, H)
    pos = {c: i for i, c in enumerate(comps)}
    size = [S.comp_size(c) for c in comps]
    low = [S.comps[c][0][0] for c in comps]
    ent = [sum(1 << pos[w] for w in enters[c]) for c in comps]
    full = (1 << len(comps)) - 1
    start = pos[S.root_comp]

    placed = 1 << start
    reach = ent[start] & ~placed
    seq = [start]
    for c in prefix:
        if c not in pos:
            break
        p = pos[c]
        if not (reach >> p) & 1:
            break
        seq.append(p)
        placed |= 1 << p
        reach = (reach | ent[p]) & ~placed

    memo: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    exact = True

    def avail_of(pl: int) -> int:
        r = 0
        m = pl
        while m:
            lowbit = m & -m
            r |= ent[lowbit.bit_length() - 1]
            m ^= lowbit
        return r & ~pl

    def best(pl: int, av: int):
        nonlocal exact
        if pl == full or av == 0:
            return (), ()
        if pl in memo:
            return memo[pl]
        cands = [i for i in _bits(av)]
        m = min(size[i] for i in cands)
        cands = [i for i in cands if size[i] == m]
        # interchangeable candidates: same newly unlocked set
        groups: dict[int, int] = {}
        for i in cands:
            new = ent[i] & ~pl & ~av
            if new not in groups or low[i] < low[groups[new]]:
                groups[new] = i
        cands = list(groups.values())
        if len(cands) > 1:
            def second(i):
                rest = (av & ~(1 << i)) | (ent[i] & ~pl)
                rest &= ~(1 << i)
                return min((size[j] for j in _bits(rest)), default=float("inf"))
            s2 = {i: second(i) for i in cands}
            lo = min(s2.values())
            cands = [i for i in cands if s2[i] == lo]
        cands.sort(key=lambda i: low[i])
        if len(memo) > MEMO_LIMIT:
            exact = False
            cands = cands[:1]
        best_val, best_seq = None, None
        for i in cands:
            npl = pl | (1 << i)
            nav = (av | ent[i]) & ~npl
            tail_val, tail_seq = best(npl, nav)
            val = (size[i],) + tail_val
            if best_val is None or val < best_val:
                best_val, best_seq = val, (i,) + tail_seq
        memo[pl] = (best_val, best_seq)
        return best_val, best_seq

    _, rest = _iterative_best(best, placed, reach)
    seq += list(rest)
    order_comps = [comps[i] for i in seq]
    generators: list[tuple[int, int, int, int] | None] = [None]
    for j in range(1, len(order_comps)):
        target = order_comps[j]
        gen = None
        for c in order_comps[:j]:
            a = arcs.get((c, target))
            if a is not None and (gen is None or a < gen):
                gen = a
        generators.append(gen)
    index = {}
    for j, c in enumerate(order_comps, start=1):
        for v in S.comps[c][0]:
            index[v] = j
    out = LegalOrder(order_comps, tuple(size[i] for i in seq), generators, index, H, exact)
    _build_aux(S, out)
    return out


def _iterative_best(best, placed, reach):
    import sys
    limit = sys.getrecursionlimit()
    if limit < 10_000:
        sys.setrecursionlimit(10_000)
    return best(placed, reach)


def _bits(mask: int):
    while mask:
        lowbit = mask & -mask
        yield lowbit.bit_length() - 1
        mask ^= lowbit


def _build_aux(S: State, order: LegalOrder):
    """Auxiliary tree: red edges of H plus the generator arcs, rooted at r."""
    G = S.graph
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in order.H}
    for c in order.comps:
        for eid in S.comps[c][1]:
            a, b = G.edges[eid]
            adj[a].append((b, eid))
            adj[b].append((a, eid))
    for gen in order.generators[1:]:
        tail, head, _, eid = gen
        adj[tail].append((head, eid))
        adj[head].append((tail, eid))
    parent = {S.root: (-1, -1)}
    tin, tout = {}, {}
    t = 0
    stack = [(S.root, iter(sorted(adj[S.root])))]
    tin[S.root] = t
    t += 1
    while stack:
        v, it = stack[-1]
        for w, eid in it:
            if w not in parent:
                parent[w] = (v, eid)
                tin[w] = t
                t += 1
                stack.append((w, iter(sorted(adj[w]))))
                break
        else:
            tout[v] = t
            stack.pop()
    order.aux_parent = parent
    order._tin, order._tout = tin, tout


def legal_order_from(S: State, comps: Sequence[int], H: frozenset[int] | None = None) -> LegalOrder | None:
    """Build the LegalOrder for an explicit component sequence, or None if illegal."""
    if H is None:
        H = exploration_subgraph(S)
    allc, enters, arcs = _component_graph(S, H)
    if sorted(comps) != sorted(allc) or comps[0] != S.root_comp:
        return None
    generators: list = [None]
    for j in range(1, len(comps)):
        gen = None
        for c in comps[:j]:
            a = arcs.get((c, comps[j]))
            if a is not None and (gen is None or a < gen):
                gen = a
        if gen is None:
            return None
        generators.append(gen)
    index = {v: j for j, c in enumerate(comps, start=1) for v in S.comps[c][0]}
    out = LegalOrder(list(comps), tuple(S.comp_size(c) for c in comps), generators, index, H)
    _build_aux(S, out)
    return out


# -- potential -----------------------------------------------------------------

@dataclass(frozen=True)
class Potential:
    residue: tuple[int, ...]
    root_key: tuple
    sigma: tuple[int, ...]

    def better_than(self, other: "Potential") -> bool:
        """Strictly smaller in the (residue, legal order) lexicographic order.

        Legal orders are only compared when the root and its component agree.
        """
        if self.residue != other.residue:
            return self.residue < other.residue
        if self.root_key != other.root_key:
            return False
        a, b = self.sigma, other.sigma
        width = max(len(a), len(b))
        return a + (0,) * (width - len(a)) < b + (0,) * (width - len(b))


def potential(S: State, order: LegalOrder | None = None) -> Potential:
    if S.done:
        return Potential((), (), ())
    if order is None:
        order = minimal_legal_order(S)
    return Potential(S.residue_key, S.root_key, order.values)
