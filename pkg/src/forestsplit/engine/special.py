"""Special paths and their augmentation.

A special path for a blue arc (x, y) is a blue directed path
``v0 -> ... -> x -> y`` inside the exploration subgraph with x and y in
different red components, ``i(y) > i(v0)`` and, when v0 shares x's red
component, v0 an ancestor of x in the auxiliary tree. Augmenting it makes
``xy`` red and turns the red edge from v0 to its auxiliary parent blue.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..base import _Forests
from .order import LegalOrder
from .state import RED, RejectedMove, State


@dataclass(frozen=True)
class SpecialPath:
    vertices: tuple[int, ...]  # v0 .. vl
    arcs: tuple[tuple[int, int], ...]  # (tree, edge id) of each arc v_i -> v_{i+1}

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def last_edge(self) -> int:
        return self.arcs[-1][1]


def blue_arcs(S: State, tail: int, head: int) -> list[tuple[int, int]]:
    """All (tree, edge id) realising the arc tail -> head."""
    if tail == S.root:
        return []
    return [(b, S.parent_edge[b][tail]) for b in range(S.k) if S.parent[b][tail] == head]


def find_minimal_special_paths(S: State, order: LegalOrder, x: int, y: int,
                               tree: int | None = None) -> list[SpecialPath]:
    """All minimal starts for the arc (x, y), one shortest path each.

    Several paths can be minimal at once when their starts share the least
    index and none is an auxiliary ancestor of another; they are returned
    sorted by start vertex. An empty list means no special path exists.
    """
    if x == S.root or S.comp_of(x) == S.comp_of(y):
        return []
    if x not in order.index or y not in order.index:
        return []
    last = blue_arcs(S, x, y)
    if tree is not None:
        last = [a for a in last if a[0] == tree]
    if not last:
        return []
    iy = order.i(y)
    cx = S.comp_of(x)
    # reverse search from x along child arcs, never through y
    nxt = {x: None}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for b in range(S.k):
            for c in S.children(b, v):
                if c not in nxt and c != y and c in order.index:
                    nxt[c] = (v, b, S.parent_edge[b][c])
                    queue.append(c)
    starts = []
    for v0 in nxt:
        if order.i(v0) >= iy:
            continue
        if S.comp_of(v0) == cx and not order.aux_ancestor(v0, x):
            continue
        starts.append(v0)
    if not starts:
        return []
    lo = min(order.i(v) for v in starts)
    tier = [v for v in starts if order.i(v) == lo]
    minimal = [v for v in tier if not any(w != v and order.aux_ancestor(w, v) for w in tier)]
    out = []
    for v0 in sorted(minimal):
        verts, arcs = [v0], []
        v = v0
        while v != x:
            w, b, eid = nxt[v]
            arcs.append((b, eid))
            verts.append(w)
            v = w
        verts.append(y)
        arcs.append(last[0])
        out.append(SpecialPath(tuple(verts), tuple(arcs)))
    return out


def merge_keeps_residue(S: State, x: int, y: int) -> bool:
    """True if adding the edge xy to the red forest leaves the residue unchanged."""
    a, b = S.comp_of(x), S.comp_of(y)
    if a == b:
        return False
    return S.comp_size(a) + S.comp_size(b) + 1 <= S.d


def postcondition_violations(S: State, T: State, order: LegalOrder, P: SpecialPath,
                             anchor: int, anchor_edge: int) -> list[str]:
    """Check the four guaranteed properties of an augmentation; empty means all hold."""
    out = []
    v0 = P.start
    e_last = P.last_edge
    want_red = (set(S.red_edges) | {e_last}) - {anchor_edge}
    if set(T.red_edges) != want_red:
        out.append("red forest is not F + last arc - anchor edge")
    if T.root != S.root or not any(T.parent[b][v0] == anchor and T.parent_edge[b][v0] == anchor_edge
                                   for b in range(T.k)):
        out.append("start vertex does not point to its auxiliary parent")
    i0 = order.i(v0)
    for w in order.H:
        if order.i(w) < i0 and w != S.root:
            arcs_s = sorted((S.parent[b][w], S.parent_edge[b][w], b) for b in range(S.k))
            arcs_t = sorted((T.parent[b][w], T.parent_edge[b][w], b) for b in range(T.k))
            if arcs_s != arcs_t:
                out.append(f"arc out of {w} changed although its index is below the start's")
                break
    blue_s = {e for e, c in enumerate(S.colour) if c != RED}
    blue_t = {e for e, c in enumerate(T.colour) if c != RED}
    if blue_t != (blue_s - {e_last}) | {anchor_edge}:
        out.append("blue edge set is not the old one - last arc + anchor edge")
    return out


def augment_special_path(S: State, order: LegalOrder, P: SpecialPath,
                         violations: list | None = None) -> State:
    """Apply the augmentation along a minimal special path.

    The direct chain (each arc's edge moves into the tree of the next arc)
    is tried first. If it does not yield spanning trees with the required
    properties, a general augmenting path that never displaces an arc out
    of a vertex of lower index is used. Raises RejectedMove when neither
    works or the path has no red anchor.
    """
    v0 = P.start
    if v0 == S.root or v0 not in order.aux_parent:
        raise RejectedMove("start vertex has no auxiliary parent")
    anchor, anchor_edge = order.aux_parent[v0]
    if anchor < 0 or S.colour[anchor_edge] != RED:
        raise RejectedMove("auxiliary parent edge of the start is not red")
    best_err = None
    for T in _candidates(S, order, P, anchor_edge):
        if T is None:
            continue
        errs = postcondition_violations(S, T, order, P, anchor, anchor_edge)
        if not errs:
            return T
        best_err = errs
    if violations is not None and best_err:
        violations.extend(best_err)
    raise RejectedMove("augmentation failed: " + "; ".join(best_err or ["no spanning trees"]))


def _candidates(S: State, order: LegalOrder, P: SpecialPath, anchor_edge: int):
    colour = list(S.colour)
    arcs = P.arcs
    colour[anchor_edge] = arcs[0][0]
    for i in range(1, len(arcs)):
        colour[arcs[i - 1][1]] = arcs[i][0]
    colour[arcs[-1][1]] = RED
    yield _try_state(S, colour)
    yield _generic(S, order, P, anchor_edge)


def _try_state(S: State, colour) -> State | None:
    try:
        T = S.with_colour(colour)
        _ = T.comps
        return T
    except Exception:
        return None


def _generic(S: State, order: LegalOrder, P: SpecialPath, anchor_edge: int) -> State | None:
    G = S.graph
    i0 = order.i(P.start)
    locked = set()
    for w in order.H:
        if w != S.root and order.i(w) < i0:
            for b in range(S.k):
                locked.add(S.parent_edge[b][w])
    cls = [c if c != RED else -1 for c in S.colour]
    cls[P.last_edge] = -1
    fs = _Forests(G, S.k, cls)
    ok, _ = fs.augment([anchor_edge], range(S.k), locked)
    if not ok:
        return None
    colour = [c if c >= 0 else RED for c in fs.cls]
    return _try_state(S, colour)
