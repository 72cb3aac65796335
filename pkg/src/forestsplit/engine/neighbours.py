"""Relevant neighbours of red components and the two-neighbour case split."""

from __future__ import annotations

from dataclasses import dataclass

from .order import LegalOrder
from .state import RejectedMove, State


@dataclass(frozen=True)
class Neighbour:
    comp: int  # red component id of the neighbour
    kind: str  # "small-child" or "interesting"
    tree: int
    x: int  # generating arc (x, x') with x in K
    xp: int
    c: int  # 0 if the neighbour is edgeless, else 1
    xbar: int
    xbarp: int
    n_xp: int | None = None  # red neighbour of x' (interesting only)

    @property
    def interesting(self) -> bool:
        return self.kind == "interesting"


def small_children(S: State, order: LegalOrder, K: int) -> list[Neighbour]:
    out = []
    for pos in range(2, len(order.comps) + 1):
        C = order.comps[pos - 1]
        gen = order.generators[pos - 1]
        if S.comp_size(C) > 1 or S.comp_of(gen[0]) != K:
            continue
        x, xp, b, _ = gen
        out.append(Neighbour(C, "small-child", b, x, xp, S.comp_size(C), x, xp))
    return out


def interesting_neighbours(S: State, order: LegalOrder, K: int) -> list[Neighbour]:
    out = []
    children_of = {}
    for pos in range(2, len(order.comps) + 1):
        children_of[order.comps[pos - 1]] = S.comp_of(order.generators[pos - 1][0])
    for x in S.comps[K][0]:
        if x == S.root:
            continue
        for b in range(S.k):
            xp = S.parent[b][x]
            if xp == S.root or S.comp_of(xp) == K or S.red_degree(xp) != 1:
                continue
            L = S.comp_of(xp)
            n = S.graph.other(S.red_adj[xp][0], xp)
            xpp = S.parent[b][xp]
            M = S.comp_of(xpp)
            if S.comp_size(M) != 0 or children_of.get(M) != L:
                continue
            if not S.is_descendant(b, n, x):
                continue
            out.append(Neighbour(L, "interesting", b, x, xp, 1, xp, xpp, n))
    return out


def relevant_neighbours(S: State, order: LegalOrder, K: int) -> list[Neighbour]:
    """Small children of K plus interesting neighbours of K, sorted by (tree, x, x')."""
    out = small_children(S, order, K) + interesting_neighbours(S, order, K)
    out.sort(key=lambda nb: (nb.tree, nb.x, nb.xp, nb.kind))
    return out


def t_x(S: State, nb: Neighbour) -> State:
    """The state after the preparatory exchange of an interesting neighbour (else S)."""
    if not nb.interesting:
        return S
    eid = S.red_edge_between(nb.xp, nb.n_xp)
    return S.exchange(nb.tree, nb.x, eid)


@dataclass(frozen=True)
class CaseTwo:
    u: int
    v: int


@dataclass(frozen=True)
class CaseOne:
    u: int
    up: int
    vp: int
    v: int


def classify_pair(S: State, K: int, nx: Neighbour, ny: Neighbour, Tx: State | None = None):
    """Decide which of the two cases holds for neighbours generated by (x, x') and (y, y').

    Both arcs must come from the same tree, x and y must lie in K, y must
    not descend from x-bar in the prepared state and y' must differ from x'.
    Descendant sets are taken in the prepared state of x.
    """
    b = nx.tree
    x, y = nx.x, ny.x
    if ny.tree != b or S.comp_of(x) != K or S.comp_of(y) != K:
        raise ValueError("neighbours must come from the same tree and from K")
    if ny.xp == nx.xp:
        raise ValueError("y' equals x'")
    if Tx is None:
        Tx = t_x(S, nx)
    if Tx.is_descendant(b, y, nx.xbar):
        raise ValueError("y descends from x-bar")
    path = Tx.red_path(x, y)
    if path is None:
        raise ValueError("x and y are not joined by a red path")
    n = len(path)
    inD = [Tx.is_descendant(b, p, nx.xbar) for p in path]
    underY = [Tx.is_descendant(b, p, y) for p in path]
    two = [i for i in range(n - 1) if inD[i] and not inD[i + 1] and underY[i + 1]]
    if two:
        i = max(two)
        return CaseTwo(path[i], path[i + 1])
    cands = [i for i in range(n - 2) if inD[i] and not inD[i + 1]]
    if not cands:
        raise ValueError("no boundary edge on the red path")
    i = max(cands)
    for j in range(i + 2, n):
        if underY[j] and not underY[j - 1]:
            return CaseOne(path[i], path[i + 1], path[j - 1], path[j])
    raise ValueError("no entry into the subtree of y")


def exchange_pair(S: State, b: int, u: int, a: int, c: int) -> State:
    """Exchange the arc out of u in tree b with the red edge ac."""
    eid = S.red_edge_between(a, c)
    if eid is None:
        raise RejectedMove("no red edge between the given vertices")
    return S.exchange(b, u, eid)
