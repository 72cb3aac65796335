"""Improving moves: special paths, single exchanges, named exchange recipes and
a bounded generic search over exchange sequences.

Every move is accepted only when the potential of the resulting state is
strictly below the potential of the current one, so a wrong guess in a
recipe costs time but never correctness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterator

from .neighbours import CaseTwo, Neighbour, classify_pair, relevant_neighbours
from .order import LegalOrder, Potential, minimal_legal_order, potential
from .special import (SpecialPath, augment_special_path, find_minimal_special_paths,
                      merge_keeps_residue)
from .state import InvalidState, RejectedMove, State

Step = tuple[int, int, int]  # (tree, tail vertex, red edge id)


@dataclass
class Move:
    kind: str  # "special-path", "single-exchange" or "composite:<recipe>"
    steps: list[Step]
    path: SpecialPath | None
    before: Potential
    after: Potential
    state: State


@dataclass
class SearchContext:
    """Per-run knobs and the audit trail of augmentations."""

    composite_depth: int = 3
    budget: int = 4000
    debug_asserts: bool = False
    augment_log: list = field(default_factory=list)  # (ok, violations) per augmentation
    evaluated: int = 0


def replay(S: State, steps: list[Step]) -> State:
    for b, u, eid in steps:
        S = S.exchange(b, u, eid)
    return S


# -- special paths ---------------------------------------------------------

def _augment(ctx: SearchContext, S: State, order: LegalOrder, P: SpecialPath) -> State | None:
    errs: list[str] = []
    try:
        T = augment_special_path(S, order, P, errs)
    except RejectedMove:
        if ctx.debug_asserts and errs:
            ctx.augment_log.append((False, errs))
        return None
    if ctx.debug_asserts:
        ctx.augment_log.append((True, []))
    return T


def crossing_arcs(S: State, order: LegalOrder) -> list[tuple[int, int, int]]:
    """Blue arcs (x, y, tree) of H between red components, in scan order."""
    out = []
    for x in order.H:
        if x == S.root:
            continue
        for b in range(S.k):
            y = S.parent[b][x]
            if S.comp_of(x) != S.comp_of(y):
                out.append((x, y, b))
    out.sort(key=lambda a: (order.i(a[0]), order.i(a[1]), a[0], a[1], a[2]))
    return out


def special_path_move(ctx: SearchContext, S: State, order: LegalOrder, pot: Potential) -> Move | None:
    """Scan crossing arcs whose merge keeps the residue and augment the first improving path."""
    seen = set()
    for x, y, b in crossing_arcs(S, order):
        if (x, y) in seen or not merge_keeps_residue(S, x, y):
            continue
        seen.add((x, y))
        for P in find_minimal_special_paths(S, order, x, y):
            T = _augment(ctx, S, order, P)
            if T is None:
                continue
            after = potential(T)
            if after.better_than(pot):
                return Move("special-path", [], P, pot, after, T)
    return None


# -- single exchanges ------------------------------------------------------

def exchange_candidates(S: State) -> Iterator[Step]:
    """Every legal (tree, tail, red edge) exchange, lowest ids first."""
    G = S.graph
    for eid in S.red_edges:
        v, vp = G.edges[eid]
        for b in range(S.k):
            # arcs on the tree path between v and vp, found via their lowest common ancestor
            anc = set()
            a = v
            while a != -1:
                anc.add(a)
                a = S.parent[b][a]
            a = vp
            while a not in anc:
                a = S.parent[b][a]
            lca = a
            tails = []
            a = v
            while a != lca:
                tails.append(a)
                a = S.parent[b][a]
            a = vp
            while a != lca:
                tails.append(a)
                a = S.parent[b][a]
            for u in sorted(tails):
                yield (b, u, eid)


def _try_steps(S: State, steps: list[Step]) -> State | None:
    try:
        return replay(S, steps)
    except (RejectedMove, InvalidState):
        return None


def single_exchange_move(ctx: SearchContext, S: State, order: LegalOrder, pot: Potential) -> Move | None:
    for step in exchange_candidates(S):
        T = _try_steps(S, [step])
        if T is None:
            continue
        after = potential(T)
        if after.better_than(pot):
            return Move("single-exchange", [step], None, pot, after, T)
    return None


# -- finishing a prepared state ---------------------------------------------

def _prefix_order(S: State, order: LegalOrder, T: State) -> LegalOrder | None:
    """A legal order of T keeping the longest unchanged prefix of ``order``."""
    key_t = {}
    for cid, (verts, edges) in enumerate(T.comps):
        key_t[(verts, edges)] = cid
    prefix = []
    for pos, c in enumerate(order.comps):
        cid = key_t.get(S.comps[c])
        if cid is None:
            break
        if pos == 0:
            if cid != T.root_comp:
                return None
            continue
        prefix.append(cid)
    try:
        return minimal_legal_order(T, prefix=prefix)
    except Exception:
        return None


def finish(ctx: SearchContext, S: State, order: LegalOrder, pot: Potential, T: State,
           arc: tuple[int, int] | None, kind: str, steps: list[Step]) -> Move | None:
    """Accept T if it is already better, else try special paths on ``arc`` in T."""
    ctx.evaluated += 1
    if T.root != S.root:
        return None
    after = potential(T)
    if after.better_than(pot):
        return Move(kind, steps, None, pot, after, T)
    if arc is None:
        return None
    a, ap = arc
    if T.comp_of(a) == T.comp_of(ap):
        return None
    orders = [minimal_legal_order(T)]
    alt = _prefix_order(S, order, T)
    if alt is not None and alt.comps != orders[0].comps:
        orders.append(alt)
    for o in orders:
        for P in find_minimal_special_paths(T, o, a, ap):
            U = _augment(ctx, T, o, P)
            if U is None:
                continue
            after = potential(U)
            if after.better_than(pot):
                return Move(kind, steps, P, pot, after, U)
    return None


# -- named recipes ------------------------------------------------------------

class _Builder:
    """Applies exchanges by vertex names and records them as steps."""

    def __init__(self, S: State):
        self.S = S
        self.steps: list[Step] = []

    def swap(self, b: int, u: int, a: int, c: int) -> "_Builder":
        eid = self.S.red_edge_between(a, c)
        if eid is None:
            raise RejectedMove("no such red edge")
        self.S = self.S.exchange(b, u, eid)
        self.steps.append((b, u, eid))
        return self

    def prepare(self, nb: Neighbour) -> "_Builder":
        if nb.interesting:
            self.swap(nb.tree, nb.x, nb.xp, nb.n_xp)
        return self


def _red_nbr(S: State, v: int) -> int:
    if S.red_degree(v) != 1:
        raise RejectedMove("vertex is not a red leaf")
    return S.graph.other(S.red_adj[v][0], v)


Recipe = Callable[[], tuple[State, list[Step], tuple[int, int] | None]]


def _root_swap(S: State, nb: Neighbour) -> Recipe:
    def go():
        B = _Builder(S).prepare(nb)
        T = B.S
        path = T.red_path(nb.x, T.root)
        if path is None:
            raise RejectedMove("x is not in the root component")
        i = next(i for i, p in enumerate(path) if not T.is_descendant(nb.tree, p, nb.xbar))
        B.swap(nb.tree, nb.xbar, path[i - 1], path[i])
        return B.S, B.steps, None
    return go


def _interesting_prep(S: State, nb: Neighbour) -> Recipe:
    def go():
        B = _Builder(S).prepare(nb)
        return B.S, B.steps, (nb.xp, S.parent[nb.tree][nb.xp])
    return go


def _pair_recipes(S: State, nx: Neighbour, ny: Neighbour, case) -> list[tuple[str, Recipe]]:
    b = nx.tree
    y, yp = ny.x, ny.xp
    out: list[tuple[str, Recipe]] = []

    if isinstance(case, CaseTwo):
        u, v = case.u, case.v

        def r52():
            B = _Builder(S).prepare(nx).swap(b, nx.xbar, u, v)
            if ny.interesting:
                B.swap(b, y, yp, _red_nbr(B.S, yp))
            return B.S, B.steps, (ny.xbar, S.parent[b][ny.xbar])
        out.append(("two-neighbours-case-two", r52))
        return out

    u, up, vp, v = case.u, case.up, case.vp, case.v

    def r61():
        B = _Builder(S).prepare(nx).swap(b, nx.xbar, u, up)
        return B.S, B.steps, None

    def r62():
        B = _Builder(S).prepare(nx).swap(b, nx.xbar, u, up)
        if ny.interesting:
            B.swap(b, y, yp, _red_nbr(B.S, yp))
        return B.S, B.steps, (ny.xbar, S.parent[b][ny.xbar])

    def r63():
        B = _Builder(S).prepare(nx)
        if ny.interesting:
            B.swap(b, y, yp, _red_nbr(B.S, yp))
        T = B.S
        path = T.red_path(up, v)
        if path is None:
            raise RejectedMove("u' and v are not red-connected")
        i = next(i for i, p in enumerate(path) if T.is_descendant(b, p, ny.xbar))
        if i == 0:
            raise RejectedMove("u' already below y-bar")
        B.swap(b, ny.xbar, path[i], path[i - 1])
        return B.S, B.steps, (nx.xbar, S.parent[b][nx.xbar])

    def r64():
        if not ny.interesting:
            raise RejectedMove("needs an interesting neighbour at y")
        B = _Builder(S).prepare(nx).swap(b, y, v, vp)
        B.swap(b, nx.xbar, yp, _red_nbr(B.S, yp))
        return B.S, B.steps, (yp, S.parent[b][yp])

    def r65():
        if not ny.interesting:
            raise RejectedMove("needs an interesting neighbour at y")
        B = _Builder(S).prepare(nx).swap(b, nx.xbar, u, up)
        B.swap(b, yp, yp, _red_nbr(B.S, yp))
        return B.S, B.steps, (y, yp)

    def r66():
        if not ny.interesting:
            raise RejectedMove("needs an interesting neighbour at y")
        B = _Builder(S).prepare(nx)
        T = B.S
        path = T.red_path(up, vp)
        if path is None:
            raise RejectedMove("u' and v' are not red-connected")
        i = next((i for i, p in enumerate(path) if not T.is_descendant(b, p, yp)), None)
        if not i:
            raise RejectedMove("no suitable edge")
        w, wp = path[i - 1], path[i]
        B.swap(b, nx.xbar, yp, _red_nbr(T, yp))
        B.swap(b, yp, w, wp)
        return B.S, B.steps, (y, yp)

    out += [("two-neighbours-case-one-a", r61), ("two-neighbours-case-one-b", r62),
            ("two-neighbours-case-one-c", r63), ("two-neighbours-case-one-d", r64),
            ("two-neighbours-case-one-e", r65), ("two-neighbours-case-one-f", r66)]
    return out


def _three_recipe(S: State, trio: tuple[Neighbour, Neighbour, Neighbour], K: int) -> Recipe:
    def go():
        nx, ny, nz = trio
        b = nx.tree
        B = _Builder(S).prepare(nx)
        for first, second in ((nx, ny), (ny, nz)):
            T = B.S
            case = classify_pair(S, K, first, second)
            y, yp = second.x, second.xp
            if isinstance(case, CaseTwo):
                B.swap(b, first.xbar, case.u, case.v)
                if second.interesting:
                    B.swap(b, y, yp, _red_nbr(B.S, yp))
            else:
                if second.interesting:
                    B.swap(b, first.xbar, _red_nbr(T, yp), yp)
                B.swap(b, y, _red_nbr(B.S, y), y)
        return B.S, B.steps, (nz.xbar, S.parent[b][nz.xbar])
    return go


def _bad_recipes(S: State, K: int, nx: Neighbour, ny: Neighbour) -> list[tuple[str, Recipe]]:
    """Recipes for a component with an edgeless child at y whose blue feeder z lies in K."""
    b = nx.tree
    y, yp = ny.x, ny.xp
    ny_ = _red_nbr(S, y)
    path = S.tree_path_up(b, ny_, y)
    if path is None or len(path) < 2:
        return []
    z = path[-2]
    if S.comp_of(z) != K or z == nx.x:
        return []
    fake = Neighbour(S.comp_of(y), "small-child", b, z, y, 0, z, y)
    try:
        case = classify_pair(S, K, nx, fake)
    except ValueError:
        return []
    out: list[tuple[str, Recipe]] = []
    if isinstance(case, CaseTwo):
        def r82():
            B = _Builder(S).prepare(nx).swap(b, nx.xbar, case.u, case.v)
            B.swap(b, z, ny_, y)
            return B.S, B.steps, (y, yp)
        out.append(("bad-feeder-case-two", r82))
        return out

    def r83():
        B = _Builder(S).prepare(nx).swap(b, z, z, case.vp)
        return B.S, B.steps, None

    def r84():
        B = _Builder(S).prepare(nx).swap(b, nx.xbar, case.u, case.up)
        return B.S, B.steps, (y, yp)

    def r85():
        B = _Builder(S).prepare(nx).swap(b, nx.xbar, ny_, y)
        B.swap(b, z, case.v, case.vp)
        return B.S, B.steps, (y, yp)

    out += [("bad-feeder-edgeless", r83), ("bad-feeder-order", r84), ("bad-feeder-main", r85)]
    return out


def named_recipes(S: State, order: LegalOrder) -> Iterator[tuple[str, Recipe]]:
    """Recipes triggered by the structure around each red component of H, root first."""
    for pos, K in enumerate(order.comps, start=1):
        nbs = relevant_neighbours(S, order, K)
        if pos == 1:
            for nb in nbs:
                yield "root-swap", _root_swap(S, nb)
            continue
        for nb in nbs:
            if nb.interesting:
                yield "interesting-neighbour", _interesting_prep(S, nb)
        by_tree: dict[int, list[Neighbour]] = {}
        for nb in nbs:
            by_tree.setdefault(nb.tree, []).append(nb)
        for b, group in sorted(by_tree.items()):
            for nx, ny in permutations(group, 2):
                if nx.comp == ny.comp or nx.xp == ny.xp:
                    continue
                try:
                    case = classify_pair(S, K, nx, ny)
                except (ValueError, RejectedMove, InvalidState):
                    continue
                yield from _pair_recipes(S, nx, ny, case)
                if isinstance(case, CaseTwo) and ny.c == 0 and ny.kind == "small-child":
                    yield from _bad_recipes(S, K, nx, ny)
            if len(group) >= 3:
                for trio in permutations(group, 3):
                    yield "three-neighbours", _three_recipe(S, trio, K)


def named_move(ctx: SearchContext, S: State, order: LegalOrder, pot: Potential) -> Move | None:
    for name, recipe in named_recipes(S, order):
        try:
            T, steps, arc = recipe()
        except (RejectedMove, InvalidState, ValueError, StopIteration):
            continue
        mv = finish(ctx, S, order, pot, T, arc, "composite:" + name, steps)
        if mv is None and name == "bad-feeder-edgeless":
            # the edgeless feeder swap keeps the order value; look one more step ahead
            To = minimal_legal_order(T)
            for arc2 in crossing_arcs(T, To)[:50]:
                mv = finish(ctx, S, order, pot, T, arc2[:2], "composite:" + name, steps)
                if mv is not None:
                    break
        if mv is not None:
            return mv
    return None


# -- generic search -------------------------------------------------------------

def _touched(S: State, T: State, steps: list[Step]) -> set[int]:
    verts = set()
    for _, u, eid in steps:
        verts.add(u)
        verts.update(S.graph.edges[eid])
    comps = {T.comp_of(v) for v in verts}
    for c in comps:
        verts.update(T.comps[c][0])
    return verts


def generic_move(ctx: SearchContext, S: State, order: LegalOrder, pot: Potential) -> Move | None:
    """Breadth-first over exchange sequences up to ``ctx.composite_depth``.

    From depth two on only exchanges touching the vertices moved so far
    (and their red components) are expanded. Each state is finished by a
    potential check and special paths on every crossing arc whose merge
    keeps the residue.
    """
    start = ctx.evaluated
    frontier: list[tuple[State, list[Step]]] = [(S, [])]
    seen = {S.colour}
    for depth in range(1, ctx.composite_depth + 1):
        nxt = []
        for T0, steps0 in frontier:
            local = _touched(S, T0, steps0) if steps0 else None
            for step in exchange_candidates(T0):
                if local is not None:
                    b, u, eid = step
                    if u not in local and not (set(T0.graph.edges[eid]) & local):
                        continue
                T = _try_steps(T0, [step])
                if T is None or T.colour in seen:
                    continue
                seen.add(T.colour)
                steps = steps0 + [step]
                if ctx.evaluated - start >= ctx.budget:
                    return None
                mv = finish(ctx, S, order, pot, T, None, "composite:generic", steps)
                if mv is None and not T.done:
                    To = minimal_legal_order(T)
                    for x, y, _ in crossing_arcs(T, To):
                        if merge_keeps_residue(T, x, y):
                            for P in find_minimal_special_paths(T, To, x, y):
                                U = _augment(ctx, T, To, P)
                                if U is None:
                                    continue
                                after = potential(U)
                                if after.better_than(pot):
                                    mv = Move("composite:generic", steps, P, pot, after, U)
                                    break
                        if mv is not None:
                            break
                if mv is not None:
                    return mv
                nxt.append((T, steps))
        frontier = nxt
    return None


def try_composite_moves(ctx: SearchContext, S: State, order: LegalOrder,
                        pot: Potential | None = None) -> Move | None:
    """Named recipes first, then the generic bounded search."""
    if pot is None:
        pot = potential(S, order)
    return named_move(ctx, S, order, pot) or generic_move(ctx, S, order, pot)


def improve(ctx: SearchContext, S: State) -> tuple[Move | None, LegalOrder]:
    order = minimal_legal_order(S)
    pot = potential(S, order)
    for stage in (special_path_move, single_exchange_move):
        mv = stage(ctx, S, order, pot)
        if mv is not None:
            return mv, order
    return try_composite_moves(ctx, S, order, pot), order
