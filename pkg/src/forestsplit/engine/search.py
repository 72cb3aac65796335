"""The decompose-or-refute driver."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..base import OverfullWitness, forest_decomposition, split_into_parts
from ..certify import DenseWitness, dense_witness, structure_diagnostics, verify
from ..graph import MultiGraph, induced_subgraph
from ..oracle import brute_force_decompose
from ..sparsity import beta, find_overfull, min_beta_subgraph
from .moves import SearchContext, improve, replay
from .order import AlreadyDone, minimal_legal_order, potential, select_root
from .state import RED, InvalidState, State

MAX_MOVES = 100_000


@dataclass
class TraceEntry:
    kind: str
    before: object
    after: object
    residue_dropped: bool
    recheck: bool | None = None  # debug mode: replay and recomputation agree


@dataclass
class Outcome:
    status: str  # "decomposition", "overfull", "dense" or "stuck"
    forests: list[list[int]] | None = None
    oversize_forest_index: int | None = None
    witness_vertices: list[int] = field(default_factory=list)
    moves_applied: int = 0
    stuck_diagnostics: dict | None = None
    trace: list[TraceEntry] = field(default_factory=list, repr=False)
    augmentations: list = field(default_factory=list, repr=False)
    oracle_used: bool = False
    witness_source: str | None = None  # "matroid", "certificate", "exploration" or "scan"

    def to_json(self) -> dict:
        out = {"status": self.status, "forests": self.forests,
               "oversize_forest_index": self.oversize_forest_index,
               "witness_vertices": self.witness_vertices, "moves_applied": self.moves_applied}
        if self.stuck_diagnostics is not None:
            out["stuck_diagnostics"] = self.stuck_diagnostics
        return out


class _PartStuck(Exception):
    def __init__(self, state: State | None, info: dict):
        super().__init__(info.get("reason", "stuck"))
        self.state = state
        self.info = info


def _solve_part(sub: MultiGraph, k: int, d: int, colour: list[int], ctx: SearchContext,
                out: Outcome) -> list[int]:
    """Drive one part to a state whose red components all have at most d edges."""
    try:
        _, root = select_root(sub, [e for e, c in enumerate(colour) if c == RED], d)
    except AlreadyDone:
        return colour
    try:
        S = State(sub, k, d, colour, root)
    except InvalidState as exc:
        raise _PartStuck(None, {"reason": f"invalid starting state: {exc}"})
    retried = False
    while not S.done:
        if out.moves_applied >= MAX_MOVES:
            raise _PartStuck(S, {"reason": "move limit reached"})
        mv, order = improve(ctx, S)
        if mv is None and not retried:
            # one more round with a larger budget before giving up
            retried = True
            saved = ctx.budget
            ctx.budget = saved * 4
            mv, order = improve(ctx, S)
            ctx.budget = saved
        if mv is None:
            raise _PartStuck(S, {"reason": "no improving move", "order_values": list(order.values)})
        T = mv.state
        dropped = T.residue_key < S.residue_key
        entry = TraceEntry(mv.kind, mv.before, mv.after, dropped)
        if ctx.debug_asserts:
            entry.recheck = _recheck(S, mv)
        out.trace.append(entry)
        out.moves_applied += 1
        if dropped and not T.done:
            _, r = select_root(sub, list(T.red_edges), d)
            T = T.with_colour(T.colour, root=r)
        S = T
        retried = False
    return list(S.colour)


def _recheck(S: State, mv) -> bool:
    """Replay the exchange steps and recompute the potential from scratch."""
    try:
        T = replay(S, mv.steps)
    except Exception:
        return False
    if mv.path is None and T.colour != mv.state.colour:
        return False
    fresh = potential(mv.state.with_colour(mv.state.colour))
    return fresh == mv.after and mv.after.better_than(mv.before)


def run(G: MultiGraph, k: int, d: int, oracle_threshold: int = 10, composite_depth: int = 3,
        debug_asserts: bool = False, budget: int = 4000) -> Outcome:
    """Split E(G) into k forests plus one forest with components of at most d edges, or refute.

    Returns an Outcome whose status is "decomposition" (verified), "overfull"
    or "dense" (witness re-validated independently), or "stuck".
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 1 <= d <= 2 * (k + 1):
        raise ValueError("d must satisfy 1 <= d <= 2(k+1)")
    ctx = SearchContext(composite_depth=composite_depth, budget=budget, debug_asserts=debug_asserts)
    out = Outcome("stuck", augmentations=ctx.augment_log)
    dec = forest_decomposition(G, k + 1)
    if isinstance(dec, OverfullWitness):
        out.status = "overfull"
        out.witness_vertices = list(dec.vertices)
        out.witness_source = "matroid"
        return out
    sizes = [0] * (k + 1)
    for c in dec.assignment:
        sizes[c] += 1
    f_cls = min(range(k + 1), key=lambda c: (sizes[c], c))
    relabel = {c: i for i, c in enumerate(c for c in range(k + 1) if c != f_cls)}
    relabel[f_cls] = k
    cls, parts = split_into_parts(G, k, [relabel[c] for c in dec.assignment])
    final = list(cls)
    for part in parts:
        sub = induced_subgraph(G, part.vertices)
        colour = [c if c < k else RED for c in part.cls]
        try:
            local = _solve_part(sub.graph, k, d, colour, ctx, out)
        except _PartStuck as stuck:
            res = _handle_stuck(G, sub, k, d, stuck, oracle_threshold, out)
            if res is None:
                return out
            local = res
        for j, eid in enumerate(sub.edge_ids):
            final[eid] = local[j] if local[j] != RED else k
    forests: list[list[int]] = [[] for _ in range(k + 1)]
    for eid, c in enumerate(final):
        forests[c].append(eid)
    rep = verify(G, k, d, forests)
    if not rep.ok or k not in rep.bounded_classes:
        out.status = "stuck"
        out.stuck_diagnostics = {"reason": "assembled decomposition failed verification",
                                 "problems": rep.problems}
        return out
    out.status = "decomposition"
    out.forests = forests
    out.oversize_forest_index = k
    return out


def _handle_stuck(G: MultiGraph, sub, k: int, d: int, stuck: _PartStuck, threshold: int,
                  out: Outcome) -> list[int] | None:
    """Certificate, then oracle. Returns a local colouring or None after filling ``out``."""
    diag = dict(stuck.info)
    diag["part_vertices"] = list(sub.vertices)
    S = stuck.state
    if S is not None:
        order = minimal_legal_order(S)
        diag["structure"] = structure_diagnostics(S, order)
        cert = dense_witness(S, order)
        if isinstance(cert, DenseWitness):
            verts = [sub.vertices[v] for v in cert.vertices]
            if beta(induced_subgraph(G, verts).graph, k, d) < 0:
                out.status = "dense"
                out.witness_vertices = verts
                out.witness_source = "certificate"
                return None
            diag["certificate"] = "rejected by independent beta check"
        else:
            diag["certificate"] = cert.reasons
        Hs = induced_subgraph(S.graph, order.H)
        if beta(Hs.graph, k, d) < 0:
            out.status = "dense"
            out.witness_vertices = [sub.vertices[v] for v in Hs.vertices]
            out.witness_source = "exploration"
            return None
    if sub.n <= threshold:
        out.oracle_used = True
        verdict = brute_force_decompose(sub.graph, k, d, max_vertices=threshold, max_edges=None)
        diag["oracle"] = {"feasible": verdict.feasible, "nodes": verdict.nodes}
        if verdict.feasible:
            return [c if c < k else RED for c in verdict.assignment]
        rep = min_beta_subgraph(sub.graph, k, d)
        if rep.value < 0:
            out.status = "dense"
            out.witness_vertices = [sub.vertices[v] for v in rep.witness]
            out.witness_source = "scan"
            return None
        wit = find_overfull(sub.graph, k + 1)
        if wit is not None:
            out.status = "overfull"
            out.witness_vertices = [sub.vertices[v] for v in wit]
            out.witness_source = "scan"
            return None
    out.status = "stuck"
    out.stuck_diagnostics = diag
    return None
