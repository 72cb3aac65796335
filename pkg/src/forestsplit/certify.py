"""Checking decompositions and building density certificates at stuck states.

``verify`` is independent of the engine and only looks at the edge classes.
The rest works on a stuck engine state: the red components of the
exploration subgraph H are grouped, each small component is assigned to a
larger one, and if every group is dense enough then H itself violates
sparseness. Every ratio is an exact ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import MultiGraph, UnionFind, induced_subgraph
from .sparsity import beta, beta_value


# -- verification ---------------------------------------------------------------

@dataclass
class VerifyReport:
    ok: bool
    problems: list[str]
    bounded_classes: list[int]  # classes whose components all have at most d edges

    @property
    def bounded_class(self) -> int | None:
        return self.bounded_classes[-1] if self.bounded_classes else None

    def to_json(self) -> dict:
        return {"ok": self.ok, "problems": self.problems, "bounded_classes": self.bounded_classes,
                "bounded_class": self.bounded_class}


def verify(G: MultiGraph, k: int, d: int, forests) -> VerifyReport:
    """Check that ``forests`` splits E(G) into k+1 forests, one with components of at most d edges."""
    problems = []
    forests = [list(f) for f in forests]
    if len(forests) != k + 1:
        problems.append(f"expected {k + 1} classes, got {len(forests)}")
    count = [0] * G.m
    for f in forests:
        for eid in f:
            if not (isinstance(eid, int) and 0 <= eid < G.m):
                problems.append(f"edge id {eid!r} out of range")
            else:
                count[eid] += 1
    for eid, c in enumerate(count):
        if c == 0:
            problems.append(f"edge {eid} is not assigned")
        elif c > 1:
            problems.append(f"edge {eid} is assigned {c} times")
    bounded = []
    for idx, f in enumerate(forests):
        uf = UnionFind(G.n)
        acyclic = True
        for eid in f:
            if not (isinstance(eid, int) and 0 <= eid < G.m):
                continue
            u, v = G.edges[eid]
            if not uf.union(u, v):
                acyclic = False
        if not acyclic:
            problems.append(f"class {idx} contains a cycle")
            continue
        sizes: dict[int, int] = {}
        for eid in f:
            if isinstance(eid, int) and 0 <= eid < G.m:
                r = uf.find(G.edges[eid][0])
                sizes[r] = sizes.get(r, 0) + 1
        if all(s <= d for s in sizes.values()):
            bounded.append(idx)
    if not bounded:
        problems.append(f"no class has all components with at most {d} edges")
    return VerifyReport(not problems, problems, bounded)


# -- arithmetic -------------------------------------------------------------------

@dataclass(frozen=True)
class DensityCheck:
    value: Fraction
    threshold: Fraction
    ok: bool

    def to_json(self) -> dict:
        return {"value": str(self.value), "threshold": str(self.threshold), "ok": self.ok}


def density_check(e_K: int, v_K: int, assignees: list[tuple[int, int]], k: int, d: int) -> DensityCheck:
    """(e(K) + sum e(C)) / (v(K) + sum v(C)) against d/(d+k+1); assignees are (edges, vertices)."""
    e = e_K + sum(a for a, _ in assignees)
    v = v_K + sum(b for _, b in assignees)
    value = Fraction(e, v)
    threshold = Fraction(d, d + k + 1)
    return DensityCheck(value, threshold, value >= threshold)


def grouped_density(e_K: int, q0: int, q1: Fraction | int) -> Fraction:
    """Density of a tree component with e_K edges plus q0 isolated vertices and 2*q1 single edges."""
    ones = 2 * Fraction(q1)
    return Fraction(e_K + ones) / (e_K + 1 + 2 * ones + q0)


# -- structure of a stuck state ---------------------------------------------------

@dataclass
class ComponentPartition:
    root: int
    large: list[int]  # not small and not the root component
    small: list[int]  # at most one edge


def partition_components(S, order) -> ComponentPartition:
    """Split the red components of H into the root component, large ones and small ones."""
    root = order.comps[0]
    large, small = [], []
    for c in order.comps[1:]:
        (small if S.comp_size(c) <= 1 else large).append(c)
    return ComponentPartition(root, large, small)


@dataclass
class SinkSequence:
    tree: int
    links: list[tuple[int, int]]  # (component id, vertex)

    @property
    def end(self) -> int:
        return self.links[-1][0]


def _bad_reason(S, order, K: int, b: int, nbs):
    """(x-neighbour, edgeless child) pairs making K bad in tree b."""
    group = [nb for nb in nbs if nb.tree == b]
    if len(group) < 2:
        return []
    edgeless = [nb for nb in group if nb.kind == "small-child" and nb.c == 0]
    return [(nx, ny) for ny in edgeless for nx in group if nx is not ny]


def sink_sequences(S, order, b: int) -> tuple[list[SinkSequence], list[str]]:
    """Sink sequences for tree b, one per bad component with a one-edge relevant neighbour.

    Returns the sequences and structural-violation messages (a feeder vertex
    inside the bad component, a cycle, or a chain that cannot continue).
    """
    from .engine.neighbours import relevant_neighbours

    nbs = {K: relevant_neighbours(S, order, K) for K in order.comps}
    out, problems = [], []
    for K in order.comps[1:]:
        for nx, ny in _bad_reason(S, order, K, b, nbs[K]):
            if nx.c != 1:
                continue
            links = [(K, nx.x)]
            cur, cur_y = K, ny.x
            visited = {K}
            while True:
                y = cur_y
                if S.red_degree(y) != 1:
                    problems.append(f"vertex {y} of a bad component is not a red leaf")
                    break
                n_y = S.graph.other(S.red_adj[y][0], y)
                path = S.tree_path_up(b, n_y, y)
                if path is None or len(path) < 2:
                    problems.append(f"no blue path from {n_y} to {y} in tree {b}")
                    break
                z = path[-2]
                if S.comp_of(z) == cur:
                    problems.append(f"feeder {z} of bad component lies inside it")
                    break
                nxt = S.comp_of(z)
                if nxt in visited:
                    problems.append("sink sequence revisits a component")
                    break
                visited.add(nxt)
                links.append((nxt, z))
                reasons = [(p, q) for p, q in _bad_reason(S, order, nxt, b, nbs.get(nxt, []))
                           if p.x == z]
                if not reasons:
                    break
                cur, cur_y = nxt, reasons[0][1].x
            if len(links) >= 2 and not any(p for p in problems if "feeder" in p or "revisits" in p):
                out.append(SinkSequence(b, links))
    # at most one sequence per start
    uniq = {}
    for sq in out:
        uniq.setdefault(tuple(sq.links), sq)
    return list(uniq.values()), problems


@dataclass
class Assignment:
    target: dict[int, int]  # small component -> large component
    q0: dict[int, int]
    ones: dict[int, int]
    problems: list[str] = field(default_factory=list)

    def q1(self, K: int) -> Fraction:
        return Fraction(self.ones.get(K, 0), 2)

    def preimage(self, K: int) -> list[int]:
        return sorted(c for c, t in self.target.items() if t == K)


def build_assignment(S, order) -> Assignment:
    """Assign each small component to a large one and tally the counts."""
    from .engine.neighbours import relevant_neighbours

    part = partition_components(S, order)
    seqs: dict[tuple[int, int, int], int] = {}
    problems: list[str] = []
    for b in range(S.k):
        found, probs = sink_sequences(S, order, b)
        problems += probs
        for sq in found:
            seqs[(b,) + sq.links[0]] = sq.end
    nbs = {K: relevant_neighbours(S, order, K) for K in order.comps}
    target, q0, ones = {}, {}, {}
    for C in part.small:
        pos = order.position(C)
        x, _, b, _ = order.generators[pos - 1]
        K = S.comp_of(x)
        if K == part.root:
            problems.append(f"small component {C} is a child of the root component")
            continue
        if S.comp_size(K) <= 1:
            problems.append(f"small component {C} has a small parent")
            continue
        dest = K
        if S.comp_size(C) == 1:
            bad = any(nx.x == x and nx.comp == C for nx, _ in _bad_reason(S, order, K, b, nbs[K]))
            if bad:
                end = seqs.get((b, K, x))
                if end is None:
                    problems.append(f"no sink sequence for bad component {K}")
                    continue
                dest = end
        target[C] = dest
        if S.comp_size(C) == 0:
            q0[dest] = q0.get(dest, 0) + 1
        else:
            ones[dest] = ones.get(dest, 0) + 1
    A = Assignment(target, q0, ones, problems)
    for K in part.large:
        eK, z, o = S.comp_size(K), q0.get(K, 0), ones.get(K, 0)
        if eK < S.d - 1 and (z or o):
            problems.append(f"component {K} with {eK} edges received assignees")
        elif eK == S.d - 1 and (z or o > S.k):
            problems.append(f"component {K} with d-1 edges received {z} edgeless and {o} one-edge assignees")
        elif eK >= S.d and z + A.q1(K) > S.k:
            problems.append(f"component {K} exceeds q0 + q1 <= k")
    return A


# -- the certificate ------------------------------------------------------------

class InternalInconsistency(AssertionError):
    pass


@dataclass
class DenseWitness:
    vertices: tuple[int, ...]
    beta: int
    certificate: dict | None = None

    def to_json(self) -> dict:
        out = {"kind": "dense", "beta": self.beta, "witness_vertices": list(self.vertices)}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


@dataclass
class CertificateFailure:
    reasons: list[str]
    certificate: dict


def structure_diagnostics(S, order) -> list[str]:
    """Components with more than two relevant neighbours from one tree (an unexploited move)."""
    from .engine.neighbours import relevant_neighbours

    out = []
    for K in order.comps:
        per_tree: dict[int, int] = {}
        for nb in relevant_neighbours(S, order, K):
            per_tree[nb.tree] = per_tree.get(nb.tree, 0) + 1
        for b, c in sorted(per_tree.items()):
            if c > 2:
                out.append(f"component {K} has {c} relevant neighbours in tree {b}")
            if K == order.comps[0] and c:
                out.append(f"root component has {c} relevant neighbours in tree {b}")
    return out


def dense_witness(S, order=None) -> DenseWitness | CertificateFailure:
    """Try to certify that the exploration subgraph of a stuck state is too dense."""
    from .engine.order import minimal_legal_order

    if order is None:
        order = minimal_legal_order(S)
    k, d = S.k, S.d
    part = partition_components(S, order)
    A = build_assignment(S, order)
    reasons = list(A.problems)
    groups, checks = [], []
    for K in part.large:
        verts, edges = S.comps[K]
        members = A.preimage(K)
        chk = density_check(len(edges), len(verts),
                            [(S.comp_size(C), len(S.comps[C][0])) for C in members], k, d)
        checks.append({"component": K, **chk.to_json()})
        groups.append({"K_edges": list(edges), "K_vertices": list(verts),
                       "assignees": [{"vertices": list(S.comps[C][0]), "edges": list(S.comps[C][1])}
                                     for C in members]})
        if not chk.ok:
            reasons.append(f"group of component {K} has density {chk.value} < {chk.threshold}")
    unassigned = [C for C in part.small if C not in A.target]
    if unassigned:
        reasons.append(f"{len(unassigned)} small components are unassigned")
    H = tuple(sorted(order.H))
    sub = induced_subgraph(S.graph, H)
    b_val = beta(sub, k, d)
    cert = {"beta": b_val, "witness_vertices": list(H), "groups": groups, "checks": checks}
    if reasons:
        cert["failures"] = reasons
        return CertificateFailure(reasons, cert)
    # replay of the counting: H has k(v-1) blue edges plus its red edges
    e_red = sum(S.comp_size(c) for c in order.comps)
    if sub.m != k * (len(H) - 1) + e_red:
        raise InternalInconsistency("edge count of H does not split into blue and red parts")
    root_e, root_v = S.comp_size(part.root), len(S.comps[part.root][0])
    if root_e < d + 1 or root_v < d + 2:
        raise InternalInconsistency("root component is not oversized")
    if beta_value(len(H), sub.m, k, d) >= 0 or b_val >= 0:
        raise InternalInconsistency("all groups are dense enough but beta(H) is nonnegative")
    return DenseWitness(H, b_val, cert)
