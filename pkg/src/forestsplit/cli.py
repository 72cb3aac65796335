"""Command-line interface.

Exit codes: 0 success, 1 a negative answer (verify failed, oracle
infeasible, generate gave up), 2 parse or usage error, 3 a witness was
returned, 4 the engine got stuck.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certify import verify
from .engine import run
from .graph import GraphFormatError, MultiGraph, parse_edge_list, serialize
from .instances import generate_sparse, named
from .oracle import OracleRefusal, brute_force_decompose
from .sparsity import find_overfull, fractional_arboricity, min_beta_subgraph

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_WITNESS, EXIT_STUCK = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def load_graph(source: str) -> MultiGraph:
    """A path to an edge-list file, ``-`` for stdin, or ``named:<name>``."""
    if source.startswith("named:"):
        try:
            return named(source[len("named:"):])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}") from None
    return parse_edge_list(text)


def _check_kd(args):
    if args.k < 1:
        raise UsageError("k must be at least 1")
    if not 1 <= args.d <= 2 * (args.k + 1):
        raise UsageError("d must satisfy 1 <= d <= 2(k+1)")


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        text = json.dumps(payload, indent=2, sort_keys=True)
        if args.json == "-":
            print(text)
        else:
            Path(args.json).write_text(text + "\n")
            print("\n".join(lines))
    else:
        print("\n".join(lines))


def cmd_analyze(args) -> int:
    G = load_graph(args.graph)
    _check_kd(args)
    rep = min_beta_subgraph(G, args.k, args.d)
    lines = [f"vertices: {G.n}", f"edges: {G.m}"]
    payload = {"vertices": G.n, "edges": G.m, "min_beta": rep.to_json(), "min_beta_exact": rep.exact}
    if G.n >= 2:
        arb = fractional_arboricity(G)
        lines.append(f"fractional arboricity: {arb.value} at {list(arb.witness)}")
        payload["fractional_arboricity"] = arb.to_json()
    over = find_overfull(G, args.k + 1)
    sparse = "yes" if rep.sparse else "no"
    lines.append(f"min beta: {rep.value} at {list(rep.witness)}" + ("" if rep.exact else " (upper bound)"))
    lines.append(f"({args.k},{args.d})-sparse: {sparse}")
    lines.append(f"{args.k + 1}-overfull: " + ("no" if over is None else f"yes at {list(over)}"))
    payload["sparse"] = rep.sparse
    payload["overfull"] = None if over is None else list(over)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_decompose(args) -> int:
    G = load_graph(args.graph)
    _check_kd(args)
    out = run(G, args.k, args.d, oracle_threshold=args.oracle_threshold,
              composite_depth=args.composite_depth, debug_asserts=args.debug_asserts)
    payload = out.to_json()
    lines = [f"status: {out.status}", f"moves applied: {out.moves_applied}"]
    if out.forests is not None:
        for i, f in enumerate(out.forests):
            tag = " (bounded)" if i == out.oversize_forest_index else ""
            lines.append(f"forest {i}{tag}: {f}")
    if out.witness_vertices:
        lines.append(f"witness vertices: {out.witness_vertices}")
    if out.stuck_diagnostics:
        lines.append(f"diagnostics: {json.dumps(out.stuck_diagnostics, sort_keys=True)}")
    _emit(args, payload, lines)
    return {"decomposition": EXIT_OK, "overfull": EXIT_WITNESS, "dense": EXIT_WITNESS}.get(out.status, EXIT_STUCK)


def cmd_verify(args) -> int:
    G = load_graph(args.graph)
    _check_kd(args)
    try:
        data = json.loads(Path(args.decomposition).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read decomposition: {exc}") from None
    forests = data.get("forests") if isinstance(data, dict) else data
    if not isinstance(forests, list):
        raise UsageError("decomposition JSON has no forests list")
    rep = verify(G, args.k, args.d, forests)
    lines = ["pass" if rep.ok else "fail"] + [f"  {p}" for p in rep.problems]
    if rep.ok:
        lines.append(f"bounded class: {rep.bounded_class}")
    _emit(args, rep.to_json(), lines)
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_oracle(args) -> int:
    G = load_graph(args.graph)
    _check_kd(args)
    try:
        v = brute_force_decompose(G, args.k, args.d, max_vertices=args.max_vertices,
                                  max_edges=args.max_edges)
    except OracleRefusal as exc:
        raise UsageError(str(exc)) from None
    payload = {"feasible": v.feasible, "nodes": v.nodes, "forests": v.forests(),
               "oversize_forest_index": args.k if v.feasible else None}
    lines = [f"feasible: {'yes' if v.feasible else 'no'}", f"nodes: {v.nodes}"]
    if v.feasible:
        lines += [f"forest {i}: {f}" for i, f in enumerate(v.forests())]
    _emit(args, payload, lines)
    return EXIT_OK if v.feasible else EXIT_NO


def cmd_generate(args) -> int:
    _check_kd(args)
    if args.n < 2 or args.m < args.n - 1:
        raise UsageError("need n >= 2 and m >= n-1")
    g = generate_sparse(args.n, args.m, args.k, args.d, args.seed, budget=args.budget)
    if g.graph is None:
        print(f"no instance after {g.attempts} attempts "
              f"({g.rejected_dense} dense, {g.rejected_overfull} overfull)", file=sys.stderr)
        return EXIT_NO
    text = f"# n={args.n} m={args.m} k={args.k} d={args.d} seed={args.seed}\n" + serialize(g.graph)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestsplit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("graph", help="edge-list file, '-' for stdin, or named:<name>")
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--json", metavar="PATH", help="write JSON to PATH ('-' for stdout)")

    sp = sub.add_parser("analyze", help="sparsity and arboricity report")
    common(sp)
    sp.set_defaults(fn=cmd_analyze)

    sp = sub.add_parser("decompose", help="run the engine")
    common(sp)
    sp.add_argument("--oracle-threshold", type=int, default=10)
    sp.add_argument("--composite-depth", type=int, default=3)
    sp.add_argument("--debug-asserts", action="store_true")
    sp.add_argument("--seed", type=int, default=0, help="accepted for uniformity; runs are deterministic")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("verify", help="check a decomposition JSON")
    sp.add_argument("graph")
    sp.add_argument("decomposition")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--json", metavar="PATH")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("oracle", help="exhaustive search")
    common(sp)
    sp.add_argument("--max-vertices", type=int, default=10)
    sp.add_argument("--max-edges", type=int, default=16)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("generate", help="random sparse instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(fn=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
