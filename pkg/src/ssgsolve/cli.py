"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 the requested solver does not apply.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

import numpy as np

from .core import GraphKind, Instance, ProblemKind, parse_instance, serialize_instance, validate_solution
from .digraph import Digraph, is_acyclic, is_bioriented_clique, is_transitive_tournament
from .errors import InfeasibleSolution, NotADagError, NotDecomposableError, ParseError, SsgError, TooLargeError
from .expressions import Expr, FlatTree, Leaf, Parallel, decompose_msp, flatten, to_text
from .generate import random_instance
from .oracle import brute_force
from .ssg import (
    SsgTables,
    solve_ssg_bioriented_clique,
    solve_ssg_cograph,
    solve_ssg_general,
    solve_ssg_msp,
    solve_ssg_sp,
    solve_ssg_transitive_tournament,
)
from .ssgw import SsgwTables, solve_ssgw_cograph, solve_ssgw_msp, solve_ssp, ssp_tables


class Inapplicable(SsgError):
    pass


class _Parser(argparse.ArgumentParser):
    # bad flags are input errors (exit 1), not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def table_rows(tree: FlatTree) -> list[int]:
    """Leaves by item id, then inner nodes by height, left to right."""
    leaves = [i for i, node in enumerate(tree.nodes) if isinstance(node, Leaf)]
    inner = [i for i, node in enumerate(tree.nodes) if not isinstance(node, Leaf)]
    leaves.sort(key=lambda i: tree.nodes[i].item)
    first = _left_to_right(tree)
    inner.sort(key=lambda i: (tree.height[i], first[i]))
    return leaves + inner


def _left_to_right(tree: FlatTree) -> list[int]:
    # rank of each node by the position of its leftmost leaf
    first = [0] * len(tree.nodes)
    counter = 0
    for i, node in enumerate(tree.nodes):
        if isinstance(node, Leaf):
            first[i] = counter
            counter += 1
        else:
            first[i] = first[tree.left[i]]
    return first


def _cells(row: np.ndarray, c: int) -> list[str]:
    padded = np.zeros(c + 1, dtype=bool)
    padded[: len(row)] = row[: c + 1]
    return ["1" if b else "0" for b in padded]


def render_vectors(tree: FlatTree, vectors: list[np.ndarray], c: int, title: str) -> str:
    lines = [f"TABLE {title}", "\t".join(["X'"] + [str(s) for s in range(c + 1)])]
    order = table_rows(tree)
    for i in order:
        lines.append("\t".join([to_text(tree.nodes[i])] + _cells(vectors[i], c)))
    return "\n".join(lines)


def render_ssg(tables: SsgTables) -> str:
    return render_vectors(tables.tree, tables.f, tables.capacity, "F")


def render_ssgw(tables: SsgwTables) -> str:
    c = tables.capacity
    parts = [render_vectors(tables.tree, tables.hp, c, "H'")]
    blocks = c + 1
    header = ["X'"] + [f"s'={t}:s={s}" for t in range(blocks) for s in range(c + 1)]
    lines = [f"TABLE H ({tables.tracked})", "\t".join(header)]
    for i in table_rows(tables.tree):
        full = np.zeros((c + 1, blocks), dtype=bool)
        h = tables.h[i]
        full[: h.shape[0], : h.shape[1]] = h
        cells = ["1" if full[s, t] else "0" for t in range(blocks) for s in range(c + 1)]
        lines.append("\t".join([to_text(tables.tree.nodes[i])] + cells))
    parts.append("\n".join(lines))
    return "\n\n".join(parts)


def _arcless_expr(n: int) -> Expr:
    expr: Expr = Leaf(1)
    for j in range(2, n + 1):
        expr = Parallel(expr, Leaf(j))
    return expr


def solve_instance(inst: Instance, max_components: int = 24):
    """Pick the solver for the instance; returns (opt, solution, tables text or None)."""
    g = inst.graph
    sizes, c = inst.sizes, inst.capacity
    if inst.kind is ProblemKind.SSP:
        x = g.expr if g.expr is not None else _arcless_expr(inst.n)
        res = solve_ssp(x, sizes, c)
        return res.opt, res.solution, render_vectors(flatten(x), ssp_tables(x, sizes, c), c, "H'")
    if inst.kind is ProblemKind.SSG:
        if g.kind is GraphKind.DICO:
            res = solve_ssg_cograph(g.expr, sizes, c)
            return res.opt, res.solution, render_ssg(res.tables)
        if g.kind is GraphKind.MSP:
            res = solve_ssg_msp(g.expr, sizes, c)
            return res.opt, res.solution, render_ssg(res.tables)
        return (*_solve_ssg_edges(g.edges, sizes, c, max_components), None)
    # weak constraint: only the expression programs apply
    if g.kind is GraphKind.DICO:
        res = solve_ssgw_cograph(g.expr, sizes, c)
    elif g.kind is GraphKind.MSP:
        res = solve_ssgw_msp(g.expr, sizes, c)
    else:
        try:
            x = decompose_msp(g.edges)
        except (NotADagError, NotDecomposableError):
            raise Inapplicable("ssgw on an edge list needs a minimal series-parallel digraph") from None
        res = solve_ssgw_msp(x, sizes, c)
    return res.opt, res.solution, render_ssgw(res.tables)


def _solve_ssg_edges(g: Digraph, sizes, c, max_components):
    if is_bioriented_clique(g):
        return solve_ssg_bioriented_clique(g, sizes, c)
    if is_transitive_tournament(g) is not None:
        return solve_ssg_transitive_tournament(g, sizes, c)
    if is_acyclic(g):
        try:
            return solve_ssg_sp(g, sizes, c)
        except NotDecomposableError:
            pass
    try:
        return solve_ssg_general(g, sizes, c, max_components)
    except TooLargeError as err:
        raise Inapplicable(str(err)) from None


def _read(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def cmd_solve(args) -> int:
    inst = _read(args.file)
    opt, solution, tables = solve_instance(inst, args.max_components)
    print(f"OPT {opt}")
    if args.emit_solution:
        print(" ".join(["SOLUTION"] + [str(j) for j in solution.ids()]))
    if args.emit_tables:
        if tables is None:
            print("no tables: solved without an expression-tree program", file=sys.stderr)
        else:
            print(tables)
    return 0


def _tracked_for(inst: Instance) -> str:
    return "sinks" if inst.graph.kind is GraphKind.MSP else "sources"


def cmd_oracle(args) -> int:
    inst = _read(args.file)
    g = inst.digraph
    if inst.kind is ProblemKind.SSP:
        g = Digraph.from_arcs(inst.n, ())
    if inst.kind is ProblemKind.SSGW:
        spec = brute_force(g, inst.sizes, inst.capacity, _tracked_for(inst))
        pairs = " ".join(f"({s},{t})" for s, t in sorted(spec.ssgw))
        print(f"SPECTRUM {pairs}")
        print(f"TRACKED {spec.tracked}")
        print(f"OPT {spec.opt_ssgw}")
    else:
        spec = brute_force(g, inst.sizes, inst.capacity)
        print("SPECTRUM " + " ".join(str(s) for s in sorted(spec.ssg)))
        print(f"OPT {spec.opt_ssg}")
    return 0


def cmd_check(args) -> int:
    inst = _read(args.file)
    raw = [tok for tok in args.set.replace(" ", "").split(",") if tok]
    try:
        chosen = {int(tok) for tok in raw}
    except ValueError:
        raise ParseError(f"--set expects comma-separated item ids, got {args.set!r}") from None
    try:
        sol = validate_solution(inst, chosen)
    except InfeasibleSolution as err:
        witness = err.witness if err.reason == "capacity" else f"v{err.witness}"
        print(f"INFEASIBLE {err.reason} {witness}")
        return 0
    print(f"FEASIBLE {sol.total}")
    return 0


def cmd_gen(args) -> int:
    if args.n < 1 or args.max_size < 1 or args.c < args.max_size:
        raise ParseError("need n >= 1 and c >= max-size >= 1")
    rng = random.Random(args.seed)
    inst = random_instance(rng, args.n, args.cls, args.c, args.max_size, args.problem)
    sys.stdout.write(serialize_instance(inst))
    return 0


def export_ip(inst: Instance) -> str:
    """Binary program in lp_solve LP syntax (``max:`` objective, named rows, ``bin``)."""
    ids = sorted(inst.sizes)
    weighted = " + ".join(f"{inst.sizes[j]} x{j}" for j in ids)
    lines = [
        f"/* problem {inst.kind.value}, {inst.n} items, capacity {inst.capacity} */",
        f"max: {weighted};",
        "",
        f"capacity: {weighted} <= {inst.capacity};",
    ]
    g = inst.digraph
    if inst.kind is ProblemKind.SSG:
        for u, v in sorted(g.arcs):
            lines.append(f"arc_{u}_{v}: x{u} - x{v} <= 0;")
    elif inst.kind is ProblemKind.SSGW:
        for v in ids:
            preds = sorted(g.pred[v])
            if preds:
                lhs = " + ".join(f"x{u}" for u in preds)
                lines.append(f"weak_{v}: {lhs} - x{v} <= {len(preds) - 1};")
    lines += ["", "bin " + ", ".join(f"x{j}" for j in ids) + ";"]
    return "\n".join(lines) + "\n"


def cmd_export_ip(args) -> int:
    sys.stdout.write(export_ip(_read(args.file)))
    return 0


def cmd_decompose(args) -> int:
    inst = _read(args.file)
    if inst.graph.kind is not GraphKind.EDGES:
        raise ParseError("decompose needs a 'graph edges' instance")
    try:
        x = decompose_msp(inst.graph.edges)
    except (NotADagError, NotDecomposableError) as err:
        raise Inapplicable(str(err)) from None
    print(to_text(x))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ssgsolve",
        description="Subset sum under (weak) digraph constraints on co-graphs and series-parallel digraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument("--emit-tables", action="store_true", help="print the DP tables (tab separated)")
    p.add_argument("--emit-solution", action="store_true", help="print the chosen item ids")
    p.add_argument("--max-components", type=int, default=24, help="component limit for general digraphs")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive feasible-size spectrum (n <= 24)")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check", help="check one candidate set")
    p.add_argument("file")
    p.add_argument("--set", default="", help="comma-separated item ids, e.g. 2,3,4")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--class", dest="cls", choices=("dico", "msp"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, default=20)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--problem", choices=[k.value for k in ProblemKind], default="ssg")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export-ip", help="write the binary integer program in LP format")
    p.add_argument("file")
    p.set_defaults(func=cmd_export_ip)

    p = sub.add_parser("decompose", help="msp-expression for an edge-list DAG")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else 1
    try:
        return args.func(args)
    except (Inapplicable, TooLargeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (SsgError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
