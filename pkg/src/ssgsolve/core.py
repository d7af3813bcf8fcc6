"""Instances, solutions and the line-oriented instance file format.

::

    # comment
    problem ssp|ssg|ssgw
    capacity <c>
    items <n>
    size <id> <s>            (n lines, ids 1..n, 1 <= s <= c)
    graph dico <expr>        | graph msp <expr>
    graph edges              followed by  arc <u> <v>  lines and  end
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .digraph import Digraph, digraph_violation, weak_digraph_violation
from .errors import InfeasibleSolution, ParseError
from .expressions import (
    Expr,
    constraint_witness,
    eval_dico,
    eval_msp,
    leaves,
    parse_dico,
    parse_msp,
    to_text,
)


class ProblemKind(str, enum.Enum):
    SSP = "ssp"
    SSG = "ssg"
    SSGW = "ssgw"


class GraphKind(str, enum.Enum):
    DICO = "dico"
    MSP = "msp"
    EDGES = "edges"


@dataclass(frozen=True)
class GraphSpec:
    kind: GraphKind
    expr: Expr | None = None
    edges: Digraph | None = None

    @cached_property
    def digraph(self) -> Digraph:
        if self.kind is GraphKind.DICO:
            return eval_dico(self.expr)
        if self.kind is GraphKind.MSP:
            return eval_msp(self.expr)
        return self.edges


@dataclass(frozen=True)
class Instance:
    kind: ProblemKind
    sizes: Mapping[int, int]
    capacity: int
    graph: GraphSpec

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def digraph(self) -> Digraph:
        return self.graph.digraph

    def __post_init__(self) -> None:
        validate_instance(self)


@dataclass(frozen=True)
class Solution:
    chosen: frozenset[int]
    total: int
    kind: ProblemKind

    def ids(self) -> list[int]:
        return sorted(self.chosen)


def validate_instance(inst: Instance) -> None:
    c = inst.capacity
    if not isinstance(c, int) or c < 1:
        raise ParseError(f"capacity must be a positive integer, got {c!r}")
    n = len(inst.sizes)
    if n < 1:
        raise ParseError("an instance needs at least one item")
    if set(inst.sizes) != set(range(1, n + 1)):
        raise ParseError("item ids must be exactly 1..n")
    for j, s in inst.sizes.items():
        if not 1 <= s <= c:
            raise ParseError(f"size out of range [1, {c}] for item {j}: {s}")
    g = inst.graph
    if g.kind is GraphKind.EDGES:
        if g.edges is None or g.edges.vertices != frozenset(range(1, n + 1)):
            raise ParseError("edge list vertices must be exactly 1..n")
    else:
        found = leaves(g.expr)
        if sorted(found) != list(range(1, n + 1)):
            raise ParseError("leaf/item mismatch: expression leaves must be v1..vn, each once")


def make_instance(
    kind: ProblemKind | str,
    sizes: Mapping[int, int] | Iterable[int],
    capacity: int,
    *,
    dico: str | Expr | None = None,
    msp: str | Expr | None = None,
    edges: Digraph | Iterable[tuple[int, int]] | None = None,
) -> Instance:
    """Convenience constructor; ``sizes`` may be a list for items 1..n."""
    if not isinstance(sizes, Mapping):
        sizes = {j: s for j, s in enumerate(sizes, start=1)}
    sizes = dict(sizes)
    if dico is not None:
        spec = GraphSpec(GraphKind.DICO, expr=parse_dico(dico) if isinstance(dico, str) else dico)
    elif msp is not None:
        spec = GraphSpec(GraphKind.MSP, expr=parse_msp(msp) if isinstance(msp, str) else msp)
    else:
        if not isinstance(edges, Digraph):
            edges = Digraph.from_arcs(len(sizes), edges or ())
        spec = GraphSpec(GraphKind.EDGES, edges=edges)
    return Instance(ProblemKind(kind), sizes, capacity, spec)


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line=line) from None


def parse_instance(text: str) -> Instance:
    kind = capacity = n = None
    sizes: dict[int, int] = {}
    size_lines: dict[int, int] = {}
    graph: GraphSpec | None = None
    arcs: list[tuple[int, int, int]] | None = None
    in_edges = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        words = rest.split()
        if in_edges:
            if head == "end" and not words:
                in_edges = False
            elif head == "arc" and len(words) == 2:
                arcs.append((_int(words[0], lineno, "arc tail"), _int(words[1], lineno, "arc head"), lineno))
            else:
                raise ParseError(f"expected 'arc <u> <v>' or 'end', got {line!r}", line=lineno)
            continue
        if head == "problem" and len(words) == 1:
            if kind is not None:
                raise ParseError("duplicate problem line", line=lineno)
            try:
                kind = ProblemKind(words[0])
            except ValueError:
                raise ParseError(f"unknown problem {words[0]!r}", line=lineno) from None
        elif head == "capacity" and len(words) == 1:
            if capacity is not None:
                raise ParseError("duplicate capacity line", line=lineno)
            capacity = _int(words[0], lineno, "capacity")
            if capacity < 1:
                raise ParseError(f"capacity must be positive, got {capacity}", line=lineno)
        elif head == "items" and len(words) == 1:
            if n is not None:
                raise ParseError("duplicate items line", line=lineno)
            n = _int(words[0], lineno, "item count")
            if n < 1:
                raise ParseError(f"item count must be positive, got {n}", line=lineno)
        elif head == "size" and len(words) == 2:
            j = _int(words[0], lineno, "item id")
            s = _int(words[1], lineno, "size")
            if j in sizes:
                raise ParseError(f"duplicate size declaration for item {j}", line=lineno)
            sizes[j] = s
            size_lines[j] = lineno
        elif head == "graph" and words:
            if graph is not None or arcs is not None:
                raise ParseError("duplicate graph line", line=lineno)
            gk, _, payload = rest.strip().partition(" ")
            try:
                if gk == "dico":
                    graph = GraphSpec(GraphKind.DICO, expr=parse_dico(payload))
                elif gk == "msp":
                    graph = GraphSpec(GraphKind.MSP, expr=parse_msp(payload))
                elif gk == "edges" and not payload.strip():
                    arcs, in_edges = [], True
                else:
                    raise ParseError(f"unknown graph kind {gk!r}", line=lineno)
            except ParseError as err:
                if err.line is not None:
                    raise
                raise ParseError(err.message, line=lineno, position=err.position) from None
        else:
            raise ParseError(f"unrecognised line {line!r}", line=lineno)

    if in_edges:
        raise ParseError("edge list not terminated by 'end'")
    for what, value in (("problem", kind), ("capacity", capacity), ("items", n)):
        if value is None:
            raise ParseError(f"missing {what} line")
    for j, s in sizes.items():
        if not 1 <= j <= n:
            raise ParseError(f"unknown item id {j}", line=size_lines[j])
        if not 1 <= s <= capacity:
            raise ParseError(f"size out of range [1, {capacity}] for item {j}: {s}", line=size_lines[j])
    if len(sizes) != n:
        missing = sorted(set(range(1, n + 1)) - set(sizes))
        raise ParseError(f"missing size declarations for items {missing}")
    if arcs is not None:
        seen = set()
        for u, v, lineno in arcs:
            for w in (u, v):
                if not 1 <= w <= n:
                    raise ParseError(f"unknown item id {w}", line=lineno)
            if u == v:
                raise ParseError(f"self-loop at {u}", line=lineno)
            if (u, v) in seen:
                raise ParseError(f"duplicate arc ({u}, {v})", line=lineno)
            seen.add((u, v))
        graph = GraphSpec(GraphKind.EDGES, edges=Digraph.from_arcs(n, seen))
    if graph is None:
        raise ParseError("missing graph line")
    return Instance(kind, sizes, capacity, graph)


def serialize_instance(inst: Instance) -> str:
    lines = [
        f"problem {inst.kind.value}",
        f"capacity {inst.capacity}",
        f"items {inst.n}",
    ]
    lines += [f"size {j} {inst.sizes[j]}" for j in sorted(inst.sizes)]
    g = inst.graph
    if g.kind is GraphKind.EDGES:
        lines.append("graph edges")
        lines += [f"arc {u} {v}" for u, v in sorted(g.edges.arcs)]
        lines.append("end")
    else:
        lines.append(f"graph {g.kind.value} {to_text(g.expr)}")
    return "\n".join(lines) + "\n"


def certify(
    g: Digraph | Expr,
    sizes: Mapping[int, int],
    capacity: int,
    kind: ProblemKind,
    chosen: Iterable[int],
) -> Solution:
    """Recompute feasibility of ``chosen`` from scratch.

    ``g`` may be a digraph or an expression; expressions are checked on the
    tree so large co-graphs never materialise their arc sets.
    """
    chosen = frozenset(chosen)
    total = sum(sizes[j] for j in chosen)
    if total > capacity:
        raise InfeasibleSolution("capacity", total)
    if kind is not ProblemKind.SSP:
        weak = kind is ProblemKind.SSGW
        if isinstance(g, Digraph):
            witness = (weak_digraph_violation if weak else digraph_violation)(g, chosen)
        else:
            witness = constraint_witness(g, chosen, weak)
        if witness is not None:
            raise InfeasibleSolution("weak-digraph-constraint" if weak else "digraph-constraint", witness)
    return Solution(chosen, total, kind)


def validate_solution(inst: Instance, chosen: Iterable[int]) -> Solution:
    chosen = frozenset(chosen)
    unknown = sorted(j for j in chosen if j not in inst.sizes)
    if unknown:
        raise ParseError(f"unknown item id {unknown[0]}")
    g = inst.graph.expr if inst.graph.expr is not None else inst.digraph
    return certify(g, inst.sizes, inst.capacity, inst.kind, chosen)
