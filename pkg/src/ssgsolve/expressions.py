"""Di-co-expressions and msp-expressions: syntax, evaluation, decomposition.

Concrete syntax is fully parenthesised with binary operators only::

    dico:  v<k> | "(" expr ("+" | "->" | "*") expr ")"
    msp:   v<k> | "(" expr ("|" | "*") expr ")"

``+`` is disjoint union, ``->`` order composition and ``*`` series
composition for directed co-graphs; for msp-digraphs ``|`` is parallel and
``*`` series composition.  Everything here is iterative so expressions nested
thousands of levels deep are fine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import ClassVar, Iterable, Mapping, Union

from .digraph import Digraph, is_acyclic, weak_components
from .errors import NotADagError, NotDecomposableError, ParseError


@dataclass(frozen=True)
class Leaf:
    item: int


@dataclass(frozen=True)
class _Binary:
    left: "Expr"
    right: "Expr"
    symbol: ClassVar[str] = "?"


@dataclass(frozen=True)
class DisjointUnion(_Binary):
    symbol: ClassVar[str] = "+"


@dataclass(frozen=True)
class OrderComposition(_Binary):
    symbol: ClassVar[str] = "->"


@dataclass(frozen=True)
class SeriesComposition(_Binary):
    symbol: ClassVar[str] = "*"


@dataclass(frozen=True)
class Parallel(_Binary):
    symbol: ClassVar[str] = "|"


@dataclass(frozen=True)
class Series(_Binary):
    symbol: ClassVar[str] = "*"


DiCoExpr = Union[Leaf, DisjointUnion, OrderComposition, SeriesComposition]
MspExpr = Union[Leaf, Parallel, Series]
Expr = Union[Leaf, _Binary]

DICO_OPS: dict[str, type[_Binary]] = {"+": DisjointUnion, "->": OrderComposition, "*": SeriesComposition}
MSP_OPS: dict[str, type[_Binary]] = {"|": Parallel, "*": Series}

_TOKEN = re.compile(r"\s*(?:(v\d+)|(->)|([()+*|])|(\S))")


def _tokens(text: str):
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            return
        leaf, arrow, punct, junk = m.groups()
        start = m.start(m.lastindex)
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r}", position=start)
        yield start, leaf or arrow or punct
        pos = m.end()


def _parse(text: str, ops: Mapping[str, type[_Binary]]) -> Expr:
    # shift-reduce over a stack of open parentheses: [left, op, right]
    frames: list[list] = []
    result: Expr | None = None
    seen: set[int] = set()

    def deliver(node: Expr, at: int, token: str) -> None:
        nonlocal result
        if not frames:
            if result is not None:
                raise ParseError(f"unexpected token {token!r}", position=at)
            result = node
            return
        frame = frames[-1]
        if frame[0] is None and frame[1] is None:
            frame[0] = node
        elif frame[1] is not None and frame[2] is None:
            frame[2] = node
        else:
            raise ParseError(f"unexpected token {token!r}", position=at)

    for at, tok in _tokens(text):
        if tok.startswith("v"):
            item = int(tok[1:])
            if item < 1:
                raise ParseError(f"item id must be positive: {tok}", position=at)
            if item in seen:
                raise ParseError(f"duplicate leaf id v{item}", position=at)
            seen.add(item)
            deliver(Leaf(item), at, tok)
        elif tok == "(":
            if result is not None and not frames:
                raise ParseError("unexpected token '('", position=at)
            frames.append([None, None, None])
        elif tok == ")":
            if not frames:
                raise ParseError("unbalanced parentheses: unexpected ')'", position=at)
            left, op, right = frames[-1]
            if left is None or op is None or right is None:
                raise ParseError("unexpected token ')'", position=at)
            frames.pop()
            deliver(ops[op](left, right), at, tok)
        elif tok in ops:
            if not frames or frames[-1][0] is None or frames[-1][1] is not None:
                raise ParseError(f"unexpected token {tok!r}", position=at)
            frames[-1][1] = tok
        else:
            raise ParseError(f"unexpected token {tok!r}", position=at)
    if frames:
        raise ParseError("unbalanced parentheses: missing ')'", position=len(text))
    if result is None:
        raise ParseError("empty expression", position=len(text))
    return result


def parse_dico(text: str) -> DiCoExpr:
    return _parse(text, DICO_OPS)


def parse_msp(text: str) -> MspExpr:
    return _parse(text, MSP_OPS)


def postorder(x: Expr) -> list[Expr]:
    """Children before parents, left subtree before right subtree."""
    out: list[Expr] = []
    stack: list[tuple[Expr, bool]] = [(x, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf) or expanded:
            out.append(node)
            continue
        stack.append((node, True))
        stack.append((node.right, False))
        stack.append((node.left, False))
    return out


def to_text(x: Expr) -> str:
    """Canonical fully parenthesised text; ``parse_*(to_text(x)) == x``."""
    done: dict[int, str] = {}
    for node in postorder(x):
        if isinstance(node, Leaf):
            done[id(node)] = f"v{node.item}"
        else:
            done[id(node)] = f"({done[id(node.left)]} {node.symbol} {done[id(node.right)]})"
    return done[id(x)]


def leaves(x: Expr) -> list[int]:
    return [node.item for node in postorder(x) if isinstance(node, Leaf)]


@dataclass
class FlatTree:
    """Postorder arrays for an expression; index ``-1`` marks a missing child."""

    nodes: list[Expr]
    left: list[int]
    right: list[int]
    height: list[int]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    def leaf_items(self, i: int) -> list[int]:
        out = []
        stack = [i]
        while stack:
            j = stack.pop()
            node = self.nodes[j]
            if isinstance(node, Leaf):
                out.append(node.item)
            else:
                stack.append(self.right[j])
                stack.append(self.left[j])
        return out


def flatten(x: Expr) -> FlatTree:
    nodes = postorder(x)
    where = {id(node): i for i, node in enumerate(nodes)}
    left, right, height = [], [], []
    for node in nodes:
        if isinstance(node, Leaf):
            left.append(-1)
            right.append(-1)
            height.append(0)
        else:
            a, b = where[id(node.left)], where[id(node.right)]
            left.append(a)
            right.append(b)
            height.append(1 + max(height[a], height[b]))
    return FlatTree(nodes, left, right, height)


def _eval(x: Expr) -> Digraph:
    # per node: (vertices, sources, sinks); arcs accumulate globally
    info: dict[int, tuple[frozenset[int], frozenset[int], frozenset[int]]] = {}
    arcs: set[tuple[int, int]] = set()
    for node in postorder(x):
        if isinstance(node, Leaf):
            v = frozenset({node.item})
            info[id(node)] = (v, v, v)
            continue
        v1, src1, snk1 = info[id(node.left)]
        v2, src2, snk2 = info[id(node.right)]
        if isinstance(node, (DisjointUnion, Parallel)):
            info[id(node)] = (v1 | v2, src1 | src2, snk1 | snk2)
        elif isinstance(node, OrderComposition):
            arcs.update((a, b) for a in v1 for b in v2)
            info[id(node)] = (v1 | v2, src1, snk2)
        elif isinstance(node, SeriesComposition):
            arcs.update((a, b) for a in v1 for b in v2)
            arcs.update((b, a) for a in v1 for b in v2)
            info[id(node)] = (v1 | v2, frozenset(), frozenset())
        elif isinstance(node, Series):
            arcs.update((a, b) for a in snk1 for b in src2)
            info[id(node)] = (v1 | v2, src1, snk2)
        else:
            raise TypeError(f"not an expression node: {node!r}")
    return Digraph(info[id(x)][0], frozenset(arcs))


def eval_dico(x: DiCoExpr) -> Digraph:
    return _eval(x)


def eval_msp(x: MspExpr) -> Digraph:
    return _eval(x)


@dataclass(frozen=True)
class NodeAggregates:
    size_sum: int
    source_sum: int
    sink_sum: int


def aggregates(x: Expr, sizes: Mapping[int, int]) -> list[NodeAggregates]:
    """s(X), o(X), i(X) for every node, aligned with ``postorder(x)``."""
    tree = flatten(x)
    out: list[NodeAggregates] = []
    for i, node in enumerate(tree.nodes):
        if isinstance(node, Leaf):
            s = sizes[node.item]
            out.append(NodeAggregates(s, s, s))
            continue
        a, b = out[tree.left[i]], out[tree.right[i]]
        total = a.size_sum + b.size_sum
        if isinstance(node, (DisjointUnion, Parallel)):
            out.append(NodeAggregates(total, a.source_sum + b.source_sum, a.sink_sum + b.sink_sum))
        elif isinstance(node, SeriesComposition):
            out.append(NodeAggregates(total, 0, 0))
        else:  # order composition and msp series: sources from the left, sinks from the right
            out.append(NodeAggregates(total, a.source_sum, b.sink_sum))
    return out


def constraint_witness(x: Expr, chosen: Iterable[int], weak: bool) -> int | None:
    """Smallest vertex of eval(x) violating the (weak) digraph constraint.

    Works on the expression tree directly so the O(n^2) arc set of a large
    co-graph is never built.  Each leaf collects, top-down, the blocks of
    vertices that make up its predecessor set; for every block we know whether
    it is entirely chosen and whether it meets the chosen set.
    """
    chosen = set(chosen)
    tree = flatten(x)
    nodes = tree.nodes
    count = [0] * len(nodes)
    total = [0] * len(nodes)
    snk_total = [0] * len(nodes)
    snk_chosen = [0] * len(nodes)
    for i, node in enumerate(nodes):
        if isinstance(node, Leaf):
            hit = int(node.item in chosen)
            count[i], total[i], snk_total[i], snk_chosen[i] = hit, 1, 1, hit
            continue
        a, b = tree.left[i], tree.right[i]
        count[i] = count[a] + count[b]
        total[i] = total[a] + total[b]
        if isinstance(node, (DisjointUnion, Parallel)):
            snk_total[i] = snk_total[a] + snk_total[b]
            snk_chosen[i] = snk_chosen[a] + snk_chosen[b]
        elif isinstance(node, SeriesComposition):
            snk_total[i] = snk_chosen[i] = 0
        else:
            snk_total[i], snk_chosen[i] = snk_total[b], snk_chosen[b]

    # state per node: (has_pred, all_pred_chosen, any_pred_chosen) for every
    # vertex of the subtree, plus the pending state that applies only to the
    # subtree's sources (msp series contributes to sources only)
    worst: list[int] = []
    stack = [(tree.root, (False, True, False), (False, True, False))]

    def merge(state, has, full, any_):
        return (state[0] or has, state[1] and full, state[2] or any_)

    while stack:
        i, everyone, sources_only = stack.pop()
        node = nodes[i]
        if isinstance(node, Leaf):
            has, full, any_ = merge(everyone, *sources_only)
            y = node.item
            if y not in chosen and has and (full if weak else any_):
                worst.append(y)
            continue
        a, b = tree.left[i], tree.right[i]
        if isinstance(node, (DisjointUnion, Parallel)):
            stack.append((a, everyone, sources_only))
            stack.append((b, everyone, sources_only))
        elif isinstance(node, OrderComposition):
            stack.append((a, everyone, sources_only))
            block = (True, count[a] == total[a], count[a] > 0)
            stack.append((b, merge(everyone, *block), sources_only))
        elif isinstance(node, SeriesComposition):
            block_a = (True, count[a] == total[a], count[a] > 0)
            block_b = (True, count[b] == total[b], count[b] > 0)
            stack.append((a, merge(everyone, *block_b), sources_only))
            stack.append((b, merge(everyone, *block_a), sources_only))
        else:  # msp series: sinks of the left feed the sources of the right
            stack.append((a, everyone, sources_only))
            block = (True, snk_chosen[a] == snk_total[a], snk_chosen[a] > 0)
            stack.append((b, everyone, block))
    return min(worst) if worst else None


def decompose_msp(g: Digraph) -> MspExpr:
    """Recover an msp-expression whose evaluation is arc-identical to ``g``.

    Disconnected parts become parallel compositions.  A connected part is split
    as ``L * R`` by choosing a non-source ``v``, taking ``P = N-(v)``, the
    candidate right sources ``I = {w : N-(w) = P}`` and ``R`` = everything
    reachable from ``I``; the split is accepted when the crossing arcs are
    exactly ``P x I`` and ``P`` is the sink set of ``L``.  The result is
    re-evaluated and compared with ``g`` before it is returned.
    """
    if not is_acyclic(g):
        raise NotADagError()
    if not g.vertices:
        raise NotDecomposableError("not-decomposable: empty digraph")
    pred, succ = g.pred, g.succ

    def reach(start: Iterable[int], within: frozenset[int]) -> set[int]:
        seen = set(start)
        todo = list(seen)
        while todo:
            u = todo.pop()
            for w in succ[u]:
                if w in within and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def split(part: frozenset[int]) -> tuple[frozenset[int], frozenset[int]] | None:
        for v in sorted(part):
            p = pred[v] & part
            if not p:
                continue
            firsts = {w for w in part if pred[w] & part == p}
            right = frozenset(reach(firsts, part))
            left = part - right
            if not left:
                continue
            crossing = {(a, b) for a in left for b in succ[a] & right}
            if crossing != {(a, b) for a in p for b in firsts}:
                continue
            if any(pred[b] & left for b in right - firsts):
                continue
            if p != {a for a in left if not succ[a] & left}:
                continue
            return left, right
        return None

    # explicit stack: ("open", part) expands, ("close", kind) combines results
    built: list[MspExpr] = []
    todo: list[tuple] = [("open", frozenset(g.vertices))]
    while todo:
        tag, payload = todo.pop()
        if tag == "close":
            kind, count = payload
            parts = built[-count:]
            del built[-count:]
            acc = parts[0]
            for nxt in parts[1:]:
                acc = kind(acc, nxt)
            built.append(acc)
            continue
        part = payload
        if len(part) == 1:
            built.append(Leaf(next(iter(part))))
            continue
        comps = weak_components(g, part)
        if len(comps) > 1:
            todo.append(("close", (Parallel, len(comps))))
            todo.extend(("open", c) for c in reversed(comps))
            continue
        halves = split(part)
        if halves is None:
            raise NotDecomposableError()
        todo.append(("close", (Series, 2)))
        todo.append(("open", halves[1]))
        todo.append(("open", halves[0]))
    (expr,) = built
    if eval_msp(expr) != g:
        raise NotDecomposableError("not-decomposable: round-trip mismatch")
    return expr
