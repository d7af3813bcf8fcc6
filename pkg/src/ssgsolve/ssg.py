"""Subset sum under the digraph constraint (SSG).

Dynamic programs over di-co-trees and msp-trees, the series-parallel and
general-digraph pipelines built on them, and the closed-form solvers for
transitive tournaments and bioriented cliques.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np
import scipy.signal

from .core import ProblemKind, Solution, certify
from .digraph import (
    Digraph,
    condense,
    is_bioriented_clique,
    is_transitive_tournament,
    transitive_reduction,
)
from .errors import NotDecomposableError, NotInClassError, TooLargeError
from .expressions import (
    DiCoExpr,
    DisjointUnion,
    Expr,
    FlatTree,
    Leaf,
    MspExpr,
    NodeAggregates,
    OrderComposition,
    Parallel,
    Series,
    SeriesComposition,
    aggregates,
    decompose_msp,
    flatten,
)

DEFAULT_MAX_COMPONENTS = 24


class SolveResult(NamedTuple):
    opt: int
    solution: Solution


@dataclass
class SsgTables:
    """Feasibility vectors ``F`` per expression node, in postorder.

    ``f[i][s]`` is true iff the sub-digraph of node ``i`` has an SSG-feasible
    set of total size ``s``; the vector has ``min(c, s(X)) + 1`` entries.
    """

    tree: FlatTree
    sizes: Mapping[int, int]
    capacity: int
    aggs: list[NodeAggregates]
    f: list[np.ndarray]

    @property
    def root(self) -> np.ndarray:
        return self.f[self.tree.root]


class SsgResult(NamedTuple):
    tables: SsgTables
    opt: int
    solution: Solution


def sum_convolve(a: np.ndarray, b: np.ndarray, width: int) -> np.ndarray:
    """Boolean sum-set ``{x + y}`` truncated to ``width`` entries."""
    out = scipy.signal.convolve(a.astype(np.int64), b.astype(np.int64))[:width] > 0
    if len(out) < width:
        out = np.concatenate([out, np.zeros(width - len(out), dtype=bool)])
    return out


def _feasibility_tables(x: Expr, sizes: Mapping[int, int], c: int) -> SsgTables:
    tree = flatten(x)
    aggs = aggregates(x, sizes)
    f: list[np.ndarray] = []
    for i, node in enumerate(tree.nodes):
        width = min(c, aggs[i].size_sum) + 1
        row = np.zeros(width, dtype=bool)
        row[0] = True
        if isinstance(node, Leaf):
            row[-1] = sizes[node.item] <= c
        elif isinstance(node, (DisjointUnion, Parallel)):
            row = sum_convolve(f[tree.left[i]], f[tree.right[i]], width)
        elif isinstance(node, SeriesComposition):
            row[-1] = aggs[i].size_sum <= c
        elif isinstance(node, (OrderComposition, Series)):
            # right-only sets survive; any left element drags in the whole right side
            f1, f2 = f[tree.left[i]], f[tree.right[i]]
            row[: len(f2)] = f2
            shift = aggs[tree.right[i]].size_sum
            hits = np.flatnonzero(f1[1:]) + 1 + shift
            row[hits[hits < width]] = True
        else:
            raise TypeError(f"unexpected node {node!r}")
        f.append(row)
    return SsgTables(tree, sizes, c, aggs, f)


def trace_ssg(tables: SsgTables, target: int) -> frozenset[int]:
    """Recover one set realising ``F(root, target)``.

    At each node the first rule that derives the entry wins, and convolution
    splits are tried with the smaller left share first.
    """
    tree, f, aggs = tables.tree, tables.f, tables.aggs
    if not (target < len(f[tree.root]) and f[tree.root][target]):
        raise ValueError(f"F(root, {target}) is not set")
    chosen: list[int] = []
    todo = [(tree.root, target)]
    while todo:
        i, s = todo.pop()
        if s == 0:
            continue
        node = tree.nodes[i]
        if isinstance(node, Leaf):
            chosen.append(node.item)
            continue
        a, b = tree.left[i], tree.right[i]
        if isinstance(node, SeriesComposition):
            chosen.extend(tree.leaf_items(i))
        elif isinstance(node, (DisjointUnion, Parallel)):
            fa, fb = f[a], f[b]
            for s1 in range(min(s, len(fa) - 1) + 1):
                if fa[s1] and s - s1 < len(fb) and fb[s - s1]:
                    todo.append((a, s1))
                    todo.append((b, s - s1))
                    break
            else:
                raise AssertionError("inconsistent table")
        else:
            fb = f[b]
            if s < len(fb) and fb[s]:
                todo.append((b, s))
            else:
                chosen.extend(tree.leaf_items(b))
                todo.append((a, s - aggs[b].size_sum))
    return frozenset(chosen)


def _finish(tables: SsgTables, x: Expr) -> SsgResult:
    opt = int(np.flatnonzero(tables.root).max())
    chosen = trace_ssg(tables, opt)
    solution = certify(x, tables.sizes, tables.capacity, ProblemKind.SSG, chosen)
    assert solution.total == opt
    return SsgResult(tables, opt, solution)


def solve_ssg_cograph(x: DiCoExpr, sizes: Mapping[int, int], c: int) -> SsgResult:
    return _finish(_feasibility_tables(x, sizes, c), x)


def solve_ssg_msp(x: MspExpr, sizes: Mapping[int, int], c: int) -> SsgResult:
    return _finish(_feasibility_tables(x, sizes, c), x)


def solve_ssg_sp(g: Digraph, sizes: Mapping[int, int], c: int) -> SolveResult:
    """Series-parallel digraphs: reduce, decompose, run the msp program.

    Raises :class:`NotADagError` for cyclic input and
    :class:`NotDecomposableError` when the reduction is not an msp-digraph.
    """
    reduced = transitive_reduction(g)
    try:
        x = decompose_msp(reduced)
    except NotDecomposableError:
        raise NotDecomposableError("not-series-parallel") from None
    res = solve_ssg_msp(x, sizes, c)
    solution = certify(g, sizes, c, ProblemKind.SSG, res.solution.chosen)
    return SolveResult(res.opt, solution)


def solve_ssg_general(
    g: Digraph,
    sizes: Mapping[int, int],
    c: int,
    max_components: int = DEFAULT_MAX_COMPONENTS,
) -> SolveResult:
    """Exhaustive search over subsets of the condensation.

    Feasible sets are exactly unions of strong components closed under
    reachability, so only ``2^t`` candidates need checking for ``t``
    components.
    """
    con = condense(g, sizes)
    t = con.dag.n
    if t > max_components:
        raise TooLargeError(f"too-many-components {t} (limit {max_components})")
    weights = np.array([con.sizes[k] for k in range(1, t + 1)], dtype=np.int64)
    best_total, best_mask = 0, 0
    chunk = 1 << min(t, 18)
    for start in range(0, 1 << t, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        bits = [(masks >> k) & 1 for k in range(t)]
        ok = np.ones(chunk, dtype=bool)
        for u, v in con.dag.arcs:
            ok &= (bits[u - 1] <= bits[v - 1])
        totals = sum(b * w for b, w in zip(bits, weights))
        ok &= totals <= c
        if ok.any():
            cand = np.where(ok, totals, -1)
            k = int(np.argmax(cand))
            if cand[k] > best_total:
                best_total, best_mask = int(cand[k]), int(masks[k])
    chosen = set()
    for k in range(t):
        if best_mask >> k & 1:
            chosen |= con.members[k + 1]
    solution = certify(g, sizes, c, ProblemKind.SSG, chosen)
    return SolveResult(best_total, solution)


def solve_ssg_transitive_tournament(g: Digraph, sizes: Mapping[int, int], c: int) -> SolveResult:
    """Only the empty set and the suffixes of the Hamiltonian path are feasible."""
    order = is_transitive_tournament(g)
    if order is None:
        raise NotInClassError("not-a-transitive-tournament")
    best: list[int] = []
    best_total = 0
    running = 0
    for k in range(len(order) - 1, -1, -1):
        running += sizes[order[k]]
        if running > c:
            break
        best, best_total = order[k:], running
    solution = certify(g, sizes, c, ProblemKind.SSG, best)
    return SolveResult(best_total, solution)


def solve_ssg_bioriented_clique(g: Digraph, sizes: Mapping[int, int], c: int) -> SolveResult:
    if not is_bioriented_clique(g):
        raise NotInClassError("not-a-bioriented-clique")
    total = sum(sizes[v] for v in g.vertices)
    chosen = g.vertices if total <= c else frozenset()
    solution = certify(g, sizes, c, ProblemKind.SSG, chosen)
    return SolveResult(solution.total, solution)

