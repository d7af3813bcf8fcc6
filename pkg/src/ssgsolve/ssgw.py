"""Subset sum under the weak digraph constraint (SSGW).

On directed co-graphs the programs track the size of the chosen sources, on
msp-digraphs the size of the chosen sinks.  ``H[i][s, t]`` is true iff the
sub-digraph of node ``i`` has a weakly feasible set of size ``s`` whose
tracked vertices weigh ``t``.  Because sizes are positive, "contains every
source (sink)" is the same as ``t == o(X)`` (``t == i(X)``), and "is a proper
subset" is the same as ``s < s(X)``.

The cases per operation (X1 left, X2 right):

co-graph order X1 -> X2
    a proper part of X1 (weakly feasible there) plus any subset of X2, since no
    X2 vertex has all its predecessors chosen; or all of X1 plus a weakly
    feasible part of X2 that contains every source of X2 (possibly empty when
    X2 has no sources).
co-graph series X1 * X2 (no sources, t = 0)
    proper subsets on both sides; or all of one side plus a weakly feasible
    part of the other containing all its sources.
msp series X1 * X2
    a part of X1 missing at least one sink of X1 (t1 < i(X1), including t1 = 0)
    plus any weakly feasible part of X2; or a part of X1 with every sink, which
    forces all of X2.
unions
    2-D sum convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.signal

from .core import ProblemKind, Solution, certify
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
    flatten,
)
from .ssg import SolveResult, sum_convolve


def _conv2(a: np.ndarray, b: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    full = scipy.signal.convolve(a.astype(np.int64), b.astype(np.int64)) > 0
    out = np.zeros(shape, dtype=bool)
    r, k = min(shape[0], full.shape[0]), min(shape[1], full.shape[1])
    out[:r, :k] = full[:r, :k]
    return out


def _get(a: np.ndarray, *idx: int) -> bool:
    if any(i < 0 or i >= n for i, n in zip(idx, a.shape)):
        return False
    return bool(a[idx])


def ssp_tables(x: Expr, sizes: Mapping[int, int], c: int) -> list[np.ndarray]:
    """Plain subset-sum vectors per node (postorder); arcs play no role."""
    tree = flatten(x)
    aggs = aggregates(x, sizes)
    hp: list[np.ndarray] = []
    for i, node in enumerate(tree.nodes):
        width = min(c, aggs[i].size_sum) + 1
        if isinstance(node, Leaf):
            row = np.zeros(width, dtype=bool)
            row[0] = True
            row[-1] = sizes[node.item] <= c
        else:
            row = sum_convolve(hp[tree.left[i]], hp[tree.right[i]], width)
        hp.append(row)
    return hp


@dataclass
class SsgwTables:
    tree: FlatTree
    sizes: Mapping[int, int]
    capacity: int
    aggs: list[NodeAggregates]
    hp: list[np.ndarray]
    h: list[np.ndarray]
    tracked: str  # "sources" or "sinks"

    @property
    def root(self) -> np.ndarray:
        return self.h[self.tree.root]

    def tracked_sum(self, i: int) -> int:
        a = self.aggs[i]
        return a.source_sum if self.tracked == "sources" else a.sink_sum


def _ssgw_tables(x: Expr, sizes: Mapping[int, int], c: int, tracked: str) -> SsgwTables:
    tree = flatten(x)
    aggs = aggregates(x, sizes)
    hp = ssp_tables(x, sizes, c)
    tables = SsgwTables(tree, sizes, c, aggs, hp, [], tracked)
    h = tables.h
    for i, node in enumerate(tree.nodes):
        shape = (min(c, aggs[i].size_sum) + 1, min(c, tables.tracked_sum(i)) + 1)
        if isinstance(node, Leaf):
            out = np.zeros(shape, dtype=bool)
            out[0, 0] = True
            s = sizes[node.item]
            if s <= c:
                out[s, s] = True
            h.append(out)
            continue
        a, b = tree.left[i], tree.right[i]
        h1, h2 = h[a], h[b]
        s1_all, s2_all = aggs[a].size_sum, aggs[b].size_sum
        t1_all, t2_all = tables.tracked_sum(a), tables.tracked_sum(b)
        if isinstance(node, (DisjointUnion, Parallel)):
            out = _conv2(h1, h2, shape)
        elif isinstance(node, OrderComposition):
            proper = h1.copy()
            if s1_all < proper.shape[0]:
                proper[s1_all, :] = False
            out = _conv2(proper, hp[b][:, None], shape)
            if t1_all < shape[1] and t2_all < h2.shape[1]:
                s = s1_all + np.flatnonzero(h2[:, t2_all])
                out[s[s < shape[0]], t1_all] = True
        elif isinstance(node, SeriesComposition):
            p1, p2 = hp[a].copy(), hp[b].copy()
            if s1_all < len(p1):
                p1[s1_all] = False
            if s2_all < len(p2):
                p2[s2_all] = False
            out = sum_convolve(p1, p2, shape[0])[:, None].copy()
            for whole, other, other_src in ((s1_all, h2, t2_all), (s2_all, h1, t1_all)):
                if other_src < other.shape[1]:
                    s = whole + np.flatnonzero(other[:, other_src])
                    out[s[s < shape[0]], 0] = True
        elif isinstance(node, Series):
            deficient = h1[:, : min(t1_all, h1.shape[1])].any(axis=1)
            out = _conv2(h2, deficient[:, None], shape)
            if t1_all < h1.shape[1] and t2_all < shape[1]:
                s = s2_all + np.flatnonzero(h1[:, t1_all])
                out[s[s < shape[0]], t2_all] = True
        else:
            raise TypeError(f"unexpected node {node!r}")
        h.append(out)
    return tables


def _trace(tables: SsgwTables, s: int, t: int) -> frozenset[int]:
    tree, hp, h, aggs = tables.tree, tables.hp, tables.h, tables.aggs
    chosen: list[int] = []
    todo: list[tuple] = [("H", tree.root, s, t)]
    while todo:
        job = todo.pop()
        tag, i = job[0], job[1]
        node = tree.nodes[i]
        if tag == "A":
            chosen.extend(tree.leaf_items(i))
            continue
        if isinstance(node, Leaf):
            if job[2] > 0:
                chosen.append(node.item)
            continue
        a, b = tree.left[i], tree.right[i]
        if tag == "P":
            s = job[2]
            s1 = next(k for k in range(s + 1) if _get(hp[a], k) and _get(hp[b], s - k))
            todo += [("P", a, s1), ("P", b, s - s1)]
            continue

        _, _, s, t = job
        s1_all, s2_all = aggs[a].size_sum, aggs[b].size_sum
        t1_all, t2_all = tables.tracked_sum(a), tables.tracked_sum(b)
        jobs = None
        if isinstance(node, (DisjointUnion, Parallel)):
            jobs = next(
                (
                    [("H", a, s1, t1), ("H", b, s - s1, t - t1)]
                    for s1 in range(s + 1)
                    for t1 in range(min(t, s1) + 1)
                    if _get(h[a], s1, t1) and _get(h[b], s - s1, t - t1)
                ),
                None,
            )
        elif isinstance(node, OrderComposition):
            for s1 in range(min(s, s1_all - 1) + 1):
                if _get(h[a], s1, t) and _get(hp[b], s - s1):
                    jobs = [("H", a, s1, t), ("P", b, s - s1)]
                    break
            else:
                if t == t1_all and _get(h[b], s - s1_all, t2_all):
                    jobs = [("A", a), ("H", b, s - s1_all, t2_all)]
        elif isinstance(node, SeriesComposition):
            for s1 in range(min(s, s1_all - 1) + 1):
                if s - s1 < s2_all and _get(hp[a], s1) and _get(hp[b], s - s1):
                    jobs = [("P", a, s1), ("P", b, s - s1)]
                    break
            else:
                if _get(h[b], s - s1_all, t2_all):
                    jobs = [("A", a), ("H", b, s - s1_all, t2_all)]
                elif _get(h[a], s - s2_all, t1_all):
                    jobs = [("A", b), ("H", a, s - s2_all, t1_all)]
        else:  # msp series
            jobs = next(
                (
                    [("H", a, s1, t1), ("H", b, s - s1, t)]
                    for s1 in range(s + 1)
                    for t1 in range(min(t1_all, s1 + 1))
                    if _get(h[a], s1, t1) and _get(h[b], s - s1, t)
                ),
                None,
            )
            if jobs is None and t == t2_all and _get(h[a], s - s2_all, t1_all):
                jobs = [("H", a, s - s2_all, t1_all), ("A", b)]
        if jobs is None:
            raise AssertionError(f"no rule derives H({i}, {s}, {t})")
        todo += jobs
    return frozenset(chosen)


def opt_and_trace_ssgw(tables: SsgwTables) -> tuple[int, Solution]:
    """Best size at the root, with a deterministic witness set.

    Among the tracked sums achieving the optimum the smallest is traced.
    """
    rows = np.flatnonzero(tables.root.any(axis=1))
    opt = int(rows.max())
    t = int(np.flatnonzero(tables.root[opt]).min())
    chosen = _trace(tables, opt, t)
    x = tables.tree.nodes[tables.tree.root]
    solution = certify(x, tables.sizes, tables.capacity, ProblemKind.SSGW, chosen)
    assert solution.total == opt
    return opt, solution


@dataclass
class SsgwResult:
    tables: SsgwTables
    opt: int
    solution: Solution


def solve_ssgw_cograph(x: DiCoExpr, sizes: Mapping[int, int], c: int) -> SsgwResult:
    tables = _ssgw_tables(x, sizes, c, "sources")
    return SsgwResult(tables, *opt_and_trace_ssgw(tables))


def solve_ssgw_msp(x: MspExpr, sizes: Mapping[int, int], c: int) -> SsgwResult:
    tables = _ssgw_tables(x, sizes, c, "sinks")
    return SsgwResult(tables, *opt_and_trace_ssgw(tables))


def solve_ssp(x: Expr, sizes: Mapping[int, int], c: int) -> SolveResult:
    """Plain subset sum over the leaves of ``x``; the graph is ignored."""
    tree = flatten(x)
    hp = ssp_tables(x, sizes, c)
    opt = int(np.flatnonzero(hp[tree.root]).max())
    chosen: list[int] = []
    todo = [(tree.root, opt)]
    while todo:
        i, s = todo.pop()
        node = tree.nodes[i]
        if isinstance(node, Leaf):
            if s:
                chosen.append(node.item)
            continue
        a, b = tree.left[i], tree.right[i]
        s1 = next(k for k in range(s + 1) if _get(hp[a], k) and _get(hp[b], s - k))
        todo += [(a, s1), (b, s - s1)]
    solution = certify(x, sizes, c, ProblemKind.SSP, chosen)
    return SolveResult(opt, solution)
