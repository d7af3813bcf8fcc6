"""Exhaustive ground truth and the two counterexample fixtures.

Everything here enumerates all ``2^n`` subsets and evaluates the capacity,
digraph and weak digraph constraints literally.  Nothing is shared with the
dynamic programs beyond the :class:`Digraph` type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .core import Instance, ProblemKind, make_instance
from .digraph import Digraph
from .errors import TooLargeError

MAX_ORACLE_ITEMS = 24
_CHUNK_BITS = 18


@dataclass(frozen=True)
class Spectrum:
    """Achievable sizes under each constraint.

    ``ssgw`` pairs each weakly feasible size with the summed size of the chosen
    sources or sinks (``tracked``); with ``tracked=None`` the second entry is 0.
    """

    ssg: frozenset[int]
    ssgw: frozenset[tuple[int, int]]
    tracked: str | None = None

    @property
    def opt_ssg(self) -> int:
        return max(self.ssg)

    @property
    def opt_ssgw(self) -> int:
        return max(s for s, _ in self.ssgw)

    @property
    def ssgw_sizes(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.ssgw)


def _mask_chunks(n: int) -> Iterator[tuple[np.ndarray, list[np.ndarray]]]:
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        yield masks, [((masks >> k) & 1).astype(bool) for k in range(n)]


def brute_force(
    g: Digraph,
    sizes: Mapping[int, int],
    c: int,
    tracked: str | None = None,
) -> Spectrum:
    """Enumerate every subset of ``g``'s vertices.

    ``tracked`` is ``None``, ``"sources"`` (indegree 0 in ``g``) or ``"sinks"``
    (outdegree 0 in ``g``).
    """
    verts = sorted(g.vertices)
    n = len(verts)
    if n > MAX_ORACLE_ITEMS:
        raise TooLargeError(f"instance-too-large: {n} items (limit {MAX_ORACLE_ITEMS})")
    pos = {v: k for k, v in enumerate(verts)}
    weight = np.array([sizes[v] for v in verts], dtype=np.int64)
    if tracked is None:
        marked = []
    elif tracked == "sources":
        marked = [pos[v] for v in verts if not g.pred[v]]
    elif tracked == "sinks":
        marked = [pos[v] for v in verts if not g.succ[v]]
    else:
        raise ValueError(f"tracked must be None, 'sources' or 'sinks', not {tracked!r}")
    pred_idx = {pos[v]: [pos[u] for u in g.pred[v]] for v in verts}

    ssg: set[int] = set()
    ssgw: set[tuple[int, int]] = set()
    for _, bits in _mask_chunks(n):
        total = np.zeros(len(bits[0]) if bits else 1, dtype=np.int64)
        for k in range(n):
            total += bits[k] * weight[k]
        fits = total <= c
        strong = fits.copy()
        weak = fits.copy()
        for y in range(n):
            preds = pred_idx[y]
            if not preds:
                continue
            some = np.zeros_like(fits)
            every = np.ones_like(fits)
            for u in preds:
                some |= bits[u]
                every &= bits[u]
            strong &= ~some | bits[y]
            weak &= ~every | bits[y]
        extra = np.zeros_like(total)
        for k in marked:
            extra += bits[k] * weight[k]
        ssg.update(int(s) for s in np.unique(total[strong]))
        pairs = np.unique(np.stack([total[weak], extra[weak]], axis=1), axis=0)
        ssgw.update((int(s), int(t)) for s, t in pairs)
    return Spectrum(frozenset(ssg), frozenset(ssgw), tracked)


def feasible_family(g: Digraph, kind: ProblemKind | str) -> set[frozenset[int]]:
    """Every subset of ``g`` satisfying the graph constraint of ``kind`` (no capacity)."""
    kind = ProblemKind(kind)
    verts = sorted(g.vertices)
    n = len(verts)
    if n > MAX_ORACLE_ITEMS:
        raise TooLargeError(f"instance-too-large: {n} items")
    found: set[frozenset[int]] = set()
    for mask in range(1 << n):
        chosen = {verts[k] for k in range(n) if mask >> k & 1}
        ok = True
        if kind is not ProblemKind.SSP:
            for y in verts:
                preds = g.pred[y]
                if y in chosen or not preds:
                    continue
                if kind is ProblemKind.SSG and preds & chosen:
                    ok = False
                elif kind is ProblemKind.SSGW and preds <= chosen:
                    ok = False
                if not ok:
                    break
        if ok:
            found.add(frozenset(chosen))
    return found


def counterexample_condensation() -> Instance:
    """Weakly feasible {a4} that no set of the condensation maps back to.

    The 4-cycle a1..a4 (with chord a3 -> a1) collapses to a single vertex of
    size 4, so on the condensation nothing short of all four is allowed.
    """
    arcs = [(1, 2), (2, 3), (3, 4), (4, 1), (3, 1), (1, 5)]
    return make_instance(ProblemKind.SSGW, [1, 1, 1, 1, 1], 2, edges=arcs)


def counterexample_transitive_reduction() -> Instance:
    """{a2} is weakly feasible here but not on the reduction, a 4-path."""
    arcs = [(1, 2), (2, 3), (3, 4), (1, 3)]
    return make_instance(ProblemKind.SSGW, [1, 1, 1, 1], 2, edges=arcs)
