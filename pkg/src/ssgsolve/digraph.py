"""Plain digraph algorithms and the two constraint predicates.

Vertices are positive integers.  Instance-level digraphs use ``1..n``; the
digraph of a subexpression keeps the item ids of its leaves, so the vertex set
is not required to be contiguous.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .errors import NotADagError, VertexError

Arc = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    vertices: frozenset[int]
    arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u not in self.vertices or v not in self.vertices:
                raise VertexError((u, v))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc] = ()) -> Digraph:
        """Digraph on ``1..n``. Duplicate arcs collapse."""
        return cls(frozenset(range(1, n + 1)), frozenset((int(u), int(v)) for u, v in arcs))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def succ(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            out[u].add(v)
        return {v: frozenset(s) for v, s in out.items()}

    @cached_property
    def pred(self) -> dict[int, frozenset[int]]:
        inc: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            inc[v].add(u)
        return {v: frozenset(s) for v, s in inc.items()}

    def induced(self, keep: Iterable[int]) -> Digraph:
        keep = frozenset(keep)
        return Digraph(keep, frozenset((u, v) for u, v in self.arcs if u in keep and v in keep))

    def sources(self) -> frozenset[int]:
        return frozenset(v for v in self.vertices if not self.pred[v])

    def sinks(self) -> frozenset[int]:
        return frozenset(v for v in self.vertices if not self.succ[v])


def _check(g: Digraph, v: int) -> None:
    if v not in g.vertices:
        raise VertexError(v)


def predecessors(g: Digraph, v: int) -> frozenset[int]:
    _check(g, v)
    return g.pred[v]


def successors(g: Digraph, v: int) -> frozenset[int]:
    _check(g, v)
    return g.succ[v]


def reachable_set(g: Digraph, x: int) -> frozenset[int]:
    """All vertices reachable from ``x``, including ``x`` itself."""
    _check(g, x)
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in g.succ[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


@dataclass(frozen=True)
class SccPartition:
    components: tuple[frozenset[int], ...]
    index: Mapping[int, int]


def scc(g: Digraph) -> SccPartition:
    """Strongly connected components (iterative Tarjan).

    Components are ordered by their smallest vertex so the result does not
    depend on traversal order.
    """
    counter = 0
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    found: list[frozenset[int]] = []

    for root in sorted(g.vertices):
        if root in index:
            continue
        work = [(root, iter(sorted(g.succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(g.succ[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                found.append(frozenset(comp))

    found.sort(key=min)
    where = {v: i for i, comp in enumerate(found) for v in comp}
    return SccPartition(tuple(found), where)


@dataclass(frozen=True)
class CondensedInstance:
    dag: Digraph
    sizes: dict[int, int]
    members: dict[int, frozenset[int]]


def condense(g: Digraph, sizes: Mapping[int, int]) -> CondensedInstance:
    """Contract every strong component to one vertex carrying the summed size.

    Component vertices are numbered ``1..t`` in the order of :func:`scc`.
    """
    part = scc(g)
    arcs = {
        (part.index[u] + 1, part.index[v] + 1)
        for u, v in g.arcs
        if part.index[u] != part.index[v]
    }
    dag = Digraph.from_arcs(len(part.components), arcs)
    members = {i + 1: comp for i, comp in enumerate(part.components)}
    merged = {i: sum(sizes[v] for v in comp) for i, comp in members.items()}
    return CondensedInstance(dag, merged, members)


def transitive_closure(g: Digraph) -> Digraph:
    arcs = set()
    for u in g.vertices:
        for v in reachable_set(g, u):
            if v != u:
                arcs.add((u, v))
    return Digraph(g.vertices, frozenset(arcs))


def topological_order(g: Digraph) -> list[int]:
    """Kahn's algorithm, smallest ready vertex first. Raises on cycles."""
    indeg = {v: len(g.pred[v]) for v in g.vertices}
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for w in sorted(g.succ[u]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    if len(order) != g.n:
        raise NotADagError()
    return order


def is_acyclic(g: Digraph) -> bool:
    try:
        topological_order(g)
    except NotADagError:
        return False
    return True


def transitive_reduction(g: Digraph) -> Digraph:
    """Drop every arc (u, v) that is implied by a longer u -> v path."""
    topological_order(g)
    reach = {v: reachable_set(g, v) for v in g.vertices}
    keep = set()
    for u, v in g.arcs:
        if not any(v in reach[w] for w in g.succ[u] if w != v):
            keep.add((u, v))
    return Digraph(g.vertices, frozenset(keep))


def weak_components(g: Digraph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Weakly connected components of the subgraph induced by ``within``."""
    pool = set(g.vertices if within is None else within)
    comps = []
    for start in sorted(pool):
        if start not in pool:
            continue
        pool.discard(start)
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.succ[u] | g.pred[u]:
                if w in pool:
                    pool.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def digraph_violation(g: Digraph, chosen: Iterable[int]) -> int | None:
    """Smallest vertex forced in by a chosen predecessor but not chosen."""
    chosen = set(chosen)
    for y in sorted(g.vertices):
        if y not in chosen and g.pred[y] & chosen:
            return y
    return None


def weak_digraph_violation(g: Digraph, chosen: Iterable[int]) -> int | None:
    """Smallest unchosen vertex whose whole (nonempty) predecessor set is chosen."""
    chosen = set(chosen)
    for y in sorted(g.vertices):
        p = g.pred[y]
        if y not in chosen and p and p <= chosen:
            return y
    return None


def check_digraph_constraint(g: Digraph, chosen: Iterable[int]) -> bool:
    return digraph_violation(g, chosen) is None


def check_weak_digraph_constraint(g: Digraph, chosen: Iterable[int]) -> bool:
    return weak_digraph_violation(g, chosen) is None


def is_transitive_tournament(g: Digraph) -> list[int] | None:
    """Vertices in Hamiltonian-path order, or None if ``g`` is not a transitive tournament."""
    n = g.n
    if len(g.arcs) != n * (n - 1) // 2:
        return None
    for u, v in g.arcs:
        if (v, u) in g.arcs:
            return None
    # arc count plus antisymmetry make g a tournament
    outdeg = {v: len(g.succ[v]) for v in g.vertices}
    if sorted(outdeg.values()) != list(range(n)):
        return None
    return sorted(g.vertices, key=lambda v: -outdeg[v])


def is_bioriented_clique(g: Digraph) -> bool:
    n = g.n
    return len(g.arcs) == n * (n - 1)


N_ARCS = frozenset({(2, 3), (1, 3), (1, 4)})
"""The forbidden N poset on u=1, v=2, w=3, x=4."""


def is_n_free(g: Digraph) -> bool:
    """True iff the transitive closure has no induced N.

    An induced N is a pair of arcs u->w, u->x and a third vertex v with v->w,
    and no other arc among the four vertices.
    """
    tc = transitive_closure(g)
    arcs = tc.arcs

    def adjacent(a: int, b: int) -> bool:
        return (a, b) in arcs or (b, a) in arcs

    for u in tc.vertices:
        for w, x in permutations(tc.succ[u], 2):
            if adjacent(w, x) or (w, u) in arcs or (x, u) in arcs:
                continue
            for v in tc.pred[w]:
                if v in (u, x) or (w, v) in arcs or adjacent(u, v) or adjacent(v, x):
                    continue
                return False
    return True


def has_induced_n_exhaustive(g: Digraph) -> bool:
    """Reference scan over every 4-subset of the closure and every labelling."""
    tc = transitive_closure(g)
    for quad in combinations(sorted(tc.vertices), 4):
        sub = {(a, b) for a, b in tc.arcs if a in quad and b in quad}
        if len(sub) != 3:
            continue
        for perm in permutations(quad):
            label = dict(zip(perm, (1, 2, 3, 4)))
            if {(label[a], label[b]) for a, b in sub} == N_ARCS:
                return True
    return False
