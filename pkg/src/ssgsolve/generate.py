"""Seeded random expressions, instances and digraphs."""

from __future__ import annotations

import random

from .core import Instance, ProblemKind, make_instance
from .digraph import Digraph
from .expressions import DICO_OPS, MSP_OPS, Expr, Leaf


def random_expression(rng: random.Random, n: int, cls: str) -> Expr:
    """Random binary expression over ``v1..vn``.

    Leaves are shuffled, every internal node splits its leaf block at a
    uniform point, and its operation is uniform over the class's operations.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ops = list({"dico": DICO_OPS, "msp": MSP_OPS}[cls].values())
    items = list(range(1, n + 1))
    rng.shuffle(items)
    # explicit stack: ("open", lo, hi) or ("close", op)
    built: list[Expr] = []
    todo: list[tuple] = [("open", 0, n)]
    while todo:
        job = todo.pop()
        if job[0] == "close":
            right = built.pop()
            left = built.pop()
            built.append(job[1](left, right))
            continue
        _, lo, hi = job
        if hi - lo == 1:
            built.append(Leaf(items[lo]))
            continue
        mid = rng.randint(lo + 1, hi - 1)
        op = rng.choice(ops)
        todo += [("close", op), ("open", mid, hi), ("open", lo, mid)]
    return built[0]


def random_instance(
    rng: random.Random,
    n: int,
    cls: str,
    c: int,
    max_size: int,
    kind: ProblemKind | str = ProblemKind.SSG,
) -> Instance:
    if not 1 <= max_size <= c:
        raise ValueError("need 1 <= max-size <= c")
    x = random_expression(rng, n, cls)
    sizes = [rng.randint(1, max_size) for _ in range(n)]
    return make_instance(kind, sizes, c, **{cls: x})


def random_digraph(rng: random.Random, n: int, p: float, acyclic: bool = False) -> Digraph:
    """Erdos-Renyi style digraph on ``1..n``; acyclic keeps only ``u < v`` arcs."""
    arcs = []
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and (not acyclic or u < v) and rng.random() < p:
                arcs.append((u, v))
    return Digraph.from_arcs(n, arcs)
