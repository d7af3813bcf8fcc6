from __future__ import annotations

from ssgsolve.expressions import eval_dico, eval_msp
from ssgsolve.oracle import brute_force

E1_TEXT = """\
# co-graph example: c = 7, sizes 1 2 2 3
problem ssg
capacity 7
items 4
size 1 1
size 2 2
size 3 2
size 4 3
graph dico ((v1 + v3) -> (v2 * v4))
"""

E2_TEXT = """\
problem ssg
capacity 7
items 6
size 1 2
size 2 1
size 3 4
size 4 3
size 5 2
size 6 3
graph msp (((v1 * v2) | (v3 * v4)) * (v5 * v6))
"""

E1_EXPR = "((v1 + v3) -> (v2 * v4))"
E2_EXPR = "(((v1 * v2) | (v3 * v4)) * (v5 * v6))"
E1_SIZES = {1: 1, 2: 2, 3: 2, 4: 3}
E2_SIZES = {1: 2, 2: 1, 3: 4, 4: 3, 5: 2, 6: 3}


def as_problem(text: str, kind: str) -> str:
    return text.replace("problem ssg", f"problem {kind}", 1)


def true_set(vec) -> set[int]:
    return {int(s) for s in vec.nonzero()[0]}


def true_pairs(mat) -> set[tuple[int, int]]:
    rows, cols = mat.nonzero()
    return {(int(s), int(t)) for s, t in zip(rows, cols)}


def node_spectra(tree, sizes, c, cls, tracked=None):
    """Oracle spectrum of every subexpression's own digraph, aligned with postorder."""
    evaluate = eval_dico if cls == "dico" else eval_msp
    out = []
    for node in tree.nodes:
        sub = evaluate(node)
        out.append(brute_force(sub, {v: sizes[v] for v in sub.vertices}, c, tracked))
    return out


def ssg_node_mismatches(tables, cls) -> list[int]:
    spectra = node_spectra(tables.tree, tables.sizes, tables.capacity, cls)
    return [i for i, spec in enumerate(spectra) if true_set(tables.f[i]) != set(spec.ssg)]


def ssgw_node_mismatches(tables, cls) -> list[int]:
    tracked = "sources" if cls == "dico" else "sinks"
    spectra = node_spectra(tables.tree, tables.sizes, tables.capacity, cls, tracked)
    return [i for i, spec in enumerate(spectra) if true_pairs(tables.h[i]) != set(spec.ssgw)]

