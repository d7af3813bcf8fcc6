import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E1_TEXT, E2_TEXT, as_problem
from ssgsolve import (
    GraphKind,
    InfeasibleSolution,
    ParseError,
    ProblemKind,
    make_instance,
    parse_instance,
    serialize_instance,
    validate_solution,
)
from ssgsolve.expressions import parse_dico


def test_parse_e1():
    inst = parse_instance(E1_TEXT)
    assert inst.kind is ProblemKind.SSG
    assert inst.capacity == 7
    assert dict(inst.sizes) == {1: 1, 2: 2, 3: 2, 4: 3}
    assert inst.graph.kind is GraphKind.DICO
    assert inst.graph.expr == parse_dico("((v1 + v3) -> (v2 * v4))")


def test_parse_singleton():
    inst = parse_instance("problem ssg\ncapacity 1\nitems 1\nsize 1 1\ngraph dico v1\n")
    assert inst.n == 1 and inst.sizes[1] == 1


def test_parse_edges():
    text = "problem ssgw\ncapacity 5\nitems 3\nsize 1 1\nsize 2 2\nsize 3 3\ngraph edges\narc 1 2\narc 3 2\nend\n"
    inst = parse_instance(text)
    assert inst.graph.kind is GraphKind.EDGES
    assert inst.digraph.arcs == {(1, 2), (3, 2)}


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("problem ssg\ncapacity 3\nitems 1\nsize 1 0\ngraph dico v1\n", "size out of range", 4),
        ("problem ssg\ncapacity 3\nitems 1\nsize 1 4\ngraph dico v1\n", "size out of range", 4),
        ("problem ssg\ncapacity 3\nitems 1\nsize 1 1\nsize 1 2\ngraph dico v1\n", "duplicate size", 5),
        ("problem ssg\ncapacity 3\nitems 1\nsize 2 1\ngraph dico v1\n", "unknown item id", 4),
        ("problem ssg\ncapacity 3\nitems 2\nsize 1 1\nsize 2 1\ngraph dico v1\n", "leaf/item mismatch", None),
        ("problem ssg\ncapacity 3\nitems 1\nsize 1 1\ngraph dico (v1 + )\n", "unexpected token", 5),
        ("problem ssg\ncapacity x\n", "must be an integer", 2),
        ("problem knapsack\n", "unknown problem", 1),
        ("problem ssg\nfoo bar\n", "unrecognised line", 2),
        (
            "problem ssg\ncapacity 3\nitems 2\nsize 1 1\nsize 2 1\ngraph edges\narc 1 1\nend\n",
            "self-loop",
            7,
        ),
        (
            "problem ssg\ncapacity 3\nitems 2\nsize 1 1\nsize 2 1\ngraph edges\narc 1 2\narc 1 2\nend\n",
            "duplicate arc",
            8,
        ),
        ("problem ssg\ncapacity 3\nitems 2\nsize 1 1\nsize 2 1\ngraph edges\narc 1 2\n", "not terminated", None),
    ],
)
def test_parse_errors(text, fragment, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_comments_and_blank_lines():
    text = "# header\n\n" + E1_TEXT.replace("capacity 7", "capacity 7   # c")
    assert parse_instance(text).capacity == 7


def test_validate_table_optimum(e1):
    sol = validate_solution(e1, {2, 3, 4})
    assert sol.total == 7 and sol.ids() == [2, 3, 4]


def test_validate_empty(e1, e2):
    for inst in (e1, e2):
        assert validate_solution(inst, set()).total == 0


def test_validate_witness(e1):
    with pytest.raises(InfeasibleSolution) as info:
        validate_solution(e1, {1})
    assert (info.value.reason, info.value.witness) == ("digraph-constraint", 2)


def test_validate_capacity(e1):
    with pytest.raises(InfeasibleSolution) as info:
        validate_solution(e1, {1, 2, 3, 4})
    assert info.value.reason == "capacity" and info.value.witness == 8


def test_validate_weak_witness():
    inst = make_instance("ssgw", [1, 1, 1], 3, edges=[(1, 2), (2, 3)])
    with pytest.raises(InfeasibleSolution) as info:
        validate_solution(inst, {2})
    assert (info.value.reason, info.value.witness) == ("weak-digraph-constraint", 3)


def test_validate_unknown_id(e1):
    with pytest.raises(ParseError):
        validate_solution(e1, {9})


@pytest.mark.parametrize("text", [E1_TEXT, E2_TEXT, as_problem(E1_TEXT, "ssgw"), as_problem(E2_TEXT, "ssp")])
def test_serialize_round_trip(text):
    inst = parse_instance(text)
    assert parse_instance(serialize_instance(inst)) == inst


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 7),
    c=st.integers(1, 15),
    data=st.data(),
)
def test_empty_and_full_sets(n, c, data):
    sizes = data.draw(st.lists(st.integers(1, c), min_size=n, max_size=n))
    arcs = data.draw(st.sets(st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda a: a[0] != a[1])))
    kind = data.draw(st.sampled_from(["ssp", "ssg", "ssgw"]))
    inst = make_instance(kind, sizes, c, edges=arcs)
    assert parse_instance(serialize_instance(inst)) == inst
    assert validate_solution(inst, set()).total == 0
    if sum(sizes) <= c:
        assert validate_solution(inst, set(range(1, n + 1))).total == sum(sizes)
