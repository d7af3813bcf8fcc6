import itertools
import re
import subprocess
import sys

import pytest

from helpers import E1_TEXT, E2_TEXT, as_problem
from ssgsolve import cli, parse_instance, serialize_instance
from ssgsolve.digraph import N_ARCS
from ssgsolve.oracle import feasible_family


@pytest.fixture
def write(tmp_path):
    def _write(text, name="inst.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def edges_text(n, arcs, kind="ssg", c=10, sizes=None):
    sizes = sizes or [1] * n
    lines = [f"problem {kind}", f"capacity {c}", f"items {n}"]
    lines += [f"size {j} {s}" for j, s in enumerate(sizes, start=1)]
    lines += ["graph edges"] + [f"arc {u} {v}" for u, v in arcs] + ["end"]
    return "\n".join(lines) + "\n"


def test_solve_examples(capsys, write):
    assert run(capsys, "solve", write(E1_TEXT), "--emit-solution")[1] == "OPT 7\nSOLUTION 2 3 4\n"
    assert run(capsys, "solve", write(as_problem(E2_TEXT, "ssgw")), "--emit-solution")[1] == "OPT 7\nSOLUTION 3 4\n"
    assert run(capsys, "solve", write(E2_TEXT), "--emit-solution")[1] == "OPT 6\nSOLUTION 2 5 6\n"
    assert run(capsys, "solve", write(E1_TEXT))[1] == "OPT 7\n"


def test_solve_table_layout(capsys, write):
    out = run(capsys, "solve", write(E1_TEXT), "--emit-tables")[1]
    lines = out.splitlines()
    assert lines[1] == "TABLE F"
    assert lines[2].split("\t") == ["X'"] + [str(s) for s in range(8)]
    assert [ln.split("\t")[0] for ln in lines[3:]] == [
        "v1", "v2", "v3", "v4", "(v1 + v3)", "(v2 * v4)", "((v1 + v3) -> (v2 * v4))",
    ]
    assert lines[-1].split("\t")[1:] == ["1", "0", "0", "0", "0", "1", "1", "1"]


def test_solve_ssp_and_edges(capsys, write):
    assert run(capsys, "solve", write(as_problem(E1_TEXT, "ssp")))[1] == "OPT 7\n"
    text = edges_text(3, [(1, 2), (2, 3)], c=4, sizes=[1, 2, 3])
    assert run(capsys, "solve", write(text), "--emit-solution")[1] == "OPT 3\nSOLUTION 3\n"
    cyc = edges_text(3, [(1, 2), (2, 3), (3, 1)], c=4, sizes=[1, 1, 1])
    assert run(capsys, "solve", write(cyc))[1] == "OPT 3\n"
    n_graph = edges_text(4, sorted(N_ARCS), c=3)
    assert run(capsys, "solve", write(n_graph), "--emit-solution")[1] == "OPT 3\nSOLUTION 1 3 4\n"
    clique = edges_text(2, [(1, 2), (2, 1)], c=1)
    assert run(capsys, "solve", write(clique))[1] == "OPT 0\n"


def test_solve_ssgw_edges(capsys, write):
    path = edges_text(3, [(1, 2), (2, 3)], kind="ssgw", c=2)
    assert run(capsys, "solve", write(path), "--emit-solution")[1] == "OPT 2\nSOLUTION 2 3\n"
    code, out, err = run(capsys, "solve", write(edges_text(4, sorted(N_ARCS), kind="ssgw")))
    assert code == 2 and out == "" and "series-parallel" in err


def test_solve_errors(capsys, write):
    code, out, err = run(capsys, "solve", write("problem ssg\ncapacity 3\nitems 1\nsize 1 0\ngraph dico v1\n"))
    assert code == 1 and "size out of range" in err and "line 4" in err
    code, _, err = run(capsys, "solve", "/nonexistent/file.txt")
    assert code == 1 and err.startswith("error:")
    code, _, _ = run(capsys, "solve", write(edges_text(6, [(1, 2), (2, 1)])), "--max-components", "3")
    assert code == 2


def test_oracle(capsys, write):
    assert run(capsys, "oracle", write(E1_TEXT))[1] == "SPECTRUM 0 5 6 7\nOPT 7\n"
    out = run(capsys, "oracle", write(as_problem(E1_TEXT, "ssgw")))[1]
    assert "(7,2)" in out.split("\n")[0].split() and "TRACKED sources" in out
    out = run(capsys, "oracle", write(as_problem(E2_TEXT, "ssgw")))[1]
    assert "TRACKED sinks" in out and "OPT 7" in out
    single = "problem ssg\ncapacity 5\nitems 1\nsize 1 4\ngraph dico v1\n"
    assert run(capsys, "oracle", write(single))[1] == "SPECTRUM 0 4\nOPT 4\n"
    big = edges_text(25, [])
    code, _, err = run(capsys, "oracle", write(big))
    assert code == 2 and "instance-too-large" in err


def test_check(capsys, write):
    e1 = write(E1_TEXT)
    assert run(capsys, "check", e1, "--set", "2,3,4")[1] == "FEASIBLE 7\n"
    assert run(capsys, "check", e1, "--set", "1")[1] == "INFEASIBLE digraph-constraint v2\n"
    assert run(capsys, "check", e1, "--set", "")[1] == "FEASIBLE 0\n"
    assert run(capsys, "check", e1, "--set", "1,2,3,4")[1] == "INFEASIBLE capacity 8\n"
    code, _, err = run(capsys, "check", e1, "--set", "9")
    assert code == 1 and "unknown item id 9" in err
    assert run(capsys, "check", e1, "--set", "a")[0] == 1


def test_gen(capsys):
    out = run(capsys, "gen", "--class", "dico", "--n", "1")[1]
    inst = parse_instance(out)
    assert inst.n == 1 and out.strip().endswith("graph dico v1")
    first = run(capsys, "gen", "--class", "msp", "--n", "6", "--seed", "7")[1]
    second = run(capsys, "gen", "--class", "msp", "--n", "6", "--seed", "7")[1]
    assert first == second
    assert run(capsys, "gen", "--class", "msp", "--n", "3", "--c", "2", "--max-size", "5")[0] == 1
    assert run(capsys, "gen", "--class", "msp", "--n", "0")[0] == 1
    assert run(capsys, "gen", "--n", "3")[0] == 1


def test_gen_round_trips_over_many_seeds(capsys):
    for seed in range(1000):
        cls = "dico" if seed % 2 else "msp"
        problem = ("ssp", "ssg", "ssgw")[seed % 3]
        n = str(seed % 12 + 1)
        code, out, _ = run(capsys, "gen", "--class", cls, "--n", n, "--seed", str(seed), "--problem", problem)
        assert code == 0
        inst = parse_instance(out)
        assert serialize_instance(inst) == out and inst.graph.kind.value == cls


def test_export_examples(capsys, write):
    out = run(capsys, "export-ip", write(E1_TEXT))[1]
    assert "max: 1 x1 + 2 x2 + 2 x3 + 3 x4;" in out
    assert "x1 - x2 <= 0;" in out and "x2 - x4 <= 0;" in out
    out = run(capsys, "export-ip", write(as_problem(E1_TEXT, "ssgw")))[1]
    assert "x1 + x2 + x3 - x4 <= 2;" in out
    single = run(capsys, "export-ip", write("problem ssg\ncapacity 1\nitems 1\nsize 1 1\ngraph dico v1\n"))[1]
    rows = [ln for ln in single.splitlines() if ln and not ln.startswith("/*")]
    assert rows == ["max: 1 x1;", "capacity: 1 x1 <= 1;", "bin x1;"]
    ssp = run(capsys, "export-ip", write(as_problem(E1_TEXT, "ssp")))[1]
    assert "<= 0;" not in ssp


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*x(\d+)")


def _lp_feasible(text, n):
    rows = []
    for line in text.splitlines():
        if ":" in line and "<=" in line:
            lhs, rhs = line.split(":", 1)[1].rstrip(";").split("<=")
            coeffs = {}
            for sign, mult, var in _TERM.findall(lhs):
                coeffs[int(var)] = (-1 if sign == "-" else 1) * int(mult or 1)
            rows.append((coeffs, int(rhs)))
    for bits in itertools.product((0, 1), repeat=n):
        x = dict(enumerate(bits, start=1))
        if all(sum(k * x[v] for v, k in coeffs.items()) <= rhs for coeffs, rhs in rows):
            yield frozenset(v for v in x if x[v])


@pytest.mark.parametrize("kind", ["ssg", "ssgw", "ssp"])
def test_export_feasible_points_match_oracle(capsys, write, kind):
    import random

    from ssgsolve.generate import random_digraph

    rng = random.Random(kind)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = random_digraph(rng, n, 0.35)
        sizes = [rng.randint(1, 5) for _ in range(n)]
        c = rng.randint(max(sizes), 15)
        text = edges_text(n, sorted(g.arcs), kind=kind, c=c, sizes=sizes)
        out = run(capsys, "export-ip", write(text))[1]
        expected = {s for s in feasible_family(g, kind) if sum(sizes[v - 1] for v in s) <= c}
        assert set(_lp_feasible(out, n)) == expected


def test_decompose(capsys, write):
    e2_edges = edges_text(6, [(1, 2), (3, 4), (2, 5), (4, 5), (5, 6)])
    out = run(capsys, "decompose", write(e2_edges))[1].strip()
    from ssgsolve.expressions import eval_msp, parse_msp

    assert eval_msp(parse_msp(out)).arcs == {(1, 2), (3, 4), (2, 5), (4, 5), (5, 6)}
    assert run(capsys, "decompose", write(edges_text(2, [(1, 2)])))[1] == "(v1 * v2)\n"
    code, _, err = run(capsys, "decompose", write(edges_text(4, sorted(N_ARCS))))
    assert code == 2 and "not-decomposable" in err
    code, _, err = run(capsys, "decompose", write(edges_text(2, [(1, 2), (2, 1)])))
    assert code == 2 and "not-a-dag" in err
    assert run(capsys, "decompose", write(E1_TEXT))[0] == 1


def test_console_entry_point(tmp_path):
    path = tmp_path / "e1.txt"
    path.write_text(E1_TEXT, encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "ssgsolve.cli", "solve", str(path), "--emit-solution"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "OPT 7\nSOLUTION 2 3 4\n"


def test_solve_agrees_with_oracle(capsys, write):
    import random

    from ssgsolve.generate import random_instance

    rng = random.Random(99)
    for k in range(120):
        cls = ("dico", "msp")[k % 2]
        problem = ("ssp", "ssg", "ssgw")[k % 3]
        inst = random_instance(rng, rng.randint(1, 9), cls, rng.randint(6, 20), 6, problem)
        path = write(serialize_instance(inst))
        solved = run(capsys, "solve", path)[1]
        oracle = run(capsys, "oracle", path)[1]
        assert solved.splitlines()[0] == oracle.splitlines()[-1]
