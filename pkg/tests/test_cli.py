from __future__ import annotations

import io
import subprocess
import sys

import pytest

from hopfinv import cli
from hopfinv.formats import builtin_model, format_model, parse_document
from hopfinv.model import validate_model
from hopfinv.parse import ParseError

from support import DATA


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_sphere_file(capsys):
    code, out, _ = run(capsys, "validate", DATA / "s2.txt")
    assert code == 0
    assert out == "model s2: valid, one-connected\n"


def test_validate_lists_violations(capsys):
    code, out, _ = run(capsys, "validate", DATA / "bad_d2.txt")
    assert code == 1
    assert out.splitlines()[0] == "model bad: invalid"
    assert "d^2 != 0 on a" in out


def test_malformed_line_reports_its_number(capsys):
    code, _, err = run(capsys, "validate", DATA / "malformed.txt")
    assert code == 2
    assert "line 3" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "validate", DATA / "nope.txt")
    assert code == 2


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("model a\ngenerator x degree 2\n"))
    code, out, _ = run(capsys, "validate", "-")
    assert code == 0 and "valid" in out


def test_homology_table(capsys):
    code, out, _ = run(capsys, "homology", "sphere(3)", "--complex", "eil", "--max-degree", 4)
    assert code == 0
    assert out == "degree\trank\n1\t0\n2\t1\n3\t0\n4\t0\n"


def test_homology_truncates_free_models_far_enough(capsys):
    code, out, _ = run(capsys, "homology", DATA / "s2.txt", "--max-degree", 6)
    assert code == 0
    assert out.splitlines()[1:] == ["1\t1", "2\t1", "3\t0", "4\t0", "5\t0", "6\t0"]


def test_homology_cap(capsys):
    code, _, err = run(capsys, "homology", "wedge(2,2,2)", "--complex", "bar", "--max-degree", 4, "--cap", 5)
    assert code == 3
    assert "piece" in err


@pytest.mark.parametrize(
    "cocycle, expected",
    [("x|x + y", "1"), ("2*x|x + 2*y", "2"), ("x", "0")],
)
def test_hopf(capsys, cocycle, expected):
    code, out, _ = run(capsys, "hopf", DATA / "hopf.txt", "--cocycle", cocycle)
    assert (code, out.strip()) == (0, expected)


def test_hopf_with_the_graph_quotient(capsys):
    code, out, _ = run(capsys, "hopf", DATA / "hopf.txt", "--complex", "eil", "--cocycle", "x|x + y")
    assert (code, out.strip()) == (0, "1")
    code, out, _ = run(
        capsys, "hopf", DATA / "hopf.txt", "--complex", "eil", "--cocycle", "tree{v1:y} + tree{v1:x, v2:x; v1->v2}"
    )
    assert (code, out.strip()) == (0, "1")


def test_hopf_rejects_open_cocycles(capsys):
    code, _, err = run(capsys, "hopf", DATA / "hopf.txt", "--cocycle", "x|x")
    assert code == 1
    assert "not closed" in err


def test_bad_cocycle_syntax(capsys):
    code, _, err = run(capsys, "hopf", DATA / "hopf.txt", "--cocycle", "x||x")
    assert code == 2


def test_pair(capsys):
    code, out, _ = run(capsys, "pair", "wedge(2,3)", "--cocycle", "x|y", "--bracket", "[y,x]")
    assert (code, out.strip()) == (0, "-1")
    code, out, _ = run(capsys, "pair", DATA / "conf3.txt", "--complex", "eil",
                       "--cocycle", "(a31+a12)|(a12+a23)", "--bracket", "[a12,a23]")
    assert (code, out.strip()) == (0, "1")


def test_pair_bracket_errors(capsys):
    code, _, err = run(capsys, "pair", "wedge(2,3)", "--cocycle", "x|y", "--bracket", "[x,q]")
    assert code == 2
    code, _, _ = run(capsys, "pair", "wedge(2,3)", "--cocycle", "x|y", "--bracket", "[x,y")
    assert code == 2


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "sphere(3)", "--cocycle", "w")
    assert code == 0
    assert out.splitlines()[0] == "w"
    code, out, _ = run(capsys, "reduce", DATA / "weight3.txt", "--model", "T",
                       "--cocycle", "a*b*C - w + A*b|C + A|B|C")
    assert code == 0
    assert out.splitlines() == ["-w", "certificate: a*b|C + a|B|C", "integral: -1"]


def test_reduce_rejects_open_cocycles(capsys):
    code, _, err = run(capsys, "reduce", "sphere(2)", "--cocycle", "w|w")
    assert code == 1
    assert "not closed" in err
    # closed, but of weight two in cohomology
    code, _, err = run(capsys, "reduce", "sphere(3)", "--cocycle", "w|w")
    assert code == 1
    assert "preimage" in err


def test_weight_three_file(capsys):
    code, out, _ = run(capsys, "hopf", DATA / "weight3.txt", "--model", "X", "--morphism", "f",
                       "--cocycle", "x1|x2|x3 - x12|x3 - x123")
    assert (code, out.strip()) == (0, "-1")


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "hopfinv", "homology", str(DATA / "cp2.txt"), "--max-degree", "6"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert first.startswith(b"degree\trank\n")


def test_builtin_names():
    assert builtin_model("sphere(4)").names[:2] == ("w", "w'")
    assert builtin_model("wedge(2, 3)").names == ("x", "y")
    assert builtin_model("hopf") is None


@pytest.mark.parametrize("name", ["hopf.txt", "conf3.txt", "cp2.txt", "weight3.txt"])
def test_format_model_round_trip(name):
    doc = parse_document((DATA / name).read_text())
    for m in doc.models.values():
        assert validate_model(m).valid
        again = parse_document(format_model(m)).model(m.name)
        assert format_model(again) == format_model(m)


def test_document_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_document("model a\ngenerator x degree 2\nd x = y\n")
    assert info.value.line == 3
    with pytest.raises(ParseError) as info:
        parse_document("model a\ngenerator x degree 2\nmorphism f from a to b\n")
    assert info.value.line == 3
    with pytest.raises(ParseError) as info:
        parse_document("model a\nkind table\nbasis u degree 2\nproduct u v = u\n")
    assert info.value.line == 4


def test_long_graph_against_lyndon_brackets(capsys):
    path = "tree{v1:x, v2:y, v3:z; v1->v2, v2->v3}"
    row = []
    for b in ("[x,[y,z]]", "[[x,z],y]"):
        code, out, _ = run(capsys, "pair", "wedge(2,2,2)", "--complex", "eil", "--cocycle", path, "--bracket", b)
        assert code == 0
        row.append(out.strip())
    assert row == ["1", "0"]
