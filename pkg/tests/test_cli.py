from __future__ import annotations

import io
import re
import subprocess
import sys

import pytest

from support import FIXTURES, LISTINGS

from tdtypes.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


F = FIXTURES


def test_check_figure_hierarchy():
    code, out, err = run("check", F / "figure.tdd")
    assert code == 0
    lines = out.splitlines()
    assert "FIGURE: dummy type (root scalar)" in lines
    assert "ELLIPSE: nonroot scalar type (regular union)" in lines
    assert "CIRCLE: nonroot scalar type (non-union)" in lines
    assert len(lines) == 13


def test_check_single_branch_figure_fails_naming_figure():
    code, out, err = run("check", F / "figure_chain.tdd")
    assert code == 1 and out == ""
    assert re.search(r"figure_chain\.tdd:2:1: error: union type FIGURE requires at least 2", err)


def test_check_ellipse_union():
    code, out, _ = run("check", F / "ellipse_union.tdd")
    assert code == 0
    assert out.splitlines() == [
        "ELLIPSE: root scalar type (regular union)",
        "CIRCLE: nonroot scalar type (non-union)",
        "NONCIRCLE: nonroot scalar type (non-union)",
    ]


def test_check_alpha_declaration():
    code, _, err = run("check", F / "alpha_decl.tdd")
    assert code == 1 and "alpha cannot be declared" in err
    code, _, err = run("check", F / "omega_decl.tdd")
    assert code == 1 and "omega cannot be declared" in err


def test_check_empty_file():
    assert run("check", F / "empty.tdd") == (0, "", "")


def test_exit_codes():
    assert run("check", F / "broken.tdd")[0] == 2
    assert run("check", F / "cycle.tdd")[0] == 1
    assert run("check", F / "missing.tdd")[0] == 3
    assert run("frobnicate")[0] == 3
    assert run("check")[0] == 3
    assert run("check", "--mode=sideways", F / "empty.tdd")[0] == 3


def test_every_diagnostic_is_positioned():
    for name in ("broken.tdd", "cycle.tdd", "figure_chain.tdd", "alpha_decl.tdd", "builtin_super.tdd"):
        _, _, err = run("check", F / name)
        for line in err.splitlines():
            assert re.match(rf".*{name}:\d+:\d+: (error|warning|note): ", line), line


def test_multiple_files_merge_in_order(tmp_path):
    a = tmp_path / "a.tdd"
    b = tmp_path / "b.tdd"
    a.write_text("TYPE ELLIPSE UNION POSSREP {A RATIONAL};\n")
    b.write_text(
        "TYPE CIRCLE IS {ELLIPSE CONSTRAINT x POSSREP {R = THE_A(ELLIPSE)}};\n"
        "TYPE NONCIRCLE IS {ELLIPSE CONSTRAINT y POSSREP {A = THE_A(ELLIPSE)}};\n"
    )
    code, out, _ = run("check", a, b)
    assert code == 0 and out.splitlines()[0].startswith("ELLIPSE:")
    code, _, err = run("check", a, a)
    assert code == 1 and "duplicate" in err


def test_check_classification_branches():
    code, out, _ = run("check", F / "branches.tdd")
    assert code == 0
    labels = {line.split(": ", 1)[1] for line in out.splitlines()}
    assert {
        "root scalar type (non-union)",
        "root scalar type (regular union)",
        "nonroot scalar type (non-union)",
        "nonroot scalar type (regular union)",
        "dummy type (root scalar)",
        "dummy type (nonroot scalar)",
        "root nonscalar type (relation)",
        "nonroot nonscalar type (tuple)",
        "dummy type (nonroot nonscalar relation)",
        "dummy type (root nonscalar tuple)",
        "nonroot nonscalar type (tuple, union)",
        "null type #",
    } <= labels


def test_plain_mode():
    code, out, _ = run("check", "--mode=plain", F / "plain.tdd")
    assert code == 0
    assert out.splitlines() == [
        "POINT: scalar type",
        "MONTH: scalar type",
        "VAR P: variable of type POINT: scalar type",
        "VAR T: tuple type",
        "VAR R: relation type",
    ]
    code, _, err = run("check", "--mode=plain", F / "plain_union.tdd")
    assert code == 1 and "UNION" in err
    code, _, err = run("check", "--mode=plain", F / "plain_no_possrep.tdd")
    assert code == 1 and "possible representation" in err


def test_strict_mode():
    code, _, err = run("check", "--strict", F / "diamond.tdd")
    assert code == 2 and "omits UNION" in err


def test_subtype():
    assert run("subtype", F / "figure.tdd", "CIRCLE", "ELLIPSE")[:2] == (0, "true\n")
    assert run("subtype", F / "figure.tdd", "ELLIPSE", "CIRCLE")[:2] == (0, "false\n")
    cs, er = "RELATION {E CIRCLE, R SQUARE}", "RELATION {E ELLIPSE, R RECTANGLE}"
    assert run("subtype", F / "figure.tdd", cs, er)[:2] == (0, "true\n")
    assert run("subtype", F / "figure.tdd", "NOPE", "ELLIPSE")[0] == 3
    assert run("subtype", F / "figure.tdd", "TUPLE {E NOPE}", "TUPLE {E ELLIPSE}")[0] == 3
    assert run("subtype", F / "figure.tdd", "TUPLE {E", "ELLIPSE")[0] == 3


def test_null_never_subtype_of_declared():
    for t in ("ELLIPSE", "FIGURE", "alpha", "INTEGER"):
        assert run("subtype", F / "figure.tdd", "#", t)[1] == "false\n"
    assert run("subtype", F / "figure.tdd", "#", "#")[1] == "true\n"


def test_classify():
    code, out, _ = run("classify", F / "figure.tdd", "FIGURE", "INTEGER", "#", "RELATION {E FIGURE}")
    assert code == 0
    assert out.splitlines() == [
        "FIGURE: dummy type (root scalar)",
        "INTEGER: built-in scalar type",
        "#: null type #",
        "RELATION {E FIGURE}: dummy type (root nonscalar relation)",
    ]
    assert run("classify", F / "figure.tdd", "NOPE")[0] == 3


def test_lattice():
    code, out, _ = run("lattice", F / "diamond.tdd", "--dot")
    assert code == 0
    assert '"SQUARE" -> "RECTANGLE";' in out and '"SQUARE" -> "RHOMBUS";' in out
    code, out, _ = run("lattice", F / "diamond.tdd")
    assert out.splitlines() == ["SQUARE -> RECTANGLE", "SQUARE -> RHOMBUS"]
    single = run("lattice", F / "plain_no_possrep.tdd", "--dot", "--mode=plain")
    assert single[0] == 1


def test_lattice_closure(tmp_path):
    f = tmp_path / "t.tdd"
    f.write_text("TYPE T POSSREP {X INTEGER};")
    _, out, _ = run("lattice", f, "--dot")
    assert "->" not in out and '"T";' in out
    _, out, _ = run("lattice", f, "--dot", "--closure")
    assert '"T" -> "alpha";' in out and '"omega" -> "T";' in out


def test_mst():
    assert run("mst", F / "figure.tdd", "--tag", "ELLIPSE")[:2] == (0, "ELLIPSE\n")
    assert run("mst", F / "figure.tdd", "TUPLE {}")[:2] == (0, "TUPLE {}\n")
    assert run("mst", F / "figure.tdd", "RELATION {E ELLIPSE} {}")[:2] == (0, "RELATION {E omega}\n")
    assert run("mst", F / "figure.tdd", "TUPLE {E CIRCLE(1), R SQUARE(2)}")[1] == "TUPLE {E CIRCLE, R SQUARE}\n"
    assert run("mst", F / "figure.tdd", "--tag", "CIRCLE", "--least")[1] == "FIGURE\n"


def test_mst_errors():
    code, _, err = run("mst", F / "diamond_open.tdd", "RELATION {F RECTANGLE} {TUPLE {F SQUARE(1)}, TUPLE {F KITE(2)}}")
    assert code == 1 and "RECTANGLE, RHOMBUS" in err
    assert err.startswith("<value>:1:1: error: ")
    assert run("mst", F / "diamond.tdd", "--tag", "SQUARE", "--least")[0] == 1
    assert run("mst", F / "figure.tdd", "--tag", "NOPE")[0] == 3
    assert run("mst", F / "figure.tdd")[0] == 3
    assert run("mst", F / "figure.tdd", "TUPLE {E")[0] == 2


def test_null_conforms_flag():
    assert run("mst", F / "figure.tdd", "#", "--conforms", "ELLIPSE")[1] == "false\n"
    assert run("mst", F / "figure.tdd", "#", "--conforms", "#")[1] == "true\n"
    assert run("mst", F / "figure.tdd", "#", "--conforms", "ELLIPSE", "--null-conforms-all")[1] == "true\n"
    t = "TUPLE {X #}"
    assert run("mst", F / "figure.tdd", t, "--conforms", "TUPLE {X ELLIPSE}")[1] == "false\n"
    assert run("mst", F / "figure.tdd", t, "--conforms", "TUPLE {X ELLIPSE}", "--null-conforms-all")[1] == "true\n"


def test_no_null_attributes_flag():
    code, _, err = run("check", "--no-null-attributes", F / "branches.tdd")
    assert code == 2 and "#" in err


def test_assume_declared_listings():
    code, out, err = run("check", "--assume-declared", LISTINGS / "07_circle.tdd")
    assert code == 0 and out == "CIRCLE: nonroot scalar type (non-union)\n"
    assert re.search(r"07_circle\.tdd:\d+:\d+: note: assuming ELLIPSE is declared", err)
    assert run("check", LISTINGS / "07_circle.tdd")[0] == 1


def test_color():
    _, _, err = run("check", "--color=on", F / "cycle.tdd")
    assert "\033[31m" in err
    _, _, err = run("check", "--color=off", F / "cycle.tdd")
    assert "\033[" not in err


def test_deterministic_output():
    first = run("lattice", F / "figure.tdd", "--dot", "--closure")
    assert all(run("lattice", F / "figure.tdd", "--dot", "--closure") == first for _ in range(3))


@pytest.mark.parametrize("args, code", [(["check", "empty.tdd"], 0), (["check", "cycle.tdd"], 1)])
def test_module_entry_point(args, code):
    proc = subprocess.run([sys.executable, "-m", "tdtypes", *args], cwd=F, capture_output=True, text=True)
    assert proc.returncode == code
