import io
import json
import subprocess
import sys

import pytest

from tcd.cli import run_cli
from tcd.groups import make_group
from tcd.knotgroup import hom_count, presentation_from_json
from tcd.linres import system_from_json
from tcd.trel import relation_from_json

from conftest import EXAMPLES


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def ex(name):
    return EXAMPLES / name


TREL_GOLDEN = [
    ("ex321_straight.tcd", "ex321", None, "point"),
    ("ex321_braided.tcd", "ex321", None, "empty"),
    ("ex322_tangled.tcd", "ex322", None, "empty"),
    ("ex322_untangled.tcd", "ex322", None, "point"),
    ("ex323_pair.tcd", "ex323", "first", "point"),
    ("ex323_pair.tcd", "ex323", "second", "point"),
    ("ex325_first.tcd", "ex325", None, "point"),
    ("ex325_second.tcd", "ex325", None, "empty"),
    ("ex326_first.tcd", "ex326", None, "point"),
    ("ex326_second.tcd", "ex326", None, "empty"),
    ("belt_straight.tcd", "belt", None, "point"),
    ("belt_pi.tcd", "belt", None, "point"),
    ("belt_2pi.tcd", "belt", None, "point"),
]


@pytest.mark.parametrize("prog,bind,diagram,expected", TREL_GOLDEN)
def test_trel_golden(prog, bind, diagram, expected):
    args = ["eval", "--backend", "trel", "--bindings", ex(f"{bind}.bind.json"), ex(prog)]
    if diagram:
        args += ["--diagram", diagram]
    code, out, _ = run(*args)
    assert code == 0
    assert out == f"scalar: {expected}\n"


def test_colorings_golden():
    assert run("colorings", "--group", "D3", ex("trefoil.tcd")) == (0, '{"count": 12}\n', "")
    assert run("colorings", "--group", "D3", ex("unknot.tcd"))[1] == '{"count": 6}\n'
    assert run("colorings", "--group", "S3", ex("two_unknots.tcd"))[1] == '{"count": 36}\n'


def test_knotgroup_golden():
    code, out, _ = run("knotgroup", ex("trefoil.tcd"), "--simplify", "--hom-count", "S3")
    assert code == 0
    assert out == "⟨ a, c | c a C A C a ⟩\nhom count into S3: 12\n"
    assert run("knotgroup", ex("unknot.tcd"), "--simplify")[1] == "⟨ a | ⟩\n"
    code, out, _ = run("knotgroup", ex("trefoil.tcd"), "--hom-count", "C5")
    assert out.endswith("hom count into C5: 5\n")


def test_linres_golden():
    code, out, _ = run("eval", "--backend", "linres", "--bindings", ex("series.bind.json"), ex("series.tcd"))
    assert (code, out) == (0, "i_in1 - i_out1 = 0\nv_in1 - 3*i_out1 - v_out1 = 0\n")
    code, out, _ = run("eval", "--backend", "linres", "--bindings", ex("parallel.bind.json"),
                       ex("parallel.tcd"))
    assert out == "i_in1 - i_out1 = 0\nv_in1 - i_out1 - v_out1 = 0\n"
    code, out, _ = run("eval", "--backend", "linres", "--bindings", ex("lc.bind.json"), ex("lc_loop.tcd"))
    assert out == "q1' - 2/3*q2 = 0\nq2' + q1 = 0\n"


def test_check():
    code, out, _ = run("check", ex("ex323_pair.tcd"))
    assert code == 0
    assert out == "first : I -> I\nsecond : I -> I\n"
    code, out, err = run("check", ex("broken.tcd"))
    assert code == 2 and out == ""
    assert "broken.tcd:3: diagram 'main'" in err
    assert "X vs X,X" in err


def test_axioms_command():
    code, out, _ = run("axioms", "--group", "S3")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "75/75 laws hold in Tr_S3"
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_exit_codes():
    # evaluation errors exit 1
    code, _, err = run("colorings", "--group", "D3", ex("ex321_straight.tcd"))
    assert code == 1 and "component 'R'" in err
    code, _, err = run("colorings", "--group", "D3", ex("parallel.tcd"))
    assert code == 1
    # parse-level problems exit 2
    assert run("eval", "--backend", "trel", "--bindings", ex("ex323.bind.json"), ex("ex323_pair.tcd"))[0] == 2
    assert run("check", ex("missing.tcd"))[0] == 2
    assert run("colorings", "--group", "S9", ex("trefoil.tcd"))[0] == 1
    assert run("frobnicate")[0] == 2
    assert run("eval", ex("trefoil.tcd"))[0] == 2


def test_json_round_trips(S3):
    code, out, _ = run("--json", "eval", "--backend", "trel", "--bindings", ex("ex321.bind.json"),
                       ex("ex321_straight.tcd"))
    doc = json.loads(out)
    assert doc["scalar"] == "point" and doc["diagram"] == "main"
    assert relation_from_json(doc, S3).tuples == {()}
    code, out, _ = run("eval", "--backend", "linres", "--bindings", ex("lc.bind.json"),
                       ex("lc_loop.tcd"), "--json")
    s = system_from_json(json.loads(out))
    assert s.n_states == 2 and len(s.rows) == 2
    code, out, _ = run("knotgroup", ex("trefoil.tcd"), "--simplify", "--hom-count", "S3", "--json")
    doc = json.loads(out)
    assert doc["hom_count"] == 12
    assert hom_count(presentation_from_json(doc["presentation"]), make_group("S4")) == 96
    code, out, _ = run("--json", "check", ex("trefoil.tcd"))
    assert json.loads(out) == {"diagrams": {"main": {"dom": [], "cod": []}}}
    code, out, _ = run("--json", "axioms", "--group", "C3", "--max-width", "1")
    doc = json.loads(out)
    assert doc["failed"] == 0 and len(doc["laws"]) > 10


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tcd", "colorings", "--group", "D3", str(ex("trefoil.tcd"))],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"count": 12}
