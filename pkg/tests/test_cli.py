import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from complexcf import FormMatrix, RingId, Sigma
from complexcf.cli import main
from complexcf.serialize import (
    circle_from_json,
    dumps,
    expansion_from_json,
    expansion_to_json,
    load_schema,
    orbit_from_json,
    orbit_to_json,
)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def validate(doc, name):
    jsonschema.Draft202012Validator(load_schema(name)).validate(doc)


# -- expand ---------------------------------------------------------------------


def test_expand_sqrt2():
    doc = run_json("expand", "--ring", "G", "--poly", "1,0,-2", "--chooser", "nearest", "--depth", "6")
    validate(doc, "expansion-v1")
    assert [s["a"] for s in doc["steps"]] == [[1, 0]] + [[2, 0]] * 6
    assert [s["det"] for s in doc["steps"]] == [(-1) ** (n + 1) for n in range(7)]


def test_expand_sqrt2i():
    doc = run_json("expand", "--ring", "G", "--poly", "1,0,2", "--chooser", "nearest", "--depth", "5")
    assert [s["a"] for s in doc["steps"]] == [[0, 1], [0, -2], [0, 2], [0, -2], [0, 2], [0, -2]]


def test_expand_csv():
    code, out, _ = run("expand", "--ring", "G", "--poly", "1,0,-2", "--depth", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["q_norm"] for r in rows] == ["1", "4", "25", "144", "841"]
    assert float(rows[1]["abs_delta_lo"]) == pytest.approx(0.343145750508, abs=1e-9)


def test_expand_round_trip_and_determinism(tmp_path):
    argv = ["expand", "--ring", "E3", "--poly", "1,1,-3", "--depth", "40"]
    first, second = run(*argv), run(*argv)
    assert first == second
    doc = json.loads(first[1])
    e = expansion_from_json(doc)
    assert dumps(expansion_to_json(e)) == first[1]
    path = tmp_path / "out.json"
    assert main(argv + ["-o", str(path)], stdout=io.StringIO()) == 0
    assert path.read_text() == first[1]


def test_root_selection():
    doc = run_json("expand", "--ring", "G", "--poly", "1,0,-2", "--root=-1.4,0", "--depth", "3")
    assert doc["steps"][0]["a"] == [-1, 0]


# -- exit codes -----------------------------------------------------------------


def test_reducible_polynomial_exits_nonzero():
    code, _, err = run("expand", "--ring", "G", "--poly", "1,0,-1")
    assert code == 64 and "ReducibleOverK" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "--ring", "Q", "--poly", "1,0,-2"],
        ["expand", "--ring", "G", "--poly", "1,0"],
        ["expand", "--ring", "G", "--poly", "1,0,-2", "--depth", "0"],
        ["expand", "--ring", "G", "--poly", "1,0,-2", "--precision-cap", "32"],
        ["expand", "--ring", "G", "--poly", "1,0,-2", "--chooser", "bogus"],
        ["circle", "--ring", "G", "--center", "0", "--r2", "x"],
        ["circle", "--ring", "G", "--center", "1+", "--r2", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 64


def test_chooser_failure_exit_code():
    code, _, err = run("expand", "--ring", "G", "--poly", "1,0,-2", "--chooser", "script:1,5", "--depth", "3")
    assert code == 2 and "ChooserFailed" in err


def test_precision_failure_exit_code(monkeypatch):
    from complexcf import PrecisionCapExceeded, cli

    def boom(args):
        raise PrecisionCapExceeded("cap")

    monkeypatch.setattr(cli, "cmd_circle", boom)
    assert run("circle", "--ring", "G", "--center", "0", "--r2", "2")[0] == 3


# -- cycle, orbit, circle, probe --------------------------------------------------


def test_cycle():
    doc = run_json("cycle", "--ring", "G", "--poly", "1,0,-2", "--chooser", "nearest")
    assert (doc["cycle"]["preperiod"], doc["cycle"]["period"]) == (1, 1)
    doc = run_json("cycle", "--ring", "G", "--poly", "1,0,-2", "--chooser", "farthest:3/4")
    assert doc["cycle"]["period_quotients"] == ["2", "-1", "-2", "1"]


def test_orbit_round_trip():
    argv = ["orbit", "--ring", "G", "--poly", "1,0,2", "--form", "hermitian:1,0,0,-2", "--depth", "1000"]
    code, out, _ = run(*argv)
    assert code == 0 and run(*argv)[1] == out
    doc = json.loads(out)
    validate(doc, "orbit-v1")
    assert len(doc["distinct"]) == 2 and doc["stabilization_index"] == 2
    report, X = orbit_from_json(doc)
    assert X == FormMatrix(1, 0, 0, -2, sigma=Sigma.CONJUGATION, ring=RingId.G)
    assert dumps(orbit_to_json(report, X, depth=doc["depth"], radius=Fraction(doc["neat_radius"]))) == out


def test_circle_commands():
    doc = run_json("circle", "--ring", "G", "--center", "0", "--r2", "1847")
    validate(doc, "circle-v1")
    assert doc["verdict"] == {"kind": "AllBad", "failing": [1847], "moduli": [8]}
    doc = run_json("circle", "--ring", "G", "--center", "0", "--r2", "2")
    assert doc["verdict"] == {"kind": "HasRationalPoint", "witness": "1+w"}
    doc = run_json("circle", "--ring", "E3", "--center", "1/2", "--r2", "2/3")
    assert doc["verdict"]["kind"] == "AllBad" and doc["verdict"]["failing"] == [2]
    c, v = circle_from_json(doc)
    assert c.center.to_fraction() == Fraction(1, 2)


def test_probe():
    code, out, err = run("probe", "--ring", "G", "--poly", "1,0,-2", "--depth", "50")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 51
    assert min(float(r["abs_delta_lo"]) for r in rows) == pytest.approx(0.343145750508, abs=1e-9)
    assert "0.343145750" in err


def test_sweep_is_seeded():
    argv = ["sweep", "--ring", "E7", "--count", "3", "--seed", "11", "--depth", "2000"]
    a, b = run(*argv), run(*argv)
    assert a == b and a[0] == 0
    assert all(r["period"] for r in json.loads(a[1])["runs"])


def test_batch_preserves_order(tmp_path):
    lines = [
        "expand --ring G --poly 1,0,-2 --depth 3",
        "circle --ring G --center 0 --r2 7",
        "expand --ring G --poly 1,0,-1",
        "cycle --ring E11 --poly 1,0,-2",
    ]
    path = tmp_path / "jobs.txt"
    path.write_text("# jobs\n" + "\n".join(lines) + "\n")
    doc = run_json("batch", str(path), "--workers", "3")
    assert [r["args"] for r in doc] == lines
    assert [r["exit"] for r in doc] == [0, 0, 64, 0]
    assert doc[0]["output"] == run(*lines[0].split())[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "complexcf", "circle", "--ring", "G", "--center", "0", "--r2", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"]["kind"] == "HasRationalPoint"
