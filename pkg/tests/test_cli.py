import csv
import io
import json
import subprocess
import sys

import pytest

from radlayer.cli import main
from radlayer.layering import components, roots_table
from radlayer.rep import Representation, raddim, socdim


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_components_table():
    code, text = run("components", "--n", "2", "--d", "7")
    assert code == 0
    rows = [line.split()[0] for line in text.splitlines()[2:]]
    assert rows == ["(2,2,3)*", "(2,3,2)", "(3,3,1)*"]


def test_components_json_roundtrip():
    code, text = run("components", "--n", "2", "--d", "13", "--json")
    obj = json.loads(text)
    assert obj == components(2, 13).to_json()
    exc = {tuple(c["layering"]) for c in obj["components"] if c["exceptional"]}
    assert exc == {(3, 4, 6), (6, 5, 2)}


@pytest.mark.parametrize(
    "lay, line",
    [
        ("1,3,0", "NO: d1 ≤ n·d0 violated (3 > 2)"),
        ("1,1,2", "NO: n·d2 ≤ (n²-1)·d1 violated (4 > 3)"),
        ("1,2,3", "YES: some module has radical layering (1,2,3) (n=2)"),
    ],
)
def test_exists(lay, line):
    code, text = run("exists", "--n", "2", "--layering", lay)
    assert code == 0
    assert text.strip() == line


def test_socdim():
    code, text = run("socdim", "--n", "2", "--layering", "2,2,3", "--json")
    assert json.loads(text) == {
        "n": 2, "layering": [2, 2, 3], "generic_socdim": [3, 3, 1], "h0": 1, "h1": 0, "certified": True,
    }


def test_sample_pass_line():
    code, text = run("sample", "--n", "2", "--layering", "2,2,3", "--samples", "200", "--p", "32003", "--seed", "7")
    assert code == 0
    assert text.splitlines()[-1].startswith("socdim min = (3,3,1) - PASS")


def test_sample_fail_exit_code():
    # closed form is off here (see the sampler tests); the verdict must say so
    code, text = run("sample", "--n", "2", "--layering", "10,5,1", "--samples", "30", "--seed", "0")
    assert code == 1
    assert "FAIL" in text.splitlines()[-1]


def test_sample_byte_identical():
    args = ("sample", "--n", "2", "--layering", "2,3,2", "--samples", "40", "--seed", "3", "--json")
    assert run(*args) == run(*args)


def test_sample_json_schema():
    code, text = run("sample", "--n", "2", "--layering", "2,3,2", "--samples", "20", "--seed", "1", "--json")
    obj = json.loads(text)
    assert obj["socdimMin"] == [2, 3, 2]
    assert {"layering", "h0Min", "h1Min", "histogram", "seed", "samples"} <= set(obj)


def test_ci_mode_requires_seed(monkeypatch):
    monkeypatch.setenv("CI_MODE", "1")
    code, _ = run("sample", "--n", "2", "--layering", "2,3,2", "--samples", "5")
    assert code == 2
    code, _ = run("fibers", "--presentation", "x3y2", "--layering", "1,1,1", "--samples", "5")
    assert code == 2


def test_entropy_seed_is_printed(monkeypatch):
    monkeypatch.delenv("CI_MODE", raising=False)
    code, text = run("sample", "--n", "2", "--layering", "1,1,1", "--samples", "3")
    assert code == 0
    assert text.splitlines()[0].startswith("seed: ")


def test_usage_errors():
    assert run("exists", "--n", "2", "--layering", "1,2")[0] == 2
    assert run("socdim", "--n", "2", "--layering", "1,3,0")[0] == 2
    assert run("sample", "--n", "1", "--layering", "1,1,1", "--seed", "0")[0] == 2
    assert run("bogus")[0] == 2
    assert run("construct", "--n", "2", "--layering", "1,3,1", "--seed", "0")[0] == 2


def test_construct_and_analyze(tmp_path):
    path = tmp_path / "w.json"
    code, text = run("construct", "--n", "2", "--a", "2", "--out", str(path))
    assert code == 0
    rep = Representation.loads(path.read_text())
    assert (raddim(rep).flat, socdim(rep).flat) == ((2, 2, 3), (3, 3, 1))
    code, text = run("analyze", "--in", str(path))
    assert code == 0
    assert "raddim: (2,2,3)" in text and "socdim: (3,3,1)" in text
    assert "h0 = 1" in text


def test_construct_families(tmp_path):
    for lemma, lay in [("dim1", "2,1,1"), ("dimgt1", "1,2,3")]:
        path = tmp_path / f"{lemma}.json"
        code, _ = run("construct", "--n", "2", "--layering", lay, "--lemma", lemma, "--out", str(path))
        assert code == 0
        assert raddim(Representation.loads(path.read_text())).flat == tuple(map(int, lay.split(",")))
    code, _ = run("construct", "--n", "2", "--layering", "1,2,2", "--lemma", "dimgt1")
    assert code == 2


def test_construct_any_to_stdout():
    code, text = run("construct", "--n", "2", "--layering", "1,2,2", "--seed", "0")
    assert code == 0
    assert raddim(Representation.loads(text)).flat == (1, 2, 2)


def test_analyze_reports_broken_relations(tmp_path):
    path = tmp_path / "w.json"
    run("construct", "--n", "2", "--layering", "1,1,1", "--lemma", "dim1", "--out", str(path))
    obj = json.loads(path.read_text())
    # set an A-entry of x2 (row 0, column 1) so that A_2 C_2 != 0
    obj["arrows"]["x2"][0][1] = 1
    path.write_text(json.dumps(obj))
    code, text = run("analyze", "--in", str(path))
    assert code == 1
    assert "FAILED" in text


def test_fibers_builtin_names():
    code, text = run("fibers", "--presentation", "x3y2", "--layering", "1,1,1", "--samples", "50", "--seed", "3")
    assert code == 0
    assert "verdict: NOT constant" in text
    code, text = run(
        "fibers", "--presentation", "two-vertex:ba", "--layering", "1,1;1,1;1,1", "--samples", "20", "--seed", "0", "--json"
    )
    assert code == 0
    assert json.loads(text)["constant"] is True


def test_fibers_from_file(tmp_path):
    from radlayer.algebra import make_local_algebra

    path = tmp_path / "p.json"
    path.write_text(json.dumps(make_local_algebra(2).to_json()))
    code, text = run("fibers", "--presentation", str(path), "--layering", "1,2,2", "--samples", "10", "--seed", "0")
    assert code == 0 and "verdict: constant" in text
    assert run("fibers", "--presentation", "nope", "--layering", "1", "--seed", "0")[0] == 2


def test_roots_csv(tmp_path):
    path = tmp_path / "roots.csv"
    code, _ = run("roots", "--n", "2", "--max", "6", "--out", str(path))
    assert code == 0
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["d1", "d2", "q", "is_generator", "is_excluded"]
    assert len(rows) == len(roots_table(2, 6))
    assert {r["is_excluded"] for r in rows} == {"true", "false"}
    assert [(r["d1"], r["d2"]) for r in rows if r["is_excluded"] == "true"] == [("1", "2")]


def test_enumerate():
    code, text = run("enumerate", "--n", "2", "--d", "3", "--p", "3")
    assert code == 0 and text.splitlines()[-1] == "PASS"
    code, text = run("enumerate", "--n", "2", "--d", "3", "--budget", "1000")
    assert code == 3 and text.startswith("refused")


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "radlayer", "exists", "--n", "2", "--layering", "1,3,0"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.strip() == "NO: d1 ≤ n·d0 violated (3 > 2)"
