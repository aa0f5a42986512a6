import csv
import json
import subprocess
import sys

import pytest

from conebeta import cli
from conebeta.suites import SuiteResult


def run(*argv):
    return cli.main([str(a) for a in argv])


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def plane3d(tmp_path_factory):
    path = tmp_path_factory.mktemp("plane") / "plane.csv"
    assert run("synth", "--family", "plane", "--n", 3, "--d", 2, "--samples", 1000, "--out", path) == 0
    return path


def test_synth_writes_cloud_sidecar_and_truth(plane3d):
    pts = rows(plane3d)
    meta = json.loads(plane3d.with_suffix(".json").read_text())
    assert len(pts) == meta["points"] == 1024 and meta["schema_version"] == 1
    assert meta["resolution"] > 0 and meta["spec"]["family"] == "plane"
    truth = rows(plane3d.with_suffix(".truth.csv"))
    assert all(r["cone"] == "1" for r in truth)


def test_classify_plane_is_all_cone_and_reproducible(plane3d, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("classify", plane3d, "--d", 2, "--out", a) == 0
    assert run("classify", plane3d, "--d", 2, "--out", b) == 0
    labels = rows(a / "labels.csv")
    assert len(labels) == 1024
    assert all(r["cone"] == "1" and r["verdict_a0"] == "summable" for r in labels)
    assert labels[0]["cfg_p"] == "inf" and labels[0]["cfg_kind"] == "beta_inf"
    for name in ("labels.csv", "classify.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_classify_cantor_depth6(tmp_path):
    path = tmp_path / "cantor.csv"
    assert run("synth", "--family", "cantor4", "--depth", 6, "--out", path) == 0
    assert run("classify", path, "--out", tmp_path / "out") == 0
    labels = rows(tmp_path / "out" / "labels.csv")
    assert len(labels) == 4096
    divergent = sum(r["verdict_a0"] == "divergent" for r in labels) / len(labels)
    assert divergent >= 0.9


def test_analyze_selected_points(tmp_path):
    path = tmp_path / "cusp.csv"
    assert run("synth", "--family", "cusp_graph", "--samples", 801, "--out", path) == 0
    out = tmp_path / "out"
    assert run("analyze", path, "--points", "0,5", "--base", 2, "--alpha", "0,0.5", "--out", out) == 0
    prof = rows(out / "profiles.csv")
    data = json.loads((out / "analyze.json").read_text())
    assert {r["point"] for r in prof} == {"0", "5"}
    assert {r["alpha"] for r in prof} == {"0", "0.5"}
    assert [p["point"] for p in data["points"]] == [0, 5]
    assert data["config"]["k_hi"] is not None and "out" not in data["config"]


def test_cubes_report(tmp_path):
    path = tmp_path / "c.csv"
    assert run("synth", "--family", "cantor4", "--depth", 4, "--out", path) == 0
    assert run("cubes", path, "--out", tmp_path / "out") == 0
    data = json.loads((tmp_path / "out" / "cubes.json").read_text())
    assert not any(data["christ_violations"].values())
    assert not any(data["region_violations"].values())
    assert data["packing_ratio"] >= 1


def test_verify_monotonicity_on_200_clouds(tmp_path, capsys):
    assert run("verify", "--suite", "monotonicity", "--clouds", 200, "--out", tmp_path) == 0
    assert capsys.readouterr().out.startswith("PASS")
    data = json.loads((tmp_path / "verify.json").read_text())
    assert data["suites"][0]["violations"] == 0 and data["suites"][0]["checks"] >= 10_000


def test_verify_failure_exit_code(monkeypatch, capsys):
    from conebeta import suites

    def failing(seed=0):
        return SuiteResult("broken", checks=1, violations=1)

    monkeypatch.setitem(suites.SUITES, "broken", failing)
    assert run("verify", "--suite", "broken") == 1
    assert "FAIL" in capsys.readouterr().out


def write(tmp_path, text, name="in.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.parametrize("text,where", [
    ("x0,x1\n0,0\n1,abc\n", "line 3, column 2"),
    ("x0,y\n0,0\n", "line 1, column 2"),
    ("x0,x1\n0,0\n1,2,3\n", "line 3, column 3"),
    ("x0,x1\n0,0\n1,1\n0,0\n", "line 4, column 1"),
    ("", "line 1, column 1"),
    ("x0,x1\n0,inf\n", "line 2, column 2"),
])
def test_malformed_input_exit_2(tmp_path, capsys, text, where):
    path = write(tmp_path, text)
    assert run("classify", path, "--resolution", 0.1, "--out", tmp_path / "o") == 2
    assert where in capsys.readouterr().err


def test_parameter_errors_exit_3(tmp_path, capsys):
    path = write(tmp_path, "x0,x1,x2,x3\n0,0,0,0\n1,0,0,0\n0,1,0,0\n")
    assert run("classify", path, "--resolution", 0.1, "--d", 3, "--p", 8) == 3
    assert "exceeds p(d)" in capsys.readouterr().err
    assert run("classify", path, "--resolution", 0.1, "--base", 1) == 3
    assert run("classify", path) == 3
    assert "resolution unknown" in capsys.readouterr().err
    assert run("classify", path, "--resolution", 5.0) == 3
    assert run("classify", path, "--resolution", 0.1, "--alpha", "1.5") == 3
    assert run("classify", path, "--resolution", 0.1, "--points", "99") == 3
    with pytest.raises(SystemExit) as exc:
        run("classify", path, "--kind", "nope")
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        run("synth", "--family", "plane", "--samples", 1, "--out", tmp_path / "x.csv", "--noise", "oops")
    assert exc.value.code == 3
    assert run("synth", "--family", "plane", "--samples", 1, "--out", tmp_path / "x.csv") == 3


def test_forced_exponent_runs(tmp_path):
    path = tmp_path / "lip.csv"
    assert run("synth", "--family", "lipschitz_graph", "--n", 4, "--d", 3, "--samples", 4096, "--out", path) == 0
    with pytest.warns(UserWarning):
        code = run("analyze", path, "--d", 3, "--p", 8, "--force", "--points", 0, "--out", tmp_path / "o")
    assert code == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "conebeta", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("conebeta ")
