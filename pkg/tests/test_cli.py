import json
import subprocess
import sys

import numpy as np
import pytest

from dimwit.cli import main
from dimwit.correlations import CorrelationTensor
from dimwit.gallery import nonconvex_tensor
from dimwit.witness import WitnessCoefficients, build_I_witness


@pytest.fixture
def files(tmp_path, i3_optimum):
    _, _, p_opt = i3_optimum
    paths = {
        "w3": tmp_path / "i3.json",
        "p": tmp_path / "p.json",
        "p3": tmp_path / "p3.json",
        "opt": tmp_path / "opt.json",
    }
    paths["w3"].write_text(build_I_witness(2).to_json())
    paths["p"].write_text(nonconvex_tensor().to_json())
    paths["p3"].write_text(nonconvex_tensor().pad_outcomes(3).to_json())
    paths["opt"].write_text(p_opt.to_json())
    return paths


def test_witness_build(tmp_path):
    out = tmp_path / "w.json"
    assert main(["witness", "build", "--d", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert (doc["M"], doc["K"], doc["N"]) == (3, 2, 3)
    assert np.count_nonzero(doc["c"]) == 5
    assert doc["classical_bound"] == 1 and doc["canonical"] is True
    assert WitnessCoefficients.from_dict(doc) == build_I_witness(2)


def test_witness_build_range(capsys):
    assert main(["witness", "build", "--d", "1"]) == 1
    assert "dimension must be" in capsys.readouterr().err


def test_witness_build_unwritable(tmp_path, capsys):
    bad = tmp_path / "missing" / "w.json"
    assert main(["witness", "build", "--d", "2", "--out", str(bad)]) == 1
    assert str(bad) in capsys.readouterr().err


def test_optimize_rank1(tmp_path):
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    for out in outs:
        assert main(["optimize", "--algorithm", "rank1", "--d", "2", "--restarts", "32", "--seed", "7",
                     "--out", str(out)]) == 0
    a, b = (json.loads(o.read_text()) for o in outs)
    assert abs(a["value"] - 1.414214) <= 1e-6
    assert {"value", "states", "povms", "vectors", "manifest"} <= set(a)
    assert a["manifest"]["seed"] == 7 and a["manifest"]["config"]["restarts"] == 32
    a["manifest"].pop("created"), b["manifest"].pop("created")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_optimize_manifest_reproduces(tmp_path):
    first = tmp_path / "first.json"
    main(["optimize", "--d", "2", "--restarts", "3", "--seed", "11", "--out", str(first)])
    conf = json.loads(first.read_text())["manifest"]["config"]
    second = tmp_path / "second.json"
    main(["optimize", "--d", str(conf["d"]), "--algorithm", conf["algorithm"], "--restarts", str(conf["restarts"]),
          "--seed", str(conf["seed"]), "--eps", str(conf["epsilon"]), "--max-iter", str(conf["max_iterations"]),
          "--tol", str(conf["tolerance"]), "--out", str(second)])
    a, b = json.loads(first.read_text()), json.loads(second.read_text())
    assert a["value"] == b["value"] and a["states"] == b["states"]


def test_optimize_from_witness_file(files, tmp_path):
    out = tmp_path / "r.json"
    assert main(["optimize", "--witness", str(files["w3"]), "--algorithm", "general", "--restarts", "4",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["value"] - 2**0.5) <= 1e-6
    assert str(files["w3"]) in doc["manifest"]["inputs"]


def test_optimize_restarts_zero(capsys):
    assert main(["optimize", "--d", "2", "--restarts", "0"]) == 1


def test_optimize_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"M": 3,\n "K": oops}')
    assert main(["optimize", "--witness", str(bad)]) == 1
    assert "byte offset 15" in capsys.readouterr().err


def test_optimize_rank1_unsupported(tmp_path, capsys):
    c = np.zeros((3, 2, 3))
    c[0, 0, 1] = 1.0
    path = tmp_path / "w.json"
    path.write_text(WitnessCoefficients(c, 2, 0).to_json())
    assert main(["optimize", "--witness", str(path), "--algorithm", "rank1"]) == 1
    assert "first outcome" in capsys.readouterr().err


def test_thresholds_csv(capsys):
    assert main(["thresholds", "--d-min", "2", "--d-max", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "d,i_star,eta_qc,eta_qc_lower,eta_qc_upper,eta_dim,eta_dim_lower"
    assert len(lines) == 2
    assert abs(float(lines[1].split(",")[2]) - 0.707106781) <= 1e-6


def test_thresholds_json_and_out(tmp_path, capsys):
    assert main(["thresholds", "--d-min", "2", "--d-max", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["d"] for r in doc["reports"]] == [2, 3] and "manifest" in doc
    out = tmp_path / "t.csv"
    assert main(["thresholds", "--d-min", "2", "--d-max", "3", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    assert json.loads((tmp_path / "t.csv.manifest.json").read_text())["command"] == "thresholds"


@pytest.mark.parametrize("argv", [["--d-min", "2", "--d-max", "1"], ["--d-min", "1", "--d-max", "2"],
                                  ["--d-min", "2", "--d-max", "11"]])
def test_thresholds_usage(argv):
    assert main(["thresholds", *argv]) == 1


def test_membership_feasible(files, capsys):
    assert main(["membership", str(files["p"]), "--d", "2"]) == 0
    assert capsys.readouterr().out.startswith("FEASIBLE")


def test_membership_infeasible(files, capsys):
    assert main(["membership", str(files["opt"]), "--d", "2"]) == 2
    assert capsys.readouterr().out.startswith("INFEASIBLE")


def test_membership_bad_row(tmp_path, capsys):
    p = nonconvex_tensor().p.copy()
    p[1, 0] = [0.45, 0.45]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"M": 3, "K": 2, "N": 2, "p": p.tolist()}))
    assert main(["membership", str(path), "--d", "2"]) == 1
    assert "(1, 0)" in capsys.readouterr().err


def test_eval_example(files, capsys):
    assert main(["eval", str(files["w3"]), str(files["p3"])]) == 0
    out = capsys.readouterr().out
    assert "value: -1.000000000" in out and "verdict: inconclusive" in out


def test_eval_optimum(files, capsys):
    assert main(["eval", str(files["w3"]), str(files["opt"])]) == 0
    value_line, verdict_line = capsys.readouterr().out.splitlines()
    assert abs(float(value_line.split()[1]) - 1.414213562) <= 1e-6
    assert verdict_line == "verdict: exceeds classical bound"


def test_eval_mismatch(files, tmp_path):
    other = tmp_path / "w4.json"
    other.write_text(build_I_witness(3).to_json())
    assert main(["eval", str(other), str(files["p3"])]) == 1


def test_threads_env_does_not_change_results(tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("DIMWIT_THREADS", threads)
        out = tmp_path / f"r{threads}.json"
        main(["optimize", "--d", "3", "--restarts", "4", "--out", str(out)])
        doc = json.loads(out.read_text())
        doc["manifest"].pop("created")
        outs.append(doc)
    assert outs[0] == outs[1]


def test_module_entry_point():
    run = subprocess.run([sys.executable, "-m", "dimwit", "--version"], capture_output=True, text=True)
    assert run.returncode == 0 and "dimwit" in run.stdout
    run = subprocess.run([sys.executable, "-m", "dimwit", "bogus"], capture_output=True, text=True)
    assert run.returncode == 1
