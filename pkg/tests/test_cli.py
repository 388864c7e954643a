import csv
import io
import json
import subprocess
import sys

import pytest

from crossrigidity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


# -- spectrum --------------------------------------------------------------------------

def test_spectrum_s2(capsys):
    code, rep = run_json(capsys, "spectrum", "--model", "S2", "--count", "5")
    assert code == 0
    assert [e["exact"] for e in rep["eigenvalues"]] == ["0/1", "2/1", "6/1", "12/1", "20/1"]
    assert all(e["ok"] for e in rep["eigenvalues"])


def test_spectrum_op2(capsys):
    code, rep = run_json(capsys, "spectrum", "--model", "OP2", "--count", "3")
    assert code == 0
    assert [e["exact"] for e in rep["eigenvalues"]] == ["0/1", "12/1", "26/1"]


def test_spectrum_empty(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", "S2", "--count", "0", "--format", "csv")
    assert code == 0
    assert out.strip().splitlines() == ["n,exact,numeric,rel_error,ok"]


def test_spectrum_bad_model(capsys):
    assert run(capsys, "spectrum", "--model", "CP1")[0] == 2


def test_spectrum_tolerance_failure(capsys):
    assert run(capsys, "spectrum", "--model", "S2", "--tol", "1e-30")[0] == 1


# -- rigidity ----------------------------------------------------------------------------

def test_rigidity_jacobi_vanish(capsys):
    code, rep = run_json(capsys, "rigidity", "--jacobi", "3", "--model", "CP2", "--expect-vanish")
    assert code == 0
    assert rep["verdict"] == "DeltaVanishes"


def test_rigidity_violation(capsys):
    code, rep = run_json(capsys, "rigidity", "--poly", "x^2", "--lambda", "6", "--model", "S2",
                         "--expect-violation")
    assert code == 0
    assert rep["verdict"] == "StructureViolated(poles_off_interval)"
    assert rep["poles_off_interval"] is False


def test_rigidity_expectation_mismatch(capsys):
    assert run(capsys, "rigidity", "--poly", "x^2", "--lambda", "6", "--expect-vanish")[0] == 1


@pytest.mark.parametrize("argv", [
    ["rigidity", "--poly", "1"],
    ["rigidity", "--poly", "1", "--lambda", "0"],
    ["rigidity", "--poly", "x^", "--lambda", "2"],
    ["rigidity", "--poly", "x^2"],
    ["rigidity", "--poly", "x^2", "--lambda", "abc"],
    ["rigidity", "--poly-file", "/nonexistent/file"],
])
def test_rigidity_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_rigidity_poly_file(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("x^2 - 1/3\n")
    code, rep = run_json(capsys, "rigidity", "--poly-file", str(f), "--lambda", "6", "--expect-vanish")
    assert code == 0 and rep["P_text"] == "x^2 - 1/3"


# -- falsify ------------------------------------------------------------------------------

def test_falsify_none(capsys):
    code, rep = run_json(capsys, "falsify", "--delta", "1/(x-2)", "--maxdeg", "12", "--model", "S2",
                         "--expect", "none")
    assert code == 0
    assert rep["outcome"] == "none" and len(rep["attempts"]) == 12
    assert all(a["augmented_rank"] > a["rank"] for a in rep["attempts"])


def test_falsify_found(capsys):
    code, rep = run_json(capsys, "falsify", "--delta", "0", "--maxdeg", "3", "--model", "S2",
                         "--expect", "found")
    assert code == 0
    assert rep["solution"]["degree"] == 1 and rep["solution"]["lambda"] == "2/1"


def test_falsify_counterexample_reported(capsys):
    code, rep = run_json(capsys, "falsify", "--delta", "2/(x-3)", "--maxdeg", "10", "--model", "S2",
                         "--expect", "none")
    assert code == 1
    assert rep["solution"]["poly_text"] == "x^2 - 6*x + 1"


@pytest.mark.parametrize("argv", [
    ["falsify", "--delta", "1/(x-2)", "--maxdeg", "0"],
    ["falsify", "--delta", "1/(x-"],
    ["falsify", "--delta", "1/0"],
])
def test_falsify_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


# -- ros ------------------------------------------------------------------------------------

def test_ros_all(capsys):
    code, rep = run_json(capsys, "ros", "--all", "--max-dim", "16")
    assert code == 0
    names = {r["model"] for r in rep["models"]}
    assert {"S2", "S16", "CP2", "CP8", "HP2", "HP4", "OP2"} <= names
    assert all(r["equality"] for r in rep["models"])


@pytest.mark.parametrize("model, lam1, ricci", [("S4", "4/1", "3/1"), ("CP2", "3/1", "3/2")])
def test_ros_single(capsys, model, lam1, ricci):
    code, rep = run_json(capsys, "ros", "--model", model)
    row = rep["models"][0]
    assert code == 0 and (row["lambda1"], row["ricci"], row["bound"]) == (lam1, ricci, lam1)


# -- density ------------------------------------------------------------------------------------

def test_density_s2(capsys):
    code, out, err = run(capsys, "density", "--model", "S2", "--samples", "3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["r", "theta0", "sigma0"]
    assert [float(v) for v in rows[2]] == pytest.approx([1.5707963267949, 0.5, 0.0])
    assert "all_ok=True" in err


def test_density_hp2(capsys):
    code, rep = run_json(capsys, "density", "--model", "HP2", "--samples", "100")
    assert code == 0
    assert len(rep["rows"]) == 100 and rep["properties"]["all_ok"]


def test_density_header_only(capsys):
    code, out, _ = run(capsys, "density", "--model", "S2", "--samples", "0")
    assert code == 0 and out == "r,theta0,sigma0\n"


def test_density_bad_model(capsys):
    assert run(capsys, "density", "--model", "Q7")[0] == 2


# -- output handling and argument errors -----------------------------------------------------------

def test_output_file(capsys, tmp_path):
    path = tmp_path / "ros.json"
    code, out, _ = run(capsys, "ros", "--model", "S4", "--format", "json", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["ok"] is True


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--count", "abc"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "crossrigidity", "ros", "--model", "CP2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "CP2" in proc.stdout


# -- verify-all ---------------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def verify_reports(tmp_path_factory):
    base = tmp_path_factory.mktemp("verify")
    out = {}
    for tag, extra in (("a", []), ("b", []), ("fault", ["--inject-fault", "wrong-lambda"])):
        path = base / f"{tag}.json"
        proc = subprocess.run([sys.executable, "-m", "crossrigidity", "verify-all", "--seed", "7",
                               "--format", "json", "--output", str(path), *extra],
                              capture_output=True, text=True, check=False)
        out[tag] = (proc.returncode, path.read_bytes(), proc.stdout, proc.stderr)
    return out


def test_verify_all_is_deterministic(verify_reports):
    assert verify_reports["a"][1] == verify_reports["b"][1]


def test_verify_all_summary_table(verify_reports):
    code, blob, stdout, _ = verify_reports["a"]
    rep = json.loads(blob)
    assert len(rep["criteria"]) == 8
    assert "criterion" in stdout.splitlines()[0]
    # exit code mirrors the report
    assert code == (0 if rep["ok"] else 1)


def test_verify_all_fault_injection(verify_reports):
    code, blob, _, stderr = verify_reports["fault"]
    rep = json.loads(blob)
    assert code == 1
    first = rep["criteria"][0]
    assert first["criterion"] == 1 and first["passed"] is False
    assert "1" in stderr.split("failing criteria:")[1]
