import csv
import io
import json
import random
import subprocess
import sys

import numpy as np
import pytest

from padic_wavelets import cli
from padic_wavelets.checks import random_piecewise
from padic_wavelets.haar import DyadicStepFn
from padic_wavelets.lcf import PiecewiseConstant, max_abs_difference, omega
from padic_wavelets.padic import Ball
from padic_wavelets.wavelets import mother_psi


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analyze_omega(tmp_path, capsys):
    src = write(tmp_path, "omega.json", omega(2).to_json())
    code, out, err = run(["--window", "2,0", "analyze", src], capsys)
    assert code == 0
    table = rows(out)
    assert list(table[0]) == cli.COEFF_HEADER
    assert table[0]["j"] == "0" and float(table[0]["re"]) == pytest.approx(0.5)
    assert len(table) == 4
    assert float(json.loads(err)["parseval_defect"]) < 1e-12


def test_analyze_empty_function(tmp_path, capsys):
    src = write(tmp_path, "zero.json", PiecewiseConstant.zero(3).to_json())
    code, out, err = run(["analyze", src, "--prime", "3", "--window", "1,1"], capsys)
    assert code == 0
    assert all(float(r["re"]) == 0 and float(r["im"]) == 0 for r in rows(out))
    assert float(json.loads(err)["parseval_defect"]) == 0


@pytest.mark.parametrize("content", ["{not json", json.dumps({"prime": 2}), json.dumps({"prime": 2, "pieces": [{"center": "1/3", "radius_exp": 0, "value": [1, 0]}]})])
def test_schema_errors_exit_2(tmp_path, capsys, content):
    src = write(tmp_path, "bad.json", content)
    code, _, err = run(["--window", "1,1", "analyze", src], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_overlapping_pieces_exit_2(tmp_path, capsys):
    data = {"prime": 2, "pieces": [
        {"center": "0", "radius_exp": 0, "value": [1, 0]},
        {"center": "0", "radius_exp": 1, "value": [1, 0]},
    ]}
    code, _, _ = run(["--window", "1,1", "analyze", write(tmp_path, "o.json", data)], capsys)
    assert code == 2


def test_prime_mismatch_exit_2(tmp_path, capsys):
    src = write(tmp_path, "omega.json", omega(3).to_json())
    assert run(["--prime", "2", "--window", "0,0", "analyze", src], capsys)[0] == 2


def test_window_violation_exit_3(tmp_path, capsys):
    fine = PiecewiseConstant.indicator(Ball(2, 0, 3))
    src = write(tmp_path, "fine.json", fine.to_json())
    code, _, err = run(["--window", "0,1", "analyze", src], capsys)
    assert code == 3
    assert "radius" in err or "ball" in err.lower()
    assert run(["--window=-2,1", "analyze", src], capsys)[0] == 3


def test_spectral_contract_exit_4(tmp_path, capsys):
    src = write(tmp_path, "omega.json", omega(2).to_json())
    assert run(["dalpha", src, "--mode", "spectral", "--window", "1,0"], capsys)[0] == 4


def test_spectral_mother_wavelet_doubles(tmp_path, capsys):
    src = write(tmp_path, "psi.json", mother_psi(2).to_json())
    code, out, _ = run(["dalpha", src, "--mode", "spectral", "--window", "0,1", "--alpha", "1"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 2
    assert float(table[1]["re"]) == pytest.approx(2.0, abs=1e-15)


def test_direct_omega_grid(tmp_path, capsys):
    src = write(tmp_path, "omega.json", omega(2).to_json())
    code, out, _ = run(["dalpha", src, "--mode", "direct", "--window", "0,2"], capsys)
    assert code == 0
    vals = [float(r["re"]) for r in rows(out)]
    assert len(vals) == 4
    assert all(abs(v - 2 / 3) < 1e-15 for v in vals)
    code, out, _ = run(["dalpha", src, "--points", "1/2^2,3"], capsys)
    assert [r["x"] for r in rows(out)] == ["1/2^2", "3/2^0"]


def test_dalpha_real_mode(tmp_path, capsys):
    src = write(tmp_path, "box.json", DyadicStepFn(0, 0, np.array([1.0])).to_json())
    code, out, _ = run(["dalpha", src, "--mode", "real", "--points", "1/4"], capsys)
    assert code == 0
    assert float(rows(out)[0]["re"]) == pytest.approx(2 / 3, abs=1e-15)


def test_analyze_synthesize_round_trip(tmp_path, capsys):
    rng = random.Random(0)
    f = random_piecewise(rng, 3, 1, 2)
    src = write(tmp_path, "f.json", f.to_json())
    coeffs = tmp_path / "c.csv"
    back = tmp_path / "back.json"
    assert run(["--prime", "3", "--window", "1,2", "--out", coeffs, "analyze", src], capsys)[0] == 0
    assert run(["synthesize", coeffs, "--prime", "3", "--window", "1,2", "--out", back], capsys)[0] == 0
    g = PiecewiseConstant.from_json(json.loads(back.read_text()))
    assert max_abs_difference(f, g) < 1e-12


def test_synthesize_bad_table_exit_2(tmp_path, capsys):
    src = write(tmp_path, "c.csv", "a,b\n1,2\n")
    assert run(["synthesize", src], capsys)[0] == 2


def test_determinism(tmp_path, capsys):
    f = random_piecewise(random.Random(1), 2, 2, 2)
    src = write(tmp_path, "f.json", f.to_json())
    outs = [run(["--window", "2,2", "analyze", src], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    rep = [run(["verify", "--seed", "3"], capsys)[1] for _ in range(2)]
    assert rep[0] == rep[1]


def test_monna_command(capsys):
    code, out, _ = run(["--prime", "2", "monna", "--point", "1/2^1", "--ball", "1/2^2,0"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["points"][0]["rho"] == "1"
    ball = data["balls"][0]
    assert ball["measure"] == ball["length"] == "1"
    assert ball["left"] == "2"
    assert run(["monna", "--point", "1/3"], capsys)[0] == 2


def test_bridge_command(tmp_path, capsys):
    f = DyadicStepFn(1, 1, np.array([1.0, -1.0, 2.0, 0.5]))
    src = write(tmp_path, "f.json", f.to_json())
    pb = tmp_path / "pb.json"
    code, out, err = run(["bridge", src, "--pullback", pb], capsys)
    assert code == 0
    assert list(rows(out)[0]) == cli.HAAR_HEADER
    assert len(rows(out)) == 3
    summary = json.loads(err)
    assert float(summary["commutation_residual"]) < 1e-12
    assert float(summary["norm_sq_real"]) == pytest.approx(float(summary["norm_sq_padic"]))
    assert PiecewiseConstant.from_json(json.loads(pb.read_text())).prime == 2


def test_verify_default_passes(capsys):
    code, out, err = run(["verify"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and all(c["passed"] for c in rep["checks"])
    assert "[PASS]" in err and "[FAIL]" not in err


def test_verify_perturbation_fails(capsys):
    code, out, err = run(["verify", "--perturb"], capsys)
    assert code == 1
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert failed and all(name.startswith("eigenvalues") for name in failed)


def test_verify_p5_half_alpha(capsys):
    code, out, _ = run(["--prime", "5", "--alpha", "0.5", "verify"], capsys)
    assert code == 0, [c for c in json.loads(out)["checks"] if not c["passed"]]


def test_bad_alpha_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--alpha", "-1", "verify"])
    assert exc.value.code == 2


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "padic_wavelets.cli", "monna", "--point", "3"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(res.stdout)["points"][0]["rho"] == "3/4"
