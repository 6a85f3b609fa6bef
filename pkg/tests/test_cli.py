import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as Q

import pytest

from poncelet_lab.cli import dumps, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_k3(capsys):
    code, out, _ = run(capsys, "solve", "--k", "3", "--a", "3", "--b", "1", "--x0", "0", "--y0", "0")
    assert code == 0
    assert json.loads(out)["roots"] == [{"t": "3/4", "kind": "ellipse"}]


def test_certify_foci_on_circle(capsys):
    code, out, _ = run(capsys, "certify", "--k", "4", "--a", "1.5", "--b", "1", "--x0", "0", "--y0sq", "0.5")
    assert code == 0 and "CertificateAllT" in out


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--a", "2", "--b", "1", "--x0sq", "2", "--y0", "0")
    assert code == 0 and "FociSymmetricToCircle" in out


def test_usage_errors(capsys):
    assert run(capsys, "solve", "--a", "3", "--b", "1")[0] == 1  # missing --k
    assert run(capsys, "solve", "--k", "3", "--a", "x", "--b", "1")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "solve", "--k", "3", "--a", "1", "--b", "2")[0] == 1
    assert run(capsys, "solve", "--k", "3", "--a", "3", "--b", "1", "--x0", "1", "--x0sq", "1")[0] == 1


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": "3", "b": "1", "x0": "0", "y0": "0", "k": 4}))
    code, out, _ = run(capsys, "solve", "--config", str(cfg))
    assert code == 0 and json.loads(out)["roots"][0]["t"] == "3/2"
    code, out, _ = run(capsys, "solve", "--config", str(cfg), "--k", "3")
    assert json.loads(out)["roots"][0]["t"] == "3/4"
    cfg.write_text(json.dumps({"a": "3", "bogus": 1}))
    assert run(capsys, "solve", "--config", str(cfg))[0] == 1


def _iterate(capsys, *extra):
    code, out, _ = run(capsys, "iterate", "--a", "3", "--b", "1", "--t", "3/4", "--steps", "6", *extra)
    assert code == 0
    return out


def test_seed_precedence(capsys, monkeypatch):
    monkeypatch.delenv("PONCELET_SEED", raising=False)
    base = _iterate(capsys)
    assert _iterate(capsys, "--seed", "0") == base
    monkeypatch.setenv("PONCELET_SEED", "7")
    env = _iterate(capsys)
    assert env != base
    assert _iterate(capsys, "--seed", "7") == env
    assert _iterate(capsys, "--seed", "0") == base


def test_iterate_csv_closes(capsys):
    rows = list(csv.DictReader(io.StringIO(_iterate(capsys))))
    assert len(rows) == 7
    assert float(rows[3]["x"]) == pytest.approx(float(rows[0]["x"]), abs=1e-9)
    assert float(rows[3]["angle_lift"]) == pytest.approx(1.0, abs=1e-9)


def test_rho_profile_csv(tmp_path, capsys):
    out = tmp_path / "rho.csv"
    code, _, err = run(capsys, "rho-profile", "--a", "1/2", "--b", "1/5", "--x0", "0.2", "--y0", "0.1",
                       "--grid", "6", "--steps", "2000", "--out", str(out))
    assert code == 0 and "Increasing" in err
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["t", "rho", "err"] and len(rows) == 7
    assert all(float(r[2]) == pytest.approx(1 / 2000) for r in rows[1:])
    Q(rows[1][0])  # t is written exactly


def test_blaschke_degree4(capsys):
    code, out, _ = run(capsys, "blaschke", "--degree", "4", "--a", "0.3", "--b", "-0.2")
    res = json.loads(out)
    assert code == 0 and res["ok"] and res["c"] == {"re": "5/47", "im": "0"}
    assert res["cayley"]["hyperbola_roots"] == []


def test_painleve(capsys):
    code, out, _ = run(capsys, "painleve")
    assert code == 0 and json.loads(out)["identity_ratio_values"] == ["-2"]


def test_render_all(tmp_path, capsys):
    code, out, _ = run(capsys, "render", "--out", str(tmp_path))
    res = json.loads(out)
    assert code == 0 and len(res) == 3
    assert all(float(v["max_tangency_residual"]) < 1e-8 for v in res.values())


def test_render_custom(tmp_path, capsys):
    path = tmp_path / "c.svg"
    code, _, _ = run(capsys, "render", "--figure", "custom", "--a", "3", "--b", "1", "--t", "3/4",
                     "--k", "3", "--out", str(path))
    assert code == 0 and path.read_text().startswith("<?xml")


def test_verify_all_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-all", "--quick", "--only", "3,7")
    assert code == 0 and "(known deviation)" in out
    assert run(capsys, "verify-all", "--quick", "--only", "3", "--strict")[0] == 2


def test_float_and_rational_round_trip():
    x = 0.1 + 0.2
    assert float(fmt(x)) == x
    assert Q(fmt(Q(-7, 3))) == Q(-7, 3)
    data = json.loads(dumps({"q": Q(1, 3), "f": x, "n": None, "l": [1, 2.5]}))
    assert data == {"q": "1/3", "f": x, "n": None, "l": [1, 2.5]}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "poncelet_lab", "solve", "--k", "3", "--a", "3", "--b", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '"3/4"' in proc.stdout
