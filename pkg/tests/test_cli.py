import json
import subprocess
import sys

import pytest

from liftcert.cli import main
from liftcert.fuzzy import discrete
from liftcert.theories import symmetry_equation


@pytest.fixture
def files(tmp_path, running):
    d, mu, nu = running
    paths = {}
    for name, obj in (("d", d.to_json()), ("mu", mu.to_json()), ("nu", nu.to_json())):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(obj))
    paths["cert"] = tmp_path / "cert.json"
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def pair(files):
    return ["--space", files["d"], "--mu", files["mu"], "--nu", files["nu"]]


def test_lift_prints_value_and_witness(capsys, files):
    code, out, _ = run(capsys, "lift", "--op", "standard", *pair(files))
    assert code == 0
    assert "1/4 (= 0.25)" in out
    assert "a|b: 1/2 (= 0.5), b|c: 1/2 (= 0.5)" in out


def test_lift_json(capsys, files):
    code, out, _ = run(capsys, "lift", "--op", "max", *pair(files), "--json")
    data = json.loads(out)
    assert code == 0 and data["value"]["value"] == "3/10" and data["operator"] == "max"


def test_lift_dirac_terms(capsys, files):
    code, out, _ = run(capsys, "lift", "--space", files["d"], "--s", "a", "--t", "c")
    assert code == 0 and "3/5 (= 0.6)" in out


def test_prove_then_check(capsys, files):
    code, out, _ = run(capsys, "prove", *pair(files), "--out", files["cert"])
    assert code == 0 and files["cert"].exists() and "1/4 (= 0.25)" in out
    code, out, _ = run(capsys, "check", "--cert", files["cert"], "--space", files["d"], "--finite")
    assert code == 0 and out.startswith("valid certificate")


def test_tampered_bound_is_rejected(capsys, files):
    run(capsys, "prove", *pair(files), "--out", files["cert"])
    cert = json.loads(files["cert"].read_text())
    cert["derivation"]["conclusion"]["bound"] = {"expr": {"const": "1/8"}}
    files["cert"].write_text(json.dumps(cert))
    code, out, _ = run(capsys, "check", "--cert", files["cert"], "--space", files["d"], "--finite")
    assert code == 1
    assert "Congruence" in out and "root" in out


def test_check_against_another_space(capsys, files, tmp_path):
    run(capsys, "prove", *pair(files), "--out", files["cert"])
    other = tmp_path / "other.json"
    other.write_text(json.dumps(discrete("abc").to_json()))
    code, _, _ = run(capsys, "check", "--cert", files["cert"], "--space", other)
    assert code == 1


def test_prove_is_deterministic(capsys, files, tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"c{i}.json"
        run(capsys, "prove", "--op", "power:2", *pair(files), "--out", target)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ["lift", "--op", "median"],
    ["lift"],
    ["check", "--cert", "missing.json"],
    ["bogus"],
])
def test_malformed_input_exits_2(capsys, files, argv):
    if argv[0] == "lift" and len(argv) > 1:
        argv = argv + pair(files)
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_malformed_json_exits_2(capsys, files):
    files["mu"].write_text("{not json")
    code, _, err = run(capsys, "lift", *pair(files))
    assert code == 2 and "not valid JSON" in err


def test_support_outside_carrier_exits_2(capsys, files):
    files["mu"].write_text(json.dumps({"q": "1"}))
    code, _, _ = run(capsys, "lift", *pair(files))
    assert code == 2


def test_oracle_single_and_random(capsys, files):
    code, out, _ = run(capsys, "oracle", *pair(files))
    assert code == 0 and "agrees" in out
    code, out, _ = run(capsys, "oracle", "--random", 20, "--seed", 3)
    assert code == 0 and "20/20" in out


def test_oracle_parallel(capsys):
    code, out, _ = run(capsys, "oracle", "--random", 8, "--jobs", 2)
    assert code == 0 and "8/8" in out


def test_satisfies(capsys, tmp_path, asym):
    model = tmp_path / "m.json"
    model.write_text(json.dumps(asym.to_json()))
    eq = tmp_path / "eq.json"
    eq.write_text(json.dumps(symmetry_equation("3/10").to_json()))
    code, out, _ = run(capsys, "satisfies", "--model", model, "--eq", eq)
    assert code == 1 and "not satisfied" in out
    model.write_text(json.dumps(discrete(["u", "v"]).to_json()))
    code, out, _ = run(capsys, "satisfies", "--model", model, "--eq", eq)
    assert code == 0


def test_demo_noncompact(capsys):
    code, out, _ = run(capsys, "demo-noncompact", "--grid", 10)
    assert code == 0
    assert "(0, 0') in R_0: False" in out and "1/1024" in out


def test_precision_env(capsys, files, monkeypatch):
    monkeypatch.setenv("LIFTCERT_PRECISION", "1e-3")
    code, out, _ = run(capsys, "lift", "--op", "power:2", *pair(files))
    assert code == 0 and "1/1000" in out
    monkeypatch.setenv("LIFTCERT_PRECISION", "2")
    code, _, _ = run(capsys, "lift", *pair(files))
    assert code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "liftcert", "lift", *map(str, pair(files))],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "1/4 (= 0.25)" in proc.stdout
