import io
import json

import pytest

from crembed.cli import main
from crembed.reports import dumps

H3 = {"dim": 3, "labels": ["x", "y", "z"], "brackets": [{"i": 1, "j": 2, "coeffs": {"3": [1, 0]}}]}
# adds [x, z] = x, which breaks Jacobi
H3_BAD = {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": [1, 0]}},
                                 {"i": 1, "j": 3, "coeffs": {"1": [1, 0]}}]}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in (("h3", H3), ("bad", H3_BAD)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    p = tmp_path / "broken.json"
    p.write_text("{\"dim\": 3, ")
    paths["broken"] = str(p)
    return paths


def test_validate_file(files):
    code, out = run("validate", files["h3"])
    assert code == 0 and "nilpotent(2)" in out


def test_jacobi_failure_exit_code(files):
    code, out = run("validate", files["bad"])
    assert code == 1 and "Jacobi" in out
    code, out = run("validate", files["bad"], "--json")
    data = json.loads(out)
    assert code == 1 and not data["valid"]
    assert data["witness"]["indices"] == [1, 2, 3, 3]


def test_malformed_json_exit_code(files):
    assert run("validate", files["broken"])[0] == 2
    assert run("validate", "catalog:nope")[0] == 2
    assert run("validate", "/nonexistent/file.json")[0] == 2


def test_bad_step_is_input_error():
    assert run("verify", "catalog:heisenberg3", "--step", "1e-9")[0] == 2


def test_oracle_domain_error():
    code, out = run("oracle", "catalog:sl2", "--json")
    assert code == 3
    assert json.loads(out)["error"] == "NotNilpotent"


def test_oracle_output():
    code, out = run("oracle", "catalog:n4")
    assert code == 0
    assert "lambda_2 = (0, 1, 1i*t1, -1/2*t1^2)" in out
    assert "identically zero: yes" in out


def test_oracle_abelian_is_identity():
    code, out = run("oracle", "catalog:abelian3", "--json")
    data = json.loads(out)
    assert code == 0 and data["identically_zero"]
    assert data["omega"] == data["lambda"]
    assert "omega_2 = (0, 1, 0)" in run("oracle", "catalog:abelian3")[1]


def test_verify_pass_and_fail():
    assert run("verify", "catalog:heisenberg3", "--grid", "3")[0] == 0
    assert run("verify", "catalog:sl2", "--grid", "3", "--tol", "1e-6")[0] == 0
    code, out = run("verify", "catalog:sl2", "--grid", "3", "--tol", "1e-14", "--json")
    assert code == 1
    rep = json.loads(out)["reports"]["flatness"]
    assert not rep["passed"] and len(rep["witness"]["indices"]) == 3


def test_json_output_is_canonical():
    code, out = run("embed", "catalog:heisenberg3-cr", "--json", "--samples", "5")
    assert code == 0
    data = json.loads(out)
    assert dumps(data) + "\n" == out
    assert data["ell"] == 1 and data["extension_type"] == [2, 0]


def test_embed_human():
    code, out = run("embed", "catalog:abelian4-cr", "--samples", "5")
    assert code == 0 and "extension type (3,0)" in out


def test_embed_rejects_algebra():
    assert run("embed", "catalog:sl2")[0] == 2


def test_embed_failure_exit_code(tmp_path):
    p = tmp_path / "real_h.json"
    p.write_text(json.dumps({"algebra": H3, "n": 1, "k": 1, "h_basis": [[[1, 0], [0, 0], [0, 0]]]}))
    code, out = run("embed", str(p), "--json")
    assert code == 1 and json.loads(out)["failed_stage"] == "validate"


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol": 1e-3, "step": 0.001, "seed": 7}))
    code, out = run("--config", str(cfg), "--show-config")
    shown = json.loads(out)
    assert code == 0 and shown["tol"] == 1e-3 and shown["seed"] == 7
    code, out = run("verify", "catalog:heisenberg3", "--config", str(cfg), "--seed", "9", "--show-config")
    shown = json.loads(out)
    assert shown["seed"] == 9 and shown["step"] == 0.001
    assert run("--show-config")[0] == 0


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("--config", str(cfg), "--show-config")[0] == 2


def test_catalog_list():
    code, out = run("catalog", "list", "--json")
    names = {e["name"] for e in json.loads(out)["entries"]}
    assert {"heisenberg3", "sl2", "heisenberg3-cr"} <= names


def test_no_command():
    assert run()[0] == 2


def test_selftest():
    code, out = run("selftest", "--grid", "2", "--samples", "3")
    assert code == 0 and out.strip().endswith("PASS")
