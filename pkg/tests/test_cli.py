import json
import subprocess
import sys

import jsonschema
import pytest

from qwmono.cli import SCHEMA_VERSION, main, run, validate_config


def report(tmp_path, command):
    return json.loads((tmp_path / (command + ".json")).read_text())


def test_braid_check_a2(tmp_path, capsys):
    assert main(["braid-check", "--type", "A2", "--weight", "1,0", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path, "braid-check")
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["passed"] and rep["results"]["dim"] == 3
    assert "PASS" in capsys.readouterr().out


def test_compare_sl2(tmp_path):
    assert main(["compare", "--type", "A1", "--weight", "1", "--hbar", "0.2", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path, "compare")
    assert rep["results"]["compare"][0]["max_mismatch"] <= 1e-8


def test_nested_sets_a3(tmp_path):
    assert main(["nested-sets", "--type", "A3", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path, "nested-sets")
    assert rep["results"]["count"] == 5
    assert len(rep["results"]["bracketings"]) == 5


def test_config_file_and_overrides(tmp_path):
    cfg = {"command": "square-factorization", "type": "B2", "module": {"highest_weight": [1, 0]}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["--config", str(path), "--out", str(tmp_path)]) == 0
    rep = report(tmp_path, "square-factorization")
    assert rep["results"]["fitted"] == {"1": "1", "2": "1"}


@pytest.mark.parametrize("argv", [
    ["flatness", "--type", "B2", "--weight", "0,1"],
    ["pure-factorization", "--type", "A2", "--weight", "1,1"],
    ["monodromy", "--type", "A2", "--weight", "1,0", "--hbar", "0.2", "--hbar", "0.1+0.1j"],
    ["shapovalov", "--type", "A2", "--height", "2"],
    ["check-relations", "--type", "B2", "--height", "3"],
])
def test_every_command_passes(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 0


def test_reports_are_byte_stable(tmp_path):
    args = ["monodromy", "--type", "A2", "--weight", "1,0", "--hbar", "0.2"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    for name in ("monodromy.json", "monodromy.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_failing_assertion_gives_nonzero_exit(tmp_path, capsys):
    cfg = {"command": "compare", "type": "A1", "module": {"highest_weight": [1]}, "threshold": 1e-30,
           "hbar": [[0.3, 0.2]], "out": str(tmp_path)}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["--config", str(path)]) == 1
    rep = report(tmp_path, "compare")
    assert not rep["passed"] and rep["counterexample"]["name"].startswith("(e,1,+1)")
    assert "first failure" in capsys.readouterr().err


def test_unknown_keys_rejected():
    with pytest.raises(jsonschema.ValidationError):
        validate_config({"command": "flatness", "type": "A2", "colour": "red"})
    with pytest.raises(jsonschema.ValidationError):
        validate_config({"command": "flatness"})


def test_bad_config_exit_code(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"command": "flatness", "type": "A2", "bogus": 1}))
    assert main(["--config", str(path), "--out", str(tmp_path)]) == 2


def test_run_returns_report():
    rep = run({"command": "nested-sets", "type": "A4"})
    assert rep.passed and rep.results["count"] == 14


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "qwmono", "nested-sets", "--type", "A2", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "Catalan(2)" in out.stdout


def test_complex_hbar_labels_keep_their_sign():
    from qwmono.cli import _hbar_text
    assert _hbar_text(complex(0.3, 0.2)) == "0.3+0.2j"
    assert _hbar_text(complex(0.3, -0.2)) == "0.3-0.2j"
    assert _hbar_text(complex(0.2, 0)) == "0.2"
