import json

import pytest

from gennum import cli

KEYS = {"command", "status", "witness", "diagnostics", "config", "result"}


def run_json(capsys, *argv):
    code = cli.main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_eval_infinite(capsys):
    code, data, _ = run_json(capsys, "eval", "-e", "drho^(-1)")
    assert code == 0 and set(data) == KEYS
    assert data["result"]["classification"]["kind"] == "infinite"


def test_eval_near_standard(capsys):
    _, data, _ = run_json(capsys, "eval", "-e", "1 + drho")
    c = data["result"]["classification"]
    assert c["kind"] == "near-standard" and c["st"] == 1.0


def test_eval_mixed(capsys):
    _, data, _ = run_json(capsys, "eval", "-e", "sin(1/eps)")
    c = data["result"]["classification"]
    assert c["kind"] == "mixed-subpoints"
    assert c["st_inf"] == pytest.approx(-1, abs=1e-3) and c["st_sup"] == pytest.approx(1, abs=1e-3)


def test_cmp_with_witness(capsys):
    code, data, _ = run_json(capsys, "cmp", "-x", "ind(EVEN) - ind(ODD)", "-y", "0",
                             "--rel", "leq")
    assert code == 0 and data["status"] == "false" and data["witness"]["L"] == "EVEN"


def test_sup_command(capsys):
    _, data, _ = run_json(capsys, "sup", "--set", "interval(0,1,open,open)")
    assert data["status"] == "true" and data["result"]["value"] == "1"


def test_hyperlim_command(capsys):
    _, data, _ = run_json(capsys, "hyperlim", "--seq", "1/log(n)", "--sigma",
                          "exp(-rho^(-1/rho))")
    assert data["status"] == "true" and data["result"]["limit_st"] == 0.0
    assert data["config"]["gauge.sigma"] == "exp(-rho^(-1/rho))"


def test_syntax_error_is_structured(capsys):
    code, data, _ = run_json(capsys, "eval", "-e", "1 +")
    assert code == 1 and data["status"] == "error"
    assert data["witness"]["type"] == "GNSyntaxError"


def test_unknown_exit_code(monkeypatch, capsys):
    from gennum.netlang import Verdict
    monkeypatch.setattr(cli.ring_core, "leq", lambda x, y: Verdict.unknown("forced"))
    code, data, _ = run_json(capsys, "cmp", "-x", "1", "-y", "2")
    assert code == 2 and data["status"] == "unknown"


def test_flags_reach_the_config(capsys):
    _, data, _ = run_json(capsys, "eval", "-e", "drho", "--grid", "32", "--tail", "8",
                          "--prec", "128", "--gauge", "eps^2")
    cfg = data["config"]
    assert (cfg["grid.K"], cfg["grid.tail_start"], cfg["precision.bits"]) == (32, 8, 128)
    assert cfg["gauge.rho"] == "eps^2"


def test_config_file_from_environment(tmp_path, monkeypatch, capsys):
    path = tmp_path / "gn.cfg"
    path.write_text("grid.K = 40  # shorter grid\nhyper.qmax = 6\n")
    monkeypatch.setenv("GN_CONFIG", str(path))
    _, data, _ = run_json(capsys, "eval", "-e", "2")
    assert data["config"]["grid.K"] == 40 and data["config"]["hyper.qmax"] == 6


def test_bad_config_is_an_error(tmp_path, monkeypatch, capsys):
    path = tmp_path / "gn.cfg"
    path.write_text("grid.K = many\n")
    monkeypatch.setenv("GN_CONFIG", str(path))
    code, data, _ = run_json(capsys, "eval", "-e", "2")
    assert code == 1 and data["witness"]["type"] == "ConfigError"


def test_paper_suite_filter_and_determinism(capsys):
    code1, data, out1 = run_json(capsys, "paper-suite", "--filter", "limsup")
    code2, _, out2 = run_json(capsys, "paper-suite", "--filter", "limsup")
    assert out1 == out2
    assert code1 == 0 and data["result"]["total"] == 4
    assert all(c["group"] == "limsup" for c in data["result"]["cases"])


def test_text_output(capsys):
    assert cli.main(["limsup", "(-1)^n"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("limsup: true") and "value_st: 1.0" in out
