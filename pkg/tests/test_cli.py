import json

import mpmath as mp
import pytest

from macdopoly import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_rho_value(capsys):
    code, out = run(capsys, "rho", "--nu", "0.5", "--x", "1", "--digits", "40")
    assert code == 0
    with mp.workdps(50):
        exact = mp.sqrt(mp.pi) * mp.exp(-2)
        assert abs(mp.mpf(out.strip()) - exact) < mp.mpf(10) ** -38


def test_rho_at_zero_is_gamma(capsys):
    code, out = run(capsys, "rho", "--nu", "1.5", "--x", "0", "--digits", "40")
    assert code == 0
    with mp.workdps(50):
        assert abs(mp.mpf(out.strip()) - mp.gamma(mp.mpf("1.5"))) < mp.mpf(10) ** -38


def test_rho_domain_exit_code(capsys):
    code, _ = run(capsys, "rho", "--nu", "0.5", "--x", "-1")
    assert code == 2
    code, _ = run(capsys, "rho", "--nu", "-0.5", "--x", "0")
    assert code == 2


def test_table_laguerre_limit(capsys):
    code, out = run(capsys, "table", "--alpha", "0", "--nu", "1", "--lambda", "1",
                    "--t", "0", "--N", "5", "--digits", "40")
    assert code == 0
    d = json.loads(out)
    with mp.workdps(50):
        B = [mp.mpf(v) for v in d["B"]]
        for n, bn in enumerate(B):
            assert abs(bn - (2 * n + 1)) < mp.mpf(10) ** -30
        A = d["A"]
        assert A[0] is None
        for n, an in enumerate(A[1:], start=1):
            assert abs(mp.mpf(an) - n) < mp.mpf(10) ** -30


def test_table_csv_format(capsys):
    code, out = run(capsys, "table", "--N", "3", "--digits", "40",
                    "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "section,index,value"
    sections = {ln.split(",")[0] for ln in lines[1:]}
    assert {"moments", "a", "B", "A"} <= sections


def test_quadrule_json(capsys):
    code, out = run(capsys, "quadrule", "--N", "4", "--digits", "40")
    assert code == 0
    d = json.loads(out)
    with mp.workdps(50):
        nodes = [mp.mpf(v) for v in d["nodes"]]
        weights = [mp.mpf(v) for v in d["weights"]]
        assert len(nodes) == 4
        assert all(x > 0 for x in nodes)
        assert all(a < b for a, b in zip(nodes, nodes[1:]))
        assert all(w > 0 for w in weights)
        # weights sum to mu_0
        from macdopoly.precision import PrecisionContext, Params
        from macdopoly.moments import build_moment_table
        ctx = PrecisionContext(40, 1e-20, 240)
        tab = build_moment_table(Params("0.5", "1.5", "1", "1"), 4, ctx)
        assert abs(sum(weights) - tab.mu[0]) < mp.mpf(10) ** -30


def test_quadrule_csv(capsys):
    code, out = run(capsys, "quadrule", "--N", "3", "--digits", "40",
                    "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "node,weight"
    assert len(lines) == 4


def test_verify_suite_report_schema(capsys):
    code, out = run(capsys, "verify", "--suite", "thm5", "--digits", "40",
                    "--n", "2")
    assert code == 0
    d = json.loads(out)
    assert d["pass"] is True
    assert d["config"]["suite"] == "thm5"
    assert "wallclock" not in d
    (suite,) = d["suites"]
    assert suite["id"] == "thm5"
    for r in suite["residuals"]:
        assert set(r) == {"identity", "n", "m", "value", "tol", "pass"}
        assert r["pass"] is True


def test_verify_timing_flag(capsys):
    code, out = run(capsys, "verify", "--suite", "thm5", "--digits", "40",
                    "--n", "1", "--timing")
    assert code == 0
    d = json.loads(out)
    assert isinstance(d["wallclock"], float)


def test_verify_deterministic_output(capsys):
    _, out1 = run(capsys, "verify", "--suite", "thm5", "--digits", "40", "--n", "2")
    _, out2 = run(capsys, "verify", "--suite", "thm5", "--digits", "40", "--n", "2")
    assert out1 == out2


def test_verify_domain_exit_code(capsys):
    # t = 0 with nu = 0 is outside the weight's domain
    code, _ = run(capsys, "verify", "--suite", "lemma2", "--t", "0", "--nu", "0")
    assert code == 2


def test_verify_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "--suite", "nonsense"])


def test_digits_bounds(capsys):
    code, _ = run(capsys, "rho", "--nu", "0.5", "--x", "1", "--digits", "10")
    assert code == 2
    code, _ = run(capsys, "rho", "--nu", "0.5", "--x", "1", "--digits", "2000")
    assert code == 2


def test_env_digits_override(capsys, monkeypatch):
    monkeypatch.setenv("MACDOPOLY_DIGITS", "45")
    code, out = run(capsys, "table", "--N", "2")
    assert code == 0
    assert json.loads(out)["digits"] == 45


def test_config_file_and_flag_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"digits": 35, "N": 2}))
    code, out = run(capsys, "table", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["digits"] == 35
    # explicit flag wins over the config file and the environment
    monkeypatch.setenv("MACDOPOLY_DIGITS", "50")
    code, out = run(capsys, "table", "--config", str(cfg), "--digits", "40")
    assert code == 0
    assert json.loads(out)["digits"] == 40


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"frobnicate": 1}))
    code, _ = run(capsys, "table", "--config", str(cfg))
    assert code == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "rule.json"
    code, out = run(capsys, "quadrule", "--N", "2", "--digits", "40",
                    "--out", str(target))
    assert code == 0
    d = json.loads(target.read_text())
    assert len(d["nodes"]) == 2
