import json

import pytest

from linrec import cli, harness


def _write(path, text):
    path.write_text(text)
    return path


def test_load_config_resolves_defaults(tmp_path):
    cfg = harness.load_config(_write(tmp_path / "c.ini", "[experiment]\nname = thm2-periodic\nseed = 4\n"
                                                         "[blockshift]\nj_max = 3\n"))
    assert cfg.seed == 4
    assert cfg.params["blockshift"]["j_max"] == 3
    assert cfg.params["rigidity"]["K"] == 1.0
    assert cfg.params["run"]["ap_length"] == 5


@pytest.mark.parametrize("text", [
    "[experiment]\nname = thm1-floor\n[rigidity]\nbogus = 1\n",
    "[experiment]\nname = nope\n",
    "[experiment]\nseed = 1\n",
    "[experiment]\nname = thm1-floor\ncolour = red\n",
    "[experiment]\nname = thm1-floor\n[extra]\na = 1\n",
    "[experiment]\nname = thm1-floor\n[rigidity]\nj_max = twelve\n",
])
def test_invalid_configs(tmp_path, text):
    with pytest.raises(harness.ConfigError):
        harness.load_config(_write(tmp_path / "c.ini", text))


def test_run_writes_deterministic_outputs(tmp_path):
    cfg_text = "[experiment]\nname = thm2-exclusion\nseed = 3\n[run]\nj_values = 2, 3, 4\n"
    path = _write(tmp_path / "c.ini", cfg_text)
    a = harness.run(harness.load_config(path), out=tmp_path / "a")
    b = harness.run(harness.load_config(path), out=tmp_path / "b", parallel=True)
    assert a.passed and b.passed
    for name in a.files:
        assert (tmp_path / "a/thm2-exclusion" / name).read_bytes() == \
               (tmp_path / "b/thm2-exclusion" / name).read_bytes()
    report = json.loads((tmp_path / "a/thm2-exclusion/report.json").read_text())
    assert report["passed"] and report["seed"] == 3
    header = (tmp_path / "a/thm2-exclusion/exclusion.csv").read_text().splitlines()[0]
    assert header == "j,m_j,window,max_count,count_bound,bd_estimate,bd_bound"


def test_empty_trace_has_header(tmp_path):
    p = harness.emit_trace(tmp_path / "t.csv", [], ["n", "lower", "upper"])
    assert p.read_text() == "n,lower,upper\n"


def test_output_dir_fallback(tmp_path, monkeypatch):
    cfg = harness.ExperimentConfig("thm2-periodic")
    monkeypatch.setenv("LINREC_OUT", str(tmp_path / "env"))
    assert harness.resolve_output_dir(cfg) == tmp_path / "env" / "thm2-periodic"
    cfg.output_dir = str(tmp_path / "cfg")
    assert harness.resolve_output_dir(cfg) == tmp_path / "cfg" / "thm2-periodic"
    assert harness.resolve_output_dir(cfg, str(tmp_path / "cli")) == tmp_path / "cli" / "thm2-periodic"


def test_cli_exit_codes(tmp_path, capsys):
    ok = _write(tmp_path / "ok.ini", "[experiment]\nname = thm2-periodic\n[blockshift]\nj_max = 3\n")
    assert cli.main(["run", str(ok), "--out", str(tmp_path / "o")]) == 0
    assert "PASS" in capsys.readouterr().out
    # no certificate can reach eps = 1e-300, so the recipe records a failed assertion
    fail = _write(tmp_path / "fail.ini", "[experiment]\nname = thm1-recurrence\n"
                                         "[run]\nn_vectors = 1\neps = 1e-300\n")
    assert cli.main(["run", str(fail), "--out", str(tmp_path / "o")]) == 2
    assert "FAIL" in capsys.readouterr().out
    bad = _write(tmp_path / "bad.ini", "[experiment]\nname = thm2-periodic\n[run]\nwat = 1\n")
    assert cli.main(["run", str(bad), "--out", str(tmp_path / "o")]) == 3


def test_cli_seed_override(tmp_path):
    cfg = _write(tmp_path / "c.ini", "[experiment]\nname = thm2-cyclic\nseed = 1\n"
                                     "[run]\ncyclic_trials = 1\ncyclic_max_n = 3\n")
    assert cli.main(["run", str(cfg), "--out", str(tmp_path), "--seed", "9"]) == 0
    assert json.loads((tmp_path / "thm2-cyclic/report.json").read_text())["seed"] == 9


def test_cli_facts_and_density(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LINREC_OUT", str(tmp_path))
    assert cli.main(["facts"]) == 0
    assert (tmp_path / "facts-suite/report.json").exists()
    csv_path = _write(tmp_path / "s.csv", "n\n2\n4\n6\n8\n")
    assert cli.main(["density", str(csv_path), "--horizon", "10"]) == 0
    out = capsys.readouterr().out
    assert "longest_ap=4" in out and "max_gap=2" in out
    assert (tmp_path / "s_density.csv").exists()
    assert cli.main(["density", str(tmp_path / "missing.csv")]) == 3


@pytest.mark.parametrize("name", ["thm1-recurrence", "thm1-floor", "thm1-ap", "thm2-real"])
def test_recipes_pass_with_defaults(tmp_path, name):
    report = harness.run(harness.ExperimentConfig(name), out=tmp_path)
    assert report.assertions and report.passed, [a for a in report.failures()]
