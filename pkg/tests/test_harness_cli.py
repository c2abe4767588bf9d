"""Instance generators, suite runners, and the command line."""

import json
import random

import pytest

from dimshift.cli import main
from dimshift.harness import (
    GeneratorConfig,
    _trial_seeds,
    gen_padded_resolution,
    gen_random_module,
    gen_random_ses,
    run_connecting_suite,
    run_demo,
    run_sign_suite,
    run_step_sign_suite,
)
from dimshift.resolutions import ResolutionRegistry
from dimshift.serialize import module_from_json, module_map_from_json


def scrub(report_dict):
    out = dict(report_dict)
    out.pop("wall_time_s")
    return out


# -- generators ---------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(m=1)
    with pytest.raises(ValueError):
        GeneratorConfig(horizon=1)
    with pytest.raises(ValueError):
        GeneratorConfig(trials=0)
    with pytest.raises(ValueError):
        GeneratorConfig(max_dim=0)
    with pytest.raises(ValueError):
        GeneratorConfig(max_padding=-1)


def test_module_generation_is_seed_deterministic():
    cfg = GeneratorConfig(seed=0, m=3, max_dim=7)
    a = gen_random_module(cfg, random.Random(5))
    b = gen_random_module(cfg, random.Random(5))
    assert a == b
    assert 1 <= a.dim <= 7


def test_ses_generation_is_valid_and_deterministic():
    cfg = GeneratorConfig(seed=0, m=2, max_dim=6)
    e1 = gen_random_ses(cfg, random.Random(7))
    e2 = gen_random_ses(cfg, random.Random(7))
    assert e1.a_to_c == e2.a_to_c and e1.c_to_b == e2.c_to_b
    assert e1.sub.dim >= 1 and e1.quot.dim >= 1


def test_padded_resolutions_are_valid_and_plain_without_padding():
    cfg0 = GeneratorConfig(seed=0, m=2, max_dim=5, max_padding=0)
    registry = ResolutionRegistry()
    Mod = gen_random_module(cfg0, random.Random(8))
    plain = gen_padded_resolution(Mod, 3, cfg0, random.Random(8), registry)
    assert plain is registry.resolution(Mod, 3)
    cfg = GeneratorConfig(seed=0, m=2, max_dim=5, max_padding=2)
    padded = gen_padded_resolution(Mod, 3, cfg, random.Random(3), registry)
    assert padded.base == Mod
    assert padded.is_degreewise_injective()


def test_trial_seed_stream_is_stable():
    cfg = GeneratorConfig(seed=123, trials=4)
    assert list(_trial_seeds(cfg)) == list(_trial_seeds(cfg))


# -- suites --------------------------------------------------------------------

def test_sign_suite_small_run_passes_and_reproduces():
    cfg = GeneratorConfig(seed=2, m=2, max_dim=6, horizon=3, trials=3)
    r1 = run_sign_suite(cfg)
    r2 = run_sign_suite(cfg)
    assert r1.passed and r2.passed
    assert scrub(r1.to_json_dict()) == scrub(r2.to_json_dict())
    trial = r1.to_json_dict()["trials"][0]
    assert set(trial) == {"seed", "n", "sign", "verdict", "c", "d"}


def test_connecting_suite_small_run_passes():
    cfg = GeneratorConfig(seed=3, m=2, max_dim=6, horizon=3, trials=2)
    report = run_connecting_suite(cfg)
    assert report.passed
    for trial in report.trials:
        assert trial["square"] == "pass" and trial["independent"] == "pass"


def test_step_sign_suite_small_run_passes():
    cfg = GeneratorConfig(seed=4, m=2, max_dim=6, horizon=3, trials=2)
    report = run_step_sign_suite(cfg)
    assert report.passed
    for trial in report.trials:
        assert trial["product"] == "pass"
        for step in trial["steps"]:
            assert step["verdict"] == "pass"


def test_demo_matches_the_sign_table():
    report = run_demo(2, 4)
    assert report.passed
    for trial in report.trials:
        assert trial["c"] == [["1"]]
        assert trial["d"] == [[str(trial["sign"])]]


# -- command line ---------------------------------------------------------------

def test_cli_sign_table(capsys):
    assert main(["sign-table", "--n", "8"]) == 0
    out = capsys.readouterr().out
    assert out.split() == ["-1", "-1", "+1", "+1", "-1", "-1", "+1", "+1"]


def test_cli_demo_writes_a_report(tmp_path, capsys):
    out = tmp_path / "demo.json"
    assert main(["demo", "--m", "2", "--n", "3", "--output", str(out)]) == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert {t["n"] for t in payload["trials"]} == {1, 2, 3}


def test_cli_verify_sign_schema_and_determinism(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    flags = ["verify-sign", "--trials", "2", "--max-dim", "5", "--horizon", "2"]
    assert main(flags + ["--output", str(a)]) == 0
    assert main(flags + ["--output", str(b)]) == 0
    capsys.readouterr()
    pa = json.loads(a.read_text())
    pb = json.loads(b.read_text())
    assert set(pa) == {"config", "trials", "pass", "wall_time_s"}
    pa.pop("wall_time_s"), pb.pop("wall_time_s")
    assert pa == pb
    assert pa["pass"] is True


def test_cli_verify_lemmas_runs_both_parts(tmp_path, capsys):
    out = tmp_path / "lemmas.json"
    code = main(
        ["verify-lemmas", "--trials", "1", "--max-dim", "5", "--horizon", "2",
         "--output", str(out)]
    )
    assert code == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    parts = {t["part"] for t in payload["trials"]}
    assert parts == {"connecting", "steps"}


def test_cli_markdown_reports(tmp_path, capsys):
    out = tmp_path / "report.md"
    assert main(
        ["verify-sign", "--trials", "1", "--format", "md", "--output", str(out)]
    ) == 0
    capsys.readouterr()
    text = out.read_text()
    assert "|" in text and "pass" in text


def test_cli_dump_round_trips(tmp_path, capsys):
    module_path = tmp_path / "module.json"
    assert main(["dump", "--what", "module", "--seed", "9", "--output", str(module_path)]) == 0
    capsys.readouterr()
    data = json.loads(module_path.read_text())
    Mod = module_from_json(data)
    assert Mod.dim == len(data["X"])
    map_path = tmp_path / "map.json"
    assert main(["dump", "--what", "map", "--seed", "9", "--output", str(map_path)]) == 0
    capsys.readouterr()
    f = module_map_from_json(json.loads(map_path.read_text()))
    assert f.matrix.nrows == f.dst.dim
    res_path = tmp_path / "res.json"
    assert main(["dump", "--what", "resolution", "--seed", "9", "--output", str(res_path)]) == 0
    capsys.readouterr()
    payload = json.loads(res_path.read_text())
    assert "augmentation" in payload and "objects" in payload
    fc_path = tmp_path / "fc.json"
    assert main(["dump", "--what", "fcomplex", "--seed", "9", "--output", str(fc_path)]) == 0
    capsys.readouterr()
    payload = json.loads(fc_path.read_text())
    assert "differentials" in payload


def test_cli_reports_failure_exit_code_on_bad_flags(capsys):
    with pytest.raises(SystemExit):
        main(["verify-sign", "--format", "xml"])
    capsys.readouterr()
