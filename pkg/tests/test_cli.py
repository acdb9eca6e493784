import csv
import json

import pytest

from hanabi_evo.cli import bundled_configs, main, parse_config

TINY = """[evolve]
p = 4
e = 1
t = 2
G = 2
n = 1
sizes = 2
seed = 5
top_k = 2
reeval_n = 1
"""


def test_bundled_profiles_parse():
    names = bundled_configs()
    assert "desk" in names and "full-mirror-new" in names


def test_unknown_key_is_named(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[evolve]\np = 4\nmutation = 0.2\n")
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 2
    err = capsys.readouterr().err
    assert "mutation" in err and "unknown key" in err
    assert not (tmp_path / "run").exists()


def test_bad_value_is_named(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[evolve]\np = 4\ne = 9\n")
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 2
    assert "'e'" in capsys.readouterr().err


def test_parse_config_types():
    values = parse_config("[evolve]\np = 4\nm = 0.2\nsizes = 2, 3\nedition = old\n")
    assert values == {"p": 4, "m": 0.2, "sizes": (2, 3), "edition": "old"}


def test_evolve_smoke_and_follow_ups(tmp_path, capsys):
    cfg = tmp_path / "tiny.ini"
    cfg.write_text(TINY)
    run = tmp_path / "run"
    assert main(["evolve", "--config", str(cfg), "--out", str(run), "--score-log", "--quiet"]) == 0
    for name in ("config.ini", "history.jsonl", "fitness_curve.csv", "manifest.json", "scores.jsonl"):
        assert (run / name).is_file(), name
    assert sorted(p.name for p in (run / "best").iterdir()) == ["gen_0000.chrom", "gen_0001.chrom"]
    assert (run / "top" / "rank_01.chrom").is_file()
    manifest = json.loads((run / "manifest.json").read_text())
    assert manifest["seed"] == 5 and manifest["command"] == "evolve"
    with open(run / "fitness_curve.csv") as fp:
        assert len(list(csv.reader(fp))) == 3
    capsys.readouterr()

    assert main(["replay", "--run", str(run), "--entry", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# 2 players") and "final score" in out

    assert main(["analyze", str(run), "--out", str(tmp_path / "an")]) == 0
    assert (tmp_path / "an" / "composition.csv").is_file()
    assert (tmp_path / "an" / "run_fitness_curve.csv").is_file()


def test_analyze_empty_directory(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert main(["analyze", str(tmp_path / "empty")]) == 2
    assert "no readable chromosome" in capsys.readouterr().err


def test_evaluate_is_deterministic(tmp_path, capsys):
    args = ["evaluate", "preset:IGGI", "--n", "1", "--sizes", "2,3", "--seed", "4"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    log = tmp_path / "s.jsonl"
    assert main(args + ["--score-log", str(log)]) == 0
    assert len(log.read_text().splitlines()) == 2
    capsys.readouterr()
    assert main(["replay", "--log", str(log), "--entry", "1"]) == 0
    assert "# 3 players" in capsys.readouterr().out


def test_evaluate_missing_agent(capsys):
    assert main(["evaluate", "no/such/file.chrom", "--n", "1"]) == 2
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("flag", ["--workers", "--n"])
def test_non_positive_counts_rejected(flag, capsys):
    assert main(["evaluate", "preset:IGGI", flag, "0"]) == 2
