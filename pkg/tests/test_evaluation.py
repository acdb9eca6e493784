import io
import json
import math
import statistics

import pytest

from hanabi_evo.agents import Chromosome, RuleSequencePolicy, load_preset
from hanabi_evo.evaluation import (
    EvalConfig,
    FitnessReport,
    MatchError,
    evaluate,
    evaluate_chromosomes,
    evaluate_parallel,
    mirror_fitness,
    mixed_fitness,
    protagonist_seat,
    run_match,
    seed_set,
    write_score_log,
)
from hanabi_evo.engine import Action, replay, actions_from_history


def test_seed_sets_are_reproducible_and_tagged():
    a = seed_set(1, "gen0", (2, 3), 5)
    assert a == seed_set(1, "gen0", (2, 3), 5)
    assert a != seed_set(1, "gen1", (2, 3), 5)
    assert a[2] != a[3]
    assert all(len(v) == 5 for v in a.values())


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig("both")
    with pytest.raises(ValueError):
        EvalConfig("mirror", sizes=(6,))
    with pytest.raises(ValueError):
        EvalConfig("mirror", n=0)
    with pytest.raises(ValueError):
        EvalConfig("mixed", pool=("Nobody",))
    with pytest.raises(ValueError):
        EvalConfig("mirror", sizes=(2,), n=3, seeds={2: (1, 2)})


def test_game_counts():
    assert EvalConfig("mirror", n=3).games == 12
    assert EvalConfig("mixed", n=3).games == 84
    assert EvalConfig("mixed", n=400).games == 11200


def test_run_match_history_replays():
    policy = load_preset("IGGI")
    score, state = run_match([policy] * 3, 1234)
    again = replay(3, 1234, actions_from_history(state.history))
    assert again.history == state.history and again.score == score


class _Cheater:
    name = "cheater"

    def act(self, state, player, rng):
        return Action.tell_value(player, 1)


def test_illegal_action_is_reported():
    with pytest.raises(MatchError, match="cheater"):
        run_match([_Cheater(), load_preset("IGGI")], 5)


def test_mirror_report_accounting():
    cfg = EvalConfig("mirror", sizes=(2, 4), n=4, seeds=seed_set(3, "t", (2, 4), 4))
    report = mirror_fitness(load_preset("Piers"), cfg)
    scores = [r.score for r in report.records]
    assert report.games == len(scores) == cfg.games
    assert report.mean == pytest.approx(statistics.fmean(scores))
    assert report.sem == pytest.approx(statistics.stdev(scores) / math.sqrt(len(scores)))
    assert set(report.per_size) == {2, 4}


def test_mixed_uses_every_pairing_and_fixed_seats():
    cfg = EvalConfig("mixed", sizes=(3,), n=2, seeds=seed_set(3, "t", (3,), 2))
    report = mixed_fitness(load_preset("IGGI"), cfg)
    assert report.games == 14
    assert {r.pairing for r in report.records} == set(cfg.pool)
    for k, name in enumerate(cfg.pool):
        for r in report.records:
            if r.pairing == name:
                assert r.seat == protagonist_seat(r.seed, 3, k)


def test_random_partner_hurts():
    seeds = seed_set(9, "t", (2, 3, 4, 5), 5)
    policy = load_preset("Piers")
    mirror = evaluate(policy, EvalConfig("mirror", n=5, seeds=seeds))
    mixed = evaluate(policy, EvalConfig("mixed", n=5, seeds=seeds, pool=("LegalRandom",)))
    assert mixed.mean < mirror.mean


def test_shared_seeds_give_identical_reports():
    cfg = EvalConfig("mirror", sizes=(2, 3), n=3, seeds=seed_set(0, "t", (2, 3), 3))
    chrom = Chromosome(tuple(range(70)), "new")
    a = evaluate(chrom.policy(), cfg)
    b = evaluate(chrom.policy(), cfg)
    assert a.records == b.records


def test_evaluate_chromosomes_dedups_and_keeps_order():
    cfg = EvalConfig("mirror", sizes=(2,), n=2, seeds=seed_set(0, "t", (2,), 2))
    g1 = tuple(range(48))
    g2 = tuple(reversed(range(48)))
    reports = evaluate_chromosomes([g1, g2, g1], "old", cfg)
    assert reports[0] is reports[2]
    assert reports[0].mean == evaluate(Chromosome(g1, "old").policy(), cfg).mean


def test_parallel_matches_serial():
    cfg = EvalConfig("mixed", sizes=(2, 3), n=2, seeds=seed_set(4, "t", (2, 3), 2))
    policy = load_preset("Outer")
    assert evaluate_parallel(policy, cfg, workers=2).records == evaluate(policy, cfg).records


def test_score_log_lines():
    cfg = EvalConfig("mirror", sizes=(2,), n=2, seeds=seed_set(0, "t", (2,), 2))
    report = evaluate(load_preset("IGGI"), cfg)
    buf = io.StringIO()
    write_score_log(buf, report, "mirror", generation=3, individual=7)
    rows = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert len(rows) == 2
    assert rows[0]["generation"] == 3 and rows[0]["individual"] == 7 and rows[0]["size"] == 2
    assert [r["score"] for r in rows] == [r.score for r in report.records]


def test_report_from_single_game():
    report = FitnessReport.from_records(evaluate(
        RuleSequencePolicy([]), EvalConfig("mirror", sizes=(2,), n=1, seeds={2: (5,)})).records)
    assert report.games == 1 and report.sem == 0.0
