import pickle
import random

import pytest

from hanabi_evo.agents import (
    PRESET_NAMES,
    Chromosome,
    RuleSequencePolicy,
    SituationalPolicy,
    act,
    format_chromosome,
    load_agent,
    load_chromosome,
    load_preset,
    parse_rule_list,
    save_chromosome,
    situational_act,
)
from hanabi_evo.engine import Action, new_game
from hanabi_evo.rules import catalog, resolve_rule
from oracles import build_state, give_hint


def test_every_preset_loads():
    for name in PRESET_NAMES:
        policy = load_preset(name)
        assert policy.name == name and policy.rules


def test_first_applicable_rule_wins():
    state = build_state([["R2", "B1", "G4"], ["Y3", "W3", "G2"]])
    give_hint(state, 1, 0, value=1)
    policy = RuleSequencePolicy([resolve_rule("PlaySafeCard", "new"), resolve_rule("DiscardOldestFirst", "new")])
    rule, action = policy.first_applicable(state, 0, random.Random())
    assert rule.kind == "PlaySafeCard" and action == Action.play(1)


def test_skips_inapplicable_conditional():
    state = build_state([["R1", "B4"], ["Y3", "W3"]], lives=1)
    give_hint(state, 1, 0, value=1)
    rules = [resolve_rule("IF(Lives>1)PlayProbablySafeCard(0.8)", "old"), resolve_rule("DiscardOldestFirst", "old")]
    assert act(RuleSequencePolicy(rules), state, 0, random.Random()) == Action.discard(0)


def test_fallback_is_a_legal_random_move():
    state = new_game(3, 1)
    policy = RuleSequencePolicy([])
    action = policy.act(state, 0, random.Random(2))
    assert action in state.legal_actions(0)


def test_situational_dispatch():
    two = RuleSequencePolicy([resolve_rule("DiscardOldestFirst", "new")], "two")
    more = RuleSequencePolicy([resolve_rule("TellRandomly", "new")], "more")
    sit = SituationalPolicy(two, more)
    assert sit.pick(2) is two and sit.pick(3) is more and sit.pick(5) is more
    s2 = new_game(2, 4)
    assert situational_act(two, more, s2, 0, random.Random(0)).kind == Action.discard(0).kind
    s4 = new_game(4, 4)
    assert situational_act(two, more, s4, 0, random.Random(0)).is_tell


def test_chromosome_validation():
    size = len(catalog("old"))
    Chromosome(tuple(range(size)), "old")
    with pytest.raises(ValueError):
        Chromosome(tuple(range(size - 1)), "old")
    with pytest.raises(ValueError):
        Chromosome((0,) + tuple(range(1, size - 1)) + (0,), "old")
    with pytest.raises(ValueError):
        Chromosome(tuple(range(size)), "new")


def test_chromosome_file_round_trip(tmp_path):
    genes = tuple(random.Random(1).sample(range(70), 70))
    chrom = Chromosome(genes, "new")
    path = tmp_path / "a.chrom"
    save_chromosome(chrom, path, header="test")
    assert load_chromosome(path) == chrom
    text = format_chromosome(chrom)
    assert catalog("new")[genes[0]].name in text


def test_rule_list_accepts_names_and_ids():
    edition, rules = parse_rule_list("edition: old\n1\nPlaySafeCard  # again\nIF(Lives>1)PlayProbablySafeCard(0.6)\n")
    assert edition == "old" and rules[0] == rules[1]
    with pytest.raises(ValueError, match="999"):
        parse_rule_list("999\n")


def test_load_agent_variants(tmp_path):
    assert load_agent("preset:Piers").name == "Piers"
    assert load_agent("IGGI").name == "IGGI"
    chrom = Chromosome(tuple(range(70)), "new")
    save_chromosome(chrom, tmp_path / "two.chrom")
    save_chromosome(chrom, tmp_path / "more.chrom")
    (tmp_path / "sit.agent").write_text("kind: situational\ntwo: two.chrom\nmore: more.chrom\n")
    sit = load_agent(str(tmp_path / "sit.agent"))
    assert isinstance(sit, SituationalPolicy)
    (tmp_path / "bad.agent").write_text("kind: situational\ntwo: two.chrom\n")
    with pytest.raises(ValueError, match="more"):
        load_agent(str(tmp_path / "bad.agent"))


def test_policies_pickle():
    policy = load_preset("VanDenBergh")
    clone = pickle.loads(pickle.dumps(policy))
    assert clone.rules == policy.rules
    sit = pickle.loads(pickle.dumps(SituationalPolicy(policy, policy)))
    assert sit.two.rules == policy.rules


def test_preset_override_directory(tmp_path, monkeypatch):
    (tmp_path / "Flawed.rules").write_text("LegalRandom\n")
    monkeypatch.setenv("HANABI_EVO_PRESETS", str(tmp_path))
    assert [r.kind for r in load_preset("Flawed").rules] == ["LegalRandom"]
    assert load_preset("IGGI").rules[0].kind == "PlayIfCertain"
