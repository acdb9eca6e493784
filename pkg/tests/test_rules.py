import random
from collections import Counter

import pytest

from hanabi_evo.engine import Action
from hanabi_evo.knowledge import prob_playable
from hanabi_evo.rules import (
    EXTRA_RULES,
    RuleSpec,
    apply_rule,
    catalog,
    play_just_hinted,
    resolve_rule,
    tell_unambiguous_1,
    tell_unambiguous_2,
)
from hanabi_evo.rules.intentional import hint_value
from oracles import build_state, give_hint, random_midgame

NEW = catalog("new")
OLD = catalog("old")
RANDOM_KINDS = {"TellRandomly", "TellPlayableCard", "LegalRandom", "DiscardRandomly"}


def rule(name, edition="new"):
    return resolve_rule(name, edition)


# -- catalog -----------------------------------------------------------------------


def test_catalog_sizes_and_nesting():
    assert len(OLD) == 48 and len(NEW) == 70
    assert NEW.ids == tuple(range(70))
    for r in OLD:
        assert NEW[r.id] == r


def test_catalog_grids():
    kinds = Counter(r.kind for r in OLD)
    assert kinds["PlayProbablySafeCard"] == 6
    assert sorted(r.p for r in OLD if r.kind == "PlayProbablySafeCard") == [0, 0.2, 0.25, 0.4, 0.6, 0.8]
    new_only = [r for r in NEW if r.id not in OLD]
    assert Counter(r.kind for r in new_only) == {"PlayJustHinted": 20, "TellUnambiguous1": 1, "TellUnambiguous2": 1}
    grid = {(r.p, r.lives, r.restriction) for r in new_only if r.kind == "PlayJustHinted"}
    assert len(grid) == 20


def test_catalog_names_unique_and_resolvable():
    names = [r.name for r in NEW]
    assert len(set(names)) == len(names)
    for r in NEW:
        assert NEW.by_name(r.name) == r
    with pytest.raises(KeyError):
        NEW[70]


def test_export_lists_every_rule():
    lines = [ln for ln in NEW.export_text().splitlines() if ln and not ln.startswith("#")]
    assert len(lines) == 70
    assert lines[0].split("\t")[:2] == ["0", NEW[0].name]


def test_extra_rules_stay_out_of_catalogs():
    for r in EXTRA_RULES:
        assert r.name not in {x.name for x in NEW}


# -- legality and information hiding -----------------------------------------------


@pytest.mark.parametrize("seed", range(60))
def test_every_rule_returns_legal_or_none(seed):
    state = random_midgame(seed)
    if state.is_over:
        return
    player = state.current
    legal = set(state.legal_actions(player))
    for r in list(NEW) + list(EXTRA_RULES):
        action = apply_rule(r, state, player, random.Random(seed))
        assert action is None or action in legal, r.name


def _scramble_own_hand(state, player, rng):
    """Swap the player's cards with hint-consistent unseen cards from the deck."""
    knows = state.knowledge[player]
    for i, card in enumerate(state.hands[player]):
        options = [j for j, c in enumerate(state.deck) if knows[i].admits(c) and c != card]
        if options:
            j = rng.choice(options)
            state.hands[player][i], state.deck[j] = state.deck[j], card
    state._cache.clear()


@pytest.mark.parametrize("seed", range(40))
def test_rules_do_not_peek_at_own_cards(seed):
    state = random_midgame(seed + 1000)
    if state.is_over or len(state.deck) < 5:
        return
    player = state.current
    scrambled = state.copy()
    _scramble_own_hand(scrambled, player, random.Random(seed))
    for r in list(NEW) + list(EXTRA_RULES):
        a = apply_rule(r, state, player, random.Random(7))
        b = apply_rule(r, scrambled, player, random.Random(7))
        assert a == b, r.name


def test_deterministic_rules_ignore_rng():
    state = random_midgame(3)
    player = state.current
    for r in NEW:
        if r.kind in RANDOM_KINDS:
            continue
        assert apply_rule(r, state, player, random.Random(1)) == apply_rule(r, state, player, random.Random(2)), r.name


# -- examples ----------------------------------------------------------------------


def test_play_safe_card():
    state = build_state([["R2", "B1", "G4"], ["Y3", "W3", "G2"]])
    give_hint(state, 1, 0, value=1)
    assert apply_rule(rule("PlaySafeCard"), state, 0, random.Random()) == Action.play(1)


def test_tell_randomly_needs_tokens():
    state = build_state([["R2", "B1"], ["Y3", "W3"]], hints=0)
    assert apply_rule(rule("TellRandomly"), state, 0, random.Random()) is None


def test_play_probably_safe_threshold():
    # own slot 1 is told red; the unseen reds decide the odds
    low = build_state([["B4", "R1"], ["R2", "R4", "R4", "R5", "Y2"]])
    give_hint(low, 1, 0, color="R")
    high = build_state([["B4", "R1"], ["R2", "R3", "R3", "R4", "R4"]], discard=["R5"])
    give_hint(high, 1, 0, color="R")
    assert prob_playable(low, 0, 1) == pytest.approx(3 / 6)
    assert prob_playable(high, 0, 1) == pytest.approx(3 / 4)
    r = rule("PlayProbablySafeCard(0.6)")
    assert apply_rule(r, low, 0, random.Random()) is None
    assert apply_rule(r, high, 0, random.Random()) == Action.play(1)


def test_play_probably_safe_exact_values():
    state = build_state([["B4", "R1"], ["Y3", "W3"]])
    state.knowledge[0][1].colors = 1 << 1  # known red, set directly
    state._cache.clear()
    counts = {1: 3, 2: 2, 3: 2, 4: 2, 5: 1}
    assert prob_playable(state, 0, 1) == pytest.approx(3 / sum(counts.values()))


def test_discard_oldest_first():
    state = build_state([["R2", "B1", "G4"], ["Y3", "W3", "G2"]])
    state.knowledge[0][0].drawn_turn = 5
    state.knowledge[0][1].drawn_turn = 2
    state.knowledge[0][2].drawn_turn = 7
    assert apply_rule(rule("DiscardOldestFirst"), state, 0, random.Random()) == Action.discard(1)


def test_conditional_lives_wrapper():
    state = build_state([["R1", "B4"], ["Y3", "W3"]], lives=1)
    give_hint(state, 1, 0, value=1)
    r = rule("IF(Lives>1)PlayProbablySafeCard(0.8)", "old")
    assert apply_rule(r, state, 0, random.Random()) is None
    state.lives = 2
    state._cache.clear()
    assert apply_rule(r, state, 0, random.Random()) == Action.play(0)


# -- PlayJustHinted ----------------------------------------------------------------


def pjh(p=0.0, lives=0, restriction=None):
    return RuleSpec(-1, "PlayJustHinted", p=p, lives=lives, restriction=restriction)


def test_just_hinted_needs_a_hint():
    state = build_state([["R1", "B4"], ["Y3", "W3"]])
    assert play_just_hinted(pjh(), state, 0) is None


def test_just_hinted_plays_touched_slot():
    state = build_state([["B4", "R1"], ["Y3", "W3"]])
    give_hint(state, 1, 0, color="R")
    assert play_just_hinted(pjh(), state, 0) == Action.play(1)


def test_just_hinted_standalone_rejects_multi_touch():
    state = build_state([["R1", "R4"], ["Y3", "W3"]])
    give_hint(state, 1, 0, color="R")
    assert play_just_hinted(pjh(restriction="standalone"), state, 0) is None
    assert play_just_hinted(pjh(), state, 0) == Action.play(0)


def test_just_hinted_five_after_four():
    state = build_state([["B2", "G3", "R5"], ["Y3", "W3", "W2"]], fireworks=(0, 4, 0, 0, 0))
    give_hint(state, 1, 0, value=5)
    p = prob_playable(state, 0, 2)
    assert 0 < p < 1
    assert play_just_hinted(pjh(p=0.0), state, 0) == Action.play(2)
    assert play_just_hinted(pjh(p=0.0, restriction="newest"), state, 0) == Action.play(2)
    assert play_just_hinted(pjh(p=p), state, 0) is None  # strict threshold


def test_just_hinted_lives_strict():
    state = build_state([["B4", "R1"], ["Y3", "W3"]], lives=1)
    give_hint(state, 1, 0, color="R")
    assert play_just_hinted(pjh(lives=1), state, 0) is None
    assert play_just_hinted(pjh(lives=0), state, 0) == Action.play(1)


def test_just_hinted_forgets_hints_after_acting():
    state = build_state([["B4", "R1", "G3"], ["Y3", "W3", "W4"]])
    give_hint(state, 1, 0, color="R")
    state.step(Action.discard(0))  # player 0 acts, slots shift
    give_hint(state, 1, 0, value=3)
    assert play_just_hinted(pjh(), state, 0) != Action.play(0)  # R1 was hinted before the discard


# -- TellUnambiguous ---------------------------------------------------------------


def test_unambiguous_1_prefers_color_of_the_right_two():
    state = build_state([["Y3", "W3"], ["B2", "R2", "G4"]], fireworks=(1, 0, 0, 0, 0))
    assert tell_unambiguous_1(state, 0) == Action.tell_color(1, 0)


def test_unambiguous_1_tells_all_twos():
    state = build_state([["Y3", "W3"], ["B2", "R2", "Y2"]], fireworks=(1, 1, 1, 1, 1))
    assert tell_unambiguous_1(state, 0) == Action.tell_value(1, 2)


def test_unambiguous_1_nothing_playable():
    state = build_state([["Y3", "W3"], ["B3", "R4", "Y5"]])
    assert tell_unambiguous_1(state, 0) is None


def test_unambiguous_2_single_card():
    state = build_state([["Y3", "W3"], ["B1"]], fireworks=(0, 0, 0, 0, 0))
    state.knowledge[1][0].colors = 1 << 0  # already knows blue
    state._cache.clear()
    action = tell_unambiguous_2((1.0, 1.0), state, 0)
    assert action == Action.tell_value(1, 1)
    assert hint_value(state, 0, action, (1.0, 1.0)) == pytest.approx(1.0)


def test_unambiguous_2_matches_exhaustive_scoring():
    state = build_state([["Y3", "W3", "G4"], ["B1", "R2", "B3"]], fireworks=(0, 1, 0, 0, 0))
    scores = {a: hint_value(state, 0, a, (1.0, 1.0)) for a in state.tell_actions(0)}
    best = max(scores.values())
    chosen = tell_unambiguous_2((1.0, 1.0), state, 0)
    assert scores[chosen] == best
    assert [a for a in state.tell_actions(0) if scores[a] == best][0] == chosen


def test_unambiguous_2_penalizes_misleading_hint():
    # telling '1' makes the dead R1 look playable; a colour hint on the blue 3 is neutral
    state = build_state([["Y3", "W3"], ["R1", "B3"]], fireworks=(0, 1, 0, 0, 0))
    mislead = Action.tell_value(1, 1)
    assert hint_value(state, 0, mislead, (1.0, 1.0)) < 0
    assert hint_value(state, 0, Action.tell_color(1, 0), (1.0, 1.0)) > hint_value(state, 0, mislead, (1.0, 1.0))
    assert tell_unambiguous_2((1.0, 1.0), state, 0) is None  # nothing playable to point at


def test_unambiguous_rules_need_tokens():
    state = build_state([["Y3", "W3"], ["B1", "R2"]], hints=0)
    assert tell_unambiguous_1(state, 0) is None
    assert tell_unambiguous_2((1.0, 1.0), state, 0) is None
