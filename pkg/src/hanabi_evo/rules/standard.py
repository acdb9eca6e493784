"""Framework-style play, tell and discard heuristics plus their IF wrappers."""

from __future__ import annotations

from ..cards import CARD_COLOR, CARD_VALUE
from ..engine import Action, ActionKind, GameState
from ..knowledge import ALL_MASK, card_flags, hand_stats
from .common import (
    argmax_first,
    live_candidates,
    most_informative_tell,
    others,
    reachable_heights,
    tell_about_useless,
    tell_missing,
)

PLAY = ActionKind.PLAY
DISCARD = ActionKind.DISCARD

# -- play --------------------------------------------------------------------


def play_if_certain(spec, state: GameState, player: int, rng):
    fireworks = state.fireworks
    for i, know in enumerate(state.knowledge[player]):
        c, v = know.known_color, know.known_value
        if c is not None and v is not None and fireworks[c] == v - 1:
            return Action(PLAY, i)
    return None


def play_safe_card(spec, state: GameState, player: int, rng):
    for i, (p, _, _) in enumerate(hand_stats(state, player)):
        if p == 1.0:
            return Action(PLAY, i)
    return None


def play_probably_safe(spec, state: GameState, player: int, rng):
    stats = hand_stats(state, player)
    best = argmax_first(s[0] for s in stats)
    if best >= 0 and stats[best][0] > spec.p:
        return Action(PLAY, best)
    return None


def if_lives_play_probably_safe(spec, state: GameState, player: int, rng):
    if state.lives > spec.lives:
        return play_probably_safe(spec, state, player, rng)
    return None


def if_hail_mary_play_probably_safe(spec, state: GameState, player: int, rng):
    if not state.deck and state.lives > spec.lives:
        return play_probably_safe(spec, state, player, rng)
    return None


# -- tell --------------------------------------------------------------------


def complete_tell_useful_card(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    playable = card_flags(state)[0]
    for t in others(state, player):
        for card, know in zip(state.hands[t], state.knowledge[t]):
            if playable[card] and (know.known_color is None) != (know.known_value is None):
                return tell_missing(t, card, know)
    return None


def _tell_about_value(value: int):
    def rule(spec, state: GameState, player: int, rng):
        if state.hints <= 0:
            return None
        for t in others(state, player):
            for card, know in zip(state.hands[t], state.knowledge[t]):
                if CARD_VALUE[card] == value and know.known_value is None:
                    return Action(ActionKind.TELL_VALUE, -1, t, value)
        return None

    rule.__name__ = f"tell_about_{value}s"
    return rule


tell_about_ones = _tell_about_value(1)
tell_fives = _tell_about_value(5)


def tell_anyone_about_useful_card(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    playable = card_flags(state)[0]
    for t in others(state, player):
        for card, know in zip(state.hands[t], state.knowledge[t]):
            if playable[card]:
                action = tell_missing(t, card, know)
                if action is not None:
                    return action
    return None


def tell_anyone_about_oldest_useful_card(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    playable = card_flags(state)[0]
    for t in others(state, player):
        for card, know in zip(state.hands[t], state.knowledge[t]):
            if playable[card]:
                action = tell_missing(t, card, know)
                if action is not None:
                    return action
                break
    return None


def tell_playable_card(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    # no check of what the holder already knows
    playable = card_flags(state)[0]
    for t in others(state, player):
        for card in state.hands[t]:
            if playable[card]:
                if rng.random() < 0.5:
                    return Action(ActionKind.TELL_COLOR, -1, t, CARD_COLOR[card])
                return Action(ActionKind.TELL_VALUE, -1, t, CARD_VALUE[card])
    return None


def tell_anyone_about_useless_card(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    for t in others(state, player):
        action = tell_about_useless(state, player, t)
        if action is not None:
            return action
    return None


def if_hints_below_4_tell_dispensable(spec, state: GameState, player: int, rng):
    if state.hints < 4:
        return tell_anyone_about_useless_card(spec, state, player, rng)
    return None


def tell_most_information(spec, state: GameState, player: int, rng):
    return most_informative_tell(state, player)


def tell_randomly(spec, state: GameState, player: int, rng):
    tells = state.tell_actions(player)
    return rng.choice(tells) if tells else None


def tell_unknown(spec, state: GameState, player: int, rng):
    """New information about the first partner card that is not fully known."""
    if state.hints <= 0:
        return None
    for t in others(state, player):
        for card, know in zip(state.hands[t], state.knowledge[t]):
            if know.known_color is None or know.known_value is None:
                return tell_missing(t, card, know, value_first=False)
    return None


# -- discard -----------------------------------------------------------------


def _discard_where_all(state: GameState, player: int, pred):
    for i in range(len(state.hands[player])):
        cands = live_candidates(state, player, i)
        if cands and all(pred(c) for c in cands):
            return Action(DISCARD, i)
    return None


def discard_useless(spec, state: GameState, player: int, rng):
    reach = reachable_heights(state)
    return _discard_where_all(state, player, lambda c: CARD_VALUE[c] > reach[CARD_COLOR[c]])


def discard_safe(spec, state: GameState, player: int, rng):
    tops = state.fireworks
    return _discard_where_all(state, player, lambda c: CARD_VALUE[c] <= tops[CARD_COLOR[c]])


def osawa_discard(spec, state: GameState, player: int, rng):
    for i, (_, u, _) in enumerate(hand_stats(state, player)):
        if u == 1.0:
            return Action(DISCARD, i)
    return None


def discard_if_certain(spec, state: GameState, player: int, rng):
    useless = card_flags(state)[1]
    for i, know in enumerate(state.knowledge[player]):
        c, v = know.known_color, know.known_value
        if c is not None and v is not None and useless[c * 5 + v - 1]:
            return Action(DISCARD, i)
    return None


def discard_highest(spec, state: GameState, player: int, rng):
    best, best_value = None, 0
    for i, know in enumerate(state.knowledge[player]):
        v = know.known_value
        if v is not None and v > best_value:
            best, best_value = i, v
    return None if best is None else Action(DISCARD, best)


def discard_oldest_first(spec, state: GameState, player: int, rng):
    knows = state.knowledge[player]
    if not knows:
        return None
    oldest = min(range(len(knows)), key=lambda i: (knows[i].drawn_turn, i))
    return Action(DISCARD, oldest)


def discard_oldest_no_info_first(spec, state: GameState, player: int, rng):
    for i, know in enumerate(state.knowledge[player]):
        if not know.touched:
            return Action(DISCARD, i)
    return None


def discard_unidentified_card(spec, state: GameState, player: int, rng):
    # no positive or negative information at all
    for i, know in enumerate(state.knowledge[player]):
        if know.colors == ALL_MASK and know.values == ALL_MASK:
            return Action(DISCARD, i)
    return None


def discard_least_likely_necessary(spec, state: GameState, player: int, rng):
    stats = hand_stats(state, player)
    if not stats:
        return None
    best = min(range(len(stats)), key=lambda i: (stats[i][2], i))
    return Action(DISCARD, best)


def discard_probably_useless(spec, state: GameState, player: int, rng):
    stats = hand_stats(state, player)
    best = argmax_first(s[1] for s in stats)
    if best >= 0 and stats[best][1] > spec.p:
        return Action(DISCARD, best)
    return None


def discard_randomly(spec, state: GameState, player: int, rng):
    n = len(state.hands[player])
    return Action(DISCARD, rng.randrange(n)) if n else None


def legal_random(spec, state: GameState, player: int, rng):
    actions = state.legal_actions(player)
    return rng.choice(actions) if actions else None

