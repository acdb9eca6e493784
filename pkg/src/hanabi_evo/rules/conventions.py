"""Finesse-family conventions.

These follow the one-line descriptions of the framework rules.  Each one
is deliberately conservative: when the convention's preconditions are not
clearly met it reports not-applicable.

* PlayFinesse: a hint since my last turn, from a player before me to one
  after me, touched a card two above its stack, and the connecting card is
  not visible in any other hand.  I play my finesse slot (newest untouched).
* PlayFinesseTold: I hold a hinted card one of whose candidates became
  playable because its predecessor was played since my last turn.
* TellFinesse: the next player's finesse slot is playable and a later
  player holds the untouched card right above it; hint that card's value.
* PlayUniquePossibleCard: a hinted card with exactly one live candidate
  identity, which is playable.
* TellIllinformed: hint the first partner who knows no safe play or
  discard, about a playable card, else about a useless one.
* TryToUnblock: same as above but only for the very next player, falling
  back to the most informative hint for them.
"""

from __future__ import annotations

from ..cards import CARD_COLOR, CARD_VALUE, NUM_VALUES
from ..engine import Action, ActionKind, EventKind, GameState
from ..knowledge import card_flags, hand_stats
from .common import (
    events_since_last_action,
    is_blocked,
    live_candidates,
    most_informative_tell,
    others,
    tell_about_playable,
    tell_about_useless,
)


def _finesse_slot(state: GameState, player: int) -> int | None:
    knows = state.knowledge[player]
    for i in range(len(knows) - 1, -1, -1):
        if not knows[i].touched:
            return i
    return None


def _between(n: int, giver: int, me: int, target: int) -> bool:
    return me != giver and 0 < (me - giver) % n < (target - giver) % n


def play_finesse(spec, state: GameState, player: int, rng):
    if state.lives <= 1:
        return None
    n = state.num_players
    fireworks = state.fireworks
    for e in events_since_last_action(state, player):
        if e.kind != EventKind.HINT or e.target == player or not _between(n, e.player, player, e.target):
            continue
        for slot in e.touched:
            if slot >= len(state.hands[e.target]):
                continue
            card = state.hands[e.target][slot]
            color = CARD_COLOR[card]
            if CARD_VALUE[card] != fireworks[color] + 2:
                continue
            needed = color * NUM_VALUES + fireworks[color]
            visible = any(
                needed in state.hands[p] for p in range(n) if p != player
            )
            if not visible:
                slot_mine = _finesse_slot(state, player)
                if slot_mine is not None:
                    return Action(ActionKind.PLAY, slot_mine)
    return None


def play_finesse_told(spec, state: GameState, player: int, rng):
    if state.lives <= 1:
        return None
    advanced = {
        e.card for e in events_since_last_action(state, player) if e.kind == EventKind.PLAYED
    }
    if not advanced:
        return None
    playable = card_flags(state)[0]
    stats = hand_stats(state, player)
    best, best_p = None, 0.0
    for i, know in enumerate(state.knowledge[player]):
        if not know.touched:
            continue
        for c in live_candidates(state, player, i):
            if playable[c] and CARD_VALUE[c] > 1 and c - 1 in advanced:
                if stats[i][0] > best_p:
                    best, best_p = i, stats[i][0]
                break
    return None if best is None else Action(ActionKind.PLAY, best)


def tell_finesse(spec, state: GameState, player: int, rng):
    n = state.num_players
    if state.hints <= 0 or n < 3:
        return None
    nxt = (player + 1) % n
    slot = _finesse_slot(state, nxt)
    if slot is None:
        return None
    card = state.hands[nxt][slot]
    if not state.is_playable(card) or CARD_VALUE[card] == NUM_VALUES:
        return None
    wanted = card + 1
    for t in others(state, player)[1:]:
        for c, know in zip(state.hands[t], state.knowledge[t]):
            if c == wanted and not know.touched:
                return Action(ActionKind.TELL_VALUE, -1, t, CARD_VALUE[c])
    return None


def play_unique_possible_card(spec, state: GameState, player: int, rng):
    playable = card_flags(state)[0]
    for i, know in enumerate(state.knowledge[player]):
        if not know.touched:
            continue
        cands = live_candidates(state, player, i)
        if len(cands) == 1 and playable[cands[0]]:
            return Action(ActionKind.PLAY, i)
    return None


def tell_illinformed(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    for t in others(state, player):
        if not is_blocked(state, player, t):
            continue
        action = tell_about_playable(state, t) or tell_about_useless(state, player, t)
        if action is not None:
            return action
    return None


def try_to_unblock(spec, state: GameState, player: int, rng):
    if state.hints <= 0:
        return None
    t = (player + 1) % state.num_players
    if not is_blocked(state, player, t):
        return None
    return (
        tell_about_playable(state, t)
        or tell_about_useless(state, player, t)
        or most_informative_tell(state, player, targets=(t,))
    )

