"""Helpers shared by rule implementations.

Everything here reads only what the acting player may see: other hands,
public piles, hint knowledge and the event history.
"""

from __future__ import annotations

from ..cards import CARD_COLOR, CARD_VALUE, NUM_COLORS, NUM_VALUES
from ..engine import Action, ActionKind, Event, EventKind, GameState
from ..knowledge import card_flags, estimated_hand_stats, unseen_counts


def others(state: GameState, player: int) -> list[int]:
    """Other players in turn order, starting with the next one."""
    n = state.num_players
    return [(player + o) % n for o in range(1, n)]


def reachable_heights(state: GameState) -> list[int]:
    """Highest value each stack can still reach given the discard pile."""
    cache = state._cache
    heights = cache.get("reach")
    if heights is None:
        copies = state.deck_spec.copies
        heights = []
        for color in range(NUM_COLORS):
            h = state.fireworks[color]
            while h < NUM_VALUES and state.discard_counts[color * NUM_VALUES + h] < copies[h]:
                h += 1
            heights.append(h)
        cache["reach"] = heights
    return heights


def live_candidates(state: GameState, player: int, slot: int) -> list[int]:
    """Identities the player's own slot could still be."""
    unseen = unseen_counts(state, player)
    return [i for i in state.knowledge[player][slot].identities() if unseen[i]]


def argmax_first(values) -> int:
    best_i, best = -1, None
    for i, v in enumerate(values):
        if best is None or v > best:
            best_i, best = i, v
    return best_i


def hints_since_last_action(state: GameState, player: int) -> list[Event]:
    """Hints aimed at ``player`` since their last move, oldest first."""
    out = []
    for e in reversed(state.history):
        if e.player == player:
            break
        if e.kind == EventKind.HINT and e.target == player:
            out.append(e)
    out.reverse()
    return out


def events_since_last_action(state: GameState, player: int) -> list[Event]:
    out = []
    for e in reversed(state.history):
        if e.player == player:
            break
        out.append(e)
    out.reverse()
    return out


def tell_missing(target: int, card: int, know, value_first: bool = True) -> Action | None:
    """Tell one axis of ``card`` that the owner has not pinned down yet."""
    color_missing = know.known_color is None
    value_missing = know.known_value is None
    if value_first and value_missing:
        return Action(ActionKind.TELL_VALUE, -1, target, CARD_VALUE[card])
    if color_missing:
        return Action(ActionKind.TELL_COLOR, -1, target, CARD_COLOR[card])
    if value_missing:
        return Action(ActionKind.TELL_VALUE, -1, target, CARD_VALUE[card])
    return None


def info_gain(state: GameState, action: Action) -> int:
    """Number of slots whose possibility masks a tell would shrink."""
    gained = 0
    hand = state.hands[action.target]
    if action.kind == ActionKind.TELL_COLOR:
        bit = 1 << action.hint
        for card, know in zip(hand, state.knowledge[action.target]):
            if CARD_COLOR[card] == action.hint:
                gained += know.colors != bit
            else:
                gained += bool(know.colors & bit)
    else:
        bit = 1 << (action.hint - 1)
        for card, know in zip(hand, state.knowledge[action.target]):
            if CARD_VALUE[card] == action.hint:
                gained += know.values != bit
            else:
                gained += bool(know.values & bit)
    return gained


def most_informative_tell(state: GameState, player: int, targets=None) -> Action | None:
    best, best_gain = None, 0
    for action in state.tell_actions(player):
        if targets is not None and action.target not in targets:
            continue
        gain = info_gain(state, action)
        if gain > best_gain:
            best, best_gain = action, gain
    return best


def tell_about_playable(state: GameState, target: int) -> Action | None:
    hand, knows = state.hands[target], state.knowledge[target]
    playable = card_flags(state)[0]
    for card, know in zip(hand, knows):
        if playable[card]:
            action = tell_missing(target, card, know)
            if action is not None:
                return action
    return None


def tell_about_useless(state: GameState, player: int, target: int) -> Action | None:
    useless = card_flags(state)[1]
    est = estimated_hand_stats(state, player, target)
    for i, (card, know) in enumerate(zip(state.hands[target], state.knowledge[target])):
        if useless[card] and est[i][1] < 1.0:
            action = tell_missing(target, card, know, value_first=False)
            if action is not None:
                return action
    return None


def is_blocked(state: GameState, observer: int, target: int) -> bool:
    """True when, as far as the observer can tell, the target knows no safe play or discard."""
    return not any(p == 1.0 or u == 1.0 for p, u, _ in estimated_hand_stats(state, observer, target))
