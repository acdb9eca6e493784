"""Rules that reason about why a partner gave a hint and how it will be read."""

from __future__ import annotations

from ..cards import CARD_COLOR, CARD_VALUE
from ..engine import Action, ActionKind, GameState
from ..knowledge import card_flags, distribution_stats, hand_stats, unseen_counts
from .common import hints_since_last_action


def just_hinted_slots(state: GameState, player: int, restriction: str | None = None) -> list[int]:
    """Own slots touched by hints received since the player's last move.

    ``standalone`` keeps only hints that touched a single card, ``newest``
    keeps only the most recently drawn slot.
    """
    slots: set[int] = set()
    for e in hints_since_last_action(state, player):
        if restriction == "standalone" and len(e.touched) != 1:
            continue
        slots.update(e.touched)
    if restriction == "newest":
        newest = len(state.hands[player]) - 1
        slots &= {newest}
    return sorted(s for s in slots if s < len(state.hands[player]))


def play_just_hinted(spec, state: GameState, player: int, rng):
    if state.lives <= spec.lives:
        return None
    slots = just_hinted_slots(state, player, spec.restriction)
    if not slots:
        return None
    stats = hand_stats(state, player)
    best = max(slots, key=lambda i: (stats[i][0], -i))
    if stats[best][0] > spec.p:
        return Action(ActionKind.PLAY, best)
    return None


def tell_unambiguous_1(spec, state: GameState, player: int, rng):
    """Hint touching the most playable cards, then the fewest unplayable ones."""
    if state.hints <= 0:
        return None
    playable = card_flags(state)[0]
    best_key, best = None, None
    for action in state.tell_actions(player):
        hand = state.hands[action.target]
        good = bad = 0
        for i in state.touched_slots(action):
            if playable[hand[i]]:
                good += 1
            else:
                bad += 1
        if not good:
            continue
        key = (-good, bad, action.target, action.kind, action.hint)
        if best_key is None or key < best_key:
            best_key, best = key, action
    return best


def hint_value(state: GameState, player: int, action: Action, weights: tuple[float, float]) -> float:
    """Weighted playability of the target's hand as they would see it after the hint.

    Each actually playable card adds ``w1 * p``, each unplayable card
    subtracts ``w2 * p``, with ``p`` the target's own chance that the card
    is playable.  The acting player's hand is treated as unseen since they
    cannot look at it.
    """
    w1, w2 = weights
    target = action.target
    flags = card_flags(state)
    playable = flags[0]
    unseen = unseen_counts(state, target, also_hidden=player)
    total = 0.0
    color_hint = action.kind == ActionKind.TELL_COLOR
    for card, know in zip(state.hands[target], state.knowledge[target]):
        colors, values = know.colors, know.values
        if color_hint:
            bit = 1 << action.hint
            colors = bit if CARD_COLOR[card] == action.hint else colors & ~bit
        else:
            bit = 1 << (action.hint - 1)
            values = bit if CARD_VALUE[card] == action.hint else values & ~bit
        p = distribution_stats(colors, values, unseen, flags)[0]
        total += w1 * p if playable[card] else -w2 * p
    return total


def tell_unambiguous_2(spec, state: GameState, player: int, rng):
    """Hint maximizing :func:`hint_value`; needs some hint that touches a playable card."""
    if state.hints <= 0:
        return None
    playable = card_flags(state)[0]
    weights = spec.weights or (1.0, 1.0)
    tells = state.tell_actions(player)
    if not any(playable[state.hands[a.target][i]] for a in tells for i in state.touched_slots(a)):
        return None
    best, best_score = None, None
    for action in tells:
        score = hint_value(state, player, action, weights)
        if best_score is None or score > best_score:
            best, best_score = action, score
    return best
