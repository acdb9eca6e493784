"""Rule catalog and dispatch.

A rule maps ``(state, player, rng)`` to a legal action or ``None`` when it
does not apply.  ``rng`` is the game's random stream and is only consumed
by the stochastic rules (TellRandomly, TellPlayableCard, LegalRandom,
DiscardUnidentifiedCard, DiscardRandomly).
"""

from __future__ import annotations

from ..engine import Action, GameState
from . import conventions, intentional, standard
from .catalog import (
    DEFAULT_WEIGHTS,
    EDITIONS,
    EXTRA_RULES,
    RuleCatalog,
    RuleSpec,
    catalog,
    resolve_rule,
)

IMPLEMENTATIONS = {
    "PlayIfCertain": standard.play_if_certain,
    "PlaySafeCard": standard.play_safe_card,
    "PlayProbablySafeCard": standard.play_probably_safe,
    "IfLivesPlayProbablySafeCard": standard.if_lives_play_probably_safe,
    "IfHailMaryPlayProbablySafeCard": standard.if_hail_mary_play_probably_safe,
    "CompleteTellUsefulCard": standard.complete_tell_useful_card,
    "TellAboutOnes": standard.tell_about_ones,
    "TellAnyoneAboutUsefulCard": standard.tell_anyone_about_useful_card,
    "TellAnyoneAboutOldestUsefulCard": standard.tell_anyone_about_oldest_useful_card,
    "TellPlayableCard": standard.tell_playable_card,
    "TellPlayableCardOuter": standard.tell_anyone_about_useful_card,
    "TellAnyoneAboutUselessCard": standard.tell_anyone_about_useless_card,
    "TellDispensable": standard.tell_anyone_about_useless_card,
    "TellFives": standard.tell_fives,
    "TellMostInformation": standard.tell_most_information,
    "TellRandomly": standard.tell_randomly,
    "TellUnknown": standard.tell_unknown,
    "DiscardUseless": standard.discard_useless,
    "DiscardSafe": standard.discard_safe,
    "OsawaDiscard": standard.osawa_discard,
    "DiscardIfCertain": standard.discard_if_certain,
    "DiscardHighest": standard.discard_highest,
    "DiscardOldestFirst": standard.discard_oldest_first,
    "DiscardOldestNoInfoFirst": standard.discard_oldest_no_info_first,
    "DiscardUnidentifiedCard": standard.discard_unidentified_card,
    "DiscardLeastLikelyToBeNecessary": standard.discard_least_likely_necessary,
    "DiscardProbablyUselessCard": standard.discard_probably_useless,
    "PlayFinesse": conventions.play_finesse,
    "PlayFinesseTold": conventions.play_finesse_told,
    "TellFinesse": conventions.tell_finesse,
    "PlayUniquePossibleCard": conventions.play_unique_possible_card,
    "TellIllinformed": conventions.tell_illinformed,
    "TryToUnblock": conventions.try_to_unblock,
    "LegalRandom": standard.legal_random,
    "PlayJustHinted": intentional.play_just_hinted,
    "TellUnambiguous1": intentional.tell_unambiguous_1,
    "TellUnambiguous2": intentional.tell_unambiguous_2,
    "DiscardRandomly": standard.discard_randomly,
    "IfHintsBelow4TellDispensable": standard.if_hints_below_4_tell_dispensable,
}


def apply_rule(rule: RuleSpec, state: GameState, player: int, rng) -> Action | None:
    return IMPLEMENTATIONS[rule.kind](rule, state, player, rng)


def play_just_hinted(params: RuleSpec, state: GameState, player: int) -> Action | None:
    return intentional.play_just_hinted(params, state, player, None)


def tell_unambiguous_1(state: GameState, player: int) -> Action | None:
    return intentional.tell_unambiguous_1(None, state, player, None)


def tell_unambiguous_2(weights: tuple[float, float], state: GameState, player: int) -> Action | None:
    return intentional.tell_unambiguous_2(RuleSpec(-1, "TellUnambiguous2", weights=tuple(weights)),
                                          state, player, None)


__all__ = [
    "DEFAULT_WEIGHTS",
    "EDITIONS",
    "EXTRA_RULES",
    "IMPLEMENTATIONS",
    "RuleCatalog",
    "RuleSpec",
    "apply_rule",
    "catalog",
    "play_just_hinted",
    "resolve_rule",
    "tell_unambiguous_1",
    "tell_unambiguous_2",
]
