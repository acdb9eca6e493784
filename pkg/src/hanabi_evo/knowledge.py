"""Per-slot beliefs and probability queries from a card owner's perspective.

Knowledge is kept as two 5-bit masks (possible colors, possible values).
Candidate identities for a slot are the cells of ``colors x values`` that
still have unseen copies, weighted by how many copies are unseen.  "Unseen"
means not in the discard pile, not on a firework stack and not in a hand
the viewer can look at.

Beliefs never model partner intentions; that reasoning lives in the
PlayJustHinted rule.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .cards import CARD_COLOR, CARD_VALUE, CARDS, NUM_COLORS, NUM_IDENTITIES, NUM_VALUES, Card, Color

if TYPE_CHECKING:
    from .engine import GameState

ALL_MASK = (1 << 5) - 1


def _single_bit_index(mask: int) -> int | None:
    if mask and not mask & (mask - 1):
        return mask.bit_length() - 1
    return None


# _IDS[colors_mask][values_mask] -> identities inside the rectangle
_IDS: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
    tuple(
        tuple(
            c * NUM_VALUES + v
            for c in range(NUM_COLORS)
            if cm >> c & 1
            for v in range(NUM_VALUES)
            if vm >> v & 1
        )
        for vm in range(32)
    )
    for cm in range(32)
)


class CardKnowledge:
    """What a player knows about one of their own slots from hints alone."""

    __slots__ = ("colors", "values", "told_color", "told_value", "drawn_turn")

    def __init__(
        self,
        drawn_turn: int = 0,
        colors: int = ALL_MASK,
        values: int = ALL_MASK,
        told_color: int | None = None,
        told_value: int | None = None,
    ):
        self.colors = colors
        self.values = values
        self.told_color = told_color
        self.told_value = told_value
        self.drawn_turn = drawn_turn

    def copy(self) -> "CardKnowledge":
        return CardKnowledge(self.drawn_turn, self.colors, self.values, self.told_color, self.told_value)

    def apply_color_hint(self, color: int, touched: bool) -> None:
        if touched:
            self.colors = 1 << color
            self.told_color = color
        else:
            self.colors &= ~(1 << color)

    def apply_value_hint(self, value: int, touched: bool) -> None:
        if touched:
            self.values = 1 << (value - 1)
            self.told_value = value
        else:
            self.values &= ~(1 << (value - 1))

    @property
    def known_color(self) -> int | None:
        """Color index if hints narrowed it to one option (positively or by elimination)."""
        return _single_bit_index(self.colors)

    @property
    def known_value(self) -> int | None:
        i = _single_bit_index(self.values)
        return None if i is None else i + 1

    @property
    def touched(self) -> bool:
        return self.told_color is not None or self.told_value is not None

    @property
    def possible_colors(self) -> list[Color]:
        return [Color(c) for c in range(NUM_COLORS) if self.colors >> c & 1]

    @property
    def possible_values(self) -> list[int]:
        return [v + 1 for v in range(NUM_VALUES) if self.values >> v & 1]

    def identities(self) -> tuple[int, ...]:
        return _IDS[self.colors][self.values]

    def admits(self, card: int) -> bool:
        return bool(self.colors >> CARD_COLOR[card] & 1 and self.values >> (CARD_VALUE[card] - 1) & 1)

    def __eq__(self, other):
        if not isinstance(other, CardKnowledge):
            return NotImplemented
        return (
            self.colors == other.colors
            and self.values == other.values
            and self.told_color == other.told_color
            and self.told_value == other.told_value
            and self.drawn_turn == other.drawn_turn
        )

    def __repr__(self) -> str:
        cs = "".join(str(c) for c in self.possible_colors)
        vs = "".join(str(v) for v in self.possible_values)
        return f"CardKnowledge({cs}|{vs}, drawn={self.drawn_turn})"


# ---------------------------------------------------------------------------
# Per-state tables (cached on the state; the cache is reset by every move)
# ---------------------------------------------------------------------------


def card_flags(state: "GameState") -> tuple[tuple[bool, ...], tuple[bool, ...], tuple[bool, ...]]:
    """(playable, useless, necessary) flags for each of the 25 identities."""
    cache = state._cache
    flags = cache.get("flags")
    if flags is not None:
        return flags
    copies = state.deck_spec.copies
    discarded = state.discard_counts
    playable = [False] * NUM_IDENTITIES
    useless = [False] * NUM_IDENTITIES
    necessary = [False] * NUM_IDENTITIES
    for color in range(NUM_COLORS):
        top = state.fireworks[color]
        base = color * NUM_VALUES
        reachable = top
        while reachable < NUM_VALUES and discarded[base + reachable] < copies[reachable]:
            reachable += 1
        if top < NUM_VALUES:
            playable[base + top] = True
        for v in range(NUM_VALUES):
            value = v + 1
            if value <= top or value > reachable:
                useless[base + v] = True
            elif discarded[base + v] == copies[v] - 1:
                necessary[base + v] = True
    flags = (tuple(playable), tuple(useless), tuple(necessary))
    cache["flags"] = flags
    return flags


def unseen_counts(state: "GameState", viewer: int, also_hidden: int | None = None) -> list[int]:
    """Copies of each identity the viewer cannot locate.

    ``also_hidden`` removes one more hand from view.  Rules use it to
    estimate a partner's beliefs without peeking at their own cards, since
    the partner sees the acting player's hand but the acting player does not.
    """
    key = ("unseen", viewer, also_hidden)
    cache = state._cache
    counts = cache.get(key)
    if counts is not None:
        return counts
    counts = state.deck_spec.identity_counts()
    for i, n in enumerate(state.discard_counts):
        if n:
            counts[i] -= n
    for color, top in enumerate(state.fireworks):
        for v in range(top):
            counts[color * NUM_VALUES + v] -= 1
    for p, hand in enumerate(state.hands):
        if p == viewer or p == also_hidden:
            continue
        for card in hand:
            counts[card] -= 1
    cache[key] = counts
    return counts


def distribution_stats(
    colors: int, values: int, unseen: list[int], flags
) -> tuple[float, float, float]:
    """(P(playable), P(useless), P(necessary)) for a knowledge rectangle."""
    playable, useless, necessary = flags
    total = hp = hu = hn = 0
    for i in _IDS[colors][values]:
        n = unseen[i]
        if n:
            total += n
            if playable[i]:
                hp += n
            if useless[i]:
                hu += n
            elif necessary[i]:
                hn += n
    if not total:
        return 0.0, 0.0, 0.0
    return hp / total, hu / total, hn / total


def hand_stats(state: "GameState", owner: int) -> list[tuple[float, float, float]]:
    """Per-slot (P(playable), P(useless), P(necessary)) from the owner's view."""
    key = ("stats", owner)
    cache = state._cache
    stats = cache.get(key)
    if stats is not None:
        return stats
    unseen = unseen_counts(state, owner)
    flags = card_flags(state)
    stats = [distribution_stats(k.colors, k.values, unseen, flags) for k in state.knowledge[owner]]
    cache[key] = stats
    return stats


def estimated_hand_stats(state: "GameState", observer: int, owner: int) -> list[tuple[float, float, float]]:
    """The owner's per-slot stats as the observer can reconstruct them."""
    if observer == owner:
        return hand_stats(state, owner)
    key = ("est", observer, owner)
    cache = state._cache
    stats = cache.get(key)
    if stats is not None:
        return stats
    unseen = unseen_counts(state, owner, also_hidden=observer)
    flags = card_flags(state)
    stats = [distribution_stats(k.colors, k.values, unseen, flags) for k in state.knowledge[owner]]
    cache[key] = stats
    return stats


def _check_slot(state: "GameState", owner: int, slot: int) -> None:
    if not 0 <= owner < state.num_players:
        raise ValueError(f"no player {owner}")
    if not 0 <= slot < len(state.hands[owner]):
        raise ValueError(f"player {owner} has no card in slot {slot}")


# ---------------------------------------------------------------------------
# Public queries
# ---------------------------------------------------------------------------


def candidates(state: "GameState", owner: int, slot: int) -> dict[Card, int]:
    """Unseen-copy count of every identity consistent with the slot's knowledge."""
    _check_slot(state, owner, slot)
    know = state.knowledge[owner][slot]
    unseen = unseen_counts(state, owner)
    return {CARDS[i]: unseen[i] for i in _IDS[know.colors][know.values] if unseen[i] > 0}


def prob_playable(state: "GameState", owner: int, slot: int) -> float:
    _check_slot(state, owner, slot)
    return hand_stats(state, owner)[slot][0]


def prob_useless(state: "GameState", owner: int, slot: int) -> float:
    """Chance the card can never be played: already played, or a lower card of its color is gone."""
    _check_slot(state, owner, slot)
    return hand_stats(state, owner)[slot][1]


def prob_necessary(state: "GameState", owner: int, slot: int) -> float:
    """Chance the card is the last surviving copy of something still needed for 25."""
    _check_slot(state, owner, slot)
    return hand_stats(state, owner)[slot][2]
