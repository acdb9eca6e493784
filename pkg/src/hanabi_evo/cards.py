"""Card identities, colors and deck composition.

A card is stored as a small int ``color * 5 + (value - 1)`` so the hot
simulation paths can index flat 25-entry tables directly.  :class:`Card`
is an ``int`` subclass that adds readable accessors; the 25 instances are
interned in :data:`CARDS`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

COLOR_LETTERS = "BRYWG"
NUM_COLORS = 5
NUM_VALUES = 5
NUM_IDENTITIES = NUM_COLORS * NUM_VALUES
MAX_HINTS = 8
MAX_LIVES = 3


class Color(enum.IntEnum):
    B = 0
    R = 1
    Y = 2
    W = 3
    G = 4

    def __str__(self) -> str:
        return self.name


class Card(int):
    """One card identity; ``Card.of(Color.R, 3)`` is the red three."""

    __slots__ = ()

    @classmethod
    def of(cls, color: int, value: int) -> "Card":
        if not 0 <= color < NUM_COLORS:
            raise ValueError(f"bad color {color!r}")
        if not 1 <= value <= NUM_VALUES:
            raise ValueError(f"card value must be in 1..5, got {value!r}")
        return CARDS[color * NUM_VALUES + value - 1]

    @classmethod
    def parse(cls, text: str) -> "Card":
        """Parse the ``R3`` notation."""
        text = text.strip().upper()
        if len(text) != 2 or text[0] not in COLOR_LETTERS or not text[1].isdigit():
            raise ValueError(f"cannot parse card {text!r}")
        return cls.of(COLOR_LETTERS.index(text[0]), int(text[1]))

    @property
    def color(self) -> Color:
        return Color(int(self) // NUM_VALUES)

    @property
    def value(self) -> int:
        return int(self) % NUM_VALUES + 1

    def __repr__(self) -> str:
        return f"{COLOR_LETTERS[int(self) // NUM_VALUES]}{int(self) % NUM_VALUES + 1}"

    __str__ = __repr__


CARDS: tuple[Card, ...] = tuple(Card(i) for i in range(NUM_IDENTITIES))
CARD_COLOR: tuple[int, ...] = tuple(i // NUM_VALUES for i in range(NUM_IDENTITIES))
CARD_VALUE: tuple[int, ...] = tuple(i % NUM_VALUES + 1 for i in range(NUM_IDENTITIES))


@dataclass(frozen=True)
class DeckSpec:
    """Copies of each value per color; the default is the standard 3/2/2/2/1."""

    copies: tuple[int, ...] = (3, 2, 2, 2, 1)

    def __post_init__(self):
        if len(self.copies) != NUM_VALUES or any(c < 1 for c in self.copies):
            raise ValueError(f"need a positive copy count for each of 5 values, got {self.copies}")

    @property
    def size(self) -> int:
        return NUM_COLORS * sum(self.copies)

    def copies_of(self, card: int) -> int:
        return self.copies[card % NUM_VALUES]

    def identity_counts(self) -> list[int]:
        return [self.copies[i % NUM_VALUES] for i in range(NUM_IDENTITIES)]

    def cards(self) -> list[Card]:
        """Unshuffled deck, color-major."""
        return [CARDS[i] for i in range(NUM_IDENTITIES) for _ in range(self.copies[i % NUM_VALUES])]


STANDARD_DECK = DeckSpec()
HAND_SIZE = {2: 5, 3: 5, 4: 4, 5: 4}
