"""Seeded Hanabi state machine.

Hands are ordered oldest to newest: a drawn card is appended at the end,
so slot 0 is always the oldest card.  The deck is drawn from its end.

All randomness of a game (the shuffle, plus any random choices agents
make during play) comes from one :class:`random.Random` (Mersenne Twister)
seeded with the game seed and stored on the state as ``rng``.
"""

from __future__ import annotations

import enum
import json
import random
from typing import IO, Iterable, NamedTuple

from .cards import (
    CARD_COLOR,
    CARD_VALUE,
    CARDS,
    COLOR_LETTERS,
    HAND_SIZE,
    MAX_HINTS,
    MAX_LIVES,
    NUM_COLORS,
    NUM_IDENTITIES,
    NUM_VALUES,
    STANDARD_DECK,
    Card,
    DeckSpec,
)
from .knowledge import CardKnowledge


class IllegalActionError(ValueError):
    pass


class ActionKind(enum.IntEnum):
    PLAY = 0
    DISCARD = 1
    TELL_COLOR = 2
    TELL_VALUE = 3


_PLAY = ActionKind.PLAY
_DISCARD = ActionKind.DISCARD
_TELL_COLOR = ActionKind.TELL_COLOR
_TELL_VALUE = ActionKind.TELL_VALUE


class Action(NamedTuple):
    """A move.  ``slot`` is used by play/discard; ``target``/``hint`` by tells."""

    kind: ActionKind
    slot: int = -1
    target: int = -1
    hint: int = -1

    @classmethod
    def play(cls, slot: int) -> "Action":
        return cls(_PLAY, slot)

    @classmethod
    def discard(cls, slot: int) -> "Action":
        return cls(_DISCARD, slot)

    @classmethod
    def tell_color(cls, target: int, color: int) -> "Action":
        return cls(_TELL_COLOR, -1, target, int(color))

    @classmethod
    def tell_value(cls, target: int, value: int) -> "Action":
        return cls(_TELL_VALUE, -1, target, value)

    @property
    def is_tell(self) -> bool:
        return self.kind >= _TELL_COLOR

    def __str__(self) -> str:
        if self.kind == _PLAY:
            return f"play {self.slot}"
        if self.kind == _DISCARD:
            return f"discard {self.slot}"
        if self.kind == _TELL_COLOR:
            return f"tell p{self.target} {COLOR_LETTERS[self.hint]}"
        return f"tell p{self.target} {self.hint}"


class EventKind(enum.IntEnum):
    PLAYED = 0
    MISPLAYED = 1
    DISCARDED = 2
    HINT = 3
    DRAWN = 4


class Event(NamedTuple):
    kind: EventKind
    turn: int
    player: int
    slot: int = -1
    card: int = -1
    target: int = -1
    hint_kind: int = -1
    hint: int = -1
    touched: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        d = {"turn": self.turn, "player": self.player, "event": self.kind.name.lower()}
        if self.kind == EventKind.HINT:
            d["target"] = self.target
            d["hint"] = "color" if self.hint_kind == _TELL_COLOR else "value"
            d["value"] = COLOR_LETTERS[self.hint] if self.hint_kind == _TELL_COLOR else self.hint
            d["touched"] = list(self.touched)
        else:
            d["slot"] = self.slot
            d["card"] = repr(CARDS[self.card])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Event":
        kind = EventKind[d["event"].upper()]
        if kind == EventKind.HINT:
            if d["hint"] == "color":
                hk, hv = _TELL_COLOR, COLOR_LETTERS.index(d["value"])
            else:
                hk, hv = _TELL_VALUE, int(d["value"])
            return cls(kind, d["turn"], d["player"], target=d["target"], hint_kind=hk, hint=hv,
                       touched=tuple(d["touched"]))
        return cls(kind, d["turn"], d["player"], slot=d["slot"], card=int(Card.parse(d["card"])))


class Terminal(enum.Enum):
    ONGOING = "ongoing"
    LIVES_EXHAUSTED = "lives-exhausted"
    DECK_EXHAUSTED = "deck-exhausted"
    ALL_COMPLETE = "all-stacks-complete"


class GameState:
    """Full (omniscient) game state.  Mutated in place by :meth:`step`."""

    __slots__ = (
        "num_players", "seed", "deck_spec", "hand_size", "hands", "knowledge", "deck",
        "fireworks", "discard", "discard_counts", "hints", "lives", "current", "turn",
        "final_turns", "history", "rng", "_cache",
    )

    def __init__(self, num_players: int, seed: int, deck_spec: DeckSpec = STANDARD_DECK):
        if num_players not in HAND_SIZE:
            raise ValueError(f"Hanabi needs 2 to 5 players, got {num_players!r}")
        self.num_players = num_players
        self.seed = seed
        self.deck_spec = deck_spec
        self.hand_size = HAND_SIZE[num_players]
        self.rng = random.Random(seed)
        self.deck: list[Card] = deck_spec.cards()
        self.rng.shuffle(self.deck)
        self.hands: list[list[Card]] = [[] for _ in range(num_players)]
        self.knowledge: list[list[CardKnowledge]] = [[] for _ in range(num_players)]
        for p in range(num_players):
            for _ in range(self.hand_size):
                self.hands[p].append(self.deck.pop())
                self.knowledge[p].append(CardKnowledge(0))
        self.fireworks = [0] * NUM_COLORS
        self.discard: list[Card] = []
        self.discard_counts = [0] * NUM_IDENTITIES
        self.hints = MAX_HINTS
        self.lives = MAX_LIVES
        self.current = 0
        self.turn = 0
        self.final_turns: int | None = None
        self.history: list[Event] = []
        self._cache: dict = {}

    # -- queries -----------------------------------------------------------

    @property
    def score(self) -> int:
        return sum(self.fireworks)

    def status(self) -> Terminal:
        if self.lives <= 0:
            return Terminal.LIVES_EXHAUSTED
        if all(top == NUM_VALUES for top in self.fireworks):
            return Terminal.ALL_COMPLETE
        if self.final_turns == 0:
            return Terminal.DECK_EXHAUSTED
        return Terminal.ONGOING

    @property
    def is_over(self) -> bool:
        return self.lives <= 0 or self.final_turns == 0 or sum(self.fireworks) == 25

    def is_playable(self, card: int) -> bool:
        return self.fireworks[CARD_COLOR[card]] == CARD_VALUE[card] - 1

    def legal_actions(self, player: int | None = None) -> list[Action]:
        """Every legal move for ``player`` (default: the current player), in a fixed order."""
        if player is None:
            player = self.current
        if self.is_over:
            return []
        n = len(self.hands[player])
        actions = [Action(_PLAY, i) for i in range(n)]
        actions.extend(Action(_DISCARD, i) for i in range(n))
        if self.hints > 0:
            actions.extend(self.tell_actions(player))
        return actions

    def tell_actions(self, player: int) -> list[Action]:
        """Legal tells for ``player`` in turn order of targets, colors before values."""
        out = []
        if self.hints <= 0:
            return out
        for offset in range(1, self.num_players):
            target = (player + offset) % self.num_players
            hand = self.hands[target]
            colors = sorted({CARD_COLOR[c] for c in hand})
            values = sorted({CARD_VALUE[c] for c in hand})
            out.extend(Action(_TELL_COLOR, -1, target, c) for c in colors)
            out.extend(Action(_TELL_VALUE, -1, target, v) for v in values)
        return out

    def touched_slots(self, action: Action) -> tuple[int, ...]:
        hand = self.hands[action.target]
        if action.kind == _TELL_COLOR:
            return tuple(i for i, c in enumerate(hand) if CARD_COLOR[c] == action.hint)
        return tuple(i for i, c in enumerate(hand) if CARD_VALUE[c] == action.hint)

    def check_legal(self, action: Action, player: int | None = None) -> None:
        if player is None:
            player = self.current
        if self.is_over:
            raise IllegalActionError(f"game is over ({self.status().value}); got {action}")
        if player != self.current:
            raise IllegalActionError(f"player {player} acted on player {self.current}'s turn")
        kind = action.kind
        if kind == _PLAY or kind == _DISCARD:
            if not 0 <= action.slot < len(self.hands[player]):
                raise IllegalActionError(f"{action}: player {player} has no slot {action.slot}")
            return
        if kind not in (_TELL_COLOR, _TELL_VALUE):
            raise IllegalActionError(f"unknown action kind {kind!r}")
        if self.hints <= 0:
            raise IllegalActionError(f"{action}: no hint tokens left")
        if action.target == player or not 0 <= action.target < self.num_players:
            raise IllegalActionError(f"{action}: bad hint target {action.target} for player {player}")
        if not self.touched_slots(action):
            raise IllegalActionError(f"{action}: hint would touch no card")

    # -- transitions ---------------------------------------------------------

    def step(self, action: Action, check: bool = True) -> list[Event]:
        """Apply the current player's action in place and return the new events."""
        if check:
            self.check_legal(action)
        self._cache.clear()
        player = self.current
        turn = self.turn
        events: list[Event] = []
        kind = action.kind
        if kind == _PLAY or kind == _DISCARD:
            slot = action.slot
            card = self.hands[player].pop(slot)
            self.knowledge[player].pop(slot)
            color = CARD_COLOR[card]
            if kind == _PLAY:
                if self.fireworks[color] == CARD_VALUE[card] - 1:
                    self.fireworks[color] += 1
                    if CARD_VALUE[card] == NUM_VALUES and self.hints < MAX_HINTS:
                        self.hints += 1
                    events.append(Event(EventKind.PLAYED, turn, player, slot, card))
                else:
                    self.lives -= 1
                    self.discard.append(card)
                    self.discard_counts[card] += 1
                    events.append(Event(EventKind.MISPLAYED, turn, player, slot, card))
            else:
                self.discard.append(card)
                self.discard_counts[card] += 1
                if self.hints < MAX_HINTS:
                    self.hints += 1
                events.append(Event(EventKind.DISCARDED, turn, player, slot, card))
            if self.deck:
                drawn = self.deck.pop()
                self.hands[player].append(drawn)
                self.knowledge[player].append(CardKnowledge(turn + 1))
                events.append(Event(EventKind.DRAWN, turn, player, len(self.hands[player]) - 1, drawn))
        else:
            self.hints -= 1
            target = action.target
            hint = action.hint
            touched = []
            if kind == _TELL_COLOR:
                for i, (card, know) in enumerate(zip(self.hands[target], self.knowledge[target])):
                    hit = CARD_COLOR[card] == hint
                    know.apply_color_hint(hint, hit)
                    if hit:
                        touched.append(i)
            else:
                for i, (card, know) in enumerate(zip(self.hands[target], self.knowledge[target])):
                    hit = CARD_VALUE[card] == hint
                    know.apply_value_hint(hint, hit)
                    if hit:
                        touched.append(i)
            events.append(Event(EventKind.HINT, turn, player, target=target, hint_kind=int(kind),
                                hint=hint, touched=tuple(touched)))
        self.history.extend(events)
        if self.final_turns is not None:
            self.final_turns -= 1
        elif not self.deck:
            self.final_turns = self.num_players
        self.turn = turn + 1
        self.current = (player + 1) % self.num_players
        return events

    def copy(self) -> "GameState":
        new = GameState.__new__(GameState)
        new.num_players = self.num_players
        new.seed = self.seed
        new.deck_spec = self.deck_spec
        new.hand_size = self.hand_size
        new.hands = [list(h) for h in self.hands]
        new.knowledge = [[k.copy() for k in ks] for ks in self.knowledge]
        new.deck = list(self.deck)
        new.fireworks = list(self.fireworks)
        new.discard = list(self.discard)
        new.discard_counts = list(self.discard_counts)
        new.hints = self.hints
        new.lives = self.lives
        new.current = self.current
        new.turn = self.turn
        new.final_turns = self.final_turns
        new.history = list(self.history)
        new.rng = random.Random()
        new.rng.setstate(self.rng.getstate())
        new._cache = {}
        return new

    def __repr__(self) -> str:
        stacks = " ".join(f"{COLOR_LETTERS[c]}{t}" for c, t in enumerate(self.fireworks))
        return (f"<GameState {self.num_players}p seed={self.seed} turn={self.turn} "
                f"[{stacks}] hints={self.hints} lives={self.lives} deck={len(self.deck)}>")


# -- functional surface ------------------------------------------------------


def new_game(num_players: int, seed: int, deck_spec: DeckSpec = STANDARD_DECK) -> GameState:
    return GameState(num_players, seed, deck_spec)


def legal_actions(state: GameState, player: int | None = None) -> list[Action]:
    return state.legal_actions(player)


def apply(state: GameState, action: Action) -> tuple[GameState, list[Event]]:
    """Pure variant of :meth:`GameState.step`: the input state is left untouched."""
    new = state.copy()
    events = new.step(action)
    return new, events


def is_terminal(state: GameState) -> Terminal:
    return state.status()


def score(state: GameState) -> int:
    return state.score


# -- history export and replay -----------------------------------------------


def actions_from_history(events: Iterable[Event]) -> list[Action]:
    out = []
    for e in events:
        if e.kind == EventKind.PLAYED or e.kind == EventKind.MISPLAYED:
            out.append(Action(_PLAY, e.slot))
        elif e.kind == EventKind.DISCARDED:
            out.append(Action(_DISCARD, e.slot))
        elif e.kind == EventKind.HINT:
            out.append(Action(ActionKind(e.hint_kind), -1, e.target, e.hint))
    return out


def replay(num_players: int, seed: int, actions: Iterable[Action],
           deck_spec: DeckSpec = STANDARD_DECK) -> GameState:
    state = new_game(num_players, seed, deck_spec)
    for action in actions:
        state.step(action)
    return state


def write_history(state: GameState, fp: IO[str], **header) -> None:
    """One JSON object per line; the first line carries seed and player count."""
    head = {"seed": state.seed, "num_players": state.num_players, **header}
    fp.write(json.dumps(head) + "\n")
    for event in state.history:
        fp.write(json.dumps(event.to_dict()) + "\n")


def read_history(fp: IO[str]) -> tuple[dict, list[Event]]:
    lines = [ln for ln in fp if ln.strip()]
    if not lines:
        raise ValueError("empty history file")
    header = json.loads(lines[0])
    return header, [Event.from_dict(json.loads(ln)) for ln in lines[1:]]
