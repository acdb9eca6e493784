"""Rule-sequence agents, the baseline test pool and the size-dispatching wrapper.

Agent files are plain text, one rule per line, ``#`` starts a comment::

    edition: new
    48   # PlayJustHinted(0,n=0)
    1    # PlaySafeCard
    ...

A line may hold a catalog id or a rule name.  Chromosome files are written
with ids; preset files use names.  A situational agent file points at two
other agent files::

    kind: situational
    two: best_2p.chrom
    more: best_3plus.chrom
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

from .engine import Action, GameState
from .rules import RuleSpec, apply_rule, catalog, resolve_rule

PRESET_NAMES = ("IGGI", "Internal", "Outer", "LegalRandom", "VanDenBergh", "Flawed", "Piers")
# Internal sits in the pool but is never evaluated as a protagonist.
PROTAGONIST_PRESETS = ("IGGI", "Outer", "LegalRandom", "VanDenBergh", "Flawed", "Piers")


class Policy(Protocol):
    name: str

    def act(self, state: GameState, player: int, rng) -> Action: ...


class RuleSequencePolicy:
    """Plays the action of the first applicable rule; random legal move if none applies."""

    __slots__ = ("name", "rules")

    def __init__(self, rules: Sequence[RuleSpec], name: str = "rules"):
        self.rules = tuple(rules)
        self.name = name

    def act(self, state: GameState, player: int, rng) -> Action:
        for rule in self.rules:
            action = apply_rule(rule, state, player, rng)
            if action is not None:
                return action
        return rng.choice(state.legal_actions(player))

    def first_applicable(self, state: GameState, player: int, rng) -> tuple[RuleSpec | None, Action]:
        for rule in self.rules:
            action = apply_rule(rule, state, player, rng)
            if action is not None:
                return rule, action
        return None, rng.choice(state.legal_actions(player))

    def __reduce__(self):
        return (RuleSequencePolicy, (self.rules, self.name))

    def __repr__(self) -> str:
        return f"RuleSequencePolicy({self.name!r}, {len(self.rules)} rules)"


class SituationalPolicy:
    """Uses ``two`` in 2-player games and ``more`` otherwise."""

    __slots__ = ("name", "two", "more")

    def __init__(self, two: Policy, more: Policy, name: str = "situational"):
        self.two = two
        self.more = more
        self.name = name

    def pick(self, num_players: int) -> Policy:
        return self.two if num_players == 2 else self.more

    def act(self, state: GameState, player: int, rng) -> Action:
        return self.pick(state.num_players).act(state, player, rng)

    def __reduce__(self):
        return (SituationalPolicy, (self.two, self.more, self.name))


@dataclass(frozen=True)
class Chromosome:
    """A permutation of every rule id of one catalog edition."""

    genes: tuple[int, ...]
    edition: str = "new"

    def __post_init__(self):
        object.__setattr__(self, "genes", tuple(int(g) for g in self.genes))
        validate_permutation(self.genes, self.edition)

    def rules(self) -> tuple[RuleSpec, ...]:
        cat = catalog(self.edition)
        return tuple(cat[g] for g in self.genes)

    def policy(self, name: str = "chromosome") -> RuleSequencePolicy:
        return RuleSequencePolicy(self.rules(), name)

    def __len__(self) -> int:
        return len(self.genes)


def validate_permutation(genes: Sequence[int], edition: str) -> None:
    size = len(catalog(edition))
    if len(genes) != size or set(genes) != set(range(size)):
        bad = sorted(g for g in set(genes) if not 0 <= g < size)
        dup = len(genes) - len(set(genes))
        raise ValueError(
            f"not a permutation of the {edition} catalog: length {len(genes)} (want {size}), "
            f"{dup} duplicate(s), unknown ids {bad}"
        )


def act(policy: Policy, state: GameState, player: int, rng) -> Action:
    return policy.act(state, player, rng)


def situational_act(two: Policy, more: Policy, state: GameState, player: int, rng) -> Action:
    return SituationalPolicy(two, more).act(state, player, rng)


# -- agent files ---------------------------------------------------------------


def _parse_lines(text: str) -> tuple[dict[str, str], list[str]]:
    keys: dict[str, str] = {}
    entries: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line and not line.startswith("IF("):
            k, v = line.split(":", 1)
            keys[k.strip().lower()] = v.strip()
        else:
            entries.append(line)
    return keys, entries


def parse_rule_list(text: str, default_edition: str = "new", source: str = "<text>") -> tuple[str, list[RuleSpec]]:
    keys, entries = _parse_lines(text)
    edition = keys.get("edition", default_edition)
    cat = catalog(edition)
    rules = []
    for entry in entries:
        try:
            rules.append(cat[int(entry)] if entry.lstrip("-").isdigit() else resolve_rule(entry, edition))
        except KeyError as exc:
            raise ValueError(f"{source}: {exc.args[0]}") from None
    return edition, rules


def format_chromosome(chrom: Chromosome, header: str = "") -> str:
    cat = catalog(chrom.edition)
    lines = [f"# {header}" if header else "# chromosome", f"edition: {chrom.edition}"]
    width = len(str(len(cat)))
    lines += [f"{g:<{width}}  # {cat[g].name}" for g in chrom.genes]
    return "\n".join(lines) + "\n"


def save_chromosome(chrom: Chromosome, path: str | Path, header: str = "") -> None:
    Path(path).write_text(format_chromosome(chrom, header))


def load_chromosome(path: str | Path) -> Chromosome:
    text = Path(path).read_text()
    edition, rules = parse_rule_list(text, source=str(path))
    return Chromosome(tuple(r.id for r in rules), edition)


PRESET_DIR_ENV = "HANABI_EVO_PRESETS"


def preset_text(name: str) -> str:
    """Rule list of a preset; a ``<name>.rules`` file under ``$HANABI_EVO_PRESETS`` wins."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    override = os.environ.get(PRESET_DIR_ENV)
    if override and (Path(override) / f"{name}.rules").is_file():
        return (Path(override) / f"{name}.rules").read_text()
    return resources.files("hanabi_evo").joinpath("presets").joinpath(f"{name}.rules").read_text()


def load_preset(name: str) -> RuleSequencePolicy:
    _, rules = parse_rule_list(preset_text(name), source=f"preset {name}")
    return RuleSequencePolicy(rules, name)


def load_agent(ref: str) -> Policy:
    """Resolve ``preset:Name``, a bare preset name, or a path to an agent file."""
    if ref.startswith("preset:"):
        return load_preset(ref.split(":", 1)[1])
    if ref in PRESET_NAMES and not Path(ref).exists():
        return load_preset(ref)
    path = Path(ref)
    text = path.read_text()
    keys, _ = _parse_lines(text)
    if keys.get("kind") == "situational":
        try:
            two = load_agent(str(path.parent / keys["two"]))
            more = load_agent(str(path.parent / keys["more"]))
        except KeyError as exc:
            raise ValueError(f"{path}: situational agent needs a '{exc.args[0]}' line") from None
        return SituationalPolicy(two, more, name=path.stem)
    edition, rules = parse_rule_list(text, source=str(path))
    return RuleSequencePolicy(rules, name=path.stem)
