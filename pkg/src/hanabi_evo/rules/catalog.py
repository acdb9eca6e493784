"""Rule specifications and the two catalog editions.

Ids are positions in the new edition.  The old edition is its first 48
entries, so every old id means the same rule in both editions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

PLAY_P_GRID = (0.0, 0.2, 0.25, 0.4, 0.6, 0.8)
CONDITIONAL_P_GRID = (0.0, 0.2, 0.4, 0.6, 0.8)
HAIL_MARY_P_GRID = (0.0, 0.1)
JUST_HINTED_P_GRID = (0.0, 0.2, 0.4, 0.6, 0.8)
JUST_HINTED_LIVES = (0, 1)
JUST_HINTED_RESTRICTIONS = (None, "standalone")
RESTRICTIONS = (None, "standalone", "newest")
DEFAULT_WEIGHTS = (1.0, 1.0)

EDITIONS = ("old", "new")


def _fmt(x: float) -> str:
    return format(x, "g")


@dataclass(frozen=True)
class RuleSpec:
    """One catalog entry.

    ``p`` is a strict probability threshold, ``lives`` a strict lives
    threshold (the rule needs ``lives > n``), ``restriction`` narrows which
    hinted cards PlayJustHinted may pick.
    """

    id: int
    kind: str
    p: float | None = None
    lives: int | None = None
    restriction: str | None = None
    weights: tuple[float, float] | None = None

    @property
    def name(self) -> str:
        k = self.kind
        if k == "PlayProbablySafeCard":
            return f"PlayProbablySafeCard({_fmt(self.p)})"
        if k == "IfLivesPlayProbablySafeCard":
            return f"IF(Lives>1)PlayProbablySafeCard({_fmt(self.p)})"
        if k == "IfHailMaryPlayProbablySafeCard":
            return f"IF(HailMary)PlayProbablySafeCard({_fmt(self.p)})"
        if k == "DiscardProbablyUselessCard":
            return f"DiscardProbablyUselessCard({_fmt(self.p)})"
        if k == "PlayJustHinted":
            extra = f",{self.restriction}" if self.restriction else ""
            return f"PlayJustHinted({_fmt(self.p)},n={self.lives}{extra})"
        if k == "TellUnambiguous2" and self.weights != DEFAULT_WEIGHTS:
            return f"TellUnambiguous2({_fmt(self.weights[0])},{_fmt(self.weights[1])})"
        if k == "IfHintsBelow4TellDispensable":
            return "IF(Hints<4)TellDispensable"
        return k

    def params(self) -> dict:
        out = {}
        if self.p is not None:
            out["p"] = self.p
        if self.lives is not None:
            out["n"] = self.lives
        if self.restriction is not None:
            out["restriction"] = self.restriction
        if self.weights is not None:
            out["w1"], out["w2"] = self.weights
        return out

    def __str__(self) -> str:
        return self.name


_OLD_PLAIN_HEAD = ("PlayIfCertain", "PlaySafeCard")
_OLD_TELLS = (
    "CompleteTellUsefulCard",
    "TellAboutOnes",
    "TellAnyoneAboutUsefulCard",
    "TellAnyoneAboutOldestUsefulCard",
    "TellPlayableCard",
    "TellPlayableCardOuter",
    "TellAnyoneAboutUselessCard",
    "TellDispensable",
    "TellFives",
    "TellMostInformation",
    "TellRandomly",
    "TellUnknown",
)
_OLD_DISCARDS = (
    "DiscardUseless",
    "DiscardSafe",
    "OsawaDiscard",
    "DiscardIfCertain",
    "DiscardHighest",
    "DiscardOldestFirst",
    "DiscardOldestNoInfoFirst",
    "DiscardUnidentifiedCard",
    "DiscardLeastLikelyToBeNecessary",
)
_FINESSE_FAMILY = (
    "PlayFinesse",
    "PlayFinesseTold",
    "TellFinesse",
    "PlayUniquePossibleCard",
    "TellIllinformed",
    "TryToUnblock",
)


def _old_entries() -> list[tuple]:
    rows: list[tuple] = [(k,) for k in _OLD_PLAIN_HEAD]
    rows += [("PlayProbablySafeCard", p) for p in PLAY_P_GRID]
    rows += [("IfLivesPlayProbablySafeCard", p, 1) for p in CONDITIONAL_P_GRID]
    rows += [("IfHailMaryPlayProbablySafeCard", p, 1) for p in HAIL_MARY_P_GRID]
    rows += [(k,) for k in _OLD_TELLS]
    rows += [(k,) for k in _OLD_DISCARDS]
    rows += [("DiscardProbablyUselessCard", p) for p in CONDITIONAL_P_GRID]
    rows += [(k,) for k in _FINESSE_FAMILY]
    rows.append(("LegalRandom",))
    return rows


def _spec(rule_id: int, row: tuple, weights) -> RuleSpec:
    kind = row[0]
    p = row[1] if len(row) > 1 else None
    lives = row[2] if len(row) > 2 else None
    restriction = row[3] if len(row) > 3 else None
    w = weights if kind == "TellUnambiguous2" else None
    return RuleSpec(rule_id, kind, p, lives, restriction, w)


@dataclass(frozen=True)
class RuleCatalog:
    edition: str
    rules: tuple[RuleSpec, ...]
    _by_name: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {r.name: r for r in self.rules})

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __contains__(self, rule_id: int) -> bool:
        return 0 <= rule_id < len(self.rules)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.rules)

    def __getitem__(self, rule_id: int) -> RuleSpec:
        if not 0 <= rule_id < len(self.rules):
            raise KeyError(f"rule id {rule_id} not in the {self.edition} catalog (size {len(self.rules)})")
        return self.rules[rule_id]

    def by_name(self, name: str) -> RuleSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown rule {name!r} in the {self.edition} catalog") from None

    def export_text(self) -> str:
        lines = [f"# {self.edition} catalog, {len(self.rules)} rules", "# id\tname\tparameters"]
        for r in self.rules:
            params = ",".join(f"{k}={v}" for k, v in r.params().items())
            lines.append(f"{r.id}\t{r.name}\t{params}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def catalog(
    edition: str = "new",
    just_hinted_restrictions: tuple = JUST_HINTED_RESTRICTIONS,
    tu2_weights: tuple[float, float] = DEFAULT_WEIGHTS,
) -> RuleCatalog:
    """Build a catalog edition; ``old`` has 48 rules, ``new`` 70 by default."""
    if edition not in EDITIONS:
        raise ValueError(f"edition must be one of {EDITIONS}, got {edition!r}")
    for r in just_hinted_restrictions:
        if r not in RESTRICTIONS:
            raise ValueError(f"unknown PlayJustHinted restriction {r!r}")
    rows = _old_entries()
    if edition == "new":
        for restriction in just_hinted_restrictions:
            for n in JUST_HINTED_LIVES:
                for p in JUST_HINTED_P_GRID:
                    rows.append(("PlayJustHinted", p, n, restriction))
        rows.append(("TellUnambiguous1",))
        rows.append(("TellUnambiguous2",))
    specs = tuple(_spec(i, row, tuple(tu2_weights)) for i, row in enumerate(rows))
    return RuleCatalog(edition, specs)


# Rules some baseline agents need that are not part of either evolvable catalog.
# Their ids sit outside the catalog range so chromosomes can never contain them.
EXTRA_RULES: tuple[RuleSpec, ...] = (
    RuleSpec(1000, "DiscardRandomly"),
    RuleSpec(1001, "IfHintsBelow4TellDispensable"),
)


def resolve_rule(name: str, edition: str = "new") -> RuleSpec:
    """Look a rule up by display name in the catalog, then among the extras."""
    try:
        return catalog(edition).by_name(name)
    except KeyError:
        for r in EXTRA_RULES:
            if r.name == name:
                return r
        raise
