"""Chromosome composition reports and fitness-curve export."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .agents import Chromosome
from .rules import RuleCatalog, catalog

CATEGORIES = ("play", "tell", "discard", "other")

_WRAPPERS = ("IfLives", "IfHailMary", "IfHintsBelow4")
_TELLING = {"CompleteTellUsefulCard", "TellIllinformed", "TryToUnblock"}


def category_of(kind: str) -> str:
    for prefix in _WRAPPERS:
        if kind.startswith(prefix):
            kind = kind[len(prefix):]
            break
    if kind.startswith("Play"):
        return "play"
    if kind.startswith("Tell") or kind in _TELLING:
        return "tell"
    if kind.startswith("Discard") or kind == "OsawaDiscard":
        return "discard"
    return "other"


def classify_rules(cat: RuleCatalog | str = "new") -> dict[int, str]:
    if isinstance(cat, str):
        cat = catalog(cat)
    return {rule.id: category_of(rule.kind) for rule in cat}


@dataclass(frozen=True)
class ChromosomeReport:
    size: int
    just_hinted_first: int
    unambiguous_first_tell: int
    play_before_tell: int
    tell_before_play: int
    old_edition: bool = False  # no PlayJustHinted or TellUnambiguous rules exist there

    def fraction(self, count: int) -> str:
        return f"{count}/{self.size}"

    def rows(self) -> list[tuple[str, str]]:
        rows = [
            ("PlayJustHinted first in chromosome", self.fraction(self.just_hinted_first)),
            ("TellUnambiguous first tell rule", self.fraction(self.unambiguous_first_tell)),
            ("first play rule before first tell rule", self.fraction(self.play_before_tell)),
            ("first tell rule before first play rule", self.fraction(self.tell_before_play)),
        ]
        if self.old_edition:
            rows.append(("note", "old-edition set: the first two counts are 0 by construction"))
        return rows

    def table(self, title: str = "") -> str:
        width = max(len(k) for k, _ in self.rows())
        lines = [title] if title else []
        lines += [f"{k:<{width}}  {v}" for k, v in self.rows()]
        return "\n".join(lines)


CSV_HEADER = ("set", "size", "just_hinted_first", "unambiguous_first_tell",
              "play_before_tell", "tell_before_play", "old_edition")


def _first_index(cats: Sequence[str], category: str) -> int | None:
    return next((i for i, c in enumerate(cats) if c == category), None)


def composition_report(chromosomes: Iterable[Chromosome]) -> ChromosomeReport:
    chromosomes = list(chromosomes)
    if not chromosomes:
        raise ValueError("composition report needs at least one chromosome")
    editions = {c.edition for c in chromosomes}
    if len(editions) > 1:
        raise ValueError(f"mixed catalog editions in one set: {sorted(editions)}")
    edition = editions.pop()
    cat = catalog(edition)
    jh = ua = pbt = tbp = 0
    for chrom in chromosomes:
        kinds = [cat[g].kind for g in chrom.genes]
        cats = [category_of(k) for k in kinds]
        if kinds[0] == "PlayJustHinted":
            jh += 1
        first_tell = _first_index(cats, "tell")
        first_play = _first_index(cats, "play")
        if first_tell is not None and kinds[first_tell] in ("TellUnambiguous1", "TellUnambiguous2"):
            ua += 1
        if first_play is not None and first_tell is not None:
            if first_play < first_tell:
                pbt += 1
            else:
                tbp += 1
    return ChromosomeReport(len(chromosomes), jh, ua, pbt, tbp, old_edition=edition == "old")


def write_reports_csv(fp: IO[str], reports: dict[str, ChromosomeReport]) -> None:
    w = csv.writer(fp)
    w.writerow(CSV_HEADER)
    for name, r in reports.items():
        w.writerow([name, r.size, r.just_hinted_first, r.unambiguous_first_tell,
                    r.play_before_tell, r.tell_before_play, int(r.old_edition)])


def fitness_curve(history) -> list[tuple[int, float, float]]:
    """``(generation, best, mean)`` per generation, in order."""
    if not history:
        raise ValueError("history is empty")
    return [(rec.generation, rec.best_fitness, rec.mean_fitness) for rec in history]
