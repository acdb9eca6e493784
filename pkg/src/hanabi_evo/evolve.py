"""Genetic algorithm over rule permutations.

Tournament selection, ordered crossover (OX), swap mutation and elitism.
Every generation is scored on a fresh seed set derived from the master
seed; all variation draws from one sequential stream, so a run depends
only on its config and never on the worker count.
"""

from __future__ import annotations

import csv
import json
import logging
import random
import statistics
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import IO, Callable, Sequence, TypeVar

from .agents import PRESET_NAMES, Chromosome, save_chromosome
from .evaluation import ALL_SIZES, EvalConfig, FitnessReport, evaluate_chromosomes, seed_set, write_score_log
from .rules import catalog

log = logging.getLogger(__name__)

Genes = TypeVar("Genes", Chromosome, tuple, list)


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class EvolveConfig:
    p: int = 200
    s: int | None = None  # defaults to the catalog size
    m: float = 0.1
    c: float = 0.9
    e: int = 20
    t: int = 5
    G: int = 500
    n: int = 20
    edition: str = "new"
    mode: str = "mirror"
    sizes: tuple[int, ...] = ALL_SIZES
    seed: int = 0
    pool: tuple[str, ...] = PRESET_NAMES
    top_k: int = 10
    reeval_n: int = 100

    def __post_init__(self):
        if self.edition not in ("old", "new"):
            raise ConfigError("edition", f"expected 'old' or 'new', got {self.edition!r}")
        size = len(catalog(self.edition))
        if self.s is None:
            self.s = size
        if self.s != size:
            raise ConfigError("s", f"chromosome size must equal the {self.edition} catalog size {size}, got {self.s}")
        if self.p < 2:
            raise ConfigError("p", f"population must be at least 2, got {self.p}")
        if not 0 <= self.e < self.p:
            raise ConfigError("e", f"elitism count must satisfy 0 <= e < p={self.p}, got {self.e}")
        if not 1 <= self.t <= self.p:
            raise ConfigError("t", f"tournament size must satisfy 1 <= t <= p={self.p}, got {self.t}")
        for key in ("m", "c"):
            if not 0.0 <= getattr(self, key) <= 1.0:
                raise ConfigError(key, f"rate must lie in [0, 1], got {getattr(self, key)}")
        if self.G < 1:
            raise ConfigError("G", f"need at least one generation, got {self.G}")
        if self.n < 1:
            raise ConfigError("n", f"games per pairing must be positive, got {self.n}")
        if self.mode not in ("mirror", "mixed"):
            raise ConfigError("mode", f"expected 'mirror' or 'mixed', got {self.mode!r}")
        self.sizes = tuple(sorted(set(self.sizes)))
        if not self.sizes or any(x not in ALL_SIZES for x in self.sizes):
            raise ConfigError("sizes", f"must be a non-empty subset of {ALL_SIZES}, got {self.sizes}")
        self.pool = tuple(self.pool)
        if any(name not in PRESET_NAMES for name in self.pool):
            raise ConfigError("pool", f"unknown agent in {self.pool}; choose from {PRESET_NAMES}")
        if self.top_k < 1:
            raise ConfigError("top_k", f"must be positive, got {self.top_k}")
        if self.reeval_n < 1:
            raise ConfigError("reeval_n", f"must be positive, got {self.reeval_n}")

    def eval_config(self, tag: str, n: int | None = None) -> EvalConfig:
        n = self.n if n is None else n
        return EvalConfig(self.mode, self.sizes, n, seed_set(self.seed, tag, self.sizes, n), self.pool)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        d["pool"] = list(self.pool)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvolveConfig":
        known = {f.name for f in fields(cls)}
        for key in d:
            if key not in known:
                raise ConfigError(key, "unknown key")
        return cls(**d)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    fitnesses: tuple[float, ...]
    population: tuple[tuple[int, ...], ...]
    best: Chromosome
    best_fitness: float
    mean_fitness: float
    reports: tuple[FitnessReport, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "best": list(self.best.genes),
            "edition": self.best.edition,
            "fitnesses": list(self.fitnesses),
            "population": [list(g) for g in self.population],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationRecord":
        return cls(
            d["generation"],
            tuple(d["fitnesses"]),
            tuple(tuple(g) for g in d["population"]),
            Chromosome(tuple(d["best"]), d.get("edition", "new")),
            d["best_fitness"],
            d["mean_fitness"],
        )


# -- operators -------------------------------------------------------------------


def _genes(x) -> tuple[int, ...]:
    return x.genes if isinstance(x, Chromosome) else tuple(x)


def _like(template, genes: tuple[int, ...]):
    if isinstance(template, Chromosome):
        return Chromosome(genes, template.edition)
    return type(template)(genes) if isinstance(template, list) else genes


def ordered_crossover(a: Genes, b: Genes, rng: random.Random, cuts: tuple[int, int] | None = None) -> Genes:
    """OX: keep ``a[i..j]`` in place, fill the rest left to right in ``b``'s order."""
    ga, gb = _genes(a), _genes(b)
    if isinstance(a, Chromosome) and isinstance(b, Chromosome) and a.edition != b.edition:
        raise ValueError(f"parents come from different catalogs ({a.edition} vs {b.edition})")
    if len(ga) != len(gb) or set(ga) != set(gb):
        raise ValueError("parents are not permutations of the same genes")
    n = len(ga)
    if cuts is None:
        i, j = sorted((rng.randrange(n), rng.randrange(n)))
    else:
        i, j = cuts
        if not 0 <= i <= j < n:
            raise ValueError(f"bad cut points {cuts} for length {n}")
    segment = set(ga[i : j + 1])
    fill = iter(g for g in gb if g not in segment)
    child = tuple(ga[k] if i <= k <= j else next(fill) for k in range(n))
    return _like(a, child)


def swap_mutation(chrom: Genes, rng: random.Random, m: float) -> Genes:
    """With probability ``m`` exchange two distinct positions."""
    genes = _genes(chrom)
    if len(genes) < 2 or rng.random() >= m:
        return chrom
    i, j = rng.sample(range(len(genes)), 2)
    out = list(genes)
    out[i], out[j] = out[j], out[i]
    return _like(chrom, tuple(out))


def tournament_index(fitnesses: Sequence[float], t: int, rng: random.Random) -> int:
    if not 1 <= t <= len(fitnesses):
        raise ValueError(f"tournament size {t} outside 1..{len(fitnesses)}")
    entrants = rng.sample(range(len(fitnesses)), t)
    return max(entrants, key=lambda i: (fitnesses[i], -i))


def tournament_select(population: Sequence[Genes], fitnesses: Sequence[float], t: int, rng: random.Random) -> Genes:
    """Fittest of ``t`` individuals drawn without replacement; ties go to the lower index."""
    if len(population) != len(fitnesses):
        raise ValueError("population and fitnesses differ in length")
    return population[tournament_index(fitnesses, t, rng)]


def elite_indices(fitnesses: Sequence[float], e: int) -> list[int]:
    return sorted(range(len(fitnesses)), key=lambda i: (-fitnesses[i], i))[:e]


def random_population(size: int, p: int, rng: random.Random) -> list[tuple[int, ...]]:
    return [tuple(rng.sample(range(size), size)) for _ in range(p)]


def next_generation(
    population: Sequence[tuple[int, ...]], fitnesses: Sequence[float], config: EvolveConfig, rng: random.Random
) -> list[tuple[int, ...]]:
    new = [population[i] for i in elite_indices(fitnesses, config.e)]
    while len(new) < config.p:
        a = population[tournament_index(fitnesses, config.t, rng)]
        b = population[tournament_index(fitnesses, config.t, rng)]
        child = ordered_crossover(a, b, rng) if rng.random() < config.c else a
        new.append(swap_mutation(child, rng, config.m))
    return new


# -- main loop -------------------------------------------------------------------


def evolve(
    config: EvolveConfig,
    workers: int = 1,
    on_generation: Callable[[GenerationRecord], None] | None = None,
    score_log: IO[str] | None = None,
) -> tuple[list[GenerationRecord], list[Chromosome]]:
    """Run ``config.G`` generations; return the history and the last population."""
    rng = random.Random(f"evolve:{config.seed}")
    population = random_population(config.s, config.p, rng)
    history: list[GenerationRecord] = []
    for gen in range(config.G):
        eval_cfg = config.eval_config(f"gen{gen}")
        reports = evaluate_chromosomes(population, config.edition, eval_cfg, workers)
        fitnesses = tuple(r.mean for r in reports)
        best = elite_indices(fitnesses, 1)[0]
        record = GenerationRecord(
            gen,
            fitnesses,
            tuple(population),
            Chromosome(population[best], config.edition),
            fitnesses[best],
            statistics.fmean(fitnesses),
            tuple(reports),
        )
        if score_log is not None:
            for idx, report in enumerate(reports):
                write_score_log(score_log, report, config.mode, generation=gen, individual=idx)
        log.info("generation %d: best %.3f mean %.3f", gen, record.best_fitness, record.mean_fitness)
        if on_generation is not None:
            on_generation(record)
        history.append(replace(record, reports=()))  # per-game records are not kept
        if gen + 1 < config.G:
            population = next_generation(population, fitnesses, config, rng)
    return history, [Chromosome(g, config.edition) for g in population]


def top_recorded(history: Sequence[GenerationRecord], k: int) -> list[tuple[Chromosome, float]]:
    """The ``k`` distinct chromosomes with the highest fitness recorded in any generation."""
    best: dict[tuple[int, ...], float] = {}
    edition = history[0].best.edition
    for rec in history:
        for genes, fit in zip(rec.population, rec.fitnesses):
            if genes not in best or fit > best[genes]:
                best[genes] = fit
    ranked = sorted(best.items(), key=lambda kv: -kv[1])  # stable: first seen wins ties
    return [(Chromosome(g, edition), f) for g, f in ranked[:k]]


def reevaluate_top(
    history: Sequence[GenerationRecord],
    k: int = 10,
    big_n: int = 100,
    config: EvolveConfig | None = None,
    workers: int = 1,
) -> list[tuple[Chromosome, FitnessReport]]:
    """Re-score the top ``k`` chromosomes on a fresh seed set of ``big_n`` games per size/pairing."""
    if not history:
        raise ValueError("history is empty")
    config = config or EvolveConfig(edition=history[0].best.edition)
    candidates = [c for c, _ in top_recorded(history, k)]
    eval_cfg = config.eval_config("reeval", big_n)
    reports = evaluate_chromosomes([c.genes for c in candidates], config.edition, eval_cfg, workers)
    ranked = sorted(zip(candidates, reports), key=lambda cr: -cr[1].mean)
    return ranked


# -- run artifacts ---------------------------------------------------------------


def write_history(history: Sequence[GenerationRecord], path: str | Path) -> None:
    with open(path, "w") as fp:
        for rec in history:
            fp.write(json.dumps(rec.to_dict()) + "\n")


def read_history(path: str | Path) -> list[GenerationRecord]:
    with open(path) as fp:
        return [GenerationRecord.from_dict(json.loads(line)) for line in fp if line.strip()]


def write_fitness_curve(history: Sequence[GenerationRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(["generation", "best_fitness", "mean_fitness"])
        for rec in history:
            w.writerow([rec.generation, repr(rec.best_fitness), repr(rec.mean_fitness)])


def write_top(ranked: Sequence[tuple[Chromosome, FitnessReport]], directory: str | Path) -> None:
    """``rank_01.chrom`` ... plus ``top_k.csv`` with per-size means."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    sizes = sorted({s for _, r in ranked for s in r.per_size})
    with open(directory / "top_k.csv", "w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(["rank", "file", "mean", "sem", "games"] + [f"size_{s}" for s in sizes])
        for rank, (chrom, report) in enumerate(ranked, 1):
            name = f"rank_{rank:02d}.chrom"
            save_chromosome(chrom, directory / name, header=f"rank {rank}: {report.summary()}")
            w.writerow([rank, name, repr(report.mean), repr(report.sem), report.games]
                       + [repr(report.per_size.get(s, "")) for s in sizes])


def write_generation_best(record: GenerationRecord, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_chromosome(record.best, directory / f"gen_{record.generation:04d}.chrom",
                    header=f"generation {record.generation}, fitness {record.best_fitness:.4f}")
