"""Mirror and mixed fitness evaluation with shared seeds.

Mirror: ``s`` copies of the agent for every size ``s`` and every seed.
Mixed: for every size, pool member and seed, the agent takes one seat
(drawn from the seed) and the pool member fills the rest.

Every individual evaluated against the same :class:`EvalConfig` sees the
same decks and seatings.
"""

from __future__ import annotations

import json
import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterable, NamedTuple, Sequence

from .agents import PRESET_NAMES, Chromosome, Policy, load_preset
from .engine import Event, IllegalActionError, new_game

MODES = ("mirror", "mixed")
ALL_SIZES = (2, 3, 4, 5)


class MatchError(RuntimeError):
    pass


def seed_set(master: int | str, tag: str, sizes: Iterable[int], n: int) -> dict[int, tuple[int, ...]]:
    """``n`` game seeds per size, derived from ``(master, tag, size)`` only."""
    out = {}
    for size in sizes:
        rng = random.Random(f"{master}/{tag}/{size}")
        out[size] = tuple(rng.getrandbits(48) for _ in range(n))
    return out


def protagonist_seat(seed: int, size: int, pairing: int) -> int:
    return random.Random(f"seat/{seed}/{size}/{pairing}").randrange(size)


@dataclass
class EvalConfig:
    mode: str = "mirror"
    sizes: tuple[int, ...] = ALL_SIZES
    n: int = 20
    seeds: dict[int, tuple[int, ...]] = field(default_factory=dict)
    pool: tuple[str, ...] = PRESET_NAMES

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        self.sizes = tuple(self.sizes)
        if not self.sizes or any(s not in ALL_SIZES for s in self.sizes):
            raise ValueError(f"sizes must be a non-empty subset of {ALL_SIZES}, got {self.sizes}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        self.pool = tuple(self.pool)
        if self.mode == "mixed" and not self.pool:
            raise ValueError("mixed evaluation needs a non-empty pool")
        for name in self.pool:
            if name not in PRESET_NAMES:
                raise ValueError(f"unknown pool agent {name!r}")
        if not self.seeds:
            self.seeds = seed_set(0, "default", self.sizes, self.n)
        for size in self.sizes:
            if len(self.seeds.get(size, ())) != self.n:
                raise ValueError(f"need exactly n={self.n} seeds for size {size}")

    def reseeded(self, master: int | str, tag: str) -> "EvalConfig":
        return EvalConfig(self.mode, self.sizes, self.n, seed_set(master, tag, self.sizes, self.n), self.pool)

    @property
    def games(self) -> int:
        per = len(self.sizes) * self.n
        return per * len(self.pool) if self.mode == "mixed" else per


class GameRecord(NamedTuple):
    size: int
    pairing: str
    seed: int
    seat: int
    score: int


@dataclass(frozen=True)
class FitnessReport:
    mean: float
    per_size: dict[int, float]
    games: int
    sem: float
    records: tuple[GameRecord, ...] = ()

    @classmethod
    def from_records(cls, records: Sequence[GameRecord]) -> "FitnessReport":
        scores = [r.score for r in records]
        per_size: dict[int, list[int]] = {}
        for r in records:
            per_size.setdefault(r.size, []).append(r.score)
        mean = statistics.fmean(scores)
        sem = statistics.stdev(scores) / math.sqrt(len(scores)) if len(scores) > 1 else 0.0
        return cls(mean, {s: statistics.fmean(v) for s, v in sorted(per_size.items())},
                   len(scores), sem, tuple(records))

    def summary(self) -> str:
        sizes = "  ".join(f"{s}P {m:.2f}" for s, m in self.per_size.items())
        return f"mean {self.mean:.2f}  {sizes}  s.e.m. {self.sem:.3f}  ({self.games} games)"


def run_match(policies: Sequence[Policy], seed: int, move_times: list | None = None):
    """Play one game with ``policies[i]`` in seat ``i``; return (score, final state).

    The final state carries the full event history in ``state.history``.
    """
    if not 2 <= len(policies) <= 5:
        raise ValueError(f"a match needs 2 to 5 seats, got {len(policies)}")
    state = new_game(len(policies), seed)
    rng = state.rng
    while not state.is_over:
        player = state.current
        if move_times is None:
            action = policies[player].act(state, player, rng)
        else:
            t0 = time.perf_counter()
            action = policies[player].act(state, player, rng)
            move_times.append(time.perf_counter() - t0)
        try:
            state.step(action)
        except IllegalActionError as exc:
            name = getattr(policies[player], "name", "?")
            raise MatchError(f"seed {seed}, turn {state.turn}: {name} in seat {player} chose {exc}") from None
    return state.score, state


def match_history(policies: Sequence[Policy], seed: int) -> list[Event]:
    return run_match(policies, seed)[1].history


@lru_cache(maxsize=None)
def pool_policy(name: str) -> Policy:
    return load_preset(name)


def mirror_fitness(policy: Policy, config: EvalConfig) -> FitnessReport:
    records = []
    for size in config.sizes:
        seats = [policy] * size
        for seed in config.seeds[size]:
            score, _ = run_match(seats, seed)
            records.append(GameRecord(size, "mirror", seed, -1, score))
    return FitnessReport.from_records(records)


def mixed_fitness(policy: Policy, config: EvalConfig) -> FitnessReport:
    if not config.pool:
        raise ValueError("mixed evaluation needs a non-empty pool")
    records = []
    for size in config.sizes:
        for k, partner_name in enumerate(config.pool):
            partner = pool_policy(partner_name)
            for seed in config.seeds[size]:
                seat = protagonist_seat(seed, size, k)
                seats = [partner] * size
                seats[seat] = policy
                score, _ = run_match(seats, seed)
                records.append(GameRecord(size, partner_name, seed, seat, score))
    return FitnessReport.from_records(records)


def evaluate(policy: Policy, config: EvalConfig) -> FitnessReport:
    if config.mode == "mirror":
        return mirror_fitness(policy, config)
    return mixed_fitness(policy, config)


def _evaluate_one(args) -> FitnessReport:
    policy, config = args
    return evaluate(policy, config)


def evaluate_parallel(policy: Policy, config: EvalConfig, workers: int = 1) -> FitnessReport:
    """Same report as :func:`evaluate`, with game sizes spread over worker processes."""
    if workers <= 1 or len(config.sizes) == 1:
        return evaluate(policy, config)
    parts = [
        EvalConfig(config.mode, (s,), config.n, {s: config.seeds[s]}, config.pool) for s in config.sizes
    ]
    with ProcessPoolExecutor(max_workers=min(workers, len(parts))) as pool:
        reports = list(pool.map(_evaluate_one, [(policy, part) for part in parts]))
    return FitnessReport.from_records([r for rep in reports for r in rep.records])


def _evaluate_genes(args) -> FitnessReport:
    genes, edition, config = args
    return evaluate(Chromosome(genes, edition).policy(), config)


def evaluate_chromosomes(
    population: Sequence[Sequence[int]], edition: str, config: EvalConfig, workers: int = 1
) -> list[FitnessReport]:
    """Evaluate each chromosome; duplicates are played once.  Order of results matches input."""
    unique = list(dict.fromkeys(tuple(g) for g in population))
    jobs = [(g, edition, config) for g in unique]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_evaluate_genes, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        reports = [_evaluate_genes(j) for j in jobs]
    by_genes = dict(zip(unique, reports))
    return [by_genes[tuple(g)] for g in population]


def write_score_log(fp: IO[str], report: FitnessReport, mode: str, **tags) -> None:
    """Append one JSON line per game: tags (generation, individual...), mode, size, pairing, seed, score."""
    for r in report.records:
        row = {**tags, "mode": mode, "size": r.size, "pairing": r.pairing, "seed": r.seed,
               "seat": r.seat, "score": r.score}
        fp.write(json.dumps(row) + "\n")
