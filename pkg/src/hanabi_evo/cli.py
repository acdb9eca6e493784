"""Command-line entry point: ``hanabi-evo {evolve,validate,evaluate,analyze,replay}``."""

from __future__ import annotations

import argparse
import configparser
import csv
import datetime as dt
import json
import logging
import os
import platform
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .agents import (
    PRESET_DIR_ENV,
    PROTAGONIST_PRESETS,
    Chromosome,
    load_agent,
    load_chromosome,
    load_preset,
)
from .analysis import composition_report, fitness_curve, write_reports_csv
from .cards import COLOR_LETTERS, CARDS
from .engine import ActionKind, EventKind
from .evaluation import ALL_SIZES, EvalConfig, evaluate_parallel, run_match, seed_set, write_score_log
from .evolve import (
    ConfigError,
    EvolveConfig,
    evolve,
    read_history,
    reevaluate_top,
    write_fitness_curve,
    write_generation_best,
    write_history,
    write_top,
)

log = logging.getLogger("hanabi_evo")

# Published mixed-play means and the accepted deviation for each protagonist.
VALIDATION_TARGETS = {
    "IGGI": (10.98, 1.0),
    "Outer": (9.70, 1.0),
    "LegalRandom": (4.52, 0.5),
    "VanDenBergh": (11.02, 1.0),
    "Flawed": (4.46, 0.5),
    "Piers": (11.28, 1.0),
}

_INT_KEYS = {"p", "s", "e", "t", "G", "n", "seed", "top_k", "reeval_n"}
_FLOAT_KEYS = {"m", "c"}
_STR_KEYS = {"edition", "mode"}
_LIST_KEYS = {"sizes", "pool"}


class CliError(Exception):
    pass


# -- config handling ---------------------------------------------------------------


def bundled_configs() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("hanabi_evo").joinpath("configs").iterdir()
                  if p.name.endswith(".ini"))


def resolve_config(ref: str) -> tuple[str, str]:
    """Return (source label, INI text) for a file path or a bundled profile name."""
    path = Path(ref)
    if path.is_file():
        return str(path), path.read_text()
    if ref in bundled_configs():
        return f"profile:{ref}", resources.files("hanabi_evo").joinpath("configs").joinpath(f"{ref}.ini").read_text()
    raise CliError(f"config {ref!r} is neither a file nor a bundled profile ({', '.join(bundled_configs())})")


def parse_config(text: str, source: str = "<config>") -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # G and g are different keys
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise CliError(f"{source}: {exc}") from None
    values: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            where = f"{source}: [{section}] {key}"
            try:
                if key in _INT_KEYS:
                    values[key] = int(raw)
                elif key in _FLOAT_KEYS:
                    values[key] = float(raw)
                elif key in _STR_KEYS:
                    values[key] = raw.strip()
                elif key in _LIST_KEYS:
                    items = [x.strip() for x in raw.split(",") if x.strip()]
                    values[key] = tuple(int(x) for x in items) if key == "sizes" else tuple(items)
                else:
                    raise CliError(f"{where}: unknown key")
            except ValueError:
                raise CliError(f"{where}: cannot parse {raw!r}") from None
    return values


def build_evolve_config(values: dict, source: str) -> EvolveConfig:
    try:
        return EvolveConfig.from_dict(values)
    except ConfigError as exc:
        raise CliError(f"{source}: invalid value for key {exc.key!r}: {exc}") from None


def format_config(config: EvolveConfig) -> str:
    d = config.to_dict()
    lines = ["[evolve]"]
    lines += [f"{k} = {d[k]}" for k in ("p", "s", "m", "c", "e", "t", "G", "n", "edition", "seed")]
    lines += ["", "[eval]", f"mode = {d['mode']}", "sizes = " + ",".join(map(str, d["sizes"])),
              "pool = " + ",".join(d["pool"])]
    lines += ["", "[reeval]", f"top_k = {d['top_k']}", f"reeval_n = {d['reeval_n']}"]
    return "\n".join(lines) + "\n"


def parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise CliError(f"--sizes: expected comma-separated integers, got {text!r}") from None
    if not sizes or any(s not in ALL_SIZES for s in sizes):
        raise CliError(f"--sizes: every size must be one of {ALL_SIZES}, got {text!r}")
    return sizes


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def write_manifest(out: Path, command: str, config_source: str | None, seed, started: str, **extra) -> None:
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "config": config_source,
        "seed": seed,
        "out": str(out),
        "started": started,
        "finished": _now(),
        "version": __version__,
        "python": platform.python_version(),
        **extra,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


# -- commands ----------------------------------------------------------------------


def cmd_evolve(args) -> int:
    source, text = resolve_config(args.config)
    values = parse_config(text, source)
    for key in ("seed", "n", "mode", "edition"):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    if args.sizes is not None:
        values["sizes"] = parse_sizes(args.sizes)
    config = build_evolve_config(values, source)

    out = Path(args.out or f"runs/{Path(source.split(':')[-1]).stem}-seed{config.seed}")
    out.mkdir(parents=True, exist_ok=True)
    started = _now()
    (out / "config.ini").write_text(format_config(config))
    best_dir = out / "best"
    score_log = open(out / "scores.jsonl", "w") if args.score_log else None

    def progress(record):
        write_generation_best(record, best_dir)
        if not args.quiet:
            print(f"gen {record.generation:4d}  best {record.best_fitness:6.3f}  mean {record.mean_fitness:6.3f}",
                  flush=True)

    try:
        history, _ = evolve(config, workers=args.workers, on_generation=progress, score_log=score_log)
    finally:
        if score_log is not None:
            score_log.close()
    write_history(history, out / "history.jsonl")
    write_fitness_curve(history, out / "fitness_curve.csv")
    ranked = reevaluate_top(history, config.top_k, config.reeval_n, config, workers=args.workers)
    write_top(ranked, out / "top")
    write_manifest(out, "evolve", source, config.seed, started)
    if not args.quiet:
        print(f"re-evaluated top {len(ranked)} on {config.reeval_n} games per size/pairing:")
        for rank, (_, report) in enumerate(ranked, 1):
            print(f"  {rank:2d}. {report.summary()}")
        print(f"run written to {out}")
    return 0


def cmd_validate(args) -> int:
    if args.presets:
        os.environ[PRESET_DIR_ENV] = str(Path(args.presets).resolve())
    n = args.n or 400
    seed = 0 if args.seed is None else args.seed
    config = EvalConfig("mixed", ALL_SIZES, n, seed_set(seed, "validate", ALL_SIZES, n))
    rows = []
    failed = False
    print(f"{'Agent':<12} {'Target':>7} {'Score':>7} {'s.e.m.':>7} {'games':>6}  per size")
    for name in PROTAGONIST_PRESETS:
        report = evaluate_parallel(load_preset(name), config, args.workers)
        target, tol = VALIDATION_TARGETS[name]
        ok = abs(report.mean - target) <= tol
        failed |= not ok
        sizes = " ".join(f"{s}P {m:5.2f}" for s, m in report.per_size.items())
        mark = "" if ok else f"  outside +/-{tol}"
        print(f"{name:<12} {target:7.2f} {report.mean:7.2f} {report.sem:7.3f} {report.games:6d}  {sizes}{mark}",
              flush=True)
        rows.append((name, target, tol, report.mean, report.sem, report.games, ok))
    if args.out:
        with open(args.out, "w", newline="") as fp:
            w = csv.writer(fp)
            w.writerow(["agent", "target", "tolerance", "mean", "sem", "games", "within"])
            for row in rows:
                w.writerow([*row[:-1], int(row[-1])])
    return 1 if failed and args.check else 0


def cmd_evaluate(args) -> int:
    try:
        policy = load_agent(args.agent)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from None
    sizes = parse_sizes(args.sizes) if args.sizes else ALL_SIZES
    n = args.n or 20
    seed = 0 if args.seed is None else args.seed
    mode = args.mode or "mirror"
    config = EvalConfig(mode, sizes, n, seed_set(seed, "evaluate", sizes, n))
    report = evaluate_parallel(policy, config, args.workers)
    print(f"{policy.name}  {mode}  {report.summary()}")
    if args.score_log:
        with open(args.score_log, "w") as fp:
            write_score_log(fp, report, mode, agent=args.agent)
    return 0


def _chromosome_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.rglob("*.chrom") if p.is_file())


def cmd_analyze(args) -> int:
    reports = {}
    problems = 0
    for ref in args.dirs:
        directory = Path(ref)
        if not directory.is_dir():
            print(f"error: {directory} is not a directory", file=sys.stderr)
            problems += 1
            continue
        top = directory / "top"
        files = _chromosome_files(top if top.is_dir() else directory)
        chroms = []
        for path in files:
            try:
                chroms.append(load_chromosome(path))
            except (OSError, ValueError) as exc:
                print(f"warning: skipping {path}: {exc}", file=sys.stderr)
                problems += 1
        if chroms:
            editions = {c.edition for c in chroms}
            if len(editions) > 1:
                print(f"warning: {directory} mixes catalog editions; reporting each", file=sys.stderr)
            for edition in sorted(editions):
                label = str(directory) if len(editions) == 1 else f"{directory} [{edition}]"
                reports[label] = composition_report([c for c in chroms if c.edition == edition])
                print(reports[label].table(f"== {label}"))
        else:
            print(f"error: no readable chromosome files in {directory}", file=sys.stderr)
        history_path = directory / "history.jsonl"
        if history_path.is_file():
            rows = fitness_curve(read_history(history_path))
            curve_out = Path(args.out) / f"{directory.name}_fitness_curve.csv" if args.out else None
            print(f"fitness curve: {len(rows)} generations, final best {rows[-1][1]:.3f}")
            if curve_out is not None:
                curve_out.parent.mkdir(parents=True, exist_ok=True)
                with open(curve_out, "w", newline="") as fp:
                    w = csv.writer(fp)
                    w.writerow(["generation", "best_fitness", "mean_fitness"])
                    w.writerows(rows)
    if not reports:
        print("error: nothing to report", file=sys.stderr)
        return 2
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "composition.csv", "w", newline="") as fp:
            write_reports_csv(fp, reports)
    return 1 if problems and args.strict else 0


def describe_event(e) -> str:
    who = f"p{e.player}"
    if e.kind == EventKind.HINT:
        hint = COLOR_LETTERS[e.hint] if e.hint_kind == ActionKind.TELL_COLOR else str(e.hint)
        return f"turn {e.turn:3d}  {who} tells p{e.target} {hint} -> slots {list(e.touched)}"
    card = CARDS[e.card]
    verb = {EventKind.PLAYED: "plays", EventKind.MISPLAYED: "misplays",
            EventKind.DISCARDED: "discards", EventKind.DRAWN: "draws"}[e.kind]
    where = "into" if e.kind == EventKind.DRAWN else "from"
    return f"turn {e.turn:3d}  {who} {verb} {card!r} {where} slot {e.slot}"


def _replay_entry(args) -> tuple[dict, object]:
    """Score-log entry plus the protagonist policy it refers to."""
    log_path = Path(args.run) / "scores.jsonl" if args.run else Path(args.log)
    with open(log_path) as fp:
        lines = [line for line in fp if line.strip()]
    if not 0 <= args.entry < len(lines):
        raise CliError(f"{log_path}: entry {args.entry} out of range (0..{len(lines) - 1})")
    entry = json.loads(lines[args.entry])
    if args.agent:
        policy = load_agent(args.agent)
    elif args.run:
        history = read_history(Path(args.run) / "history.jsonl")
        rec = history[entry["generation"]]
        genes = rec.population[entry["individual"]]
        policy = Chromosome(genes, rec.best.edition).policy(f"gen{rec.generation}/ind{entry['individual']}")
    elif "agent" in entry:
        policy = load_agent(entry["agent"])
    else:
        raise CliError("replay needs --agent when the log entry does not name one")
    return entry, policy


def cmd_replay(args) -> int:
    if not (args.run or args.log):
        raise CliError("replay needs --run DIR or --log FILE")
    entry, policy = _replay_entry(args)
    size, seed = entry["size"], entry["seed"]
    if entry.get("mode") == "mixed":
        seats = [load_preset(entry["pairing"])] * size
        seats[entry["seat"]] = policy
    else:
        seats = [policy] * size
    score, state = run_match(seats, seed)
    names = ", ".join(f"p{i}={p.name}" for i, p in enumerate(seats))
    print(f"# {size} players, seed {seed}, {names}")
    for e in state.history:
        print(describe_event(e))
    print(f"# final score {score} (logged {entry.get('score')}), {state.status().value}")
    return 0 if score == entry.get("score", score) else 1


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hanabi-evo", description="Evolve and evaluate rule-based Hanabi agents.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, mode=True):
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--n", type=int, help="games per size (and per pairing in mixed mode)")
        p.add_argument("--workers", type=int, default=1, help="evaluation processes")
        if mode:
            p.add_argument("--sizes", help="comma-separated game sizes, e.g. 2 or 3,4,5")
            p.add_argument("--mode", choices=("mirror", "mixed"))

    p = sub.add_parser("evolve", help="run the genetic algorithm")
    p.add_argument("--config", default="desk", help="INI file or bundled profile name (default: desk)")
    p.add_argument("--out", help="run directory")
    p.add_argument("--edition", choices=("old", "new"))
    p.add_argument("--score-log", action="store_true", help="write every game to scores.jsonl")
    p.add_argument("--quiet", action="store_true")
    common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("validate", help="score the six protagonist presets against the pool")
    p.add_argument("--presets", help="directory of <Name>.rules files overriding the bundled presets")
    p.add_argument("--out", help="CSV file for the table")
    p.add_argument("--check", action="store_true", help="exit 1 when a score misses its target")
    common(p, mode=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="evaluate one agent file or preset")
    p.add_argument("agent", help="chromosome/rule file, situational file, or preset:Name")
    p.add_argument("--score-log", help="JSON-lines file with one line per game")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", help="composition report over directories of chromosome files")
    p.add_argument("dirs", nargs="+")
    p.add_argument("--out", help="directory for CSV output")
    p.add_argument("--strict", action="store_true", help="exit 1 if any file was unreadable")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("replay", help="print the event history of a logged game")
    p.add_argument("--run", help="run directory written by evolve --score-log")
    p.add_argument("--log", help="score log written by evaluate --score-log")
    p.add_argument("--entry", type=int, default=0, help="line number in the score log (0-based)")
    p.add_argument("--agent", help="agent to replay when the log does not identify it")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return 2
    if getattr(args, "n", None) is not None and args.n < 1:
        print("error: --n must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
