"""Experiment harness: metrics, config files, run grids, reports.

A grid run executes algorithm x function x repeat cells, each with a fresh
budgeted evaluator, and writes run-level rows (results.csv), per-run
improvement traces (traces/), a machine-readable aggregate (summary.json)
and one convergence chart per function (plots/). The summary and the charts
are derived purely from the files written during the run, so `report` can
delete and byte-identically regenerate them at any time.

Numbers are written with round-trip decimal formatting (repr), and wall
times are opt-in (`record_timing = true`), so a rerun of the same config
reproduces every derived file byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import mcd
from .baselines import CCConfig, DEConfig, run_cc, run_de
from .benchfns import SUITE_NAMES, make_suite
from .core import BudgetedEvaluator, InsufficientBudget, OptimizationError, error_of
from .svgplot import convergence_svg

ALGORITHMS = ("mcd", "de", "cc")

ALGORITHM_COLORS = {"mcd": "#c0392b", "de": "#2471a3", "cc": "#1e8449"}

RESULT_COLUMNS = ("algorithm", "function", "dim", "seed", "max_nfe",
                  "used_nfe", "final_error", "wall_ms")


class ConfigError(OptimizationError):
    """A config file is malformed or describes an impossible experiment."""


class LengthMismatch(OptimizationError):
    """Paired error lists do not have the same length."""


def compute_iar(err_baseline: float, err_mcd: float) -> float:
    """Accuracy ratio of a baseline error to the coordinate-descent error.

    Values above 1 mean the coordinate-descent run ended closer to the
    optimum. A zero denominator yields +inf (flagged by the report writer
    rather than raising); two exact-zero errors count as a tie of 1.
    """
    if err_mcd == 0.0:
        return 1.0 if err_baseline == 0.0 else math.inf
    return err_baseline / err_mcd


def tally_wtl(errors_mcd, errors_baseline, tie_epsilon: float = 0.0) -> tuple[int, int, int]:
    """Win/tie/loss counts from the coordinate-descent side, pairwise.

    With a positive tie_epsilon, errors within that relative distance of
    each other count as ties.
    """
    if len(errors_mcd) != len(errors_baseline):
        raise LengthMismatch(
            f"got {len(errors_mcd)} and {len(errors_baseline)} paired errors")
    wins = ties = losses = 0
    for ours, theirs in zip(errors_mcd, errors_baseline):
        if tie_epsilon > 0.0:
            scale = max(abs(ours), abs(theirs))
            if abs(ours - theirs) <= tie_epsilon * scale:
                ties += 1
                continue
        if ours < theirs:
            wins += 1
        elif ours == theirs:
            ties += 1
        else:
            losses += 1
    return wins, ties, losses


def densify_trace(trace, grid) -> list[Optional[float]]:
    """Carry the best value forward onto fixed evaluation checkpoints.

    Checkpoints that precede the first recorded improvement get None.
    """
    out = []
    position = 0
    current: Optional[float] = None
    for checkpoint in grid:
        while position < len(trace) and trace[position][0] <= checkpoint:
            current = trace[position][1]
            position += 1
        out.append(current)
    return out


@dataclass
class ExperimentConfig:
    """One experiment grid: which algorithms meet which functions, and how."""

    algorithms: list[str]
    dim: int
    max_nfe: int
    functions: list[str] = field(default_factory=lambda: ["all"])
    max_iter: int = 10
    repeats: int = 1
    base_seed: int = 0
    suite_seed: int = 0
    trace_grid: list[int] = field(default_factory=list)
    output_dir: str = "results"
    record_timing: bool = False
    tie_epsilon: float = 0.0
    de_pop_size: int = 50
    cc_pop_size: int = 50
    cc_groups: int = 10


_REQUIRED_KEYS = ("algorithms", "dim", "max_nfe")

_INT_KEYS = ("dim", "max_nfe", "max_iter", "repeats", "base_seed", "suite_seed",
             "de_pop_size", "cc_pop_size", "cc_groups")
_FLOAT_KEYS = ("tie_epsilon",)
_BOOL_KEYS = ("record_timing",)
_LIST_KEYS = ("algorithms", "functions")
_STR_KEYS = ("output_dir",)
_KNOWN_KEYS = set(_INT_KEYS) | set(_FLOAT_KEYS) | set(_BOOL_KEYS) \
    | set(_LIST_KEYS) | set(_STR_KEYS) | {"trace_grid"}


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse the flat `key = value` config format (# starts a comment)."""
    raw: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {number}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {number}: unknown key '{key}'")
        if key in raw:
            raise ConfigError(f"line {number}: duplicate key '{key}'")
        raw[key] = value

    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key '{key}'")

    data: dict = {}
    for key, value in raw.items():
        try:
            if key in _INT_KEYS:
                data[key] = int(value)
            elif key in _FLOAT_KEYS:
                data[key] = float(value)
            elif key in _BOOL_KEYS:
                lowered = value.lower()
                if lowered not in ("true", "false"):
                    raise ValueError(value)
                data[key] = lowered == "true"
            elif key in _LIST_KEYS:
                data[key] = [item.strip() for item in value.split(",") if item.strip()]
            elif key == "trace_grid":
                data[key] = [int(item) for item in value.split(",") if item.strip()]
            else:
                data[key] = value
        except ValueError:
            raise ConfigError(f"key '{key}': cannot parse value '{value}'") from None

    config = ExperimentConfig(**data)
    validate_config(config)
    return config


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return parse_config_text(text)


def validate_config(config: ExperimentConfig) -> None:
    """Structural checks first (ConfigError), then budget checks per algorithm
    (InsufficientBudget)."""
    if not config.algorithms:
        raise ConfigError("at least one algorithm is required")
    for algorithm in config.algorithms:
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{algorithm}'")
    if len(set(config.algorithms)) != len(config.algorithms):
        raise ConfigError("duplicate algorithm")
    if config.dim < 2:
        raise ConfigError("dim must be at least 2")
    if config.repeats < 1:
        raise ConfigError("repeats must be at least 1")
    if config.max_nfe < 1:
        raise ConfigError("max_nfe must be at least 1")
    if config.max_iter < 1:
        raise ConfigError("max_iter must be at least 1")
    names = config.functions
    if names != ["all"]:
        for name in names:
            if name not in SUITE_NAMES:
                raise ConfigError(f"unknown function '{name}'")
        if len(set(names)) != len(names):
            raise ConfigError("duplicate function")
    if any(g < 1 for g in config.trace_grid):
        raise ConfigError("trace_grid checkpoints must be positive")
    if config.trace_grid != sorted(config.trace_grid):
        raise ConfigError("trace_grid checkpoints must be ascending")
    if "mcd" in config.algorithms:
        needed = 2 * config.dim * config.max_iter
        if config.max_nfe < needed:
            raise InsufficientBudget(
                f"mcd needs at least {needed} evaluations for dim {config.dim} "
                f"and max_iter {config.max_iter}, budget is {config.max_nfe}")


def resolve_functions(config: ExperimentConfig) -> list[str]:
    if config.functions == ["all"]:
        return sorted(SUITE_NAMES)
    return sorted(config.functions)


def resolve_trace_grid(config: ExperimentConfig) -> list[int]:
    if config.trace_grid:
        return list(config.trace_grid)
    step = max(1, config.max_nfe // 100)
    return list(range(step, config.max_nfe + 1, step))


def run_single(algorithm: str, fn, max_nfe: int, max_iter: int, seed: int,
               config: Optional[ExperimentConfig] = None):
    """Execute one grid cell with a fresh evaluator.

    Returns (final_error, used_nfe, trace, wall_seconds).
    """
    ev = BudgetedEvaluator(fn, max_nfe)
    started = time.perf_counter()
    if algorithm == "mcd":
        mcd.run(fn, max_iter, max_nfe, seed, evaluator=ev)
    elif algorithm == "de":
        pop = config.de_pop_size if config is not None else 50
        run_de(fn, max_nfe, seed, DEConfig(pop_size=pop), evaluator=ev)
    elif algorithm == "cc":
        pop = config.cc_pop_size if config is not None else 50
        groups = config.cc_groups if config is not None else 10
        cc_cfg = CCConfig(pop_size=pop, num_groups=min(groups, fn.dim))
        run_cc(fn, max_nfe, seed, cc_cfg, evaluator=ev)
    else:
        raise ConfigError(f"unknown algorithm '{algorithm}'")
    wall = time.perf_counter() - started
    return error_of(ev), ev.used_nfe, list(ev.trace), wall


@dataclass(eq=False)
class ExperimentReport:
    """Aggregates derived from one results directory."""

    output_dir: str
    rows: list[dict]
    mean_errors: dict            # function -> algorithm -> mean final error
    iar: dict                    # function -> baseline algorithm -> ratio
    iar_flags: dict              # function -> baseline algorithm -> flag
    wtl: dict                    # baseline algorithm -> (wins, ties, losses)
    summary_path: str
    plot_paths: list[str]


def _trace_filename(algorithm: str, function: str, seed: int) -> str:
    return f"{algorithm}__{function}__seed{seed}.csv"


def run_grid(config: ExperimentConfig) -> ExperimentReport:
    """Execute the whole grid and write every output file.

    Cells run sequentially in sorted (algorithm, function, seed) order, so
    the output never depends on scheduling.
    """
    validate_config(config)
    functions = resolve_functions(config)
    suite = {fn.name: fn for fn in make_suite(config.dim, config.suite_seed)}
    out_dir = config.output_dir
    traces_dir = os.path.join(out_dir, "traces")
    os.makedirs(traces_dir, exist_ok=True)

    rows = []
    for algorithm in sorted(config.algorithms):
        for name in functions:
            for repeat in range(config.repeats):
                seed = config.base_seed + repeat
                err, used, trace, wall = run_single(
                    algorithm, suite[name], config.max_nfe, config.max_iter,
                    seed, config)
                wall_ms = str(int(round(wall * 1000.0))) if config.record_timing else ""
                rows.append({
                    "algorithm": algorithm,
                    "function": name,
                    "dim": config.dim,
                    "seed": seed,
                    "max_nfe": config.max_nfe,
                    "used_nfe": used,
                    "final_error": err,
                    "wall_ms": wall_ms,
                })
                trace_path = os.path.join(traces_dir, _trace_filename(algorithm, name, seed))
                with open(trace_path, "w", encoding="utf-8", newline="") as handle:
                    writer = csv.writer(handle, lineterminator="\n")
                    writer.writerow(["nfe", "best_value"])
                    for nfe, value in trace:
                        writer.writerow([nfe, repr(value)])

    rows.sort(key=lambda r: (r["algorithm"], r["function"], r["seed"]))
    with open(os.path.join(out_dir, "results.csv"), "w", encoding="utf-8",
              newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([row["algorithm"], row["function"], row["dim"],
                             row["seed"], row["max_nfe"], row["used_nfe"],
                             repr(row["final_error"]), row["wall_ms"]])

    meta = {
        "algorithms": sorted(config.algorithms),
        "functions": functions,
        "dim": config.dim,
        "max_nfe": config.max_nfe,
        "max_iter": config.max_iter,
        "repeats": config.repeats,
        "base_seed": config.base_seed,
        "suite_seed": config.suite_seed,
        "trace_grid": resolve_trace_grid(config),
        "tie_epsilon": config.tie_epsilon,
    }
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="utf-8") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")

    return report_from_dir(out_dir)


def _read_results(out_dir: str) -> list[dict]:
    path = os.path.join(out_dir, "results.csv")
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            raw_rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    rows = []
    for raw in raw_rows:
        rows.append({
            "algorithm": raw["algorithm"],
            "function": raw["function"],
            "dim": int(raw["dim"]),
            "seed": int(raw["seed"]),
            "max_nfe": int(raw["max_nfe"]),
            "used_nfe": int(raw["used_nfe"]),
            "final_error": float(raw["final_error"]),
            "wall_ms": raw["wall_ms"],
        })
    return rows


def _read_trace(out_dir: str, algorithm: str, function: str, seed: int):
    path = os.path.join(out_dir, "traces", _trace_filename(algorithm, function, seed))
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        next(reader)  # header
        return [(int(nfe), float(value)) for nfe, value in reader]


def report_from_dir(out_dir: str) -> ExperimentReport:
    """Build summary.json and the per-function charts from the files in
    `out_dir`, returning the aggregate report."""
    meta_path = os.path.join(out_dir, "meta.json")
    try:
        with open(meta_path, "r", encoding="utf-8") as handle:
            meta = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {meta_path}: {exc}") from None
    grid = meta["trace_grid"]
    tie_epsilon = meta.get("tie_epsilon", 0.0)

    rows = _read_results(out_dir)
    algorithms = sorted({row["algorithm"] for row in rows})
    functions = sorted({row["function"] for row in rows})

    # mean final error per (function, algorithm), repeats in seed order
    mean_errors: dict[str, dict[str, float]] = {}
    for name in functions:
        mean_errors[name] = {}
        for algorithm in algorithms:
            errors = [row["final_error"] for row in rows
                      if row["function"] == name and row["algorithm"] == algorithm]
            if errors:
                mean_errors[name][algorithm] = float(np.mean(errors))

    baselines = [a for a in algorithms if a != "mcd"]
    iar: dict[str, dict[str, float]] = {}
    iar_flags: dict[str, dict[str, str]] = {}
    if "mcd" in algorithms:
        for name in functions:
            iar[name] = {}
            iar_flags[name] = {}
            for baseline in baselines:
                if baseline not in mean_errors[name] or "mcd" not in mean_errors[name]:
                    continue
                ratio = compute_iar(mean_errors[name][baseline], mean_errors[name]["mcd"])
                iar[name][baseline] = ratio
                iar_flags[name][baseline] = "zero-denominator" if math.isinf(ratio) else "finite"

    wtl: dict[str, tuple[int, int, int]] = {}
    if "mcd" in algorithms:
        for baseline in baselines:
            ours = [mean_errors[name]["mcd"] for name in functions]
            theirs = [mean_errors[name][baseline] for name in functions]
            wtl[baseline] = tally_wtl(ours, theirs, tie_epsilon)

    summary = {
        "algorithms": algorithms,
        "functions": functions,
        "dim": meta["dim"],
        "max_nfe": meta["max_nfe"],
        "repeats": meta["repeats"],
        "runs": len(rows),
        "aggregate": {
            name: {
                "mean_error": mean_errors[name],
                "iar": {b: ("inf" if math.isinf(v) else v)
                        for b, v in iar.get(name, {}).items()},
                "iar_flags": iar_flags.get(name, {}),
            }
            for name in functions
        },
        "wtl": {
            baseline: {"wins": w, "ties": t, "losses": l}
            for baseline, (w, t, l) in sorted(wtl.items())
        },
    }
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")

    plots_dir = os.path.join(out_dir, "plots")
    os.makedirs(plots_dir, exist_ok=True)
    plot_paths = []
    for name in functions:
        series = []
        for algorithm in algorithms:
            seeds = sorted(row["seed"] for row in rows
                           if row["function"] == name and row["algorithm"] == algorithm)
            if not seeds:
                continue
            dense = [densify_trace(_read_trace(out_dir, algorithm, name, seed), grid)
                     for seed in seeds]
            points = []
            for index, checkpoint in enumerate(grid):
                values = [d[index] for d in dense if d[index] is not None]
                if values:
                    points.append((float(checkpoint), float(np.mean(values))))
            series.append((algorithm, ALGORITHM_COLORS.get(algorithm, "#555555"), points))
        svg = convergence_svg(f"{name} (dim {meta['dim']})", series)
        path = os.path.join(plots_dir, f"{name}.svg")
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(svg)
        plot_paths.append(path)

    return ExperimentReport(output_dir=out_dir, rows=rows, mean_errors=mean_errors,
                            iar=iar, iar_flags=iar_flags, wtl=wtl,
                            summary_path=summary_path, plot_paths=plot_paths)
