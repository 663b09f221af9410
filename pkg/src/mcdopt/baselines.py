"""Comparison optimizers: differential evolution and cooperative co-evolution.

Both spend evaluations only through a BudgetedEvaluator, so comparisons
against the folding coordinate-descent optimizer are budget-fair. Trial
coordinates that leave the box are clamped to the violated bound before
evaluation, so these optimizers never trigger an out-of-bounds error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    BudgetedEvaluator,
    BudgetExhausted,
    Candidate,
    DimensionMismatch,
    InsufficientBudget,
    named_stream,
)


@dataclass
class DEConfig:
    """rand/1/bin settings: fixed crossover rate, scale factor drawn per individual."""

    pop_size: int = 50
    cr: float = 0.9
    f_range: tuple[float, float] = (0.2, 0.8)

    def __post_init__(self):
        if self.pop_size < 4:
            raise ValueError("rand/1 mutation needs a population of at least 4")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must lie in [0, 1]")
        if isinstance(self.f_range, (int, float)):
            self.f_range = (float(self.f_range), float(self.f_range))
        low, high = self.f_range
        if low > high:
            raise ValueError("f_range low must not exceed high")


@dataclass
class CCConfig:
    """Co-evolution settings: group count plus the inner DE constants."""

    pop_size: int = 50
    f: float = 0.5
    cr: float = 0.9
    num_groups: int = 10

    def __post_init__(self):
        if self.pop_size < 4:
            raise ValueError("the inner DE needs a population of at least 4")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must lie in [0, 1]")
        if self.num_groups < 1:
            raise ValueError("num_groups must be at least 1")


@dataclass(eq=False)
class RunResult:
    """Outcome of one budgeted baseline run."""

    best: Candidate
    used_nfe: int
    trace: list[tuple[int, float]] = field(default_factory=list)


def _init_population(pop_size: int, ev: BudgetedEvaluator,
                     rng: np.random.Generator) -> list[Candidate]:
    """Uniform random population, evaluated up-front.

    Truncated silently if the budget dies during initialization.
    """
    box = ev.objective.box
    population = []
    for _ in range(pop_size):
        position = box.lower + rng.random(box.dim) * (box.upper - box.lower)
        try:
            value = ev(position)
        except BudgetExhausted:
            break
        population.append(Candidate(position, value))
    return population


def _generation_on(population: list[Candidate], coords: np.ndarray,
                   context: Optional[np.ndarray], cfg: DEConfig,
                   ev: BudgetedEvaluator, rng: np.random.Generator) -> bool:
    """One rand/1/bin generation over the given coordinate subset.

    Trial points take the coordinates outside `coords` from `context`; when
    every coordinate is in play the context is irrelevant and this is plain
    differential evolution. Selection is immediate (a completed trial that
    does not worsen its target replaces it right away), so later mutants in
    the same generation may draw on already-updated individuals. Returns
    False when the budget ran out mid-generation; the completed replacements
    are kept and the rest of the generation is abandoned.
    """
    box = ev.objective.box
    n = len(population)
    k = coords.size
    indices = np.arange(n)
    lo = box.lower[coords]
    hi = box.upper[coords]
    f_low, f_high = cfg.f_range
    for i in range(n):
        others = np.delete(indices, i)
        r1, r2, r3 = rng.choice(others, size=3, replace=False)
        scale = rng.uniform(f_low, f_high)
        mutant = (population[r1].position[coords]
                  + scale * (population[r2].position[coords]
                             - population[r3].position[coords]))
        mask = rng.random(k) <= cfg.cr
        mask[int(rng.integers(k))] = True
        sub = np.where(mask, mutant, population[i].position[coords])
        np.clip(sub, lo, hi, out=sub)
        base = context if context is not None else population[i].position
        point = base.copy()
        point[coords] = sub
        try:
            value = ev(point)
        except BudgetExhausted:
            return False
        if value <= population[i].value:
            population[i] = Candidate(point, value)
    return True


def de_generation(population: list[Candidate], cfg: DEConfig,
                  ev: BudgetedEvaluator, rng: np.random.Generator) -> list[Candidate]:
    """Advance the population by one full rand/1/bin generation in place."""
    dim = ev.objective.box.dim
    _generation_on(population, np.arange(dim), None, cfg, ev, rng)
    return population


def run_de(objective, max_nfe: int, seed: int, cfg: Optional[DEConfig] = None,
           evaluator: Optional[BudgetedEvaluator] = None) -> RunResult:
    """Budgeted rand/1/bin run: uniform initialization, then generations until
    the budget is gone."""
    cfg = cfg if cfg is not None else DEConfig()
    ev = evaluator if evaluator is not None else BudgetedEvaluator(objective, max_nfe)
    if ev.remaining < 1:
        raise InsufficientBudget("evaluator has no budget left")
    init_rng = named_stream(seed, "de-init")
    gen_rng = named_stream(seed, "de-gen")
    population = _init_population(cfg.pop_size, ev, init_rng)
    while ev.remaining > 0 and len(population) == cfg.pop_size:
        de_generation(population, cfg, ev, gen_rng)
    return RunResult(best=ev.best.copy(), used_nfe=ev.used_nfe, trace=list(ev.trace))


def delta_update(prev_best: Candidate, curr_best: Candidate) -> np.ndarray:
    """Coordinate-wise absolute movement of the best solution between cycles."""
    a = np.asarray(prev_best.position, dtype=float)
    b = np.asarray(curr_best.position, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"positions have shapes {a.shape} and {b.shape}")
    return np.abs(b - a)


def delta_grouping(deltas, num_groups: int) -> list[np.ndarray]:
    """Partition dimension indices into groups by descending delta.

    Dimensions are ordered by delta, largest first with ties broken by
    ascending index, then cut into num_groups contiguous chunks of size
    floor(D / num_groups); the last chunk absorbs any remainder.
    """
    deltas = np.asarray(deltas, dtype=float)
    d = deltas.size
    if not 1 <= num_groups <= d:
        raise ValueError(f"num_groups must lie in [1, {d}], got {num_groups}")
    order = np.lexsort((np.arange(d), -deltas))
    size = d // num_groups
    groups = [order[k * size:(k + 1) * size] for k in range(num_groups - 1)]
    groups.append(order[(num_groups - 1) * size:])
    return groups


@dataclass(eq=False)
class CCState:
    """Population, context vector and grouping history between cycles.

    `prev_anchor` and `last_anchor` are the two most recent snapshots of the
    best position (taken after initialization and after each cycle); their
    coordinate-wise movement drives the grouping of the next cycle.
    """

    population: list[Candidate]
    best: Candidate
    last_anchor: np.ndarray
    prev_anchor: Optional[np.ndarray] = None
    cycle: int = 0
    last_groups: Optional[list[np.ndarray]] = None
    exhausted: bool = False


def cc_init(cfg: CCConfig, ev: BudgetedEvaluator, rng: np.random.Generator) -> CCState:
    """Evaluate a fresh uniform population and snapshot the initial best."""
    population = _init_population(cfg.pop_size, ev, rng)
    if not population:
        raise InsufficientBudget("budget died before any individual was evaluated")
    best = ev.best.copy()
    return CCState(population=population, best=best,
                   last_anchor=best.position.copy())


def cc_cycle(state: CCState, cfg: CCConfig, ev: BudgetedEvaluator,
             rng: np.random.Generator) -> CCState:
    """One co-evolutionary cycle: regroup, then one DE generation per group.

    The first cycle uses plain index-order groups; afterwards groups follow
    the best solution's movement across the two latest cycle boundaries
    (largest movement first). Each trial is completed through the context
    vector: the current global best supplies every coordinate outside the
    group. The context is refreshed after each group finishes.
    """
    dim = ev.objective.box.dim
    if cfg.num_groups > dim:
        raise ValueError(f"num_groups {cfg.num_groups} exceeds dimension {dim}")
    if state.cycle == 0 or state.prev_anchor is None:
        # all-zero deltas sort by the index tie-break: contiguous index order
        groups = delta_grouping(np.zeros(dim), cfg.num_groups)
    else:
        groups = delta_grouping(np.abs(state.last_anchor - state.prev_anchor),
                                cfg.num_groups)
    state.last_groups = groups
    inner = DEConfig(pop_size=cfg.pop_size, cr=cfg.cr, f_range=(cfg.f, cfg.f))
    for group in groups:
        completed = _generation_on(state.population, group, state.best.position,
                                   inner, ev, rng)
        if ev.best is not None:
            state.best = ev.best.copy()
        if not completed:
            state.exhausted = True
            break
    state.prev_anchor = state.last_anchor
    state.last_anchor = state.best.position.copy()
    state.cycle += 1
    return state


def run_cc(objective, max_nfe: int, seed: int, cfg: Optional[CCConfig] = None,
           evaluator: Optional[BudgetedEvaluator] = None) -> RunResult:
    """Budgeted co-evolution run: initialization, then cycles until the budget
    is gone."""
    cfg = cfg if cfg is not None else CCConfig()
    ev = evaluator if evaluator is not None else BudgetedEvaluator(objective, max_nfe)
    if ev.remaining < 1:
        raise InsufficientBudget("evaluator has no budget left")
    init_rng = named_stream(seed, "cc-init")
    gen_rng = named_stream(seed, "cc-gen")
    population = _init_population(cfg.pop_size, ev, init_rng)
    if len(population) < cfg.pop_size or ev.remaining == 0:
        return RunResult(best=ev.best.copy(), used_nfe=ev.used_nfe, trace=list(ev.trace))
    best = ev.best.copy()
    state = CCState(population=population, best=best,
                    last_anchor=best.position.copy())
    while ev.remaining > 0 and not state.exhausted:
        cc_cycle(state, cfg, ev, gen_rng)
    return RunResult(best=ev.best.copy(), used_nfe=ev.used_nfe, trace=list(ev.trace))
