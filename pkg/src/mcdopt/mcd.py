"""Budgeted coordinate descent by interval bisection and box folding.

One step picks a dimension, evaluates the centers of the lower and upper
halves of that dimension's current interval, and folds the box onto the
winning half. A full pass over all dimensions therefore halves every width,
shrinking the box volume by a factor of 2**dim per pass. The search restarts
from the original box under a fresh dimension ordering as many times as the
evaluation budget allows; budget that cannot fund a whole restart is left
unspent so the evaluation count is exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    Box,
    BudgetedEvaluator,
    Candidate,
    InsufficientBudget,
    named_stream,
)


@dataclass(frozen=True)
class RestartPlan:
    """How many full-box restarts a budget funds, and what is left over."""

    dim: int
    max_iter: int
    max_nfe: int
    r_max: int

    @property
    def planned_nfe(self) -> int:
        return 2 * self.dim * self.max_iter * self.r_max

    @property
    def unspent(self) -> int:
        return self.max_nfe - self.planned_nfe


def restart_plan(dim: int, max_iter: int, max_nfe: int) -> RestartPlan:
    """Split a budget into restarts of exactly 2 * dim * max_iter evaluations.

    Raises InsufficientBudget when not even one restart fits.
    """
    if dim < 1 or max_iter < 1 or max_nfe < 1:
        raise ValueError("dim, max_iter and max_nfe must all be at least 1")
    per_restart = 2 * dim * max_iter
    if per_restart > max_nfe:
        raise InsufficientBudget(
            f"one restart needs {per_restart} evaluations, budget is {max_nfe}")
    return RestartPlan(dim=dim, max_iter=max_iter, max_nfe=max_nfe,
                       r_max=max_nfe // per_restart)


def init_center(box: Box) -> tuple[Candidate, Candidate]:
    """Two identical candidates at the center of the box, not yet evaluated."""
    center = box.midpoint()
    return Candidate(center.copy()), Candidate(center.copy())


def draw_permutation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A uniformly random ordering of the dimension indices 0 .. dim-1."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    return rng.permutation(dim)


@dataclass(eq=False)
class SearchState:
    """Mutable state of one restart: the folded box and the working points."""

    box: Box
    x: Candidate
    y: Candidate
    s: Optional[Candidate] = None
    perm: Optional[np.ndarray] = None
    iteration: int = 0
    # probe bookkeeping for the most recent step: (x_pos, y_pos, f_x, f_y)
    last_probe: Optional[tuple] = None


def roi_step(state: SearchState, i: int, ev: BudgetedEvaluator) -> tuple[Candidate, bool]:
    """Bisect dimension i: evaluate both half-interval centers, keep the winner.

    Spends exactly two evaluations. The lower half wins only on a strictly
    better value; an exact tie keeps the upper half. Both working points and
    the running solution collapse onto the winner afterwards.
    """
    lo = state.box.lower[i]
    hi = state.box.upper[i]
    quarter = (hi - lo) / 4.0
    px = state.x.position.copy()
    py = state.y.position.copy()
    px[i] = lo + quarter
    py[i] = hi - quarter
    f_x = ev(px)
    f_y = ev(py)
    keep_lower = f_x < f_y
    winner = Candidate(px if keep_lower else py, min(f_x, f_y))
    state.x = winner.copy()
    state.y = winner.copy()
    state.s = winner
    state.last_probe = (px, py, f_x, f_y)
    return winner, keep_lower


def fold(box: Box, i: int, keep_lower: bool) -> Box:
    """Halve dimension i of the box, keeping the lower or the upper half.

    When the midpoint is no longer representable strictly between the bounds
    (the width has reached floating-point resolution) the box is returned
    unchanged and that dimension simply stops shrinking.
    """
    lo = box.lower[i]
    hi = box.upper[i]
    mid = lo + (hi - lo) / 2.0
    if mid <= lo or mid >= hi:
        return box.copy()
    lower = box.lower.copy()
    upper = box.upper.copy()
    if keep_lower:
        upper[i] = mid
    else:
        lower[i] = mid
    return Box(lower, upper)


@dataclass(eq=False)
class StepRecord:
    """One bisection step: the two probed points and the fold direction."""

    restart: int
    iteration: int
    dim_index: int
    x_position: np.ndarray
    y_position: np.ndarray
    f_x: float
    f_y: float
    keep_lower: bool


@dataclass(eq=False)
class RunOutcome:
    """Result of a full budgeted run.

    `best` is the best point ever evaluated. `restart_best` is the winner of
    the across-restart comparison, decided on cached values only, so it never
    costs an extra evaluation; it can differ from `best` when a restart walked
    through a better point than the one it finished on.
    """

    best: Candidate
    restart_best: Candidate
    plan: RestartPlan
    used_nfe: int
    trace: list[tuple[int, float]] = field(default_factory=list)
    steps: Optional[list[StepRecord]] = None


def run(objective, max_iter: int, max_nfe: int, seed: int,
        evaluator: Optional[BudgetedEvaluator] = None,
        permutations: Optional[Sequence[Sequence[int]]] = None,
        record_steps: bool = False) -> RunOutcome:
    """Run the complete budgeted search: r_max restarts from the original box.

    Every restart begins at the box center, draws one dimension ordering from
    the "perm" stream of `seed`, and performs max_iter halving passes over all
    dimensions, folding the box after each step. `permutations` pins the
    ordering per restart explicitly (mainly for worked examples and tests);
    it must then provide exactly one ordering per planned restart.
    """
    plan = restart_plan(objective.dim, max_iter, max_nfe)
    ev = evaluator if evaluator is not None else BudgetedEvaluator(objective, max_nfe)
    if ev.remaining < plan.planned_nfe:
        raise InsufficientBudget(
            f"evaluator has {ev.remaining} evaluations left, plan needs {plan.planned_nfe}")
    if permutations is not None and len(permutations) != plan.r_max:
        raise ValueError(f"need {plan.r_max} pinned permutations, got {len(permutations)}")

    perm_rng = named_stream(seed, "perm")
    original = objective.box
    dim = objective.dim
    steps: Optional[list[StepRecord]] = [] if record_steps else None
    restart_best: Optional[Candidate] = None

    for r in range(plan.r_max):
        box = original.copy()
        x, y = init_center(box)
        if permutations is not None:
            perm = np.array(permutations[r], dtype=int)
            if sorted(perm.tolist()) != list(range(dim)):
                raise ValueError(f"restart {r}: not a permutation of 0..{dim - 1}")
        else:
            perm = draw_permutation(dim, perm_rng)
        state = SearchState(box=box, x=x, y=y, perm=perm)
        for it in range(max_iter):
            for i in perm:
                i = int(i)
                _, keep_lower = roi_step(state, i, ev)
                state.box = fold(state.box, i, keep_lower)
                if steps is not None:
                    px, py, f_x, f_y = state.last_probe
                    steps.append(StepRecord(r, it, i, px, py, f_x, f_y, keep_lower))
            state.iteration = it + 1
        # compare restart winners on cached values only, no extra evaluation
        if restart_best is None or state.s.value < restart_best.value:
            restart_best = state.s

    return RunOutcome(best=ev.best.copy(), restart_best=restart_best, plan=plan,
                      used_nfe=ev.used_nfe, trace=list(ev.trace), steps=steps)
