"""Budget-limited derivative-free optimization toolkit.

Ships a folding coordinate-descent optimizer, two population baselines
(differential evolution and cooperative co-evolution with delta grouping),
a seeded benchmark suite over the separability/modality axes, and an
experiment harness with deterministic CSV, JSON and SVG reporting.
"""

from . import baselines, benchfns, cli, harness, mcd, svgplot
from .core import (
    Box,
    BudgetedEvaluator,
    BudgetExhausted,
    Candidate,
    DimensionMismatch,
    InsufficientBudget,
    MissingOptimum,
    NoEvaluations,
    Objective,
    OptimizationError,
    OutOfBox,
    error_of,
    named_stream,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "BudgetedEvaluator",
    "BudgetExhausted",
    "Candidate",
    "DimensionMismatch",
    "InsufficientBudget",
    "MissingOptimum",
    "NoEvaluations",
    "Objective",
    "OptimizationError",
    "OutOfBox",
    "baselines",
    "benchfns",
    "cli",
    "error_of",
    "harness",
    "mcd",
    "named_stream",
    "svgplot",
    "__version__",
]
