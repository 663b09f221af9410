"""Seeded benchmark functions spanning the separability and modality axes.

Every function is a shifted, optionally group-rotated classic base on the
box [-100, 100]^D. The optimum value is always 0 and sits at a known point
drawn from the middle 80 percent of the box, so error metrics and accuracy
ratios are computable without any external data. Same (name, dim, seed)
always reconstructs bit-identical shift vectors and rotation matrices.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .core import Box, OutOfBox, named_stream

BOX_LOW = -100.0
BOX_HIGH = 100.0
SHIFT_FRACTION = 0.8

CAT_SEP_UNIMODAL = "separable-unimodal"
CAT_SEP_MULTIMODAL = "separable-multimodal"
CAT_NONSEPARABLE = "fully-nonseparable"

# name -> (base formula, category or None for grouped, rotated flag)
_SPECS = {
    "sphere": ("sphere", CAT_SEP_UNIMODAL, False),
    "elliptic": ("elliptic", CAT_SEP_UNIMODAL, False),
    "rastrigin": ("rastrigin", CAT_SEP_MULTIMODAL, False),
    "ackley": ("ackley", CAT_SEP_MULTIMODAL, False),
    "elliptic-group": ("elliptic", None, True),
    "rastrigin-group": ("rastrigin", None, True),
    "rosenbrock": ("rosenbrock", CAT_NONSEPARABLE, False),
    "schwefel12": ("schwefel12", CAT_NONSEPARABLE, False),
}

SUITE_NAMES = tuple(_SPECS)

# bases whose value is a plain per-coordinate sum; the exponential coupling in
# the ackley base makes it separable only in the weaker argument-wise sense
ADDITIVE_BASES = ("sphere", "elliptic", "rastrigin")


class BenchFunction:
    """A shifted, optionally group-rotated benchmark objective.

    Satisfies the objective contract used throughout the package: `dim`,
    `box`, `optimum_value`, `evaluate(position)`.

    Attributes
    ----------
    name : str
        Suite name, unique per suite.
    base : str
        Underlying formula: sphere, elliptic, rastrigin, ackley,
        rosenbrock or schwefel12.
    category : str
        Structure class, one of separable-unimodal, separable-multimodal,
        partially-separable(m), fully-nonseparable.
    shift : ndarray
        The optimum position; the function value there is exactly 0.
    groups : list of (indices, matrix) pairs
        Disjoint coordinate groups rotated by orthogonal matrices. Empty
        for unrotated functions.
    """

    def __init__(self, name: str, base: str, category: str, dim: int,
                 shift, groups=None, seed: int = 0):
        if dim < 1:
            raise ValueError("dim must be at least 1")
        shift = np.array(shift, dtype=float, copy=True)
        if shift.shape != (dim,):
            raise ValueError("shift must be a vector of length dim")
        self.name = name
        self.base = base
        self.category = category
        self.dim = dim
        self.seed = seed
        self.shift = shift
        self.groups = [] if groups is None else list(groups)
        self.box = Box(np.full(dim, BOX_LOW), np.full(dim, BOX_HIGH))
        self.optimum_value = 0.0
        if base == "elliptic":
            if dim == 1:
                self._coeffs = np.ones(1)
            else:
                self._coeffs = 10.0 ** (6.0 * np.arange(dim) / (dim - 1))
        else:
            self._coeffs = None

    @property
    def optimum_position(self) -> np.ndarray:
        return self.shift.copy()

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if not self.box.contains(x):
            raise OutOfBox(f"{self.name}: position outside the function bounds")
        z = x - self.shift
        if self.groups:
            z = z.copy()
            for idx, rot in self.groups:
                z[idx] = rot @ z[idx]
        return self._base_value(z)

    def _base_value(self, z: np.ndarray) -> float:
        if self.base == "sphere":
            return float(z @ z)
        if self.base == "elliptic":
            return float(self._coeffs @ (z * z))
        if self.base == "rastrigin":
            return float(np.sum(z * z - 10.0 * np.cos(2.0 * math.pi * z) + 10.0))
        if self.base == "ackley":
            n = z.size
            root_mean_sq = math.sqrt(float(z @ z) / n)
            mean_cos = float(np.sum(np.cos(2.0 * math.pi * z))) / n
            return (-20.0 * math.exp(-0.2 * root_mean_sq)
                    - math.exp(mean_cos) + 20.0 + math.e)
        if self.base == "rosenbrock":
            w = z + 1.0  # optimum of the base sits at all-ones, folded into the shift
            return float(np.sum(100.0 * (w[1:] - w[:-1] ** 2) ** 2
                                + (1.0 - w[:-1]) ** 2))
        if self.base == "schwefel12":
            partial = np.cumsum(z)
            return float(partial @ partial)
        raise ValueError(f"unknown base formula '{self.base}'")

    def __repr__(self) -> str:
        return f"BenchFunction({self.name!r}, dim={self.dim}, seed={self.seed})"


def group_size(dim: int) -> int:
    """Rotated-group size used by the partially separable functions."""
    return min(dim, max(2, round(dim / 4)))


def make_function(name: str, dim: int, seed: int) -> BenchFunction:
    """Construct one suite function; deterministic in (name, dim, seed)."""
    if name not in _SPECS:
        raise ValueError(f"unknown function name '{name}'")
    base, category, rotated = _SPECS[name]
    rng = named_stream(seed, f"bench.{name}")
    half_span = (BOX_HIGH - BOX_LOW) / 2.0 * SHIFT_FRACTION
    shift = rng.uniform(-half_span, half_span, size=dim)
    groups = None
    if rotated:
        m = group_size(dim)
        count = dim // m
        perm = rng.permutation(dim)
        groups = []
        for k in range(count):
            idx = np.sort(perm[k * m:(k + 1) * m])
            sample = rng.standard_normal((m, m))
            q, r = np.linalg.qr(sample)
            sign = np.sign(np.diag(r))
            sign[sign == 0] = 1.0
            groups.append((idx, q * sign))
        category = f"partially-separable({m})"
    return BenchFunction(name, base, category, dim, shift, groups=groups, seed=seed)


def make_suite(dim: int, seed: int) -> list[BenchFunction]:
    """The full eight-function suite at one dimension under one seed."""
    if dim < 2:
        raise ValueError("the suite needs dim of at least 2")
    return [make_function(name, dim, seed) for name in SUITE_NAMES]


def eval_bench(fn: BenchFunction, x) -> float:
    """Evaluate a suite function at a raw position (no budget accounting)."""
    return fn.evaluate(x)


def _optimum_hash(fn: BenchFunction) -> str:
    return hashlib.sha256(fn.optimum_position.astype("<f8").tobytes()).hexdigest()


def suite_manifest(functions: list[BenchFunction]) -> dict:
    """JSON-ready description of a suite: identity, structure, optimum hashes."""
    if not functions:
        raise ValueError("manifest needs at least one function")
    dims = {fn.dim for fn in functions}
    seeds = {fn.seed for fn in functions}
    if len(dims) != 1 or len(seeds) != 1:
        raise ValueError("manifest functions must share one dim and one seed")
    return {
        "dim": functions[0].dim,
        "seed": functions[0].seed,
        "box": {"lower": BOX_LOW, "upper": BOX_HIGH},
        "functions": [
            {
                "name": fn.name,
                "base": fn.base,
                "category": fn.category,
                "optimum_value": fn.optimum_value,
                "optimum_position_sha256": _optimum_hash(fn),
            }
            for fn in sorted(functions, key=lambda f: f.name)
        ],
    }
