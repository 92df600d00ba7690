"""Objective functions: the five-function benchmark suite and the 0-1
knapsack with binary decoding, random repair, and instance file IO.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Callable

import numpy as np

from .selection import Sense

if TYPE_CHECKING:
    from .core import Rng, TriploidChromosome

TWO_PI = 2.0 * math.pi
SCHWEFEL_OFFSET = 418.9829
SCHWEFEL_OPTIMUM_COORD = 420.9687


@dataclass(frozen=True)
class Problem:
    """Objective abstraction: a uniform box, a sense, and an evaluator.

    ``evaluate`` maps a position vector to a fitness value. Evaluators are
    total on the box; the knapsack evaluator additionally canonicalizes the
    position in place (see ``make_knapsack_problem``).
    """

    name: str
    dimension: int
    lower: float
    upper: float
    sense: Sense
    evaluate: Callable[[np.ndarray], float] = field(repr=False)


# ---------------------------------------------------------------------------
# Benchmark functions (all minimized, all with optimum value 0 on their box)
# ---------------------------------------------------------------------------

def sphere(x: np.ndarray) -> float:
    return float(x @ x)


def rastrigin(x: np.ndarray) -> float:
    return 10.0 * x.size + float((x * x).sum() - 10.0 * np.cos(TWO_PI * x).sum())


def ackley(x: np.ndarray) -> float:
    n = x.size
    s = float(x @ x)
    c = float(np.cos(TWO_PI * x).sum())
    return -20.0 * math.exp(-0.2 * math.sqrt(s / n)) - math.exp(c / n) + 20.0 + math.e


def schwefel(x: np.ndarray) -> float:
    return SCHWEFEL_OFFSET * x.size - float((x * np.sin(np.sqrt(np.abs(x)))).sum())


_GRIEWANK_SCALE: dict[int, np.ndarray] = {}


def griewank(x: np.ndarray) -> float:
    n = x.size
    scale = _GRIEWANK_SCALE.get(n)
    if scale is None:
        scale = 1.0 / np.sqrt(np.arange(1, n + 1, dtype=float))
        _GRIEWANK_SCALE[n] = scale
    return float(x @ x) / 4000.0 - float(np.prod(np.cos(x * scale))) + 1.0


BENCHMARKS: dict[str, tuple[Callable[[np.ndarray], float], float, float]] = {
    "sphere": (sphere, -100.0, 100.0),
    "rastrigin": (rastrigin, -5.12, 5.12),
    "ackley": (ackley, -32.0, 32.0),
    "schwefel": (schwefel, -500.0, 500.0),
    "griewank": (griewank, -600.0, 600.0),
}


def make_benchmark(name: str, dimension: int) -> Problem:
    """Build one of the named benchmark problems at the given dimension."""
    try:
        fn, lo, hi = BENCHMARKS[name]
    except KeyError:
        raise ValueError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}")
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    return Problem(name=name, dimension=dimension, lower=lo, upper=hi,
                   sense=Sense.MINIMIZE, evaluate=fn)


# ---------------------------------------------------------------------------
# 0-1 knapsack
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnapsackInstance:
    """Item weights and profits plus the knapsack capacity."""

    weights: np.ndarray
    profits: np.ndarray
    capacity: float

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "profits", np.asarray(self.profits, dtype=float))
        if self.weights.size < 1:
            raise ValueError("instance needs at least one item")
        if self.weights.size != self.profits.size:
            raise ValueError("weights and profits must have equal length")
        if np.any(self.weights <= 0) or np.any(self.profits <= 0):
            raise ValueError("weights and profits must be positive")
        if not self.capacity > 0:
            raise ValueError("capacity must be positive")
        if not self.capacity < float(self.weights.sum()):
            raise ValueError("capacity must be below the total weight (otherwise trivial)")

    @property
    def n(self) -> int:
        return self.weights.size

    @functools.cached_property
    def min_weight(self) -> float:
        return float(self.weights.min())


# A binary solution is a boolean vector of length n; feasible once repaired.
BinarySolution = np.ndarray


def make_binary(p: "TriploidChromosome") -> BinarySolution:
    """Threshold decoding: bit i is 1 iff the real variable x_i >= 0.5."""
    return p.x >= 0.5


def repair(z: BinarySolution, inst: KnapsackInstance, rng: "Rng") -> BinarySolution:
    """Restore feasibility, then pack leftovers.

    Drop phase: while the selection is overweight, clear one uniformly random
    selected bit. Add phase: scan the remaining unselected items once in a
    uniformly random order and set each bit whose weight still fits (the scan
    and its permutation draw are skipped when no remaining item can fit). The
    result is always feasible and maximal with respect to single additions.
    """
    return _repair_inplace(np.asarray(z, dtype=bool).copy(), inst, rng)


def knapsack_fitness(p: "TriploidChromosome", inst: KnapsackInstance, rng: "Rng",
                     write_back: bool = True) -> float:
    """Decode, repair, and score one particle; update its cached fitness.

    With ``write_back`` (the default) the repaired bits are written back into
    the particle's real variables (1 -> 1.0, 0 -> 0.0) so the evolving
    position matches the solution that was actually scored.
    """
    profit = _knapsack_evaluate(p.x, inst, rng, write_back)
    p.fitness = profit
    p.dirty = False
    return profit


def _knapsack_evaluate(x: np.ndarray, inst: KnapsackInstance, rng: "Rng",
                       write_back: bool) -> float:
    z = _repair_inplace(x >= 0.5, inst, rng)
    if write_back:
        x[:] = z
    return float(np.dot(inst.profits, z))


def _repair_inplace(z: BinarySolution, inst: KnapsackInstance, rng: "Rng") -> BinarySolution:
    w = inst.weights
    load = float(np.dot(w, z))
    while load > inst.capacity:
        selected = np.flatnonzero(z)
        i = int(selected[rng.integers(selected.size)])
        z[i] = False
        load -= w[i]
    spare = inst.capacity - load
    # when nothing left can possibly fit, the random scan would add nothing
    if spare >= inst.min_weight:
        for j in rng.permutation(np.flatnonzero(~z)):
            wj = w[j]
            if wj <= spare:
                z[j] = True
                spare -= wj
    return z


def make_knapsack_problem(inst: KnapsackInstance, rng: "Rng",
                          write_back: bool = True) -> Problem:
    """Wrap an instance as a maximization problem on the [0,1] box.

    The evaluator draws from ``rng`` (the repair order is random) and, when
    ``write_back`` is on, snaps the position vector it was handed to the
    repaired 0/1 solution in place.
    """
    def evaluate(x: np.ndarray) -> float:
        return _knapsack_evaluate(x, inst, rng, write_back)

    return Problem(name=f"knapsack{inst.n}", dimension=inst.n, lower=0.0, upper=1.0,
                   sense=Sense.MAXIMIZE, evaluate=evaluate)


def generate_instance(n: int, rng: "Rng") -> KnapsackInstance:
    """Random instance: weights uniform on [1, 10], profit = weight + 5,
    capacity = half the total weight."""
    if n < 1:
        raise ValueError("item count must be >= 1")
    weights = 1.0 + 9.0 * rng.random(n)
    profits = weights + 5.0
    return KnapsackInstance(weights=weights, profits=profits,
                            capacity=float(weights.sum()) / 2.0)


# ---------------------------------------------------------------------------
# Instance file IO (line-oriented text; '#' starts a comment line)
# ---------------------------------------------------------------------------

class InstanceFormatError(ValueError):
    """Malformed knapsack instance file; message names the offending line."""


def format_instance(inst: KnapsackInstance) -> str:
    lines = [f"n {inst.n}", f"capacity {float(inst.capacity)!r}"]
    for w, p in zip(inst.weights, inst.profits):
        lines.append(f"{float(w)!r} {float(p)!r}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> KnapsackInstance:
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line))
    if not rows:
        raise InstanceFormatError("line 1: empty instance file")

    def fail(lineno: int, why: str) -> InstanceFormatError:
        return InstanceFormatError(f"line {lineno}: {why}")

    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise fail(lineno, f"expected 'n <count>', got {header!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise fail(lineno, f"item count is not an integer: {parts[1]!r}")
    if n < 1:
        raise fail(lineno, "item count must be >= 1")

    if len(rows) < 2:
        raise fail(lineno, "missing capacity line")
    lineno, cap_line = rows[1]
    parts = cap_line.split()
    if len(parts) != 2 or parts[0] != "capacity":
        raise fail(lineno, f"expected 'capacity <real>', got {cap_line!r}")
    try:
        capacity = float(parts[1])
    except ValueError:
        raise fail(lineno, f"capacity is not a number: {parts[1]!r}")

    items = rows[2:]
    if len(items) != n:
        raise fail(rows[-1][0], f"expected {n} item lines, found {len(items)}")
    weights = np.empty(n)
    profits = np.empty(n)
    for k, (lineno, line) in enumerate(items):
        parts = line.split()
        if len(parts) != 2:
            raise fail(lineno, f"expected '<weight> <profit>', got {line!r}")
        try:
            weights[k] = float(parts[0])
            profits[k] = float(parts[1])
        except ValueError:
            raise fail(lineno, f"non-numeric item entry: {line!r}")
    try:
        return KnapsackInstance(weights=weights, profits=profits, capacity=capacity)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def save_instance(inst: KnapsackInstance, path: str | Path) -> None:
    Path(path).write_text(format_instance(inst))


def load_instance(path: str | Path) -> KnapsackInstance:
    return parse_instance(Path(path).read_text())
