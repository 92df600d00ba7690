"""Domain types: triploid-chromosome particles, swarms, and the seeded RNG
contract shared by every algorithm module.

A particle stores three rows of length ``n``: the real position ``x`` and the
qubit amplitude pair ``(alpha, beta)`` per gene, with |alpha|^2 + |beta|^2 = 1.
Two bookkeeping rows ride along: the last applied rotation angle per gene and
the count of consecutive invalid (non-improving) evolutions per gene.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .selection import leader_index

if TYPE_CHECKING:
    from .problems import Problem

# All stochastic operators draw from a numpy Generator. Identical seed plus
# identical call sequence replays the identical stream, which is what makes
# whole runs bit-reproducible.
Rng = np.random.Generator

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def make_rng(seed: int) -> Rng:
    """Deterministic uniform [0,1) stream seeded with a 64-bit integer."""
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Allele:
    """Read-only snapshot of one gene of a chromosome."""

    x: float
    alpha: float
    beta: float
    theta_last: float
    invalid_count: int


class TriploidChromosome:
    """One particle: position row, amplitude rows, and per-gene counters.

    ``fitness`` caches the objective value of ``x``; ``dirty`` marks it stale
    whenever the position changed without a re-evaluation.
    """

    __slots__ = ("x", "alpha", "beta", "theta_last", "invalid_count", "fitness", "dirty")

    def __init__(
        self,
        x,
        alpha,
        beta,
        theta_last=None,
        invalid_count=None,
        fitness: float = math.nan,
        dirty: bool = True,
    ):
        self.x = np.asarray(x, dtype=float)
        n = self.x.size
        self.alpha = np.asarray(alpha, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        if self.alpha.size != n or self.beta.size != n:
            raise ValueError("rows x, alpha, beta must have equal length")
        self.theta_last = (
            np.zeros(n) if theta_last is None else np.asarray(theta_last, dtype=float)
        )
        self.invalid_count = (
            np.zeros(n, dtype=np.int64)
            if invalid_count is None
            else np.asarray(invalid_count, dtype=np.int64)
        )
        self.fitness = fitness
        self.dirty = dirty

    @property
    def n(self) -> int:
        return self.x.size

    def allele(self, i: int) -> Allele:
        return Allele(
            x=float(self.x[i]),
            alpha=float(self.alpha[i]),
            beta=float(self.beta[i]),
            theta_last=float(self.theta_last[i]),
            invalid_count=int(self.invalid_count[i]),
        )

    def copy(self) -> "TriploidChromosome":
        return TriploidChromosome(
            self.x.copy(),
            self.alpha.copy(),
            self.beta.copy(),
            self.theta_last.copy(),
            self.invalid_count.copy(),
            self.fitness,
            self.dirty,
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TriploidChromosome(n={self.n}, fitness={self.fitness!r}, dirty={self.dirty})"


class Swarm:
    """Population of particles plus the elitist archives."""

    __slots__ = ("particles", "personal_bests", "global_best", "generation")

    def __init__(self, particles, personal_bests, global_best, generation: int = 0):
        self.particles: list[TriploidChromosome] = particles
        self.personal_bests: list[TriploidChromosome] = personal_bests
        self.global_best: TriploidChromosome = global_best
        self.generation = generation

    def __len__(self) -> int:
        return len(self.particles)


def new_swarm(problem: "Problem", population_size: int, rng: Rng) -> Swarm:
    """Initialize a swarm: positions uniform in the box, every amplitude pair
    at the maximal superposition (1/sqrt(2), 1/sqrt(2)), all counters zero.

    Requires ``population_size >= 2`` because crossover partner selection
    needs a second distinct particle.
    """
    if population_size < 2:
        raise ValueError("population_size must be >= 2 (crossover needs a partner)")
    n = problem.dimension
    if n < 1:
        raise ValueError("problem dimension must be >= 1")
    lo, hi = problem.lower, problem.upper
    particles = []
    for _ in range(population_size):
        x = lo + (hi - lo) * rng.random(n)
        p = TriploidChromosome(x, np.full(n, INV_SQRT2), np.full(n, INV_SQRT2))
        p.fitness = problem.evaluate(p.x)
        p.dirty = False
        particles.append(p)
    personal_bests = [p.copy() for p in particles]
    swarm = Swarm(particles, personal_bests, personal_bests[0].copy(), generation=0)
    swarm.global_best = swarm.personal_bests[leader_index(swarm, problem.sense)].copy()
    return swarm


def average_rotation_angle(p: TriploidChromosome) -> float:
    """Arithmetic mean of the last applied rotation angles over all genes."""
    return float(p.theta_last.mean())
