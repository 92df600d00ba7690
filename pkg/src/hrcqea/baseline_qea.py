"""Classic binary quantum-inspired EA for the 0-1 knapsack comparison.

Each individual is a string of qubits observed into a bitstring each
generation; the bitstring is repaired with the same operator the real-coded
algorithm uses, scored, and the qubits are rotated toward the individual's
best stored solution by a fixed-magnitude angle whenever the observed bit
disagrees with the stored one and the stored solution is strictly fitter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INV_SQRT2, Rng
from .problems import BinarySolution, KnapsackInstance, repair

DEFAULT_ANGLE = 0.01 * math.pi


class QubitString:
    """n amplitude pairs, each normalized."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha: np.ndarray, beta: np.ndarray):
        self.alpha = np.asarray(alpha, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        if self.alpha.size != self.beta.size:
            raise ValueError("alpha and beta rows must have equal length")

    @classmethod
    def uniform(cls, n: int) -> "QubitString":
        """All qubits in the maximal superposition."""
        return cls(np.full(n, INV_SQRT2), np.full(n, INV_SQRT2))

    @property
    def n(self) -> int:
        return self.alpha.size


@dataclass
class ObservedSolution:
    bits: BinarySolution
    fitness: float


def observe(q: QubitString, rng: Rng) -> BinarySolution:
    """Collapse each qubit independently: bit = 1 with probability |beta|^2."""
    return rng.random(q.n) < q.beta * q.beta


def qgate_update(q: QubitString, observed: BinarySolution, best: BinarySolution,
                 best_is_fitter: bool, angle: float = DEFAULT_ANGLE) -> QubitString:
    """Rotate each disagreeing qubit toward the stored best bit.

    The rotation direction is corrected by the sign of alpha*beta so the pull
    acts on the magnitudes consistently in every quadrant; qubits whose
    observed bit matches the best, or any qubit when the best is not fitter,
    are left unchanged.
    """
    if not best_is_fitter:
        return q
    for i in np.flatnonzero(observed != best):
        a = float(q.alpha[i])
        b = float(q.beta[i])
        quadrant = 1.0 if a * b >= 0.0 else -1.0
        toward_one = 1.0 if best[i] else -1.0
        theta = toward_one * quadrant * angle
        c, s = math.cos(theta), math.sin(theta)
        q.alpha[i] = c * a - s * b
        q.beta[i] = s * a + c * b
    return q


def run_qea_knapsack(inst: KnapsackInstance, population_size: int, t_max: int,
                     rng: Rng, angle: float = DEFAULT_ANGLE):
    """Full QEA run on one instance.

    Generation 0 is the initial observation round; each later generation
    observes, repairs, scores, refreshes the per-individual elitist archive,
    and rotates toward it. Returns (best profit, best bits, trace) where the
    trace rows are (generation, best-so-far profit, mean observed profit).
    """
    if population_size < 1:
        raise ValueError("population_size must be >= 1")
    strings = [QubitString.uniform(inst.n) for _ in range(population_size)]
    bests: list[ObservedSolution] = []
    for q in strings:
        bits = repair(observe(q, rng), inst, rng)
        bests.append(ObservedSolution(bits, float(inst.profits[bits].sum())))

    best_profit = [np.nan] * (t_max + 1)
    mean_profit = [np.nan] * (t_max + 1)
    fits = [b.fitness for b in bests]
    best_profit[0] = max(fits)
    mean_profit[0] = sum(fits) / population_size

    for t in range(1, t_max + 1):
        observed_sum = 0.0
        for j, q in enumerate(strings):
            bits = repair(observe(q, rng), inst, rng)
            profit = float(inst.profits[bits].sum())
            observed_sum += profit
            stored = bests[j]
            if profit > stored.fitness:
                bests[j] = ObservedSolution(bits, profit)
            else:
                qgate_update(q, bits, stored.bits, stored.fitness > profit, angle)
        gen_best = max(b.fitness for b in bests)
        best_profit[t] = gen_best
        mean_profit[t] = observed_sum / population_size

    champion = max(bests, key=lambda b: b.fitness)
    trace = np.column_stack([
        np.arange(t_max + 1, dtype=float),
        np.asarray(best_profit),
        np.asarray(mean_profit),
    ])
    return champion.fitness, champion.bits.copy(), trace
