"""Shared test helpers: chromosome builders and a scripted RNG stub."""
from __future__ import annotations

import math

import numpy as np
import pytest

from hrcqea.core import TriploidChromosome


def exhaustive_knapsack_optimum(inst) -> float:
    """Brute-force oracle: best feasible profit over all 2^n subsets."""
    n = inst.n
    masks = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(float)
    feasible = masks @ inst.weights <= inst.capacity
    return float((masks @ inst.profits)[feasible].max())


def make_chrom(x, alpha=None, beta=None, fitness=math.nan) -> TriploidChromosome:
    """Chromosome with normalized amplitudes (uniform superposition unless
    alpha is given, in which case beta defaults to the positive partner)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if alpha is None:
        alpha = np.full(n, 1.0 / math.sqrt(2.0))
        if beta is None:
            beta = np.full(n, 1.0 / math.sqrt(2.0))
    else:
        alpha = np.asarray(alpha, dtype=float)
    if beta is None:
        beta = np.sqrt(1.0 - alpha * alpha)
    else:
        beta = np.asarray(beta, dtype=float)
    p = TriploidChromosome(x, alpha, beta)
    p.fitness = fitness
    p.dirty = math.isnan(fitness)
    return p


class ScriptedRng:
    """Replays recorded draws in the order the operators document.

    Raises IndexError when an operator draws more than the script provides,
    which doubles as a check of the documented draw sequence.
    """

    def __init__(self, integers=(), randoms=(), permutations=()):
        self._integers = list(integers)
        self._randoms = list(randoms)
        self._permutations = list(permutations)

    def integers(self, *args, **kwargs):
        return self._integers.pop(0)

    def random(self, size=None):
        value = self._randoms.pop(0)
        if size is None:
            return float(value)
        arr = np.asarray(value, dtype=float)
        assert arr.size == size, f"operator asked for {size} uniforms, script has {arr.size}"
        return arr

    def permutation(self, n):
        perm = np.asarray(self._permutations.pop(0))
        assert perm.size == n
        return perm

    def exhausted(self) -> bool:
        return not (self._integers or self._randoms or self._permutations)


@pytest.fixture
def scripted_rng_cls():
    return ScriptedRng
