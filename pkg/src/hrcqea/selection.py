"""Hill-climbing acceptance and elitist archive maintenance.

The archives (per-particle personal bests plus the swarm's global best) only
ever improve: a candidate replaces an archived entry iff it is strictly
better under the optimization sense. Ties never replace, which keeps traces
stable and reproducible.
"""
from __future__ import annotations

import enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .core import Swarm


class Sense(enum.Enum):
    """Optimization direction."""

    MINIMIZE = "min"
    MAXIMIZE = "max"

    def better(self, a: float, b: float) -> bool:
        """True iff fitness ``a`` is strictly better than ``b``."""
        if self is Sense.MINIMIZE:
            return a < b
        return a > b


def hcs_accept(parent_fitness: float, child_fitness: float, sense: Sense) -> bool:
    """Hill-climbing selection: accept the child iff it strictly improves."""
    return sense.better(child_fitness, parent_fitness)


def leader_index(swarm: "Swarm", sense: Sense) -> int:
    """Index of the particle whose personal best is the swarm's best (lowest
    index wins ties)."""
    best_j = 0
    best_f = swarm.personal_bests[0].fitness
    for j in range(1, len(swarm.personal_bests)):
        f = swarm.personal_bests[j].fitness
        if sense.better(f, best_f):
            best_j, best_f = j, f
    return best_j


def refresh_bests(swarm: "Swarm", sense: Sense) -> "Swarm":
    """Elitist archive update.

    Replaces personal_bests[j] with a copy of particles[j] iff strictly
    better, then promotes the best personal best to global_best iff strictly
    better. Archived entries are copies, never aliases of live particles.
    """
    for j, p in enumerate(swarm.particles):
        if sense.better(p.fitness, swarm.personal_bests[j].fitness):
            swarm.personal_bests[j] = p.copy()
    j = leader_index(swarm, sense)
    if sense.better(swarm.personal_bests[j].fitness, swarm.global_best.fitness):
        swarm.global_best = swarm.personal_bests[j].copy()
    return swarm
