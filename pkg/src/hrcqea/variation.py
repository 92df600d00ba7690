"""Position- and amplitude-changing operators.

Single-gene mutation perturbs one real variable with a step whose scale is an
amplitude magnitude (fine search uses one amplitude of the pair, coarse search
the other, swapped between minimization and maximization). A strictly
improving candidate is accepted and freezes the amplitudes; a failed one
leaves the position alone and instead updates the amplitudes, either by a
quantum rotation whose angle is the PSO attraction toward the personal and
global bests, or, after too many consecutive failures, by a large-scale
amplitude shrink that re-normalizes the pair exactly.

Multiple-gene mutation applies the same move to a scheduled number of genes
jointly, and arithmetic crossover blends a particle-pair average with the
personal best under per-gene random convex weights.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Rng, TriploidChromosome, average_rotation_angle
from .problems import Problem
from .selection import Sense


class SearchMode(enum.Enum):
    FINE = "fine"
    COARSE = "coarse"


@dataclass(frozen=True)
class VariationParams:
    """Operator knobs.

    m1/m2 are the per-particle counts of fine and coarse single-gene
    mutations per generation; kappa and tau are the periods (in generations)
    of multiple-gene mutation and crossover; m_cross is the number of
    crossover attempts per particle per round; lam is the consecutive-failure
    threshold beyond which the amplitude escape replaces the rotation.
    """

    m1: int
    m2: int
    c1: float = math.pi
    c2: float = math.pi
    delta: int = 12
    lam: int = 1
    kappa: int = 5
    tau: int = 500
    m_cross: int = 10

    def __post_init__(self):
        if self.delta < 2 or self.delta % 2 != 0:
            raise ValueError("delta must be an even integer >= 2")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.m1 < 0 or self.m2 < 0 or self.m1 + self.m2 < 1:
            raise ValueError("m1 and m2 must be non-negative with m1 + m2 >= 1")
        if self.kappa < 1 or self.tau < 1:
            raise ValueError("kappa and tau must be >= 1")
        if self.m_cross < 1:
            raise ValueError("m_cross must be >= 1")


def step_scale(mode: SearchMode, sense: Sense, alpha: float, beta: float) -> float:
    """Mutation magnitude: which amplitude scales the step depends on the
    search mode and flips between the two senses."""
    if sense is Sense.MINIMIZE:
        return abs(alpha) if mode is SearchMode.FINE else abs(beta)
    return abs(beta) if mode is SearchMode.FINE else abs(alpha)


def perturbation(rng: Rng, delta: int, xi: float, lower: float, upper: float) -> float:
    """Displacement (upper-lower) * dx * xi with dx the sum of ``delta``
    uniforms minus delta/2 (zero mean, unit variance at delta=12)."""
    dx = float(rng.random(delta).sum()) - delta / 2.0
    return (upper - lower) * dx * xi


def clip_to_bounds(x: float, lower: float, upper: float) -> float:
    """Reflect an out-of-box value back inside, repeating as needed.

    Implemented as the closed-form triangle-wave fold with period
    2*(upper-lower), which equals iterated reflection for any finite input
    without looping.
    """
    if lower >= upper:
        raise ValueError("lower bound must be below upper bound")
    if lower <= x <= upper:
        return x
    width = upper - lower
    y = (x - lower) % (2.0 * width)
    if y > width:
        y = 2.0 * width - y
    return lower + y


def rotation_angle(x_current: float, x_pbest: float, x_gbest: float,
                   params: VariationParams) -> float:
    """PSO attraction angle: c1*(pbest - x) + c2*(gbest - x)."""
    return params.c1 * (x_pbest - x_current) + params.c2 * (x_gbest - x_current)


def qrg_rotate(alpha: float, beta: float, theta: float) -> tuple[float, float]:
    """Rotate the amplitude pair by theta (orthogonal, norm-preserving)."""
    c = math.cos(theta)
    s = math.sin(theta)
    return c * alpha - s * beta, s * alpha + c * beta


def amplitude_escape(alpha: float, beta: float, invalid_count: int,
                     sense: Sense) -> tuple[float, float]:
    """Large-scale amplitude update after more than ``lam`` consecutive
    failures: shrink one amplitude by the integer divisor fix(c/5)+1 and
    recompute the partner as the positive root, restoring normalization
    exactly."""
    divisor = int(invalid_count) // 5 + 1
    if sense is Sense.MINIMIZE:
        a = alpha / divisor
        return a, math.sqrt(max(0.0, 1.0 - a * a))
    b = beta / divisor
    return math.sqrt(max(0.0, 1.0 - b * b)), b


def smm_single_gene(p: TriploidChromosome, pbest_x: np.ndarray, gbest_x: np.ndarray,
                    problem: Problem, mode: SearchMode, params: VariationParams,
                    rng: Rng) -> bool:
    """Mutate one uniformly chosen gene; accept only strict improvement.

    Draw order (relied on by replay tests): gene index, then the ``delta``
    uniforms of the perturbation. Returns True on a valid (improving)
    evolution. On acceptance the amplitudes are left untouched and the gene's
    failure counter resets; on rejection the counter increments and the
    amplitude pair is rotated (counter <= lam) or escaped (counter > lam).
    """
    sense = problem.sense
    i = int(rng.integers(p.n))
    xi = step_scale(mode, sense, p.alpha[i], p.beta[i])
    disp = perturbation(rng, params.delta, xi, problem.lower, problem.upper)
    cand_x = p.x.copy()
    cand_x[i] = clip_to_bounds(p.x[i] + disp, problem.lower, problem.upper)
    f = problem.evaluate(cand_x)
    if sense.better(f, p.fitness):
        p.x = cand_x
        p.fitness = f
        p.invalid_count[i] = 0
        return True
    c = int(p.invalid_count[i]) + 1
    p.invalid_count[i] = c
    if c <= params.lam:
        theta = rotation_angle(float(p.x[i]), float(pbest_x[i]), float(gbest_x[i]), params)
        p.alpha[i], p.beta[i] = qrg_rotate(float(p.alpha[i]), float(p.beta[i]), theta)
        p.theta_last[i] = theta
    else:
        p.alpha[i], p.beta[i] = amplitude_escape(
            float(p.alpha[i]), float(p.beta[i]), c, sense)
    return False


def gene_count_schedule(n: int, t: int, t_max: int) -> int:
    """Number of genes a multiple-gene mutation touches at generation t:
    ceil((n/4) * (1 - t/(t_max+1))), at least 1, non-increasing in t.

    Computed in exact integer arithmetic (ceil of n*(t_max+1-t) over
    4*(t_max+1)) to avoid float boundary artifacts.
    """
    num = n * (t_max + 1 - t)
    den = 4 * (t_max + 1)
    return -(-num // den)


def multi_gene_triggered(p: TriploidChromosome, sense: Sense) -> bool:
    """Trigger rule: fire iff the mean applied rotation angle is strictly
    negative (minimization) or strictly positive (maximization)."""
    theta = average_rotation_angle(p)
    return theta < 0.0 if sense is Sense.MINIMIZE else theta > 0.0


def smm_multi_gene(p: TriploidChromosome, pbest_x: np.ndarray, gbest_x: np.ndarray,
                   problem: Problem, params: VariationParams, rng: Rng,
                   t: int, t_max: int) -> bool:
    """Jointly perturb a scheduled number of distinct genes (fine mode).

    Draw order: one permutation of the gene indices (its prefix selects the
    genes), then ``delta`` uniforms per selected gene in selection order.
    Acceptance of the joint candidate follows the same strict hill-climbing
    rule as the single-gene operator, as do the per-gene counter and
    amplitude updates on rejection.
    """
    sense = problem.sense
    k = gene_count_schedule(p.n, t, t_max)
    idx = rng.permutation(p.n)[:k]
    cand_x = p.x.copy()
    lo, hi = problem.lower, problem.upper
    for i in idx:
        xi = step_scale(SearchMode.FINE, sense, p.alpha[i], p.beta[i])
        disp = perturbation(rng, params.delta, xi, lo, hi)
        cand_x[i] = clip_to_bounds(float(p.x[i]) + disp, lo, hi)
    f = problem.evaluate(cand_x)
    if sense.better(f, p.fitness):
        p.x = cand_x
        p.fitness = f
        p.invalid_count[idx] = 0
        return True
    for i in idx:
        c = int(p.invalid_count[i]) + 1
        p.invalid_count[i] = c
        if c <= params.lam:
            theta = rotation_angle(float(p.x[i]), float(pbest_x[i]), float(gbest_x[i]),
                                   params)
            p.alpha[i], p.beta[i] = qrg_rotate(float(p.alpha[i]), float(p.beta[i]), theta)
            p.theta_last[i] = theta
        else:
            p.alpha[i], p.beta[i] = amplitude_escape(
                float(p.alpha[i]), float(p.beta[i]), c, sense)
    return False


def average_individual(p_u: TriploidChromosome, p_v: TriploidChromosome) -> TriploidChromosome:
    """Synthetic parent: per-gene mean of positions and alpha amplitudes,
    with beta recomputed as the positive root."""
    if p_u.n != p_v.n:
        raise ValueError("parents must have equal dimension")
    x = 0.5 * (p_u.x + p_v.x)
    alpha = 0.5 * (p_u.alpha + p_v.alpha)
    if np.any(np.abs(alpha) > 1.0 + 1e-9):
        raise ValueError("averaged alpha left [-1, 1]; parents were not normalized")
    beta = np.sqrt(np.clip(1.0 - alpha * alpha, 0.0, None))
    return TriploidChromosome(x, alpha, beta)


def arithmetic_crossover(p_avg: TriploidChromosome, b_u: TriploidChromosome,
                         rng: Rng) -> tuple[TriploidChromosome, TriploidChromosome]:
    """Blend the averaged parent with the personal best under per-gene random
    weights r in [0,1); the second offspring uses the complementary weights.
    Positions and alphas are convex combinations, betas positive roots."""
    if p_avg.n != b_u.n:
        raise ValueError("parents must have equal dimension")
    r = rng.random(p_avg.n)
    s = 1.0 - r
    x1 = r * b_u.x + s * p_avg.x
    a1 = r * b_u.alpha + s * p_avg.alpha
    x2 = s * b_u.x + r * p_avg.x
    a2 = s * b_u.alpha + r * p_avg.alpha
    d1 = TriploidChromosome(x1, a1, np.sqrt(np.clip(1.0 - a1 * a1, 0.0, None)))
    d2 = TriploidChromosome(x2, a2, np.sqrt(np.clip(1.0 - a2 * a2, 0.0, None)))
    return d1, d2


def crossover_round(swarm, problem: Problem, params: VariationParams, rng: Rng):
    """One crossover sweep: for every particle u, m_cross times, blend with a
    random partner's average and u's personal best; the better offspring
    replaces the particle iff it strictly improves it.

    Draw order per (u, attempt): one integer in [0, N-1) naming the partner
    (values >= u shift up by one so v != u), then the weight vector drawn
    inside ``arithmetic_crossover``.
    """
    sense = problem.sense
    n_pop = len(swarm.particles)
    for u in range(n_pop):
        current = swarm.particles[u]
        for _ in range(params.m_cross):
            draw = int(rng.integers(n_pop - 1))
            v = draw if draw < u else draw + 1
            p_avg = average_individual(current, swarm.particles[v])
            d1, d2 = arithmetic_crossover(p_avg, swarm.personal_bests[u], rng)
            d1.fitness = problem.evaluate(d1.x)
            d1.dirty = False
            d2.fitness = problem.evaluate(d2.x)
            d2.dirty = False
            child = d1 if sense.better(d1.fitness, d2.fitness) else d2
            if sense.better(child.fitness, current.fitness):
                swarm.particles[u] = child
                current = child
    return swarm
