"""Hybrid real-coded quantum evolutionary optimizer.

Triploid-chromosome particles (position plus qubit amplitude pair per gene)
evolve by amplitude-scaled hill-climbing mutations, PSO-driven quantum
rotations, periodic multiple-gene mutation and arithmetic crossover, with
elitist personal/global best archives. Ships a benchmark-function and 0-1
knapsack experiment harness, a binary QEA baseline, a FastAPI service, and a
CLI client.
"""

from .core import Allele, Rng, Swarm, TriploidChromosome, average_rotation_angle, make_rng, new_swarm
from .harness import ExperimentConfig, RunRecord, SummaryStats, run_experiment, run_hrcqea
from .problems import KnapsackInstance, Problem, generate_instance, load_instance, make_benchmark, save_instance
from .selection import Sense, hcs_accept, refresh_bests
from .variation import SearchMode, VariationParams

__version__ = "0.1.0"

__all__ = [
    "Allele",
    "ExperimentConfig",
    "KnapsackInstance",
    "Problem",
    "Rng",
    "RunRecord",
    "SearchMode",
    "Sense",
    "SummaryStats",
    "Swarm",
    "TriploidChromosome",
    "VariationParams",
    "average_rotation_angle",
    "generate_instance",
    "hcs_accept",
    "load_instance",
    "make_benchmark",
    "make_rng",
    "new_swarm",
    "refresh_bests",
    "run_experiment",
    "run_hrcqea",
    "save_instance",
    "__version__",
]
