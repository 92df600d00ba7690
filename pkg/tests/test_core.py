import math

import numpy as np
import pytest

from hrcqea.core import TriploidChromosome, average_rotation_angle, make_rng, new_swarm
from hrcqea.problems import make_benchmark

from conftest import make_chrom


def test_new_swarm_constructor_contract():
    problem = make_benchmark("sphere", 2)
    swarm = new_swarm(problem, 3, make_rng(42))
    assert len(swarm) == 3
    assert swarm.generation == 0
    for p in swarm.particles:
        assert np.all((p.x >= -100.0) & (p.x <= 100.0))
        assert np.allclose(p.alpha**2 + p.beta**2, 1.0, atol=1e-12)
        assert np.all(p.theta_last == 0.0)
        assert np.all(p.invalid_count == 0)
        assert not p.dirty
        assert p.fitness == problem.evaluate(p.x)
    for p, b in zip(swarm.particles, swarm.personal_bests):
        assert np.array_equal(p.x, b.x) and p.fitness == b.fitness
    assert swarm.global_best.fitness == min(p.fitness for p in swarm.particles)


def test_new_swarm_rejects_singleton_population():
    problem = make_benchmark("sphere", 2)
    with pytest.raises(ValueError):
        new_swarm(problem, 1, make_rng(0))


def test_new_swarm_is_deterministic():
    problem = make_benchmark("sphere", 2)
    a = new_swarm(problem, 3, make_rng(42))
    b = new_swarm(problem, 3, make_rng(42))
    for pa, pb in zip(a.particles, b.particles):
        assert np.array_equal(pa.x, pb.x)
        assert pa.fitness == pb.fitness


def test_make_rng_replays_bit_exactly():
    draws_a = make_rng(7).random(1000)
    draws_b = make_rng(7).random(1000)
    assert np.array_equal(draws_a, draws_b)
    assert not np.array_equal(draws_a, make_rng(8).random(1000))


def test_average_rotation_angle():
    assert average_rotation_angle(make_chrom([0.0, 0.0])) == 0.0
    p = make_chrom([0.0, 0.0])
    p.theta_last[:] = (math.pi, -math.pi)
    assert average_rotation_angle(p) == 0.0
    p3 = make_chrom([0.0, 0.0, 0.0])
    p3.theta_last[:] = (0.1, 0.2, 0.3)
    assert average_rotation_angle(p3) == pytest.approx(0.2, abs=1e-15)


def test_chromosome_copy_is_deep():
    p = make_chrom([1.0, 2.0], fitness=5.0)
    q = p.copy()
    q.x[0] = 99.0
    q.invalid_count[1] = 4
    q.fitness = -1.0
    assert p.x[0] == 1.0 and p.invalid_count[1] == 0 and p.fitness == 5.0


def test_allele_view():
    p = make_chrom([1.5, 2.5], alpha=[0.6, 0.8])
    a = p.allele(1)
    assert a.x == 2.5 and a.alpha == 0.8
    assert a.beta == pytest.approx(0.6, abs=1e-15)
    assert a.theta_last == 0.0 and a.invalid_count == 0


def test_chromosome_row_length_mismatch_rejected():
    with pytest.raises(ValueError):
        TriploidChromosome([1.0, 2.0], [0.6], [0.8])
