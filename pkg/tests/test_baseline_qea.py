import math

import numpy as np
import pytest

from hrcqea.baseline_qea import QubitString, observe, qgate_update, run_qea_knapsack
from hrcqea.core import make_rng
from hrcqea.problems import generate_instance

from conftest import exhaustive_knapsack_optimum


def test_observe_certainties():
    ones = QubitString(np.zeros(8), np.ones(8))
    assert observe(ones, make_rng(0)).all()
    zeros = QubitString(np.ones(8), np.zeros(8))
    assert not observe(zeros, make_rng(0)).any()


def test_observe_uniform_superposition_frequency():
    q = QubitString.uniform(1)
    rng = make_rng(13)
    hits = sum(int(observe(q, rng)[0]) for _ in range(100_000))
    assert abs(hits / 100_000 - 0.5) <= 0.01


def test_qgate_noop_cases():
    q = QubitString.uniform(4)
    before = q.alpha.copy(), q.beta.copy()
    # stored best not fitter: nothing moves
    qgate_update(q, np.array([True] * 4), np.array([False] * 4), best_is_fitter=False)
    assert np.array_equal(q.alpha, before[0]) and np.array_equal(q.beta, before[1])
    # agreement on every bit: nothing moves
    bits = np.array([True, False, True, False])
    qgate_update(q, bits, bits.copy(), best_is_fitter=True)
    assert np.array_equal(q.alpha, before[0]) and np.array_equal(q.beta, before[1])


def test_qgate_pulls_toward_stored_bit():
    q = QubitString.uniform(1)
    qgate_update(q, np.array([False]), np.array([True]), best_is_fitter=True,
                 angle=0.01 * math.pi)
    assert abs(q.beta[0]) > 1 / math.sqrt(2)  # toward '1'
    q2 = QubitString.uniform(1)
    qgate_update(q2, np.array([True]), np.array([False]), best_is_fitter=True,
                 angle=0.01 * math.pi)
    assert abs(q2.beta[0]) < 1 / math.sqrt(2)  # toward '0'


def test_qgate_pull_is_quadrant_safe():
    for phi in np.linspace(0.1, 2 * math.pi - 0.1, 37):
        q = QubitString(np.array([math.cos(phi)]), np.array([math.sin(phi)]))
        mag = abs(q.beta[0])
        qgate_update(q, np.array([False]), np.array([True]), best_is_fitter=True)
        assert abs(q.beta[0]) >= mag - 1e-12


def test_qgate_preserves_normalization():
    rng = make_rng(7)
    for _ in range(10_000):
        phi = float(rng.uniform(0, 2 * math.pi))
        q = QubitString(np.array([math.cos(phi)]), np.array([math.sin(phi)]))
        qgate_update(q, np.array([bool(rng.integers(2))]),
                     np.array([bool(rng.integers(2))]), best_is_fitter=True)
        assert abs(q.alpha[0]**2 + q.beta[0]**2 - 1.0) <= 1e-12


def test_run_qea_t0_reports_initial_observations():
    inst = generate_instance(10, make_rng(3))
    best, bits, trace = run_qea_knapsack(inst, 5, 0, make_rng(4))
    assert trace.shape == (1, 3)
    assert best == trace[0, 1]
    assert float(inst.weights[bits].sum()) <= inst.capacity + 1e-9


def test_run_qea_never_beats_exhaustive_optimum():
    inst = generate_instance(12, make_rng(21))
    opt = exhaustive_knapsack_optimum(inst)
    best, bits, trace = run_qea_knapsack(inst, 10, 300, make_rng(22))
    assert best <= opt + 1e-9
    assert np.all(np.diff(trace[:, 1]) >= 0.0)  # elitist best is monotone
    assert best == float(inst.profits[bits].sum())


def test_run_qea_deterministic():
    inst = generate_instance(15, make_rng(5))
    a = run_qea_knapsack(inst, 4, 50, make_rng(6))
    b = run_qea_knapsack(inst, 4, 50, make_rng(6))
    assert a[0] == b[0]
    assert np.array_equal(a[2], b[2])


def test_run_qea_rejects_empty_population():
    inst = generate_instance(5, make_rng(1))
    with pytest.raises(ValueError):
        run_qea_knapsack(inst, 0, 10, make_rng(0))
