import numpy as np
import pytest

from hrcqea.core import make_rng
from hrcqea.problems import (
    BENCHMARKS,
    InstanceFormatError,
    KnapsackInstance,
    ackley,
    generate_instance,
    knapsack_fitness,
    load_instance,
    make_benchmark,
    make_binary,
    make_knapsack_problem,
    parse_instance,
    rastrigin,
    repair,
    save_instance,
    schwefel,
    sphere,
)

from conftest import exhaustive_knapsack_optimum as exhaustive_optimum, make_chrom


# ---------------------------------------------------------------------------
# benchmarks
# ---------------------------------------------------------------------------

def test_minima_at_stated_optima():
    for name in ("sphere", "rastrigin", "ackley", "griewank"):
        fn, _, _ = BENCHMARKS[name]
        assert abs(fn(np.zeros(30))) <= 1e-9, name
    # the four-decimal optimum constant leaves a small positive residual
    x = np.full(30, 420.9687)
    assert 0.0 <= schwefel(x) <= 5e-3 * 30


def test_hand_computed_values():
    assert sphere(np.array([3.0, 4.0])) == 25.0
    assert rastrigin(np.array([0.5])) == pytest.approx(20.25, abs=1e-12)
    assert ackley(np.zeros(5)) == pytest.approx(0.0, abs=1e-12)


def test_benchmarks_nonnegative_on_box():
    rng = make_rng(314)
    for name, (fn, lo, hi) in BENCHMARKS.items():
        pts = lo + (hi - lo) * rng.random((10_000, 8))
        for row in pts:
            assert fn(row) >= 0.0, name


def test_make_benchmark_validation():
    with pytest.raises(ValueError):
        make_benchmark("nope", 3)
    with pytest.raises(ValueError):
        make_benchmark("sphere", 0)
    p = make_benchmark("griewank", 4)
    assert (p.lower, p.upper) == (-600.0, 600.0)


# ---------------------------------------------------------------------------
# decoding and repair
# ---------------------------------------------------------------------------

def test_make_binary_threshold_rule():
    assert np.array_equal(make_binary(make_chrom([0.7, 0.3])), [True, False])
    assert np.array_equal(make_binary(make_chrom([0.5])), [True])  # inclusive
    assert not make_binary(make_chrom([0.0, 0.49, 0.2])).any()


def test_repair_keeps_feasible_when_nothing_fits():
    inst = KnapsackInstance(weights=[8.0, 9.0], profits=[1.0, 1.0], capacity=6.0)
    z = np.array([False, False])
    out = repair(z, inst, make_rng(0))
    assert not out.any()
    inst2 = KnapsackInstance(weights=[5.0, 9.0], profits=[1.0, 1.0], capacity=6.0)
    out2 = repair(np.array([True, False]), inst2, make_rng(0))
    assert np.array_equal(out2, [True, False])


def test_repair_drops_oversized_single_item():
    inst = KnapsackInstance(weights=[12.0], profits=[1.0], capacity=5.0)
    out = repair(np.array([True]), inst, make_rng(3))
    assert not out.any()


def test_repair_drops_exactly_one_of_two():
    inst = KnapsackInstance(weights=[6.0, 6.0], profits=[1.0, 1.0], capacity=10.0)
    for seed in range(20):
        out = repair(np.array([True, True]), inst, make_rng(seed))
        assert out.sum() == 1
        assert inst.weights[out].sum() <= 10.0


def test_repair_always_feasible_property():
    rng = make_rng(2718)
    for _ in range(10_000):
        n = int(rng.integers(1, 31))
        weights = 0.5 + 9.5 * rng.random(n)
        total = float(weights.sum())
        capacity = float(total * (0.05 + 0.9 * rng.random()))
        if not 0 < capacity < total:
            continue
        inst = KnapsackInstance(weights=weights, profits=weights + 1.0, capacity=capacity)
        z = rng.random(n) < 0.5
        out = repair(z, inst, rng)
        assert float(inst.weights[out].sum()) <= inst.capacity + 1e-9


def test_repair_does_not_mutate_input():
    inst = KnapsackInstance(weights=[6.0, 6.0], profits=[1.0, 1.0], capacity=10.0)
    z = np.array([True, True])
    repair(z, inst, make_rng(0))
    assert z.all()


# ---------------------------------------------------------------------------
# knapsack fitness
# ---------------------------------------------------------------------------

def test_knapsack_fitness_zero_when_nothing_fits():
    inst = KnapsackInstance(weights=[8.0, 9.0], profits=[3.0, 4.0], capacity=6.0)
    p = make_chrom([0.1, 0.2])
    assert knapsack_fitness(p, inst, make_rng(0)) == 0.0
    assert np.array_equal(p.x, [0.0, 0.0])
    assert p.fitness == 0.0 and not p.dirty


def test_knapsack_fitness_direct_sum():
    inst = KnapsackInstance(weights=[5.0, 10.0, 4.0], profits=[7.0, 9.0, 6.0],
                            capacity=9.5)
    p = make_chrom([0.9, 0.1, 0.8])
    assert knapsack_fitness(p, inst, make_rng(1)) == 13.0
    assert np.array_equal(p.x, [1.0, 0.0, 1.0])


def test_knapsack_fitness_against_exhaustive_oracle():
    rng = make_rng(555)
    inst = generate_instance(12, rng)
    opt = exhaustive_optimum(inst)
    for _ in range(50):
        p = make_chrom(rng.random(12))
        fit = knapsack_fitness(p, inst, rng)
        z = p.x >= 0.5
        assert float(inst.weights[z].sum()) <= inst.capacity + 1e-9
        assert fit == pytest.approx(float(inst.profits[z].sum()), abs=1e-9)
        assert fit <= opt + 1e-9
        # decoding the written-back position reproduces the scored bits
        assert np.array_equal(make_binary(p), z)


def test_knapsack_without_write_back_keeps_position():
    inst = KnapsackInstance(weights=[5.0, 10.0, 4.0], profits=[7.0, 9.0, 6.0],
                            capacity=9.5)
    p = make_chrom([0.9, 0.1, 0.8])
    fit = knapsack_fitness(p, inst, make_rng(1), write_back=False)
    assert fit == 13.0
    assert np.array_equal(p.x, [0.9, 0.1, 0.8])


def test_make_knapsack_problem_surface():
    inst = generate_instance(6, make_rng(8))
    problem = make_knapsack_problem(inst, make_rng(8))
    assert problem.sense.value == "max"
    assert (problem.lower, problem.upper) == (0.0, 1.0)
    assert problem.dimension == 6
    assert problem.name == "knapsack6"


# ---------------------------------------------------------------------------
# instance generation and IO
# ---------------------------------------------------------------------------

def test_generate_instance_contract():
    inst = generate_instance(100, make_rng(11))
    assert np.all(np.abs((inst.profits - inst.weights) - 5.0) <= 1e-12)
    assert inst.capacity / float(inst.weights.sum()) == 0.5
    assert np.all((inst.weights >= 1.0) & (inst.weights <= 10.0))
    again = generate_instance(100, make_rng(11))
    assert np.array_equal(inst.weights, again.weights)
    assert inst.capacity == again.capacity


def test_generate_instance_rejects_empty():
    with pytest.raises(ValueError):
        generate_instance(0, make_rng(0))


def test_instance_round_trip(tmp_path):
    inst = generate_instance(17, make_rng(23))
    path = tmp_path / "inst.txt"
    save_instance(inst, path)
    loaded = load_instance(path)
    assert np.array_equal(inst.weights, loaded.weights)
    assert np.array_equal(inst.profits, loaded.profits)
    assert inst.capacity == loaded.capacity


def test_parse_instance_accepts_comments():
    inst = parse_instance("# demo\nn 2\n# capacity next\ncapacity 5.5\n3.0 8.0\n\n4.0 9.0\n")
    assert inst.n == 2 and inst.capacity == 5.5


@pytest.mark.parametrize("text,needle", [
    ("", "line 1"),
    ("n 0\ncapacity 5\n", "line 1"),
    ("n 1\n", "capacity"),
    ("n 1\ncapacity 5\n", "1 item"),
    ("n 1\ncapacity abc\n1 2\n", "line 2"),
    ("n 1\ncapacity 5\n-1.0 2.0\n", "positive"),
    ("n 1\ncapacity 0\n1.0 2.0\n", "capacity"),
    ("n 1\ncapacity 5\nfoo bar\n", "line 3"),
    ("items 2\ncapacity 5\n", "line 1"),
])
def test_parse_instance_errors(text, needle):
    with pytest.raises((InstanceFormatError, ValueError)) as err:
        parse_instance(text)
    assert needle in str(err.value)


def test_instance_validation():
    with pytest.raises(ValueError):
        KnapsackInstance(weights=[1.0], profits=[1.0], capacity=2.0)  # trivial
    with pytest.raises(ValueError):
        KnapsackInstance(weights=[1.0, 2.0], profits=[1.0], capacity=1.0)
