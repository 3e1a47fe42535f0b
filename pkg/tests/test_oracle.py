import math

import numpy as np
import pytest

from solaropt import BoxSet, BudgetExceededError, Objective, penalised
from solaropt.testbed import rastrigin, rosenbrock_skokov


def test_rastrigin_origin_is_zero_and_counts():
    obj = Objective(4, rastrigin)
    assert obj.value(np.zeros(4)) == 0.0
    assert obj.eval_count == 1


def test_rosenbrock_skokov_ones_is_zero():
    obj = Objective(100, rosenbrock_skokov)
    assert obj.value(np.ones(100)) == 0.0


def test_repeat_evaluation_is_deterministic_and_counted():
    obj = Objective(3, lambda x: float(np.sum(x**2)))
    x = np.array([0.3, -1.2, 2.0])
    v1, v2 = obj.value(x), obj.value(x)
    assert v1 == v2
    assert obj.eval_count == 2


def test_gradient_counting_and_missing_gradient():
    obj = Objective(2, lambda x: float(x @ x), grad=lambda x: 2 * x)
    assert np.allclose(obj.gradient(np.ones(2)), [2.0, 2.0])
    assert obj.grad_count == 1 and obj.eval_count == 0
    bare = Objective(2, lambda x: float(x @ x))
    assert not bare.has_gradient
    with pytest.raises(ValueError):
        bare.gradient(np.ones(2))


def test_dimension_mismatch_rejected():
    obj = Objective(3, lambda x: 0.0)
    with pytest.raises(ValueError):
        obj.value(np.zeros(4))
    box = BoxSet.symmetric(3, 1.0)
    with pytest.raises(ValueError):
        box.contains(np.zeros(2))


def test_indicator_interior_violation_boundary():
    box = BoxSet.symmetric(4, 5.0)
    assert box.indicator(np.zeros(4)) == 0.0
    x = np.zeros(4)
    x[2] = 5.0001
    assert box.indicator(x) == math.inf
    x[2] = 5.0  # closed box: the boundary is feasible
    assert box.indicator(x) == 0.0


def test_penalised_shortcircuits_without_evaluating():
    seen = []

    def tripwire(x):
        seen.append(x.copy())
        return float(x @ x)

    box = BoxSet.symmetric(2, 5.0)
    obj = Objective(2, tripwire)
    assert penalised(obj, box, np.array([1.0, 1.0])) == 2.0
    assert obj.eval_count == 1
    assert penalised(obj, box, np.array([9.0, 0.0])) == math.inf
    assert obj.eval_count == 1  # untouched
    assert len(seen) == 1 and np.all(np.abs(seen[0]) <= 5.0)


def test_penalised_below_lower_bound():
    box = BoxSet(np.ones(5), np.full(5, 60.0))
    obj = Objective(5, lambda x: 0.0)
    assert penalised(obj, box, np.full(5, 0.5)) == math.inf
    assert obj.eval_count == 0


def test_project_clamp_identity_idempotent():
    box = BoxSet.symmetric(2, 5.0)
    assert np.array_equal(box.project(np.array([7.0, -7.0])), [5.0, -5.0])
    interior = np.array([1.5, -4.0])
    assert np.array_equal(box.project(interior), interior)
    rng = np.random.default_rng(7)
    for _ in range(100):
        x = rng.uniform(-20, 20, 2)
        p = box.project(x)
        assert box.contains(p)
        assert np.array_equal(box.project(p), p)
        if box.contains(x):
            assert np.array_equal(p, x)
        else:
            assert not np.array_equal(p, x)


def test_box_validation():
    with pytest.raises(ValueError):
        BoxSet([0.0, 0.0], [1.0, 0.0])  # lower must be strictly below upper
    with pytest.raises(ValueError):
        BoxSet([0.0], [1.0, 2.0])


def test_budget_cap_is_hard_and_precounted():
    obj = Objective(1, lambda x: float(x[0]), max_evals=2)
    obj.value(np.zeros(1))
    obj.value(np.zeros(1))
    with pytest.raises(BudgetExceededError):
        obj.value(np.zeros(1))
    assert obj.eval_count == 2  # the rejected query never ran
