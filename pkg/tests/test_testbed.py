import json
import math

import numpy as np
import pytest

from solaropt.testbed import (
    catalogue,
    catalogue_by_name,
    catalogue_json,
    devilliers_glasser_02,
    devilliers_glasser_02_grad,
    instance_from_spec,
    make_quadratic,
    rastrigin,
    rastrigin_grad,
    rosenbrock_skokov,
    rosenbrock_skokov_grad,
)

# value of the 5-parameter fit objective at the catalogue start (30, ..., 30),
# frozen from the independent scalar-stdlib evaluation below
DVG2_AT_START = 4913641968.540686


def central_diff(fn, x, rel_step=1e-6):
    x = np.asarray(x, float)
    g = np.zeros_like(x)
    for i in range(x.size):
        h = rel_step * (1.0 + abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (fn(xp) - fn(xm)) / (2 * h)
    return g


def assert_gradient_matches(fn, grad, x, rel=1e-4, rel_step=1e-6):
    g = grad(x)
    fd = central_diff(fn, x, rel_step)
    # central differences carry a cancellation floor of ~eps |f| / h per
    # component; without it the oracle is stricter than float64 allows
    h = rel_step * (1.0 + np.abs(x))
    floor = 20.0 * np.finfo(float).eps * abs(fn(x)) / h
    tol = rel * np.maximum(np.abs(fd), 1.0) + floor
    assert np.all(np.abs(g - fd) <= tol), (g, fd, tol)


# ---------------------------------------------------------------------------
# quadratics


def test_quadratic_at_origin_is_offset():
    q = make_quadratic(6, 1.0, seed=3)
    assert q.value(np.zeros(6)) == q.offset


def test_quadratic_gradient_matches_finite_differences():
    q = make_quadratic(8, 2.0, seed=5)
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = rng.uniform(-3, 3, 8)
        g = q.gradient(x)
        fd = central_diff(q.value, x)
        assert np.allclose(g, fd, rtol=1e-6, atol=1e-4)


def test_quadratic_psd_spot_check():
    q = make_quadratic(10, 1.0, seed=0)
    rng = np.random.default_rng(1)
    for _ in range(1000):
        x = rng.normal(size=10)
        assert x @ q.matrix @ x >= -1e-9 * (x @ x)


def test_quadratic_conditioning_order_of_magnitude():
    q = make_quadratic(10, 1.0, seed=0)
    assert 1e2 < q.kappa < 1e5  # published value is ~3.78e3; rng-dependent


def test_quadratic_minimiser_solves_gradient():
    q = make_quadratic(7, 1.5, seed=9)
    x_star = q.minimiser()
    assert np.allclose(q.gradient(x_star), 0.0, atol=1e-8)


# ---------------------------------------------------------------------------
# fixed surfaces


def test_rosenbrock_skokov_values():
    assert rosenbrock_skokov(np.ones(100)) == 0.0
    assert rosenbrock_skokov(np.zeros(2)) == 1.0
    with pytest.raises(ValueError):
        rosenbrock_skokov(np.array([1.0]))


def test_rosenbrock_skokov_gradient():
    x = np.full(100, 0.1)
    g = rosenbrock_skokov_grad(x)
    fd = central_diff(rosenbrock_skokov, x)
    scale = np.maximum(np.abs(fd), 1.0)
    assert np.all(np.abs(g - fd) / scale < 1e-5)


def test_rastrigin_values():
    assert rastrigin(np.zeros(3)) == 0.0
    assert rastrigin(np.array([1.0])) == pytest.approx(1.0, abs=1e-12)
    # n=2 at (0.5, 0): 20 + (0.25 + 10) + (0 - 10) = 20.25, confirmed
    # against a 50-digit evaluation
    assert rastrigin(np.array([0.5, 0.0])) == pytest.approx(20.25, abs=1e-12)


def test_rastrigin_gradient():
    rng = np.random.default_rng(4)
    x = rng.uniform(-5, 5, 20)
    assert_gradient_matches(rastrigin, rastrigin_grad, x)


def test_dvg02_optimum_and_domain():
    x_star = np.array([53.81, 1.27, 3.012, 2.13, 0.507])
    assert abs(devilliers_glasser_02(x_star)) <= 1e-9
    with pytest.raises(ValueError):
        devilliers_glasser_02(np.array([1.0, -1.0, 1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        devilliers_glasser_02(np.zeros(4))


def test_dvg02_target_series_is_deterministic():
    from solaropt.testbed import _DVG2_T, _DVG2_TRUE, _DVG2_Y, _dvg02_model

    regenerated = _dvg02_model(*_DVG2_TRUE, _DVG2_T)
    assert np.array_equal(regenerated, _DVG2_Y)
    x = np.array([10.0, 2.0, 1.0, 1.0, 0.5])
    assert devilliers_glasser_02(x) == devilliers_glasser_02(x.copy())


def test_dvg02_start_value_matches_independent_evaluation():
    # scalar-stdlib re-implementation, same float grid t_i = i/10
    def reference(x):
        x1, x2, x3, x4, x5 = x
        total = 0.0
        for i in range(24):
            t = i / 10.0
            y = 53.81 * 1.27**t * math.tanh(3.012 * t + math.sin(2.13 * t)) * math.cos(
                t * math.exp(0.507)
            )
            m = x1 * x2**t * math.tanh(x3 * t + math.sin(x4 * t)) * math.cos(t * math.exp(x5))
            total += (m - y) ** 2
        return total

    x0 = np.full(5, 30.0)
    v = devilliers_glasser_02(x0)
    assert v == pytest.approx(reference([30.0] * 5), rel=1e-12)
    assert v == pytest.approx(DVG2_AT_START, rel=1e-9)


def test_dvg02_gradient():
    rng = np.random.default_rng(8)
    for _ in range(3):
        x = rng.uniform(1.0, 5.0, 5)
        assert_gradient_matches(devilliers_glasser_02, devilliers_glasser_02_grad, x, rel=1e-4)


# ---------------------------------------------------------------------------
# catalogue


def test_catalogue_contents():
    insts = catalogue()
    assert [i.name for i in insts] == [
        "quad-10",
        "quad-25",
        "quad-50",
        "rosenbrock-skokov-100",
        "rastrigin-200",
        "dvg02-5",
    ]
    for inst in insts:
        assert inst.box.contains(inst.x0)


def test_catalogue_known_optima():
    for inst in catalogue():
        if inst.x_star is None:
            continue
        assert abs(inst.fn(inst.x_star) - inst.f_star) <= 1e-9
        if inst.name != "dvg02-5":
            assert inst.box.contains(inst.x_star)
    # the published dvg02 bounds exclude their own optimum (x5 = 0.507 < 1);
    # the point is still recorded as the known unconstrained minimiser
    dvg = catalogue_by_name("dvg02-5")
    assert not dvg.box.contains(dvg.x_star)
    rast = catalogue_by_name("rastrigin-200")
    assert rast.f_star == 0.0 and np.all(rast.x_star == 0.0)


def test_catalogue_quadratic_conditioning_targets():
    # published orders: ~3.78e3, ~5.44e4, ~3.70e5
    assert 1e3 <= catalogue_by_name("quad-10").kappa < 1e4
    assert 1e4 <= catalogue_by_name("quad-25").kappa < 1e6
    assert 1e5 <= catalogue_by_name("quad-50").kappa < 1e7


def test_catalogue_gradients_match_finite_differences():
    rng = np.random.default_rng(123)
    for inst in catalogue():
        if inst.grad is None:
            continue
        for _ in range(10):
            x = rng.uniform(inst.box.lower, inst.box.upper)
            if inst.name.startswith("dvg"):
                # beyond x5 ~ 3 the cos(t e^x5) term oscillates far below the
                # finite-difference step, so sample where the oracle is meaningful
                x[1] = min(x[1], 10.0)
                x[4] = min(x[4], 2.5)
            assert_gradient_matches(inst.fn, inst.grad, x, rel=1e-4)


def test_catalogue_objective_factory_counts_fresh():
    inst = catalogue_by_name("quad-10")
    o1 = inst.make_objective()
    o1.value(inst.x0)
    o2 = inst.make_objective()
    assert o1.eval_count == 1 and o2.eval_count == 0


def test_catalogue_json_round_trip():
    doc = json.loads(catalogue_json())
    assert len(doc) == 6
    for entry in doc:
        inst = catalogue_by_name(entry["name"])
        assert entry["dim"] == inst.dim
        assert np.allclose(entry["x0"], inst.x0)
        assert np.allclose(entry["box"]["lower"], inst.box.lower)
        rebuilt = instance_from_spec({"name": entry["name"]})
        assert rebuilt.dim == inst.dim
        assert np.array_equal(rebuilt.x0, inst.x0)


def test_inline_quadratic_spec():
    inst = instance_from_spec(
        {"type": "quadratic", "n": 6, "scale": 1.0, "seed": 11, "half_width": 4.0}
    )
    assert inst.dim == 6
    assert inst.box.contains(inst.x0)
    with pytest.raises(ValueError):
        instance_from_spec({"type": "quadratic", "n": 6, "scale": 1.0, "seed": 1,
                            "half_width": 4.0, "extra": True})
    with pytest.raises(KeyError):
        instance_from_spec({"name": "no-such-instance"})
