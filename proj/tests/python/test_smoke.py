"""Smoke tests for the compiled module: shapes, key values, a small train run."""

import numpy as np
import pytest

try:
    import gsc
except ImportError:
    import _gsc as gsc


def test_respond_gp_exact_projection():
    w = np.array([1.0, 0.0])
    moved = gsc.respond_gp_exact(w, np.array([-1.0, 0.0]), 1)
    assert np.allclose(moved, [0.0, 0.0], atol=1e-8)
    stay = gsc.respond_gp_exact(w, np.array([-3.0, 0.0]), 1)
    assert np.allclose(stay, [-3.0, 0.0])


def test_smoothed_response_gate():
    w = np.array([1.0, 0.0])
    x = np.array([-1.0, 0.0])
    moved = gsc.respond_gp_smoothed(w, x, 1, temperature=1.0)
    gate = 1.0 / (1.0 + np.exp(-1.0))
    assert moved[0] == pytest.approx(-1.0 + gate)


def test_flipping_cost_and_distance():
    w = np.array([3.0, 4.0])
    assert gsc.flipping_cost(w, np.array([1.0, 1.0])) == pytest.approx(1.4)
    assert gsc.strategic_distance_gp(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 1) == 3.0


def test_s_hinge_value_and_grad():
    value, grad = gsc.s_hinge_gp(np.array([1.0, 0.0]), np.array([0.5, 0.0]), -1, 1)
    assert value == pytest.approx(2.5)
    assert grad.shape == (2,)


def test_bound_constants():
    assert gsc.bound_rho("GSC", 5.0) == 10.0
    assert gsc.bound_rho("GP", 5.0) == 7.0
    assert gsc.bound_rho("NL", 5.0, 0.5) == 5.0
    assert gsc.bound_rho("NL", 5.0, 1.0) == 7.0
    big_m = gsc.bound_value("GP", 0.25, 1.0, 5.0, 1e12, 0.05)
    assert big_m == pytest.approx(0.25, abs=1e-3)


def test_ppe_squared_response_scalar():
    x_new = gsc.respond_ppe_squared(
        np.array([[1.0]]), np.array([0.0]), np.array([[1.0]]), np.array([1.0])
    )
    assert x_new[0] == pytest.approx(2.0 / 3.0)


def test_train_and_evaluate_roundtrip():
    (Xtr, ztr, ytr), (Xte, zte, yte) = gsc.gen_generalization_env("NL", seed=0, n_test=200)
    result = gsc.train_soft("s-hinge", "NL", Xtr, ztr, ytr, lambda_reg=0.1, epochs=80)
    report = gsc.evaluate("NL", 0.0, result["w"], Xte, zte, yte)
    assert report["strategic_accuracy"] > 0.9

    again = gsc.train_soft("s-hinge", "NL", Xtr, ztr, ytr, lambda_reg=0.1, epochs=80)
    assert np.array_equal(result["w"], again["w"])


def test_errors_are_typed():
    with pytest.raises(Exception):
        gsc.respond_gp_exact(np.zeros(2), np.zeros(2), 1)
