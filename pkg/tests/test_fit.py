import numpy as np
import pytest

from pea.core import EllipseParams, full_objective, reduced_objective
from pea.datagen import ellipse_grid
from pea.errors import DimensionError, InvalidParameterError
from pea.fit import (
    FitConfig,
    clamp,
    fit,
    init_params,
    update_center,
    update_directions,
    update_weights,
)


def E(mu, w, lo=0.1, hi=10.0):
    return EllipseParams(np.array(mu, float), np.array(w, float), lo, hi)


@pytest.mark.parametrize("x, mu, w, expected", [
    ([3, 4], [0, 0], [1, 1], [0.6, 0.8]),
    ([2, 0], [1, 0], [2, 1], [1, 0]),
    ([1, 1], [1, 1], [1, 1], [1, 0]),  # degenerate: e1
])
def test_update_directions_examples(x, mu, w, expected):
    U = update_directions([x], E(mu, w))
    np.testing.assert_allclose(U[0], expected, atol=1e-15)


@pytest.mark.parametrize("X, w, U, expected", [
    ([[1], [3]], [1], [[1], [-1]], [2.0]),
    ([[1], [3]], [1], [[1], [1]], [1.0]),
    ([[5]], [2], [[1]], [4.5]),
])
def test_update_center_examples(X, w, U, expected):
    np.testing.assert_allclose(update_center(X, w, U), expected, atol=1e-15)


def test_update_center_rejects_nonpositive_weights():
    with pytest.raises(InvalidParameterError):
        update_center([[1.0]], [0.0], [[1.0]])


@pytest.mark.parametrize("x, expected", [(0.5, 1), (3, 2), (1.5, 1.5)])
def test_clamp_examples(x, expected):
    assert clamp(x, 1, 2) == expected


def test_clamp_rejects_inverted_bounds():
    with pytest.raises(InvalidParameterError):
        clamp(1.0, 2.0, 1.0)


@pytest.mark.parametrize("X, mu, U, lo, hi, expected", [
    ([[-2], [2]], [0], [[-1], [1]], 0.1, 10, [0.5]),
    ([[-2], [2]], [0], [[-1], [1]], 1, 10, [1.0]),
    ([[3], [3]], [3], [[1], [-1]], 0.1, 10, [10.0]),  # no spread: upper bound
])
def test_update_weights_examples(X, mu, U, lo, hi, expected):
    np.testing.assert_allclose(update_weights(X, mu, U, lo, hi), expected, atol=1e-15)


def test_update_shape_errors():
    with pytest.raises(DimensionError):
        update_weights([[1.0, 2.0]], [0.0], [[1.0, 0.0]], 0.1, 10)
    with pytest.raises(DimensionError):
        update_center([[1.0, 2.0]], [1.0, 1.0], [[1.0]])


def test_init_params_examples():
    cfg = FitConfig(0.1, 10)
    p = init_params([[0, 0], [2, 0], [0, 2], [2, 2]], cfg)
    np.testing.assert_allclose(p.mu, [1, 1])
    np.testing.assert_allclose(p.w, [1, 1])
    p = init_params([[5, 5]] * 3, cfg)
    np.testing.assert_allclose(p.mu, [5, 5])
    np.testing.assert_allclose(p.w, [10, 10])
    p = init_params([[-1], [1]], cfg)
    np.testing.assert_allclose(p.mu, [0])
    np.testing.assert_allclose(p.w, [1])


def test_fit_config_validation():
    with pytest.raises(InvalidParameterError):
        FitConfig(lambda_lo=0)
    with pytest.raises(InvalidParameterError):
        FitConfig(lambda_lo=2, lambda_hi=1)
    with pytest.raises(InvalidParameterError):
        FitConfig(max_iter=0)
    with pytest.raises(InvalidParameterError):
        FitConfig(tol=0)


def test_fit_recovers_exact_ellipse():
    X = ellipse_grid((0, 0), (2, 1), 500)
    r = fit(X, FitConfig(0.1, 10))
    assert reduced_objective(X, r.params) < 1e-12
    np.testing.assert_allclose(r.params.w, [0.5, 1.0], atol=1e-6)
    np.testing.assert_allclose(r.params.mu, [0, 0], atol=1e-6)
    assert r.converged


def test_fit_unit_circle():
    X = ellipse_grid((0, 0), (1, 1), 64)
    r = fit(X, FitConfig(0.5, 2))
    np.testing.assert_allclose(r.params.w, [1, 1], atol=1e-9)
    np.testing.assert_allclose(r.params.mu, [0, 0], atol=1e-9)
    assert r.objective < 1e-18


def test_fit_single_point():
    r = fit([[1.0, 0.0]], FitConfig(0.1, 10))
    assert r.objective == pytest.approx(0.0, abs=1e-24)
    assert reduced_objective([[1.0, 0.0]], r.params) < 1e-24


def test_fit_trace_matches_returned_state():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    r = fit(X, FitConfig(max_iter=30))
    assert r.iterations == len(r.objective_trace) == len(r.step_trace) // 3
    assert r.objective_trace[-1] == full_objective(X, r.params, r.directions)


@pytest.mark.parametrize("seed", range(30))
def test_per_step_monotone_and_feasible(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(10, 200)), int(rng.integers(1, 11))
    X = rng.normal(size=(n, p)) * rng.uniform(0.5, 3, size=p) + rng.normal(size=p)
    cfg = FitConfig(0.2, 5.0, max_iter=100)
    init = EllipseParams(rng.normal(size=p), rng.uniform(0.2, 5.0, size=p), 0.2, 5.0)
    r = fit(X, cfg, init=init)
    assert np.all(np.diff(r.step_trace) <= 1e-10)
    assert np.all((r.params.w >= 0.2) & (r.params.w <= 5.0))
    assert np.allclose(np.linalg.norm(r.directions, axis=1), 1.0, atol=1e-12)


def test_translation_equivariance():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(60, 2)) * [2.0, 1.0]
    t = np.array([3.0, -7.5])
    a = fit(X, FitConfig(max_iter=50))
    b = fit(X + t, FitConfig(max_iter=50))
    np.testing.assert_allclose(b.params.mu, a.params.mu + t, atol=1e-9)
    np.testing.assert_allclose(b.params.w, a.params.w, rtol=1e-9)
    np.testing.assert_allclose(b.objective_trace, a.objective_trace, rtol=1e-9, atol=1e-12)


def test_scale_equivariance():
    rng = np.random.default_rng(6)
    t = rng.uniform(0, 2 * np.pi, 80)
    X = np.column_stack([2 * np.cos(t), np.sin(t)]) + 0.05 * rng.normal(size=(80, 2))
    s = 2.0
    a = fit(X, FitConfig(0.1, 10, max_iter=40))
    b = fit(s * X, FitConfig(0.1 / s, 10 / s, max_iter=40))
    assert np.all((a.params.w > 0.1) & (a.params.w < 10))
    np.testing.assert_allclose(b.params.w, a.params.w / s, rtol=1e-12)
    np.testing.assert_allclose(b.params.mu, a.params.mu * s, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(b.objective_trace, a.objective_trace, rtol=1e-12, atol=1e-15)


def test_fixed_point():
    rng = np.random.default_rng(7)
    t = rng.uniform(0, 2 * np.pi, 200)
    X = np.column_stack([3 * np.cos(t), np.sin(t)]) + 0.1 * rng.normal(size=(200, 2))
    cfg = FitConfig(tol=1e-10, max_iter=5000)
    first = fit(X, cfg)
    assert first.converged
    again = fit(X, cfg, init=first.params)
    assert abs(again.objective_trace[0] - first.objective) <= cfg.tol * max(1.0, first.objective)
    assert abs(again.objective - first.objective) <= cfg.tol * max(1.0, first.objective)


def test_fit_stops_at_max_iter():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(50, 2))
    r = fit(X, FitConfig(max_iter=3, tol=1e-300))
    assert r.iterations == 3 and not r.converged
