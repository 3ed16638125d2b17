import numpy as np
import pytest

from src.exceptions import ParameterError
from src.models import ModelParams, PopDensity
from src.ode import (
    center_manifold,
    center_manifold_decay,
    characteristic_eigenvalues,
    classify,
    decay_bounds,
    fixed_points,
    integrate,
    jacobian,
    jacobian_at_AA,
    jacobian_at_aa,
    jacobian_numeric,
    restart_at_level,
    rhs,
)
from src.ode.analysis import STABLE_DEGENERATE, UNSTABLE, closed_form_eigenvalues


def test_equilibria_are_fixed(params):
    assert np.allclose(rhs(PopDensity(x=2.7, y=0.0, z=0.0), params), 0.0, atol=1e-12)
    assert np.allclose(rhs(PopDensity(x=0.0, y=0.0, z=3.0), params), 0.0, atol=1e-12)
    assert np.allclose(rhs(PopDensity(x=0.0, y=0.0, z=0.0), params), 0.0)


def test_total_density_balance(params):
    state = PopDensity(x=1.2, y=0.7, z=0.4)
    sigma = 2.3
    expected = sigma * (params.f - params.D - params.c * sigma) - params.delta * state.x
    assert rhs(state, params).sum() == pytest.approx(expected)


def test_closed_form_jacobians_match_analytic(params, codominant):
    for p in (params, codominant):
        assert np.allclose(jacobian_at_aa(p), jacobian(PopDensity(x=p.nbar_a, y=0, z=0), p), atol=1e-12)
        assert np.allclose(jacobian_at_AA(p), jacobian(PopDensity(x=0, y=0, z=p.nbar_A), p), atol=1e-12)


def test_analytic_jacobian_matches_finite_differences(params, codominant):
    point = PopDensity(x=1.2, y=0.7, z=0.9)
    for p in (params, codominant):
        assert np.allclose(jacobian(point, p), jacobian_numeric(point, p), atol=1e-6)


def test_eigenvalues(params):
    at_aa, at_AA = closed_form_eigenvalues(params)
    assert at_aa == pytest.approx([-3.7, -2.7, 0.3])
    assert at_AA == pytest.approx([-4.3, -3.0, 0.0])
    assert characteristic_eigenvalues(jacobian_at_aa(params)) == pytest.approx([-3.7, -2.7, 0.3])
    assert characteristic_eigenvalues(jacobian_at_AA(params)) == pytest.approx([-4.3, -3.0, 0.0], abs=1e-9)


def test_fixed_point_reports(params):
    resident, mutant = fixed_points(params)
    assert resident.classification == UNSTABLE
    assert mutant.classification == STABLE_DEGENERATE
    assert resident.residual < 1e-12
    assert mutant.point.z == pytest.approx(3.0)


def test_codominant_mutant_is_hyperbolic(codominant):
    _, at_AA = closed_form_eigenvalues(codominant)
    assert max(at_AA) == pytest.approx(-0.15)
    assert classify(np.array(at_AA)) == "stable"


def test_classify_complex():
    assert classify(np.array([-1 + 1j, -1 - 1j, -2 + 0j])) == "other"


def test_center_manifold_coefficients(params):
    model = center_manifold(params)
    assert model.h1 == pytest.approx(0.0411449, abs=1e-6)
    assert model.h2 == pytest.approx(0.0775194, abs=1e-7)
    assert model.flow_coeff == pytest.approx(0.0465116, abs=1e-7)
    assert len(model.transform) == 3


def test_center_manifold_needs_natural_death():
    with pytest.raises(ParameterError):
        center_manifold(ModelParams(f=4.0, D=0.0, delta=0.3, c=1.0, K=100))


def test_decay_bounds(params):
    lower, upper = decay_bounds(params, 0.05, 0.6, 0.0)
    assert lower == pytest.approx(0.05)
    assert upper == pytest.approx(0.05)
    lower, upper = decay_bounds(params, 0.05, 0.6, 1000.0)
    assert upper == pytest.approx(0.0231183, abs=1e-7)
    assert lower < center_manifold_decay(params, 0.05, 1000.0) < upper


def test_decay_bounds_vectorized(params):
    t = np.linspace(0, 100, 11)
    lower, upper = decay_bounds(params, 0.05, 0.6, t)
    assert lower.shape == t.shape
    assert np.all(lower <= upper)


@pytest.mark.parametrize("rho", [0.0, 1.2])
def test_decay_bounds_rejects_rho(params, rho):
    with pytest.raises(ParameterError, match="ϱ"):
        decay_bounds(params, 0.05, rho, 1.0)


def test_integrate_reaches_mutant_equilibrium(params):
    path = integrate(params, PopDensity(x=2.6, y=0.1, z=0.0), 2000.0)
    final = path.final_state()
    assert final.x < 1e-3
    assert final.y < 0.05
    assert final.sigma == pytest.approx(3.0, abs=0.05)
    assert np.all(path.states >= 0)


def test_integrate_frames(params):
    path = integrate(params, PopDensity(x=2.6, y=0.1, z=0.0), 10.0)
    frame = path.sampled(1.0)
    assert list(frame.columns) == ["t", "x_aa", "y_aA", "z_AA"]
    assert frame["t"].tolist() == pytest.approx(list(range(11)))
    assert frame.iloc[0]["y_aA"] == pytest.approx(0.1)


def test_integrate_rejects_empty_interval(params):
    with pytest.raises(ParameterError):
        integrate(params, PopDensity(x=2.6, y=0.1, z=0.0), 0.0)


def test_restart_at_level(params):
    hit = restart_at_level(params, PopDensity(x=2.6, y=0.1, z=0.0), 0.05, 1e4)
    assert hit is not None
    assert hit.t > 0
    assert hit.state.y == pytest.approx(0.05, abs=1e-8)


def test_restart_without_crossing(params):
    assert restart_at_level(params, PopDensity(x=2.6, y=0.1, z=0.0), 0.05, 1.0) is None
