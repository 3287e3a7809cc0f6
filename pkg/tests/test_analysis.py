"""Tests for thermality diagnosis, temperature extraction, and curve fits."""

import numpy as np
import pytest

from unruhsim.analysis import (
    THERMALITY_THRESHOLD,
    compare_boundary_conditions,
    detector_temperature,
    fit_temperature_curve,
    thermality,
)
from unruhsim.gaussian_core import DetectorState


def test_detector_temperature_values():
    assert detector_temperature(1.0, 2.25) == 0.0
    # nu = 1 + 2/(e - 1) gives ln(1 + 2/(nu-1)) = 1, so T = Omega_d
    nu = 1.0 + 2.0 / (np.e - 1.0)
    assert detector_temperature(nu, 2.25) == pytest.approx(2.25, rel=1e-14)
    # hot limit: nu = 1 + 2 nbar, T -> Omega_d nbar for nbar >> 1
    assert detector_temperature(1.0 + 2e6, 1.0) == pytest.approx(1e6, rel=1e-5)
    with pytest.raises(ValueError):
        detector_temperature(0.999, 2.25)
    with pytest.raises(ValueError):
        detector_temperature(1.5, 0.0)


def test_detector_temperature_monotone():
    nus = 1.0 + np.logspace(-8, 2, 30)
    temps = [detector_temperature(nu, 2.25) for nu in nus]
    assert all(b > a for a, b in zip(temps, temps[1:]))


def _state(nu: float, r: float) -> DetectorState:
    lam = np.array([nu * np.exp(r), nu * np.exp(-r)])
    return DetectorState(sigma_d=np.diag(lam), nu=nu, r=r)


def test_thermality_thermal_state():
    rep = thermality(_state(1.001, 1e-6), 2.25)
    assert rep.delta_ratio == pytest.approx(1e-12 / 1e-3, rel=1e-12)
    assert rep.thermal
    assert rep.temperature == pytest.approx(detector_temperature(1.001, 2.25), rel=1e-15)
    assert rep.threshold == THERMALITY_THRESHOLD


def test_thermality_vacuum_and_pure_squeeze():
    vac = thermality(_state(1.0, 0.0), 2.25)
    assert vac.delta_ratio == 0.0 and vac.thermal and vac.temperature == 0.0
    assert vac.energy_above_ground == 0.0
    sq = thermality(_state(1.0, 0.3), 2.25)
    assert np.isinf(sq.delta_ratio) and not sq.thermal
    assert sq.energy_above_ground == pytest.approx(2.25 * 0.5 * 0.09, rel=1e-12)


def test_thermality_threshold_flag():
    # delta = r^2/(nu - 1): 9e-4 below the default threshold, 1.6e-3 above
    assert thermality(_state(1.01, 3e-3), 1.0).thermal
    assert not thermality(_state(1.01, 4e-3), 1.0).thermal
    assert not thermality(_state(1.01, 3e-3), 1.0, threshold=1e-4).thermal


def test_fit_exact_line():
    a = np.linspace(0.5, 1.5, 7)
    fit = fit_temperature_curve(np.column_stack([a, 2.0 * a + 0.1]))
    assert fit.slope == pytest.approx(2.0, rel=1e-12)
    assert fit.intercept == pytest.approx(0.1, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-14)
    assert fit.max_residual < 1e-12
    assert fit.points[0] == pytest.approx((0.5, 1.1))


def test_fit_least_squares_against_polyfit():
    rng = np.random.default_rng(7)
    a = np.linspace(0.2, 1.8, 12)
    T = 1.3 * a + 0.05 + 0.01 * rng.standard_normal(a.size)
    fit = fit_temperature_curve(list(zip(a, T)))
    slope, intercept = np.polyfit(a, T, 1)
    assert fit.slope == pytest.approx(slope, rel=1e-12)
    assert fit.intercept == pytest.approx(intercept, rel=1e-12)
    assert 0.0 < fit.r_squared < 1.0


def test_fit_constant_curve_r_squared_convention():
    a = np.array([0.5, 1.0, 1.5])
    fit = fit_temperature_curve(np.column_stack([a, np.full(3, 0.7)]))
    assert fit.slope == pytest.approx(0.0, abs=1e-14)
    assert fit.r_squared == 1.0


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit_temperature_curve([(1.0, 2.0), (2.0, 3.0)])
    with pytest.raises(ValueError):
        fit_temperature_curve([(1.0, 2.0), (1.0, 3.0), (1.0, 4.0)])
    with pytest.raises(ValueError):
        fit_temperature_curve(np.zeros((3, 3)))


def test_compare_boundary_conditions_known_inputs():
    a = np.linspace(1.0, 2.0, 5)
    fits = {
        "one": fit_temperature_curve(np.column_stack([a, 1.00 * a])),
        "two": fit_temperature_curve(np.column_stack([a, 1.02 * a])),
        "three": fit_temperature_curve(np.column_stack([a, 0.99 * a])),
    }
    cmpd = compare_boundary_conditions(fits)
    assert [p.first + "/" + p.second for p in cmpd.pairs] == [
        "one/two",
        "one/three",
        "two/three",
    ]
    # |1.00 - 1.02| / 1.01 pointwise, independent of a for proportional curves
    assert cmpd.pairs[0].max_rel_difference == pytest.approx(0.02 / 1.01, rel=1e-12)
    assert cmpd.pairs[0].slope_ratio == pytest.approx(1.0 / 1.02, rel=1e-12)
    assert cmpd.max_rel_difference == pytest.approx(0.03 / 1.005, rel=1e-12)
    assert cmpd.max_slope_ratio_deviation == pytest.approx(1.02 / 0.99 - 1.0, rel=1e-12)


def test_compare_requires_matching_grids():
    a1 = np.linspace(1.0, 2.0, 5)
    a2 = np.linspace(1.0, 2.0, 6)
    fits = {
        "one": fit_temperature_curve(np.column_stack([a1, a1])),
        "two": fit_temperature_curve(np.column_stack([a2, a2])),
    }
    with pytest.raises(ValueError):
        compare_boundary_conditions(fits)
    with pytest.raises(ValueError):
        compare_boundary_conditions({"one": fits["one"]})


def test_compare_zero_temperature_points():
    # zero-coupling sweeps produce all-zero temperatures; comparison must not
    # divide by zero
    a = np.linspace(1.0, 2.0, 4)
    z = fit_temperature_curve(np.column_stack([a, np.zeros(4)]))
    cmpd = compare_boundary_conditions({"one": z, "two": z})
    assert cmpd.max_rel_difference == 0.0
    assert np.isinf(cmpd.pairs[0].slope_ratio) or cmpd.pairs[0].slope_ratio == pytest.approx(1.0)
