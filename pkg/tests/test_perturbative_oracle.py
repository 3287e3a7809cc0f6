"""Tests for the first-order amplitude/probability oracle.

Cross-checks the phase-panel quadrature against scipy's adaptive quadrature
on independently derived integrand forms, and pins the structural properties
(monotone partial sums, mover symmetry, tail bookkeeping, Boltzmann match).
"""

import numpy as np
import pytest
from scipy.integrate import quad

from unruhsim.cavity_modes import BoundaryCondition, CouplingScheme, ModeSet
from unruhsim.evolution_engine import integrate_interaction
from unruhsim.perturbative_oracle import (
    ProbabilityResult,
    amplitude_records,
    boltzmann_temperature,
    converged_probability,
    excitation_probability,
    first_order_amplitude,
)
from unruhsim.trajectory import Worldline, coordinate_time, position, switching

L = 144.0 * np.pi


def _quad_amplitude(modes: ModeSet, w: Worldline, n: int) -> complex:
    """Adaptive-quadrature route: integrate lambda e^{i Omega tau} u_n* directly."""
    from unruhsim.cavity_modes import mode_function

    def integrand(tau: float) -> complex:
        u = mode_function(modes.bc, n, position(w, tau), coordinate_time(w, tau), modes.L)
        return switching(w, tau) * np.exp(1j * w.Omega_d * tau) * np.conj(u)

    re = quad(lambda t: integrand(t).real, -w.T, w.T, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    im = quad(lambda t: integrand(t).imag, -w.T, w.T, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return re + 1j * im


@pytest.mark.parametrize(
    "bc, n",
    [
        (BoundaryCondition.DIRICHLET, 5),
        (BoundaryCondition.DIRICHLET, 40),
        (BoundaryCondition.NEUMANN, 8),
        (BoundaryCondition.PERIODIC, 12),
        (BoundaryCondition.PERIODIC, -12),
    ],
)
def test_amplitude_matches_adaptive_quadrature(bc, n):
    w = Worldline(a=1.0)
    count = 96 if bc is BoundaryCondition.PERIODIC else 96
    modes = ModeSet.build(bc, count, L)
    mine = first_order_amplitude(modes, w, n)
    ref = _quad_amplitude(modes, w, n)
    assert mine == pytest.approx(ref, rel=1e-9, abs=1e-15)


def test_periodic_amplitude_matches_exponential_phase_form():
    # for a right mover the phase collapses to Omega tau - (omega/a) e^{-a tau}
    # up to constants; rederive the amplitude in that form with scipy quad
    w = Worldline(a=1.2)
    modes = ModeSet.build(BoundaryCondition.PERIODIC, 64, L)
    for n in (6, 15):
        k = 2.0 * n * np.pi / L
        omega = abs(k)

        def integrand(tau: float) -> complex:
            phase = w.Omega_d * tau - (omega / w.a) * (np.exp(-w.a * tau) - 1.0)
            return switching(w, tau) * np.exp(1j * phase)

        re = quad(lambda t: integrand(t).real, -w.T, w.T, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
        im = quad(lambda t: integrand(t).imag, -w.T, w.T, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
        ref = np.exp(-1j * omega * L / 2.0) * (re + 1j * im) / np.sqrt(2.0 * omega * L)
        mine = first_order_amplitude(modes, w, n)
        assert mine == pytest.approx(ref, rel=1e-9, abs=1e-15)


def test_zero_coupling_amplitudes_vanish():
    w = Worldline(a=1.0, lambda0=0.0)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 16, L)
    assert first_order_amplitude(modes, w, 3) == 0.0
    assert excitation_probability(modes, w) == 0.0
    res = converged_probability(modes, w)
    assert res.probability == 0.0
    assert res.tail_estimate == 0.0
    assert res.converged


def test_panel_refinement_is_converged():
    # halving every quadrature panel must not move the answer
    w = Worldline(a=1.4)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 128, L)
    for n in (1, 9, 96):
        coarse = first_order_amplitude(modes, w, n, panel_scale=1.0)
        fine = first_order_amplitude(modes, w, n, panel_scale=0.5)
        assert coarse == pytest.approx(fine, rel=1e-10, abs=1e-18)


def test_partial_sums_monotone():
    w = Worldline(a=1.0)
    modes = ModeSet.build(BoundaryCondition.NEUMANN, 48, L)
    sums = [excitation_probability(modes, w, n_max) for n_max in (1, 6, 12, 24, 48)]
    assert all(b >= a for a, b in zip(sums, sums[1:]))
    assert sums[-1] > 0.0


def test_periodic_movers_conjugate_pair():
    # x(tau) is even and t(tau) odd, so A_{-n} = conj(A_n) for periodic modes
    w = Worldline(a=1.3)
    modes = ModeSet.build(BoundaryCondition.PERIODIC, 32, L)
    for n in (1, 4, 11):
        right = first_order_amplitude(modes, w, n)
        left = first_order_amplitude(modes, w, -n)
        assert left == pytest.approx(np.conj(right), rel=1e-9, abs=1e-18)


def test_beyond_doppler_window_suppressed():
    w = Worldline(a=0.5)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 3000, L)
    # response lives below omega ~ Omega_d cosh(aT) (n ~ 1200 here); modes
    # far past that window only see the switching tail
    peak = max(abs(first_order_amplitude(modes, w, n)) for n in range(1, 400, 7))
    far = abs(first_order_amplitude(modes, w, 3000))
    assert peak > 1e3 * far


def test_probability_matches_weak_coupling_occupation():
    # at O(lambda^2) the exact mean occupation equals the perturbative
    # probability; same truncated mode pool on both sides
    w = Worldline(a=1.0)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 16, L)
    result = integrate_interaction(modes, CouplingScheme.AMPLITUDE, w, 1e-12)
    occupation = (result.detector.nu - 1.0) / 2.0
    P = excitation_probability(modes, w)
    assert P == pytest.approx(occupation, rel=1e-3)


def test_converged_probability_prefix_equality():
    w = Worldline(a=0.8)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 256, L)
    res = converged_probability(modes, w, rel_tail=1e-3, start_block=16)
    assert isinstance(res, ProbabilityResult)
    # the tail stop only truncates the kept-order prefix sum
    assert res.probability == excitation_probability(modes, w, res.n_used)
    assert res.probability <= excitation_probability(modes, w) + 1e-30
    assert res.rel_tail == 1e-3


def test_converged_probability_tail_flag():
    w = Worldline(a=0.8)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 128, L)
    loose = converged_probability(modes, w, rel_tail=0.5, start_block=8)
    assert loose.converged
    assert loose.n_used < modes.n_modes
    strict = converged_probability(modes, w, rel_tail=1e-15, start_block=8)
    assert strict.n_used == modes.n_modes
    assert not strict.converged
    assert strict.tail_estimate > strict.rel_tail * strict.probability
    with pytest.raises(ValueError):
        converged_probability(modes, w, rel_tail=0.0)


def test_converged_probability_periodic_keeps_pairs():
    w = Worldline(a=0.8)
    modes = ModeSet.build(BoundaryCondition.PERIODIC, 64, L)
    res = converged_probability(modes, w, rel_tail=0.5, start_block=8)
    assert res.n_used % 2 == 0


def test_amplitude_records_match_probability():
    w = Worldline(a=1.0)
    modes = ModeSet.build(BoundaryCondition.NEUMANN, 24, L)
    records = amplitude_records(modes, w)
    assert [rec.label for rec in records] == list(modes.labels)
    for rec in records:
        assert rec.probability == abs(rec.amplitude) ** 2
    assert excitation_probability(modes, w) == pytest.approx(
        sum(rec.probability for rec in records), rel=1e-15
    )


def test_amplitude_input_validation():
    w = Worldline(a=1.0)
    modes = ModeSet.build(BoundaryCondition.DIRICHLET, 8, L)
    with pytest.raises(ValueError):
        first_order_amplitude(modes, w, 9)
    with pytest.raises(ValueError):
        first_order_amplitude(modes, w, 3, panel_scale=0.0)
    with pytest.raises(ValueError):
        amplitude_records(modes, w, n_max=0)
    with pytest.raises(ValueError):
        amplitude_records(modes, w, n_max=9)


def test_boltzmann_temperature_inversion():
    Om = 2.25
    # (1 - P)/P = e  =>  T = Omega_d
    P = 1.0 / (1.0 + np.e)
    assert boltzmann_temperature(P, Om) == pytest.approx(Om, rel=1e-14)
    # occupation route and Boltzmann route agree at leading order in P
    P = 1e-6
    nu = 1.0 + 2.0 * P
    from unruhsim.analysis import detector_temperature

    assert boltzmann_temperature(P, Om) == pytest.approx(
        detector_temperature(nu, Om), rel=1e-5
    )
    for bad in (0.0, 0.5, 0.7, -0.1):
        with pytest.raises(ValueError):
            boltzmann_temperature(bad, Om)
    with pytest.raises(ValueError):
        boltzmann_temperature(0.1, 0.0)
