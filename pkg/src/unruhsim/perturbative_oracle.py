"""First-order perturbative excitation amplitudes and probability.

The transition amplitude into mode ``n`` after one switched pass is

    A_n = integral_{-T}^{T} lambda(tau) e^{i Omega_d tau} u_n*(x(tau), t(tau)) dtau.

Each mode function splits into travelling-wave branches whose phase
``Phi(tau) = Omega_d tau + omega t(tau) - kappa x(tau)`` (|kappa| = omega) is
strictly monotone along the trajectory, so the integral is evaluated on
Gauss-Legendre panels bounded by equal-phase knots.  At unit ``panel_scale``
the phase step is pi/2, i.e. panels shrink to width <= pi/(4 omega cosh(aT))
near the endpoints where the Doppler factor is largest; extra uniform knots
resolve the switching envelope for low-frequency modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from unruhsim.cavity_modes import BoundaryCondition, ModeSet
from unruhsim.trajectory import Worldline, coordinate_time, position, switching

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
_ENVELOPE_KNOTS = 33
_PHASE_GRID = 1025


def _phase(w: Worldline, tau, omega: float, kappa: float):
    return w.Omega_d * tau + omega * coordinate_time(w, tau) - kappa * position(w, tau)


def _branch_integral(w: Worldline, omega: float, kappa: float, panel_scale: float) -> complex:
    """integral of lambda(tau) exp(i Phi(tau)) dtau over [-T, T]."""
    step = 0.5 * np.pi * panel_scale
    grid = np.linspace(-w.T, w.T, _PHASE_GRID)
    phi = _phase(w, grid, omega, kappa)
    # Phi' = Omega_d + omega cosh(a tau) - kappa sinh(a tau) >= Omega_d > 0,
    # so phi is increasing and invertible by interpolation
    targets = np.arange(phi[0] + step, phi[-1], step)
    knots = np.union1d(np.interp(targets, phi, grid), np.linspace(-w.T, w.T, _ENVELOPE_KNOTS))
    lo, hi = knots[:-1], knots[1:]
    half = 0.5 * (hi - lo)
    pts = (0.5 * (lo + hi)[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    vals = switching(w, pts) * np.exp(1j * _phase(w, pts, omega, kappa))
    return complex(np.sum(vals * wts))


def first_order_amplitude(
    modes: ModeSet, w: Worldline, n: int, panel_scale: float = 1.0
) -> complex:
    """Amplitude A_n for mode label ``n`` of the given mode set.

    ``panel_scale`` shrinks (< 1) or stretches (> 1) every quadrature panel;
    halving it is the standard convergence check.
    """
    if panel_scale <= 0.0:
        raise ValueError(f"panel_scale must be positive, got {panel_scale}")
    if n not in modes.labels:
        raise ValueError(f"mode label {n} not in this {modes.bc.value} mode set")
    L = modes.L
    if modes.bc is BoundaryCondition.PERIODIC:
        k = 2.0 * n * np.pi / L
        omega = abs(k)
        return _branch_integral(w, omega, k, panel_scale) / np.sqrt(2.0 * omega * L)
    k = n * np.pi / L
    plus = _branch_integral(w, k, -k, panel_scale)  # e^{+ikx} branch
    minus = _branch_integral(w, k, +k, panel_scale)  # e^{-ikx} branch
    if modes.bc is BoundaryCondition.DIRICHLET:
        return (plus - minus) / (2j * np.sqrt(k * L))
    return (plus + minus) / (2.0 * np.sqrt(k * L))


@dataclass(frozen=True)
class AmplitudeRecord:
    """Per-mode amplitude; for periodic sets the label's sign is the mover branch."""

    label: int
    amplitude: complex
    probability: float


def amplitude_records(
    modes: ModeSet, w: Worldline, n_max: int | None = None, panel_scale: float = 1.0
) -> list[AmplitudeRecord]:
    """Amplitudes of the first ``n_max`` kept mode labels (all by default)."""
    if n_max is None:
        n_max = modes.n_modes
    if not 1 <= n_max <= modes.n_modes:
        raise ValueError(f"n_max must be in [1, {modes.n_modes}], got {n_max}")
    records = []
    for label in modes.labels[:n_max]:
        amp = first_order_amplitude(modes, w, int(label), panel_scale)
        records.append(AmplitudeRecord(int(label), amp, abs(amp) ** 2))
    return records


def excitation_probability(
    modes: ModeSet, w: Worldline, n_max: int | None = None, panel_scale: float = 1.0
) -> float:
    """First-order excitation probability: sum of |A_n|^2 over kept modes.

    Partial sums are monotone non-decreasing in ``n_max``.
    """
    return float(
        sum(rec.probability for rec in amplitude_records(modes, w, n_max, panel_scale))
    )


@dataclass(frozen=True)
class ProbabilityResult:
    """Tail-audited mode sum.

    ``tail_estimate`` is the Richardson (geometric) extrapolation of the
    contributions beyond ``n_used``; ``converged`` records whether it is below
    ``rel_tail * probability``.  High accelerations Doppler-spread the
    response into a slow log-tail that a finite mode pool may not close, so
    non-convergence is reported, not raised.
    """

    probability: float
    n_used: int
    tail_estimate: float
    rel_tail: float
    converged: bool


def converged_probability(
    modes: ModeSet,
    w: Worldline,
    rel_tail: float = 1e-4,
    panel_scale: float = 1.0,
    start_block: int = 64,
) -> ProbabilityResult:
    """Sum |A_n|^2 in kept order with a doubling-block tail stop.

    After each doubling of the kept-mode count the increment is compared with
    the previous one; once the geometric tail extrapolation falls below
    ``rel_tail`` of the running sum, the remaining (more expensive,
    high-frequency) modes are skipped.  The partial sums visited are exactly
    ``excitation_probability(modes, w, c)`` for the block counts ``c``.
    """
    if rel_tail <= 0.0:
        raise ValueError(f"rel_tail must be positive, got {rel_tail}")
    N = modes.n_modes
    periodic = modes.bc is BoundaryCondition.PERIODIC
    # halve down from N so every consecutive pair spans one full octave
    # (the tail ratio is octave-to-octave); keep counts even for periodic
    # sets so left/right movers stay paired
    counts = [N]
    floor = min(max(2, start_block), N)
    while counts[-1] > floor:
        nxt = (counts[-1] + 1) // 2
        if periodic and nxt % 2:
            nxt += 1
        if nxt >= counts[-1]:
            break
        counts.append(nxt)
    counts.reverse()

    total = 0.0
    done = 0
    prev_delta: float | None = None
    tail = np.inf
    for c in counts:
        before = total
        for label in modes.labels[done:c]:
            amp = first_order_amplitude(modes, w, int(label), panel_scale)
            total += abs(amp) ** 2
        delta = total - before
        done = c
        if total > 0.0 and prev_delta is not None:
            if delta == 0.0:
                tail = 0.0
            elif delta < prev_delta:
                # geometric extrapolation of the octave increments
                q = delta / prev_delta
                tail = delta * q / (1.0 - q)
            else:
                tail = np.inf
            if tail <= rel_tail * total:
                break
        prev_delta = delta
    converged = bool(tail <= rel_tail * total) if total > 0.0 else True
    if total == 0.0:
        tail = 0.0
    return ProbabilityResult(
        probability=float(total),
        n_used=done,
        tail_estimate=float(tail),
        rel_tail=rel_tail,
        converged=converged,
    )


def boltzmann_temperature(P: float, Omega_d: float) -> float:
    """Temperature from matching P/(1 - P) to the Boltzmann ratio e^{-Omega_d/T}.

    First order populates only the first excited level, so the two lowest
    populations fix the temperature; requires 0 < P < 1/2.
    """
    if not 0.0 < P < 0.5:
        raise ValueError(f"probability must lie in (0, 1/2), got {P}")
    if Omega_d <= 0.0:
        raise ValueError(f"detector gap must be positive, got {Omega_d}")
    return Omega_d / np.log((1.0 - P) / P)
