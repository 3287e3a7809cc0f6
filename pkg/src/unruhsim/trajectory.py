"""Uniformly accelerated worldline through the cavity and Gaussian switching.

The detector starts and ends at the cavity centre turning point:
``x(tau) = L/2 + (cosh(a tau) - 1)/a``, ``t(tau) = sinh(a tau)/a``, with
proper acceleration ``a > 0`` and natural units c = 1.  The interaction is
switched by ``lambda(tau) = lambda0 exp(-tau^2 / (2 delta^2))`` over
``tau in [-T, T]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class Worldline:
    """Trajectory, switching, and detector parameters for one run.

    Attributes
    ----------
    a : proper acceleration (> 0; the inertial limit is excluded because the
        1/a parametrization degrades numerically).
    L : cavity length.
    T : interaction half-duration in proper time.
    delta : Gaussian switching width.
    lambda0 : peak coupling strength (>= 0).
    Omega_d : detector gap (> 0).
    """

    a: float
    L: float = 144.0 * np.pi
    T: float = 4.0
    delta: float = 8.0 / 7.0
    lambda0: float = 0.01
    Omega_d: float = 2.25

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError(f"proper acceleration must be positive, got {self.a}")
        for name in ("L", "T", "delta", "Omega_d"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.lambda0 < 0.0:
            raise ValueError(f"lambda0 must be non-negative, got {self.lambda0}")


def position(w: Worldline, tau):
    """Detector position x(tau) = L/2 + (cosh(a tau) - 1)/a; even in tau."""
    tau = np.asarray(tau, dtype=float)
    return w.L / 2.0 + (np.cosh(w.a * tau) - 1.0) / w.a


def coordinate_time(w: Worldline, tau):
    """Lab time t(tau) = sinh(a tau)/a; odd in tau."""
    tau = np.asarray(tau, dtype=float)
    return np.sinh(w.a * tau) / w.a


def redshift(w: Worldline, tau):
    """dt/dtau = cosh(a tau) >= 1, the blueshift factor on the field Hamiltonian."""
    tau = np.asarray(tau, dtype=float)
    return np.cosh(w.a * tau)


def switching(w: Worldline, tau):
    """Gaussian switching lambda(tau) = lambda0 exp(-tau^2 / (2 delta^2))."""
    tau = np.asarray(tau, dtype=float)
    return w.lambda0 * np.exp(-(tau**2) / (2.0 * w.delta**2))


def exit_acceleration(T: float, L: float) -> float:
    """Smallest acceleration at which the detector reaches the wall at tau = T.

    Root of ``cosh(a T) - 1 = a L / 2``; above it, x(T) > L and the detector
    leaves the cavity while the switching is still on.
    """
    if T <= 0.0 or L <= 0.0:
        raise ValueError("T and L must be positive")

    def gap(a: float) -> float:
        return np.cosh(a * T) - 1.0 - a * L / 2.0

    # gap < 0 just above a = 0 (cosh - 1 ~ a^2 T^2/2 loses to a L/2);
    # grow the bracket until gap > 0, then bisect.
    lo = 1e-6
    if gap(lo) >= 0.0:
        raise ValueError("cavity too short: detector exits for arbitrarily small a")
    hi = 1.0
    while gap(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("no exit threshold found below a = 1e6")
    return float(brentq(gap, lo, hi, xtol=1e-12, rtol=1e-15))
