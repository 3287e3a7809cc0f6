"""Cavity mode frequencies, spatial profiles, and quadrature couplings.

Boundary conditions supported: Dirichlet and Neumann (standing waves,
``k_n = n pi / L``, ``n >= 1``) and periodic (travelling waves,
``k_n = 2 n pi / L``, ``n = +-1, +-2, ...``).  Natural units c = 1, so
``omega_n = |k_n|``.

The field at fixed time decomposes as ``phi(x) = sum_n f_n(x) q_n + g_n(x) p_n``
with ``f_n = sqrt(2) Re u_n(x, 0)`` and ``g_n = -sqrt(2) Im u_n(x, 0)``; the
amplitude (X-X) scheme couples the detector position to ``phi`` directly,
while the momentum (X-P) scheme — periodic only — couples it to the field
momentum with a per-mode weight ``1/omega_n`` folded into ``(f_n, g_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray


class BoundaryCondition(Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    PERIODIC = "periodic"


class CouplingScheme(Enum):
    AMPLITUDE = "xx"
    MOMENTUM = "xp"


def _validate_label(bc: BoundaryCondition, n: int) -> None:
    if n == 0:
        raise ValueError(f"mode label 0 is not in the {bc.value} spectrum")
    if bc is not BoundaryCondition.PERIODIC and n < 0:
        raise ValueError(f"{bc.value} modes are labelled by positive integers, got {n}")


def mode_frequency(bc: BoundaryCondition, n: int, L: float) -> float:
    """Angular frequency omega_n = |k_n| of mode ``n``."""
    if L <= 0.0:
        raise ValueError(f"cavity length must be positive, got {L}")
    _validate_label(bc, n)
    if bc is BoundaryCondition.PERIODIC:
        return 2.0 * abs(n) * np.pi / L
    return n * np.pi / L


def mode_function(bc: BoundaryCondition, n: int, x, t, L: float):
    """Positive-frequency mode function u_n(x, t).

    Dirichlet: ``e^{-i omega t} sin(k x) / sqrt(k L)``;
    Neumann:   ``e^{-i omega t} cos(k x) / sqrt(k L)``;
    periodic:  ``e^{-i (omega t - k x)} / sqrt(2 |k| L)``.

    ``x`` outside [0, L] is evaluated by the same formulas (the switching
    tails make such samples negligible).
    """
    _validate_label(bc, n)
    if L <= 0.0:
        raise ValueError(f"cavity length must be positive, got {L}")
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if bc is BoundaryCondition.PERIODIC:
        k = 2.0 * n * np.pi / L
        omega = abs(k)
        return np.exp(-1j * (omega * t - k * x)) / np.sqrt(2.0 * omega * L)
    k = n * np.pi / L
    omega = k
    envelope = np.sin(k * x) if bc is BoundaryCondition.DIRICHLET else np.cos(k * x)
    return np.exp(-1j * omega * t) * envelope / np.sqrt(k * L)


def quadrature_couplings(
    scheme: CouplingScheme, bc: BoundaryCondition, n: int, x: float, L: float
) -> tuple[float, float]:
    """Coupling pair (f_n, g_n) of mode ``n`` at detector position ``x``."""
    _validate_label(bc, n)
    if scheme is CouplingScheme.MOMENTUM and bc is not BoundaryCondition.PERIODIC:
        raise ValueError("momentum (X-P) coupling is defined for periodic cavities only")
    if bc is BoundaryCondition.PERIODIC:
        k = 2.0 * n * np.pi / L
        root = np.sqrt(abs(k) * L)
        if scheme is CouplingScheme.AMPLITUDE:
            return np.cos(k * x) / root, -np.sin(k * x) / root
        return -np.sin(k * x) / root, -np.cos(k * x) / root
    k = n * np.pi / L
    amp = np.sqrt(2.0 / (k * L))
    if bc is BoundaryCondition.DIRICHLET:
        return amp * np.sin(k * x), 0.0
    return amp * np.cos(k * x), 0.0


@dataclass(frozen=True)
class ModeSet:
    """The N lowest cavity modes for one boundary condition.

    Periodic labels interleave ``+1, -1, +2, -2, ...`` so any truncation
    keeps left- and right-movers symmetrically; ``n_modes`` must be even
    there.  ``labels``, ``k``, and ``omega`` are parallel arrays.
    """

    bc: BoundaryCondition
    L: float
    labels: NDArray[np.int64] = field(repr=False)
    k: NDArray[np.float64] = field(repr=False)
    omega: NDArray[np.float64] = field(repr=False)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @classmethod
    def build(cls, bc: BoundaryCondition, n_modes: int, L: float) -> "ModeSet":
        if n_modes < 1:
            raise ValueError(f"need at least one mode, got {n_modes}")
        if L <= 0.0:
            raise ValueError(f"cavity length must be positive, got {L}")
        if bc is BoundaryCondition.PERIODIC:
            if n_modes % 2 != 0:
                raise ValueError("periodic mode count must be even (left/right pairs)")
            half = n_modes // 2
            labels = np.empty(n_modes, dtype=np.int64)
            labels[0::2] = np.arange(1, half + 1)
            labels[1::2] = -np.arange(1, half + 1)
            k = 2.0 * labels * np.pi / L
        else:
            labels = np.arange(1, n_modes + 1, dtype=np.int64)
            k = labels * np.pi / L
        return cls(bc=bc, L=L, labels=labels, k=k, omega=np.abs(k))

    def coupling_arrays(
        self, scheme: CouplingScheme, x: float
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Vectorized (f, g) over all kept modes at position ``x``."""
        if scheme is CouplingScheme.MOMENTUM and self.bc is not BoundaryCondition.PERIODIC:
            raise ValueError("momentum (X-P) coupling is defined for periodic cavities only")
        kL = self.omega * self.L
        if self.bc is BoundaryCondition.DIRICHLET:
            return np.sqrt(2.0 / kL) * np.sin(self.k * x), np.zeros(self.n_modes)
        if self.bc is BoundaryCondition.NEUMANN:
            return np.sqrt(2.0 / kL) * np.cos(self.k * x), np.zeros(self.n_modes)
        root = np.sqrt(kL)
        if scheme is CouplingScheme.AMPLITUDE:
            return np.cos(self.k * x) / root, -np.sin(self.k * x) / root
        return -np.sin(self.k * x) / root, -np.cos(self.k * x) / root
