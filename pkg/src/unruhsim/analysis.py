"""Thermality diagnosis, temperature extraction, and temperature-curve fits.

A reduced detector state with symplectic eigenvalue ``nu`` and squeezing
``r`` is squeezed-thermal; it is operationally thermal when the ratio
``delta = r^2 / (nu - 1)`` is small, and its temperature follows from
matching ``nu = 1 + 2 nbar`` to a geometric (Boltzmann) distribution:

    T = Omega_d / ln(1 + 2 / (nu - 1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from unruhsim.gaussian_core import DetectorState

# Loose operational bound separating "thermal" from "squeezing-dominated";
# converged runs land orders of magnitude below it.
THERMALITY_THRESHOLD = 1e-3


def detector_temperature(nu: float, Omega_d: float) -> float:
    """Temperature of a thermal state with symplectic eigenvalue ``nu``.

    Returns 0 for ``nu = 1`` (vacuum).
    """
    if nu < 1.0:
        raise ValueError(f"symplectic eigenvalue must be >= 1, got {nu}")
    if Omega_d <= 0.0:
        raise ValueError(f"detector gap must be positive, got {Omega_d}")
    if nu == 1.0:
        return 0.0
    return Omega_d / np.log1p(2.0 / (nu - 1.0))


@dataclass(frozen=True)
class ThermalityReport:
    nu: float
    r: float
    delta_ratio: float
    energy_above_ground: float
    temperature: float
    thermal: bool
    threshold: float


def thermality(
    state: DetectorState, Omega_d: float, threshold: float = THERMALITY_THRESHOLD
) -> ThermalityReport:
    """Thermality ratio, energy above ground, and temperature of the detector.

    ``delta_ratio = r^2 / (nu - 1)`` and the energy above the ground state is
    ``Omega_d [(nu - 1) + nu r^2 / 2]`` (exact for a squeezed-thermal state
    under the doubled-moment convention, up to the factor-2 energy scale of
    that convention).  A vacuum state (nu = 1, r = 0) is thermal with
    temperature 0; pure squeezing (nu = 1, r > 0) is flagged non-thermal
    with a divergent ratio.
    """
    nu, r = state.nu, state.r
    if nu == 1.0:
        delta = 0.0 if r == 0.0 else np.inf
    else:
        delta = r**2 / (nu - 1.0)
    energy = Omega_d * ((nu - 1.0) + 0.5 * nu * r**2)
    return ThermalityReport(
        nu=nu,
        r=r,
        delta_ratio=float(delta),
        energy_above_ground=float(energy),
        temperature=detector_temperature(nu, Omega_d),
        thermal=bool(delta <= threshold),
        threshold=threshold,
    )


@dataclass(frozen=True)
class SweepFit:
    accelerations: NDArray[np.float64]
    temperatures: NDArray[np.float64]
    slope: float
    intercept: float
    r_squared: float
    max_residual: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.accelerations.tolist(), self.temperatures.tolist()))


def fit_temperature_curve(points) -> SweepFit:
    """Ordinary least squares line T = slope * a + intercept.

    ``points`` is a sequence of (acceleration, temperature) pairs, at least
    three, with non-degenerate accelerations.  ``r_squared`` is defined as 1
    when the temperatures are exactly constant and exactly fitted.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected (a, T) pairs, got array of shape {pts.shape}")
    if pts.shape[0] < 3:
        raise ValueError(f"need at least 3 points for a meaningful fit, got {pts.shape[0]}")
    a, T = pts[:, 0], pts[:, 1]
    if np.ptp(a) == 0.0:
        raise ValueError("degenerate abscissae: all accelerations equal")
    design = np.column_stack([a, np.ones_like(a)])
    (slope, intercept), *_ = np.linalg.lstsq(design, T, rcond=None)
    residuals = T - (slope * a + intercept)
    ss_res = float(residuals @ residuals)
    ss_tot = float(np.sum((T - T.mean()) ** 2))
    # an exactly constant curve is fitted exactly (up to round-off) but has
    # zero explainable variance; call that a perfect fit rather than 0/0
    r_squared = 1.0 if np.ptp(T) == 0.0 else 1.0 - ss_res / ss_tot
    return SweepFit(
        accelerations=a.copy(),
        temperatures=T.copy(),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(r_squared),
        max_residual=float(np.max(np.abs(residuals))),
    )


@dataclass(frozen=True)
class PairDifference:
    first: str
    second: str
    delta_T: NDArray[np.float64]
    rel_difference: NDArray[np.float64]
    max_rel_difference: float
    slope_ratio: float


@dataclass(frozen=True)
class BoundaryComparison:
    accelerations: NDArray[np.float64]
    pairs: list[PairDifference]
    max_rel_difference: float
    max_slope_ratio_deviation: float


def compare_boundary_conditions(fits: dict) -> BoundaryComparison:
    """Pairwise temperature differences and slope ratios across conditions.

    All fits must share the same acceleration grid.  Relative differences are
    pointwise ``|T1 - T2| / mean(T1, T2)``; the slope-ratio deviation is
    ``|slope1/slope2 - 1|`` per unordered pair.
    """
    if len(fits) < 2:
        raise ValueError("need at least two fits to compare")
    names = [getattr(key, "value", str(key)) for key in fits]
    curves = list(fits.values())
    grid = curves[0].accelerations
    for name, fit in zip(names, curves):
        if fit.accelerations.shape != grid.shape or not np.array_equal(fit.accelerations, grid):
            raise ValueError(f"acceleration grid mismatch for {name}")
    pairs: list[PairDifference] = []
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            T1, T2 = curves[i].temperatures, curves[j].temperatures
            delta = T1 - T2
            mean = 0.5 * (T1 + T2)
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.where(mean != 0.0, np.abs(delta) / np.abs(mean), 0.0)
            slope_ratio = (
                curves[i].slope / curves[j].slope if curves[j].slope != 0.0 else np.inf
            )
            pairs.append(
                PairDifference(
                    first=names[i],
                    second=names[j],
                    delta_T=delta,
                    rel_difference=rel,
                    max_rel_difference=float(np.max(rel)),
                    slope_ratio=float(slope_ratio),
                )
            )
    return BoundaryComparison(
        accelerations=grid.copy(),
        pairs=pairs,
        max_rel_difference=float(max(p.max_rel_difference for p in pairs)),
        max_slope_ratio_deviation=float(max(abs(p.slope_ratio - 1.0) for p in pairs)),
    )
