"""Phase-space linear algebra for Gaussian states.

Quadratures are ordered ``(q_d, p_d, q_1, p_1, ..., q_N, p_N)``: the detector
occupies indices 0, 1 and field mode ``n`` occupies ``2n, 2n+1`` (0-based), so
a system of one detector plus N modes has phase-space dimension D = 2N + 2.

Covariance matrices use the doubled-moment convention
``sigma_ij = <x_i x_j + x_j x_i>`` with zero first moments, under which the
vacuum is the identity and a thermal state has symplectic eigenvalue
``nu = 1 + 2 nbar``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

# Symplectic-eigenvalue deficits below this are treated as round-off and
# clamped to the uncertainty bound nu = 1; larger deficits are an error.
NU_CLAMP = 1e-9


def symplectic_form(dim: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form with 2x2 blocks [[0, 1], [-1, 0]].

    Parameters
    ----------
    dim : even phase-space dimension.
    """
    if dim <= 0 or dim % 2 != 0:
        raise ValueError(f"phase-space dimension must be positive and even, got {dim}")
    omega = np.zeros((dim, dim))
    idx = np.arange(0, dim, 2)
    omega[idx, idx + 1] = 1.0
    omega[idx + 1, idx] = -1.0
    return omega


def vacuum_covariance(n_modes: int) -> NDArray[np.float64]:
    """Covariance matrix of detector ground state plus N-mode field vacuum.

    Identity of dimension 2*n_modes + 2 (<q^2> = <p^2> = 1/2 doubled to 1).
    """
    if n_modes < 1:
        raise ValueError(f"need at least one field mode, got {n_modes}")
    return np.eye(2 * n_modes + 2)


def evolve_covariance(
    S: NDArray[np.float64], sigma0: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Evolve a covariance matrix: sigma = S sigma0 S^T, symmetrized."""
    S = np.asarray(S, dtype=float)
    sigma0 = np.asarray(sigma0, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"S must be square, got shape {S.shape}")
    if sigma0.shape != S.shape:
        raise ValueError(f"dimension mismatch: S {S.shape} vs sigma0 {sigma0.shape}")
    sigma = S @ sigma0 @ S.T
    return 0.5 * (sigma + sigma.T)


@dataclass(frozen=True)
class DetectorState:
    """Reduced 2x2 detector state in squeezed-thermal form.

    The eigenvalues of ``sigma_d`` are ``nu e^{+r}`` and ``nu e^{-r}`` with
    symplectic eigenvalue ``nu >= 1`` and squeezing parameter ``r >= 0``.
    """

    sigma_d: NDArray[np.float64]
    nu: float
    r: float

    @property
    def eigenvalues(self) -> tuple[float, float]:
        """(nu e^{+r}, nu e^{-r})."""
        return self.nu * np.exp(self.r), self.nu * np.exp(-self.r)

    @property
    def mean_occupation(self) -> float:
        """nbar = (nu - 1) / 2, the excitation probability at leading order."""
        return 0.5 * (self.nu - 1.0)


def reduce_to_detector(sigma: NDArray[np.float64]) -> DetectorState:
    """Partial-trace the field: keep the top-left 2x2 block and decompose it.

    Raises if the block is not symmetric positive definite or if the
    symplectic eigenvalue violates the uncertainty bound nu >= 1 by more
    than round-off (``NU_CLAMP``); smaller deficits are clamped to 1.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] < 4:
        raise ValueError(f"expected square covariance of dimension >= 4, got {sigma.shape}")
    if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(sigma).max())):
        raise ValueError("covariance matrix is not symmetric")
    sigma_d = 0.5 * (sigma[:2, :2] + sigma[:2, :2].T)
    lo, hi = np.linalg.eigvalsh(sigma_d)
    if lo <= 0.0:
        raise ValueError(f"detector block is not positive definite: eigenvalues ({lo}, {hi})")
    nu = float(np.sqrt(lo * hi))
    if nu < 1.0 - NU_CLAMP:
        raise ValueError(f"uncertainty violation: symplectic eigenvalue {nu} < 1")
    r = float(0.5 * np.log(hi / lo))
    if abs(nu - 1.0) <= NU_CLAMP:
        # round-off straddles the vacuum; snap to it so zero-coupling runs
        # report exactly nu = 1 (temperature 0) instead of integration noise
        nu = 1.0
        if abs(r) <= NU_CLAMP:
            r = 0.0
    nu = max(nu, 1.0)
    return DetectorState(sigma_d=sigma_d, nu=nu, r=r)


def check_symplectic(S: NDArray[np.float64], tol: float | None = None) -> float:
    """Max-abs entry of S Omega S^T - Omega.

    Purely diagnostic when ``tol`` is None; with ``tol`` given, raises
    ``ValueError`` if the residual exceeds it.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2 != 0:
        raise ValueError(f"S must be square with even dimension, got {S.shape}")
    omega = symplectic_form(S.shape[0])
    residual = float(np.max(np.abs(S @ omega @ S.T - omega)))
    if tol is not None and residual > tol:
        raise ValueError(f"symplectic residual {residual:.3e} exceeds tolerance {tol:.3e}")
    return residual


def symplectic_eigenvalues(sigma: NDArray[np.float64]) -> NDArray[np.float64]:
    """All symplectic eigenvalues of a covariance matrix, ascending.

    Absolute values of the eigenvalues of i Omega sigma, each appearing once.
    """
    sigma = np.asarray(sigma, dtype=float)
    omega = symplectic_form(sigma.shape[0])
    ev = np.linalg.eigvals(omega @ sigma)
    # eigenvalues come in +-i nu pairs; keep one representative of each
    return np.sort(np.abs(ev.imag))[::2]
