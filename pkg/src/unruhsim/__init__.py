"""Accelerated harmonic-oscillator detector in a 1-D cavity field.

Two independent engines compute the detector's excitation after a single
Gaussian-switched pass through the cavity: an exact Gaussian (covariance
matrix) evolution and a first-order perturbative amplitude sum.  Analysis
utilities extract temperatures, test thermality, and fit temperature versus
acceleration for Dirichlet, Neumann, and periodic boundary conditions.
"""

from unruhsim.cavity_modes import BoundaryCondition, CouplingScheme, ModeSet
from unruhsim.gaussian_core import (
    DetectorState,
    check_symplectic,
    evolve_covariance,
    reduce_to_detector,
    symplectic_form,
    vacuum_covariance,
)
from unruhsim.trajectory import Worldline, exit_acceleration
from unruhsim.evolution_engine import (
    EvolutionResult,
    GeneratorSplit,
    free_symplectic,
    integrate_interaction,
    interaction_generator,
    mode_convergence_scan,
)
from unruhsim.perturbative_oracle import (
    ProbabilityResult,
    boltzmann_temperature,
    converged_probability,
    excitation_probability,
    first_order_amplitude,
)
from unruhsim.analysis import (
    SweepFit,
    ThermalityReport,
    compare_boundary_conditions,
    detector_temperature,
    fit_temperature_curve,
    thermality,
)
from unruhsim.cli_app import RunConfig, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition",
    "CouplingScheme",
    "DetectorState",
    "EvolutionResult",
    "GeneratorSplit",
    "ModeSet",
    "ProbabilityResult",
    "RunConfig",
    "SweepFit",
    "ThermalityReport",
    "Worldline",
    "boltzmann_temperature",
    "check_symplectic",
    "compare_boundary_conditions",
    "converged_probability",
    "detector_temperature",
    "evolve_covariance",
    "excitation_probability",
    "exit_acceleration",
    "first_order_amplitude",
    "fit_temperature_curve",
    "free_symplectic",
    "integrate_interaction",
    "interaction_generator",
    "mode_convergence_scan",
    "reduce_to_detector",
    "run_sweep",
    "symplectic_form",
    "thermality",
    "vacuum_covariance",
]
