"""Wave packets at complex and pure quaternionic potential steps."""
from .quaternion import Quaternion
from .step import (
    DomainError,
    Kinematics,
    PotentialSpec,
    StepCoefficients,
    canonicalize,
    coefficients,
    complex_coeffs,
    eval_planewave,
    matching_residual,
    quaternionic_coeffs,
    solve_step,
    unitarity_sum,
)
from .packet import PacketField, SpectralParams, default_grid, synthesize, total_field
from .metrics import PacketObservables, numeric_probabilities, observe, peak_trajectory

__version__ = "0.1.0"

__all__ = [
    "Quaternion",
    "DomainError",
    "Kinematics",
    "PotentialSpec",
    "StepCoefficients",
    "canonicalize",
    "coefficients",
    "complex_coeffs",
    "eval_planewave",
    "matching_residual",
    "quaternionic_coeffs",
    "solve_step",
    "unitarity_sum",
    "PacketField",
    "SpectralParams",
    "default_grid",
    "synthesize",
    "total_field",
    "PacketObservables",
    "numeric_probabilities",
    "observe",
    "peak_trajectory",
]
