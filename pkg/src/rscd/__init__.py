"""Quantum compactified trigonometric Ruijsenaars-Schneider model on a finite lattice."""

from .errors import (DegeneracyError, FormulaViolationError, IllConditionedSamplingError, InvalidIndexError,
                     InvalidInputError, InvalidParameterError, RSCDError, SingularValueError,
                     SpectralMismatchError)
from .model import ModelParams, build_params, classify_coupling, enumerate_lattice

__version__ = "0.1.0"

__all__ = [
    "DegeneracyError", "FormulaViolationError", "IllConditionedSamplingError", "InvalidIndexError",
    "InvalidInputError", "InvalidParameterError", "RSCDError", "SingularValueError", "SpectralMismatchError",
    "ModelParams", "build_params", "classify_coupling", "enumerate_lattice",
]
