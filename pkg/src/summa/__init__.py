"""Classical and nonlinear (geometric, harmonic, semi-harmonic) means of
Fourier and number-series partial sums, with contraction diagnostics,
pointwise dynamics and constant-shift regularization."""

from .errors import (ConfigurationError, DomainError, EvaluationError, SummaError,
                     UnsupportedMethodError)
from .means import (METHODS, MeanTrace, PartialSumSequence, compute_means,
                    compute_means_recursive, number_series_partials)
from .series_core import (FourierCoefficients, PeriodicSignal, QuadratureConfig,
                          fourier_coefficients, partial_sums)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DomainError", "EvaluationError", "SummaError",
    "UnsupportedMethodError", "METHODS", "MeanTrace", "PartialSumSequence",
    "compute_means", "compute_means_recursive", "number_series_partials",
    "FourierCoefficients", "PeriodicSignal", "QuadratureConfig",
    "fourier_coefficients", "partial_sums",
]
