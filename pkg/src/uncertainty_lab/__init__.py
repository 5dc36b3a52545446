"""Numerical constructions and audits for Ingham and Paley-Wiener type uncertainty principles."""

from .core import Grid1D, SampledFunction1D, SampledFunctionND, fourier_1d, fourier_nd
from .errors import (ConfigurationError, DataError, DivergenceError, LabError, PrecisionError,
                     PreconditionError)
from .quasianalytic import CONSISTENT, CONTRADICTION, VACUOUS, AuditReport
from .weights import WeightFunction, parse_weight

__version__ = "0.1.0"

__all__ = [
    "Grid1D", "SampledFunction1D", "SampledFunctionND", "fourier_1d", "fourier_nd",
    "LabError", "ConfigurationError", "DataError", "DivergenceError", "PrecisionError", "PreconditionError",
    "AuditReport", "CONSISTENT", "VACUOUS", "CONTRADICTION", "WeightFunction", "parse_weight",
]
