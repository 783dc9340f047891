"""Exact computations with motivic zeta functions, Euler products and function-field harmonic analysis."""
from __future__ import annotations

__version__ = "0.1.0"

from .cyclo import CycloValue
from .epoly import EPoly
from .kernels import BACKEND
from .series import MotSeries, TruncationError

__all__ = ["BACKEND", "CycloValue", "EPoly", "MotSeries", "TruncationError", "__version__"]
