"""Equilibration and information-trapping toolkit for finite-dimensional
open quantum systems.

Layers: ``linalg`` (dense state primitives), ``averaging`` (infinite-time
averaging maps and superoperators), ``diagnostics`` (trapping measures and
bounds), ``models`` (closed-form example systems), ``cli`` (sweep front end).
"""

from . import averaging, diagnostics, linalg, models

__version__ = "0.1.0"

__all__ = ["averaging", "diagnostics", "linalg", "models", "__version__"]
