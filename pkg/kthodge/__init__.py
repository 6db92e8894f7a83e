"""
kthodge - Almost-complex Hodge numbers of the Kodaira-Thurston manifold.

This library computes h^{0,1} = h′ + h″ for the family of almost-Kähler
structures J_{a,b} with metrics scaled by ρ, exactly, and confirms each
sector count numerically.
"""

from .hodge import compute_h01, sweep
from .numbers import GaussianRational, QuadExt, parse_quad, parse_rational
from .report import HodgeReport, StructureParams, SweepResult

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "HodgeReport",
    "QuadExt",
    "StructureParams",
    "SweepResult",
    "compute_h01",
    "parse_quad",
    "parse_rational",
    "sweep",
]
