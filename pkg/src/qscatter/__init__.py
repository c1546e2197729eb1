"""Exact quantum scattering diagrams, higher-genus log invariants and BPS integrality."""

from .exactring import GaussRat, HbarSeries, RatFuncQ, SLaurent, expand_hbar, quantum_integer
from .qtorus import Context, LatticeVec, TorusElement
from .scatter import Ray, ScatteringDiagram, complete, get_ray, is_consistent, loop_product

__version__ = "0.1.0"

__all__ = [
    "GaussRat",
    "HbarSeries",
    "RatFuncQ",
    "SLaurent",
    "expand_hbar",
    "quantum_integer",
    "Context",
    "LatticeVec",
    "TorusElement",
    "Ray",
    "ScatteringDiagram",
    "complete",
    "get_ray",
    "is_consistent",
    "loop_product",
]
