"""Gauss-diagram knot invariants and positivity obstructions."""

from .diagram_model import (BraidWord, ConwayTangle, GaussCode, PlanarDiagram, braid_closure,
                            load_fixtures, parse_diagram, rational_closure, to_diagram, to_gauss)
from .gauss_engine import GaussDiagram
from .vassiliev import v2_gauss, v3_gauss

__all__ = [
    "BraidWord", "ConwayTangle", "GaussCode", "PlanarDiagram", "GaussDiagram",
    "braid_closure", "rational_closure", "parse_diagram", "to_diagram", "to_gauss",
    "load_fixtures", "v2_gauss", "v3_gauss",
]
