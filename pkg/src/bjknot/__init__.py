"""Knot diagram codecs, exact invariants, tabulation, and
Bernhard-Jablan unknotting machinery."""

from .diagram import Diagram, Shadow, alternating_resolution, connected_sum, shadow_of
from .codecs import (
    BraidWord,
    DTCode,
    GaussCode,
    braid_closure_to_diagram,
    canonical_dt,
    diagram_to_dt,
    diagram_to_gauss,
    dt_to_diagram,
    gauss_to_diagram,
    parse_braid,
    parse_dt,
    parse_gauss,
)
from .laurent import LaurentPolynomial

__version__ = "0.1.0"
