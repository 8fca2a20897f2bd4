"""Semisimplicity certificates for quantum cohomology of facet-symmetric toric Fano manifolds.

The superpotential of each family polytope (segment, del Pezzo, pseudo
del Pezzo) and of their convex-hull products is built exactly, all of its
critical points are enumerated from their two-value structure, and every
Hessian determinant is certified nonzero against a closed form and a dense
oracle.
"""

from .config import Config
from .polytope import (
    LatticePolytope,
    convex_hull_product,
    dual,
    is_facet_symmetric,
    is_reflexive,
    is_smooth,
    make_del_pezzo,
    make_pseudo_del_pezzo,
    make_segment,
    normalized_volume,
    parse_family,
    realize,
)
from .laurent import LaurentPoly, superpotential
from .critsolve import CriticalPoint, CriticalSet, crit_for_family
from .verify import SemisimplicityReport, analyze, analyze_polytope

__version__ = "0.1.0"

__all__ = [
    "Config",
    "CriticalPoint",
    "CriticalSet",
    "LatticePolytope",
    "LaurentPoly",
    "SemisimplicityReport",
    "analyze",
    "analyze_polytope",
    "convex_hull_product",
    "crit_for_family",
    "dual",
    "is_facet_symmetric",
    "is_reflexive",
    "is_smooth",
    "make_del_pezzo",
    "make_pseudo_del_pezzo",
    "make_segment",
    "normalized_volume",
    "parse_family",
    "realize",
    "superpotential",
]
