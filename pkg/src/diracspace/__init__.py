"""Exact symbolic workbench for higher Dirac structures.

Polynomial-coefficient exterior calculus over Q, pointwise Lagrangian
subspace algebra, Dirac-type presentations with their Hamiltonian
calculus, the homotopy Lie families attached to them, and an independent
graded (derived-bracket) oracle that cross-checks every sign convention.
"""

from .calculus import Form, MultiVec, VField
from .courant import SectionEp, SectionPr
from .lagrangian import LinSubspace
from .linfty import ObservablesFamily, TwistedSectionsFamily
from .parser import ParseError, parse_expression
from .poly import Context, Poly
from .presentations import (GraphForm, GraphMultivector, HamiltonianDatum,
                            Regular, ScaledTop)

__version__ = "0.1.0"

__all__ = [
    "Context", "Poly", "Form", "MultiVec", "VField", "SectionEp",
    "SectionPr", "LinSubspace", "GraphForm", "GraphMultivector", "Regular",
    "ScaledTop", "HamiltonianDatum", "ObservablesFamily",
    "TwistedSectionsFamily", "parse_expression", "ParseError",
]
