"""Cyclotomic strongly regular graphs, skew Hadamard difference sets and Gauss sums.

Exact arithmetic throughout: field elements over F_p, Gauss sums in Z[zeta_n],
and character profiles of cyclotomic connection sets built from trace counts.
"""

from .construct import ConnectionSpec, make_spec
from .cycint import CycInt
from .gf import FieldSpec, build_field
from .verify import Verdict, verify_paley_pds, verify_skew_hadamard, verify_srg

__version__ = "0.1.0"

__all__ = [
    "ConnectionSpec",
    "CycInt",
    "FieldSpec",
    "Verdict",
    "build_field",
    "make_spec",
    "verify_paley_pds",
    "verify_skew_hadamard",
    "verify_srg",
]
