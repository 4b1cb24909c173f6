"""Trivariate tricycle quantum LDPC codes.

Construction from three trivariate polynomials over F2[Z_l x Z_m x Z_p],
parameter computation and distance certification, logical-operator algebra
(logical sets, shift automorphisms, transversal CZ), constant-depth CCZ
circuits from cup products, depth-13 syndrome-extraction circuits with
symbolic verification, and memory-experiment Monte Carlo with BP+OSD and
overlapping-window decoding.
"""

from .code import TTCode, build_tt_code, compute_k
from .catalog import get as get_code
from .groupalg import GroupDims, GroupPolynomial, Monomial

__all__ = [
    "TTCode", "build_tt_code", "compute_k", "get_code",
    "GroupDims", "GroupPolynomial", "Monomial",
]
