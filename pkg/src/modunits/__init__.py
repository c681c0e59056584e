"""Exact product exponents of modular units of prime-power level.

A modular unit of level ell = p^f (p >= 5) is, up to a constant, a product
of Siegel functions g_a^(m_a).  This package computes the exponents c(n)
in its expansion kappa q_ell^beta prod (1 - q_ell^n)^c(n) two ways (a
closed divisor-sum formula and a direct truncated q-series expansion),
exactly in Q(zeta_ell), and checks the growth bounds on c(n).
"""

from .closedform import c, divisor_aggregate, exponent_table, leading_order, t
from .cyclofield import CycNumber, embed_complex, root_of_unity
from .qseries import QSeries, oracle_c, siegel_factor, unit_series
from .torsion import Level, TorsionPoint, canonicalize, classify, epsilon, representatives
from .unitvec import ExponentVector, ValidityReport, load_vector, search_valid, validate

__all__ = [
    "CycNumber",
    "ExponentVector",
    "Level",
    "QSeries",
    "TorsionPoint",
    "ValidityReport",
    "c",
    "canonicalize",
    "classify",
    "divisor_aggregate",
    "embed_complex",
    "epsilon",
    "exponent_table",
    "leading_order",
    "load_vector",
    "oracle_c",
    "representatives",
    "root_of_unity",
    "search_valid",
    "siegel_factor",
    "t",
    "unit_series",
    "validate",
]
