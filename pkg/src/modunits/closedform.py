"""Product exponents c(n) of a modular unit from its Siegel exponents.

For a unit u(tau) = kappa q_ell^beta prod_n (1 - q_ell^n)^c(n) built from
Siegel functions, define the kernel

    t_m(n) = n   sum_{s in Z_ell}   m(n, s)  zeta^(eps(n) m s)     (p not | n)
    t_m(n) = n   sum_{s in Z_ell^*} m(n, s)  zeta^(eps(n) m s)     (p | n, ell not | n)
    t_m(n) = n   sum_{s canonical}  m(0, s) (zeta^(ms) + zeta^(-ms))  (ell | n)

Then F(n) = sum_{d|n} t_d(n/d) equals sum_{d|n} d c(d), and Möbius
inversion gives c(n) = (1/n) sum_{d|n} mu(d) F(n/d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .cyclofield import CycNumber
from .ntharith import bernoulli2, divisors, mobius
from .torsion import Level, ResidueKind, classify, epsilon
from .unitvec import ExponentVector, lookup

__all__ = [
    "ExponentTable",
    "t",
    "divisor_aggregate",
    "c",
    "leading_order",
    "exponent_table",
]


class _Evaluator:
    """Per-vector caches.  The s-sum in t_m(n) depends on n only through its
    residue class and on m only through m mod ell."""

    def __init__(self, v: ExponentVector):
        self.v = v
        self.level = v.level
        self._ssum: dict = {}
        self._F: dict[int, CycNumber] = {}
        self._c: dict[int, CycNumber] = {}

    def s_sum(self, n: int, m: int) -> CycNumber:
        level = self.level
        ell = level.ell
        cls = classify(level, n)
        mm = m % ell
        sign = 1 if cls.kind is ResidueKind.ELL_DIVIDES else epsilon(level, n)
        key = (cls, sign, mm)
        hit = self._ssum.get(key)
        if hit is not None:
            return hit
        poly = [0] * ell
        if cls.kind is ResidueKind.ELL_DIVIDES:
            for s in range(1, level.half + 1):
                if level.is_unit(s):
                    w = lookup(self.v, cls, s)
                    if w:
                        poly[(mm * s) % ell] += w
                        poly[(-mm * s) % ell] += w
        else:
            if cls.kind is ResidueKind.COPRIME:
                s_range = range(ell)
            else:
                s_range = (s for s in range(ell) if level.is_unit(s))
            for s in s_range:
                w = lookup(self.v, cls, s)
                if w:
                    poly[(sign * mm * s) % ell] += w
        val = CycNumber._raw(level, poly)
        self._ssum[key] = val
        return val

    def t(self, m: int, n: int) -> CycNumber:
        return self.s_sum(n, m).scale(n)

    def F(self, n: int) -> CycNumber:
        hit = self._F.get(n)
        if hit is None:
            # accumulate raw integer polynomials; every t value is integral
            acc = [0] * self.level.phi
            for d in divisors(n):
                val = self.t(d, n // d)
                for j, x in enumerate(val.numerator):
                    acc[j] += x
            hit = self._F[n] = CycNumber._raw(self.level, acc)
        return hit

    def c(self, n: int) -> CycNumber:
        hit = self._c.get(n)
        if hit is None:
            acc = [0] * self.level.phi
            for d in divisors(n):
                mu = mobius(d)
                if mu:
                    for j, x in enumerate(self.F(n // d).numerator):
                        acc[j] += mu * x
            hit = self._c[n] = CycNumber._raw(self.level, acc, n)
        return hit


@lru_cache(maxsize=32)
def _evaluator(v: ExponentVector) -> _Evaluator:
    return _Evaluator(v)


def _check(*ns: int) -> None:
    for n in ns:
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"expected a positive integer, got {n!r}")


def t(v: ExponentVector, m: int, n: int) -> CycNumber:
    """The kernel t_m(n)."""
    _check(m, n)
    return _evaluator(v).t(m, n)


def divisor_aggregate(v: ExponentVector, n: int) -> CycNumber:
    """F(n) = sum over d | n of t_d(n/d)."""
    _check(n)
    return _evaluator(v).F(n)


def c(v: ExponentVector, n: int) -> CycNumber:
    """The exponent of (1 - q_ell^n) in the product expansion of the unit."""
    _check(n)
    return _evaluator(v).c(n)


def leading_order(v: ExponentVector) -> tuple[Fraction, Fraction]:
    """(alpha, beta): the leading power of u in q and in q_ell = q^(1/ell).

    Each Siegel factor contributes q^(B2(r/ell)/2), so
    alpha = sum m_a B2(r/ell) / 2 and beta = ell * alpha.
    """
    ell = v.level.ell
    alpha = sum(
        (m * bernoulli2(Fraction(a.r, ell)) / 2 for a, m in v.entries.items()),
        Fraction(0),
    )
    return alpha, ell * alpha


@dataclass(frozen=True)
class ExponentTable:
    vector: ExponentVector
    values: Mapping[int, CycNumber]
    nmax: int

    def __getitem__(self, n: int) -> CycNumber:
        return self.values[n]


def exponent_table(v: ExponentVector, nmax: int) -> ExponentTable:
    _check(nmax)
    ev = _evaluator(v)
    return ExponentTable(v, {n: ev.c(n) for n in range(1, nmax + 1)}, nmax)
