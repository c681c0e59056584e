"""Exact arithmetic in Q(zeta_ell) for prime powers ell = p**f.

Elements are stored in the power basis 1, z, ..., z^(phi-1) as an integer
numerator vector over one positive common denominator, kept in lowest
terms.  Reduction uses the sparse relation

    z^phi = -(1 + z^q + z^(2q) + ... + z^((p-2)q)),   q = p^(f-1),

which is the ell-th cyclotomic polynomial Phi_p(x^q) read backwards.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .torsion import Level

__all__ = ["CycNumber", "root_of_unity", "embed_complex", "reduce_poly"]


def reduce_poly(level: Level, poly: list[int]) -> list[int]:
    """Reduce an integer coefficient list modulo Phi_ell in place; returns the
    first phi entries (padded with zeros)."""
    phi = level.phi
    q = level.p ** (level.f - 1)
    p = level.p
    for d in range(len(poly) - 1, phi - 1, -1):
        c = poly[d]
        if c:
            base = d - phi
            for j in range(p - 1):
                poly[base + j * q] -= c
    if len(poly) < phi:
        return poly + [0] * (phi - len(poly))
    return poly[:phi]


def _convolve(a: Sequence[int], b: Sequence[int], out: list[int]) -> None:
    # out += a * b (polynomial product); skips zero entries of a and b
    nzb = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            for j, y in nzb:
                out[i + j] += x * y


class CycNumber:
    """An element of the cyclotomic field Q(zeta_ell).

    >>> L = Level(5)
    >>> z = root_of_unity(L, 1)
    >>> z * root_of_unity(L, 4) == CycNumber.one(L)
    True
    """

    __slots__ = ("level", "_num", "_den", "_hash")

    def __init__(self, level: Level, coeffs: Iterable[Rational | int] = ()):
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        if len(num) > level.phi:
            num = reduce_poly(level, num)
        self._set(level, num, den)

    def _set(self, level, num, den):
        phi = level.phi
        if len(num) < phi:
            num = list(num) + [0] * (phi - len(num))
        g = gcd(den, *num)
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.level = level
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, level: Level, num: Sequence[int], den: int = 1) -> CycNumber:
        """Build from an integer numerator (any length; reduced here) and a
        positive denominator."""
        obj = cls.__new__(cls)
        num = list(num)
        if len(num) > level.phi:
            num = reduce_poly(level, num)
        obj._set(level, num, den)
        return obj

    @classmethod
    def zero(cls, level: Level) -> CycNumber:
        return cls._raw(level, [])

    @classmethod
    def one(cls, level: Level) -> CycNumber:
        return cls._raw(level, [1])

    @classmethod
    def rational(cls, level: Level, x: Rational | int) -> CycNumber:
        x = Fraction(x)
        return cls._raw(level, [x.numerator], x.denominator)

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerator(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CycNumber):
            return (
                self.level == other.level
                and self._den == other._den
                and self._num == other._num
            )
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"CycNumber({self.level}, {self})"

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if j == 0 else f"({c})*z^{j}")
        return " + ".join(terms) if terms else "0"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> CycNumber:
        if isinstance(other, CycNumber):
            if other.level != self.level:
                raise ValueError(f"level mismatch: {self.level} vs {other.level}")
            return other
        if isinstance(other, (int, Rational)):
            return CycNumber.rational(self.level, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._den == other._den:
            num = [a + b for a, b in zip(self._num, other._num)]
            return CycNumber._raw(self.level, num, self._den)
        d1, d2 = self._den, other._den
        g = gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        num = [a * m1 + b * m2 for a, b in zip(self._num, other._num)]
        return CycNumber._raw(self.level, num, d1 * m1)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._raw(self.level, [-a for a in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNumber):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = [0] * (2 * self.level.phi - 1)
        _convolve(self._num, other._num, out)
        return CycNumber._raw(self.level, out, self._den * other._den)

    __rmul__ = __mul__

    def scale(self, x: Rational | int) -> CycNumber:
        x = Fraction(x)
        return CycNumber._raw(
            self.level, [a * x.numerator for a in self._num], self._den * x.denominator
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNumber):
            if other == 0:
                raise ZeroDivisionError("division of a cyclotomic number by zero")
            return self.scale(1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __rtruediv__(self, other):
        return self.invert() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        k = abs(k)
        result = CycNumber.one(self.level)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self) -> CycNumber:
        """Multiplicative inverse, by exact Gaussian elimination on the
        multiplication-by-self matrix."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNumber.rational(self.level, Fraction(self._den, self._num[0]))
        phi = self.level.phi
        # column j = self * z^j, in integer form (the common denominator is
        # restored at the end)
        cols = []
        col = list(self._num)
        for _ in range(phi):
            cols.append(col)
            col = reduce_poly(self.level, [0] + col)
        # augmented rows [M | e_0] with M[i][j] = cols[j][i]
        rows = [[Fraction(cols[j][i]) for j in range(phi)] + [Fraction(int(i == 0))]
                for i in range(phi)]
        for c in range(phi):
            piv = next(i for i in range(c, phi) if rows[i][c])
            rows[c], rows[piv] = rows[piv], rows[c]
            pr = rows[c]
            inv = 1 / pr[c]
            pr[:] = [x * inv for x in pr]
            for i in range(phi):
                if i != c and rows[i][c]:
                    f = rows[i][c]
                    ri = rows[i]
                    ri[:] = [x - f * y for x, y in zip(ri, pr)]
        sol = [rows[i][phi] * self._den for i in range(phi)]
        return CycNumber(self.level, sol)

    def galois(self, k: int) -> CycNumber:
        """Image under the automorphism z -> z^k (k a unit mod ell)."""
        ell = self.level.ell
        if k % self.level.p == 0:
            raise ValueError(f"{k} is not a unit mod {ell}")
        out = [0] * ell
        for j, a in enumerate(self._num):
            if a:
                out[(j * k) % ell] += a
        return CycNumber._raw(self.level, out, self._den)

    def conjugate(self) -> CycNumber:
        """Complex conjugate (z -> z^-1)."""
        return self.galois(-1)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, level: Level, data: Sequence[str]) -> CycNumber:
        if len(data) != level.phi:
            raise ValueError(f"expected {level.phi} coefficients, got {len(data)}")
        return cls(level, [Fraction(x) for x in data])


def root_of_unity(level: Level, k: int) -> CycNumber:
    """zeta_ell^k = e(k/ell), reduced."""
    k %= level.ell
    return CycNumber._raw(level, [0] * k + [1])


@lru_cache(maxsize=64)
def _zeta_powers(ell: int, prec: int):
    # the context is never mutated after creation, so sharing it is safe
    ctx = MPContext()
    ctx.prec = prec
    return ctx, tuple(ctx.expjpi(ctx.mpf(2 * j) / ell) for j in range(ell))


def embed_complex(x: CycNumber, precision_bits: int = 128):
    """Evaluate ``x`` at zeta = exp(2 pi i / ell) with mpmath.

    The evaluation runs at ``precision_bits + 16`` working bits in a private
    context, so each of the O(phi) roundings contributes at most
    2^-(precision_bits+16) relative error; the accumulated error is below
    2^(1 - precision_bits) * sum_j |c_j| for phi < 2^15.  Returns an
    ``mpc`` from that context.
    """
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    ctx, powers = _zeta_powers(x.level.ell, precision_bits + 16)
    acc = ctx.mpc(0)
    for a, w in zip(x.numerator, powers):
        if a:
            acc += a * w
    return acc / x.denominator
