"""Truncated power series in q_ell over Q(zeta_ell), and the product-side
recovery of c(n).

This is the independent route to the exponents: expand the Siegel products
directly, take the logarithmic derivative -Theta(U)/U, and peel off
sum_{d|n} d c(d) coefficient by coefficient.  Nothing here calls into
:mod:`modunits.closedform`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

import gmpy2

from .cyclofield import CycNumber, reduce_poly, root_of_unity
from .ntharith import divisors
from .torsion import Level, TorsionPoint, canonicalize
from .unitvec import ExponentVector

__all__ = [
    "QSeries",
    "mul",
    "inverse",
    "ipow",
    "theta",
    "siegel_factor",
    "unit_series",
    "oracle_c",
]


# -- Kronecker packing --------------------------------------------------------
#
# A series with integer cyclotomic numerators is a bivariate integer
# polynomial in (q, zeta).  Evaluating it at zeta = 2^B, q = 2^(B W) with
# W = 2 phi - 1 turns a series product into one big-integer product; the
# W-slot stride leaves room for the unreduced zeta-degree 2 phi - 2.


def _pack(digits: Sequence[int], nbytes: int) -> int:
    bias = 1 << (8 * nbytes - 1)
    raw = b"".join((d + bias).to_bytes(nbytes, "little") for d in digits)
    return int.from_bytes(raw, "little") - int.from_bytes(
        (bias.to_bytes(nbytes, "little")) * len(digits), "little"
    )


def _unpack(x: int, nbytes: int, count: int) -> list[int]:
    bias = 1 << (8 * nbytes - 1)
    bias_all = int.from_bytes(bias.to_bytes(nbytes, "little") * count, "little")
    # only the low `count` slots are read; higher slots are masked away
    low = (x + bias_all) & ((1 << (8 * nbytes * count)) - 1)
    raw = low.to_bytes(nbytes * count, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - bias
        for i in range(count)
    ]


def _common_den(coeffs: Sequence[CycNumber]) -> tuple[int, list[tuple[int, ...]]]:
    den = 1
    for x in coeffs:
        den = den * x.denominator // gcd(den, x.denominator)
    if den == 1:
        return 1, [x.numerator for x in coeffs]
    return den, [tuple(a * (den // x.denominator) for a in x.numerator) for x in coeffs]


class QSeries:
    """sum_{k=0}^{N} a_k q_ell^k + O(q_ell^(N+1)) with a_k in Q(zeta_ell)."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: Level, coeffs: Sequence[CycNumber]):
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        for x in coeffs:
            if x.level != level:
                raise ValueError("coefficient level mismatch")
        self.level = level
        self.coeffs = tuple(coeffs)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, level: Level, N: int) -> QSeries:
        z = CycNumber.zero(level)
        return cls(level, [z] * (N + 1))

    @classmethod
    def one(cls, level: Level, N: int) -> QSeries:
        return cls.from_terms(level, N, {0: 1})

    @classmethod
    def from_terms(cls, level: Level, N: int, terms: Mapping[int, CycNumber | int]) -> QSeries:
        """Series from ``{exponent: coefficient}``; exponents above N are dropped."""
        z = CycNumber.zero(level)
        out = [z] * (N + 1)
        for k, x in terms.items():
            if k < 0:
                raise ValueError("negative exponent")
            if k <= N:
                out[k] = out[k] + x
        return cls(level, out)

    def __getitem__(self, k: int) -> CycNumber:
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __repr__(self):
        terms = [f"({x})q^{k}" for k, x in enumerate(self.coeffs) if x]
        return f"QSeries(ell={self.level.ell}, {' + '.join(terms) or '0'} + O(q^{len(self.coeffs)}))"

    def _check(self, other: QSeries) -> int:
        if other.level != self.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        return min(self.truncation, other.truncation)

    def truncate(self, N: int) -> QSeries:
        if N > self.truncation:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.level, self.coeffs[: N + 1])

    def __add__(self, other):
        N = self._check(other)
        return QSeries(self.level, [a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs)])

    def __neg__(self):
        return QSeries(self.level, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x) -> QSeries:
        return QSeries(self.level, [a * x for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        return ipow(self, m)

    def inverse(self) -> QSeries:
        return inverse(self)

    def theta(self) -> QSeries:
        return theta(self)


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the smaller truncation."""
    N = a._check(b)
    level = a.level
    phi = level.phi
    W = 2 * phi - 1
    da, na = _common_den(a.coeffs[: N + 1])
    db, nb = _common_den(b.coeffs[: N + 1])
    max_a = max((abs(x) for row in na for x in row), default=0)
    max_b = max((abs(x) for row in nb for x in row), default=0)
    if not max_a or not max_b:
        return QSeries.zero(level, N)
    bits = max_a.bit_length() + max_b.bit_length() + ((N + 1) * phi).bit_length() + 2
    nbytes = (bits + 7) // 8
    pad = [0] * (W - phi)
    xa = _pack([x for row in na for x in (*row, *pad)], nbytes)
    xb = _pack([x for row in nb for x in (*row, *pad)], nbytes)
    # GMP's FFT multiplication; CPython's Karatsuba is far slower at this size
    digits = _unpack(int(gmpy2.mpz(xa) * gmpy2.mpz(xb)), nbytes, (N + 1) * W)
    out = []
    for k in range(N + 1):
        row = reduce_poly(level, digits[k * W:(k + 1) * W])
        out.append(CycNumber._raw(level, row, da * db))
    return QSeries(level, out)


def inverse(a: QSeries) -> QSeries:
    """b with a b = 1 + O(q^(N+1)), by the coefficient recursion
    b_k = -a_0^-1 sum_{i=1}^k a_i b_{k-i}.

    The constant a_0 is factored out first so the recursion runs on a
    series with constant term 1 (which stays integral when a/a_0 is)."""
    level = a.level
    a0 = a.coeffs[0]
    if a0.is_zero():
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = a0.invert()
    unit_const = a0 == 1
    na = a if unit_const else a.scale(inv0)
    N = a.truncation
    phi = level.phi
    da, rows = _common_den(na.coeffs)
    nz = [i for i in range(1, N + 1) if any(rows[i])]
    # b_k stored as (integer numerator, denominator)
    b_num: list[tuple[int, ...]] = [(1,) + (0,) * (phi - 1)]
    b_den: list[int] = [1]
    out = [CycNumber.one(level)]
    for k in range(1, N + 1):
        terms = [i for i in nz if i <= k]
        L = 1
        for i in terms:
            d = b_den[k - i]
            L = L * d // gcd(L, d)
        acc = [0] * (2 * phi - 1)
        for i in terms:
            ai = rows[i]
            bj = b_num[k - i]
            f = L // b_den[k - i]
            nzb = [(j, y * f) for j, y in enumerate(bj) if y]
            for u, x in enumerate(ai):
                if x:
                    for j, y in nzb:
                        acc[u + j] -= x * y
        val = CycNumber._raw(level, acc, L * da)
        out.append(val)
        b_num.append(val.numerator)
        b_den.append(val.denominator)
    res = QSeries(level, out)
    return res if unit_const else res.scale(inv0)


def _normalized(a: QSeries) -> tuple[CycNumber | None, QSeries]:
    # a = a0 * (a / a0); returns (None, a) when a0 is already 1
    a0 = a.coeffs[0]
    if a0 == 1:
        return None, a
    if a0.is_zero():
        raise ZeroDivisionError("series with zero constant term is not invertible")
    return a0, a.scale(a0.invert())


def _pow_unit_const(a: QSeries, m: int) -> QSeries:
    # square-and-multiply for a series whose constant term is 1
    base = inverse(a) if m < 0 else a
    k = abs(m)
    result = QSeries.one(a.level, a.truncation)
    first = True
    while k:
        if k & 1:
            result = base if first else mul(result, base)
            first = False
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def ipow(a: QSeries, m: int) -> QSeries:
    """a^m by square-and-multiply; negative m inverts first.

    The constant term is split off, a^m = a_0^m (a/a_0)^m, so the squarings
    act on a series with constant term 1."""
    if m == 0:
        return QSeries.one(a.level, a.truncation)
    if a.coeffs[0].is_zero():
        if m < 0:
            raise ZeroDivisionError("negative power of a series with zero constant term")
        return _pow_unit_const(a, m)
    a0, a = _normalized(a)
    result = _pow_unit_const(a, m)
    return result if a0 is None else result.scale(a0**m)


def theta(self) -> QSeries:
        return theta(self)


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the smaller truncation."""
    N = a._check(b)
    level = a.level
    phi = level.phi
    W = 2 * phi - 1
    da, na = _common_den(a.coeffs[: N + 1])
    db, nb = _common_den(b.coeffs[: N + 1])
    max_a = max((abs(x) for row in na for x in row), default=0)
    max_b = max((abs(x) for row in nb for x in row), default=0)
    if not max_a or not max_b:
        return QSeries.zero(level, N)
    bits = max_a.bit_length() + max_b.bit_length() + ((N + 1) * phi).bit_length() + 2
    nbytes = (bits + 7) // 8
    pad = [0] * (W - phi)
    xa = _pack([x for row in na for x in (*row, *pad)], nbytes)
    xb = _pack([x for row in nb for x in (*row, *pad)], nbytes)
    # GMP's FFT multiplication; CPython's Karatsuba is far slower at this size
    digits = _unpack(int(gmpy2.mpz(xa) * gmpy2.mpz(xb)), nbytes, (N + 1) * W)
    out = []
    for k in range(N + 1):
        row = reduce_poly(level, digits[k * W:(k + 1) * W])
        out.append(CycNumber._raw(level, row, da * db))
    return QSeries(level, out)


def inverse(a: QSeries) -> QSeries:
    """b with a b = 1 + O(q^(N+1)), by the coefficient recursion
    b_k = -a_0^-1 sum_{i=1}^k a_i b_{k-i}.

    The constant a_0 is factored out first so the recursion runs on a
    series with constant term 1 (which stays integral when a/a_0 is)."""
    level = a.level
    a0 = a.coeffs[0]
    if a0.is_zero():
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = a0.invert()
    unit_const = a0 == 1
    na = a if unit_const else a.scale(inv0)
    N = a.truncation
    phi = level.phi
    da, rows = _common_den(na.coeffs)
    nz = [i for i in range(1, N + 1) if any(rows[i])]
    # b_k stored as (integer numerator, denominator)
    b_num: list[tuple[int, ...]] = [(1,) + (0,) * (phi - 1)]
    b_den: list[int] = [1]
    out = [CycNumber.one(level)]
    for k in range(1, N + 1):
        terms = [i for i in nz if i <= k]
        L = 1
        for i in terms:
            d = b_den[k - i]
            L = L * d // gcd(L, d)
        acc = [0] * (2 * phi - 1)
        for i in terms:
            ai = rows[i]
            bj = b_num[k - i]
            f = L // b_den[k - i]
            nzb = [(j, y * f) for j, y in enumerate(bj) if y]
            for u, x in enumerate(ai):
                if x:
                    for j, y in nzb:
                        acc[u + j] -= x * y
        val = CycNumber._raw(level, acc, L * da)
        out.append(val)
        b_num.append(val.numerator)
        b_den.append(val.denominator)
    res = QSeries(level, out)
    return res if unit_const else res.scale(inv0)


def ipow(a: QSeries, m: int) -> QSeries:
    """a^m by square-and-multiply; negative m inverts first.

    The constant term is split off, a^m = a_0^m (a/a_0)^m, so the squarings
    act on a series with constant term 1."""
    level = a.level
    N = a.truncation
    if m == 0:
        return QSeries.one(level, N)
    a0 = a.coeffs[0]
    const = None
    if a0 != 1:
        if a0.is_zero():
            if m < 0:
                raise ZeroDivisionError("negative power of a series with zero constant term")
        else:
            const = a0**m
            a = a.scale(a0.invert())
    base = inverse(a) if m < 0 else a
    k = abs(m)
    result = None
    while k:
        if k & 1:
            result = base if result is None else mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result if const is None else result.scale(const)


def theta(a: QSeries) -> QSeries:
    """q_ell d/dq_ell: multiplies the k-th coefficient by k."""
    return QSeries(a.level, [x.scale(k) for k, x in enumerate(a.coeffs)])


def _mul_binomial(coeffs: list[CycNumber], e: int, c: CycNumber) -> None:
    # coeffs *= (1 - c q^e), in place, truncated at len(coeffs) - 1
    for k in range(len(coeffs) - 1, e - 1, -1):
        prev = coeffs[k - e]
        if prev:
            coeffs[k] = coeffs[k] - c * prev
    if e == 0:
        coeffs[0] = coeffs[0] - c * coeffs[0]


def siegel_factor(level: Level, a: TorsionPoint, N: int) -> QSeries:
    """prod_{n>=1} (1 - q_ell^(ell(n-1)+r) zeta^s)(1 - q_ell^(ell n - r) zeta^-s) + O(q_ell^(N+1)).

    The q^(B2/2) and root-of-unity prefactors of the Siegel function are
    left out; they only shift the leading exponent and the constant.
    """
    pt, _ = canonicalize(level, a.r, a.s)
    if pt != a:
        raise ValueError(f"{a} is not canonical")
    ell, r, s = level.ell, a.r, a.s
    z_plus, z_minus = root_of_unity(level, s), root_of_unity(level, -s)
    coeffs = list(QSeries.one(level, N).coeffs)
    n = 1
    while True:
        e1, e2 = ell * (n - 1) + r, ell * n - r
        if e1 > N and e2 > N:
            break
        if e1 <= N:
            if e1 == 0:
                coeffs = [x - x * z_plus for x in coeffs]
            else:
                _mul_binomial(coeffs, e1, z_plus)
        if e2 <= N:
            _mul_binomial(coeffs, e2, z_minus)
        n += 1
    return QSeries(level, coeffs)


def unit_series(v: ExponentVector, N: int, require_valid: bool = True) -> QSeries:
    """prod_a siegel_factor(a)^(m_a), truncated at N.

    Raises ValueError for a vector failing the Kubert-Lang congruences
    unless ``require_valid`` is False."""
    if require_valid and not v.valid:
        raise ValueError(f"exponent vector is not a modular unit: {v.report}")
    level = v.level
    # constants are collected separately and applied once: they are large
    # (powers of 1 - zeta^s) and would otherwise inflate every product
    const = CycNumber.one(level)
    U = QSeries.one(level, N)
    for a, m in v.entries.items():
        a0, factor = _normalized(siegel_factor(level, a, N))
        U = mul(U, _pow_unit_const(factor, m))
        if a0 is not None:
            const = const * a0**m
    assert not const.is_zero(), "order-ell points cannot give a zero constant term"
    return U if const == 1 else U.scale(const)


def oracle_c(v: ExponentVector, nmax: int, require_valid: bool = True) -> list[CycNumber]:
    """[c(1), ..., c(nmax)] from -Theta(U)/U = sum_n (sum_{d|n} d c(d)) q_ell^n."""
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    U = unit_series(v, nmax, require_valid=require_valid)
    G = -mul(theta(U), inverse(U))
    if not G.coeffs[0].is_zero():
        raise AssertionError("logarithmic derivative has a nonzero constant term")
    cs: list[CycNumber] = []
    for n in range(1, nmax + 1):
        acc = G.coeffs[n]
        for d in divisors(n)[:-1]:
            acc = acc - cs[d - 1].scale(d)
        cs.append(acc.scale(Fraction(1, n)))
    return cs
