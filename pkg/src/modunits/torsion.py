"""Levels, order-ell torsion points modulo +-1, and residue bookkeeping.

Canonical orbit representatives follow one convention throughout the
package: a point ``(r, s)`` with ``r != 0`` is canonical when
``1 <= r <= (ell-1)/2``; a point ``(0, s)`` is canonical when
``1 <= s <= (ell-1)/2``.  The half ``[1, (ell-1)/2]`` is exactly where
:func:`epsilon` is ``+1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd

from .ntharith import factorize, is_prime

__all__ = [
    "Level",
    "Sector",
    "TorsionPoint",
    "ResidueKind",
    "ResidueClass",
    "order",
    "epsilon",
    "canonicalize",
    "classify",
    "representatives",
]


@dataclass(frozen=True, order=True)
class Level:
    """A prime power ``ell = p**f`` with ``p`` prime and ``p`` not 2 or 3."""

    p: int
    f: int = 1
    ell: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.f, int):
            raise TypeError("p and f must be integers")
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.p in (2, 3):
            raise ValueError("levels with p = 2 or 3 are not supported")
        if self.f < 1:
            raise ValueError(f"f must be >= 1, got {self.f}")
        object.__setattr__(self, "ell", self.p**self.f)

    @classmethod
    def from_ell(cls, ell: int) -> Level:
        fac = factorize(ell)
        if len(fac) != 1:
            raise ValueError(f"{ell} is not a prime power")
        ((p, f),) = fac.items()
        return cls(p, f)

    @property
    def phi(self) -> int:
        """Degree of the ell-th cyclotomic field, p^(f-1) (p-1)."""
        return self.p ** (self.f - 1) * (self.p - 1)

    @property
    def half(self) -> int:
        return (self.ell - 1) // 2

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f}

    def __str__(self):
        return f"{self.p}^{self.f}" if self.f > 1 else str(self.p)


class Sector(enum.Enum):
    UNIT_R = "unit"
    COMPOSITE_R = "composite"
    ZERO_R = "zero"


@dataclass(frozen=True, order=True)
class TorsionPoint:
    """Canonical representative (r/ell, s/ell) of a +-1 orbit of order ell."""

    r: int
    s: int
    sector: Sector = field(compare=False)

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s}


class ResidueKind(enum.Enum):
    COPRIME = "coprime"
    P_DIVIDES_NOT_ELL = "p_divides_not_ell"
    ELL_DIVIDES = "ell_divides"


@dataclass(frozen=True)
class ResidueClass:
    kind: ResidueKind
    rep: int | None = None


def order(level: Level, r: int, s: int) -> int:
    """Order of (r/ell, s/ell) in (1/ell)Z^2/Z^2."""
    ell = level.ell
    return ell // gcd(gcd(r % ell, s % ell), ell)


def _sector(level: Level, r: int) -> Sector:
    if r == 0:
        return Sector.ZERO_R
    return Sector.UNIT_R if level.is_unit(r) else Sector.COMPOSITE_R


def epsilon(level: Level, n: int) -> int:
    """+1 if n mod ell lies in [1, (ell-1)/2], -1 if it lies in the upper half."""
    j = n % level.ell
    if j == 0:
        raise ValueError(f"epsilon undefined: ell={level.ell} divides n={n}")
    return 1 if j <= level.half else -1


def canonicalize(level: Level, r: int, s: int) -> tuple[TorsionPoint, int]:
    """Return the canonical point of the orbit {(r,s), (-r,-s)} and the sign
    ``sigma`` with ``(r, s) == sigma * canonical (mod ell)``."""
    ell = level.ell
    r, s = r % ell, s % ell
    if order(level, r, s) != ell:
        raise ValueError(f"({r}, {s}) does not have order {ell}")
    key = r if r else s
    if key <= level.half:
        return TorsionPoint(r, s, _sector(level, r)), 1
    r, s = -r % ell, -s % ell
    return TorsionPoint(r, s, _sector(level, r)), -1


def classify(level: Level, n: int) -> ResidueClass:
    """Which case of the t-kernel applies to ``n``, with its canonical residue."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    ell = level.ell
    j = n % ell
    if j == 0:
        return ResidueClass(ResidueKind.ELL_DIVIDES)
    rep = j if j <= level.half else ell - j
    if level.is_unit(n):
        return ResidueClass(ResidueKind.COPRIME, rep)
    return ResidueClass(ResidueKind.P_DIVIDES_NOT_ELL, rep)


def representatives(level: Level) -> list[TorsionPoint]:
    """All canonical points, in the order unit-r block, composite-r block, r = 0 block."""
    ell, half = level.ell, level.half
    unit = [
        TorsionPoint(r, s, Sector.UNIT_R)
        for r in range(1, half + 1)
        if level.is_unit(r)
        for s in range(ell)
    ]
    composite = [
        TorsionPoint(r, s, Sector.COMPOSITE_R)
        for r in range(1, half + 1)
        if not level.is_unit(r)
        for s in range(ell)
        if level.is_unit(s)
    ]
    zero = [
        TorsionPoint(0, s, Sector.ZERO_R)
        for s in range(1, half + 1)
        if level.is_unit(s)
    ]
    return unit + composite + zero
