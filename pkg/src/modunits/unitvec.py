"""Siegel exponent vectors {m_a} and the Kubert-Lang membership test.

A vector assigns an integer to each +-1 orbit of order-ell torsion points.
The product of Siegel functions g_a^(m_a) is a modular unit of level ell
(modulo constants) exactly when

    sum m_a r^2 = sum m_a s^2 = sum m_a r s = 0  (mod ell),
    sum m_a = 0  (mod 12).
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .torsion import (
    Level,
    ResidueClass,
    ResidueKind,
    TorsionPoint,
    canonicalize,
)

__all__ = [
    "ExponentVector",
    "ValidityReport",
    "VectorFormatError",
    "MergeWarning",
    "validate",
    "lookup",
    "max_abs",
    "search_valid",
    "load_vector",
]


class VectorFormatError(ValueError):
    """A vector file or JSON object does not match the documented schema."""


class MergeWarning(UserWarning):
    """Entries collapsed onto the same orbit while building a vector."""


@dataclass(frozen=True)
class ValidityReport:
    sum_r2: int
    sum_s2: int
    sum_rs: int
    sum_m: int
    valid: bool

    def to_json(self) -> dict:
        return {
            "sum_r2": self.sum_r2,
            "sum_s2": self.sum_s2,
            "sum_rs": self.sum_rs,
            "sum_m": self.sum_m,
            "valid": self.valid,
        }


class ExponentVector:
    """Immutable map from canonical torsion points to nonzero integers.

    Use :meth:`from_entries` to build one from arbitrary ``(r, s, m)``
    triples; it canonicalizes and merges.  The validity report is computed
    once at construction and exposed as :attr:`report`.
    """

    __slots__ = ("level", "_entries", "_by_rs", "report", "_key")

    def __init__(self, level: Level, entries: Mapping[TorsionPoint, int] | None = None):
        entries = dict(entries or {})
        for a, m in entries.items():
            pt, _ = canonicalize(level, a.r, a.s)
            if pt != a:
                raise ValueError(f"{a} is not a canonical point at level {level}")
            if not isinstance(m, int) or m == 0:
                raise ValueError(f"exponent at {a} must be a nonzero int, got {m!r}")
        self.level = level
        self._entries = MappingProxyType(dict(sorted(entries.items())))
        self._by_rs = {(a.r, a.s): m for a, m in self._entries.items()}
        self._key = (level, tuple((a.r, a.s, m) for a, m in self._entries.items()))
        self.report = validate(self)

    @classmethod
    def from_entries(cls, level: Level, triples: Iterable[tuple[int, int, int]]) -> ExponentVector:
        """Canonicalize ``(r, s, m)`` triples; both members of an orbit carry
        the same ``m``.  Repeated orbits are summed and zero sums dropped."""
        acc: dict[TorsionPoint, int] = {}
        merged = False
        for r, s, m in triples:
            pt, _ = canonicalize(level, r, s)
            if pt in acc:
                merged = True
            acc[pt] = acc.get(pt, 0) + m
        if merged:
            warnings.warn("duplicate orbits merged by summing exponents", MergeWarning, stacklevel=2)
        zeros = [pt for pt, m in acc.items() if m == 0]
        if zeros:
            warnings.warn(f"dropped {len(zeros)} zero exponent(s)", MergeWarning, stacklevel=2)
        return cls(level, {pt: m for pt, m in acc.items() if m})

    @property
    def entries(self) -> Mapping[TorsionPoint, int]:
        return self._entries

    @property
    def valid(self) -> bool:
        return self.report.valid

    def get(self, r: int, s: int) -> int:
        return self._by_rs.get((r, s), 0)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __eq__(self, other):
        if not isinstance(other, ExponentVector):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        body = ", ".join(f"({a.r},{a.s})->{m}" for a, m in self._entries.items())
        return f"ExponentVector(ell={self.level.ell}, {{{body}}})"

    def __add__(self, other: ExponentVector) -> ExponentVector:
        if other.level != self.level:
            raise ValueError("level mismatch")
        acc = dict(self._entries)
        for a, m in other._entries.items():
            acc[a] = acc.get(a, 0) + m
        return ExponentVector(self.level, {a: m for a, m in acc.items() if m})

    def __neg__(self):
        return ExponentVector(self.level, {a: -m for a, m in self._entries.items()})

    def scaled(self, k: int) -> ExponentVector:
        if k == 0:
            return ExponentVector(self.level)
        return ExponentVector(self.level, {a: k * m for a, m in self._entries.items()})

    def to_json(self) -> dict:
        return {
            "level": self.level.to_json(),
            "entries": [{"r": a.r, "s": a.s, "m": m} for a, m in self._entries.items()],
        }

    @classmethod
    def from_json(cls, data) -> ExponentVector:
        if not isinstance(data, dict):
            raise VectorFormatError("vector must be a JSON object")
        try:
            lv = data["level"]
            level = Level(lv["p"], lv.get("f", 1))
        except (KeyError, TypeError, AttributeError) as exc:
            raise VectorFormatError(f"bad or missing 'level': {exc}") from None
        except ValueError as exc:
            raise VectorFormatError(f"bad level: {exc}") from None
        raw = data.get("entries")
        if not isinstance(raw, list):
            raise VectorFormatError("'entries' must be a list")
        triples = []
        for i, e in enumerate(raw):
            if not isinstance(e, dict) or set(e) - {"r", "s", "m"} or len(e) != 3:
                raise VectorFormatError(f"entry {i}: expected keys r, s, m; got {e!r}")
            if not all(isinstance(e[k], int) and not isinstance(e[k], bool) for k in "rsm"):
                raise VectorFormatError(f"entry {i}: r, s, m must be integers; got {e!r}")
            triples.append((e["r"], e["s"], e["m"]))
        try:
            return cls.from_entries(level, triples)
        except ValueError as exc:
            raise VectorFormatError(str(exc)) from None


def load_vector(path: str | Path) -> ExponentVector:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise VectorFormatError(f"{path}: invalid JSON ({exc})") from None
    return ExponentVector.from_json(data)


def validate(v: ExponentVector) -> ValidityReport:
    """Evaluate the quadratic congruences mod ell and the sum congruence mod 12."""
    ell = v.level.ell
    r2 = s2 = rs = total = 0
    for a, m in v.entries.items():
        r2 += m * a.r * a.r
        s2 += m * a.s * a.s
        rs += m * a.r * a.s
        total += m
    r2, s2, rs, total = r2 % ell, s2 % ell, rs % ell, total % 12
    return ValidityReport(r2, s2, rs, total, not (r2 or s2 or rs or total))


def lookup(v: ExponentVector, cls: ResidueClass, s: int) -> int:
    """m at the canonical point selected by a residue class and second coordinate."""
    level = v.level
    if not 0 <= s < level.ell:
        raise ValueError(f"s={s} out of range for ell={level.ell}")
    if cls.kind is ResidueKind.ELL_DIVIDES:
        if not (1 <= s <= level.half and level.is_unit(s)):
            raise ValueError(f"s={s} is not a canonical second coordinate for r = 0")
        return v.get(0, s)
    if cls.kind is ResidueKind.P_DIVIDES_NOT_ELL and not level.is_unit(s):
        raise ValueError(f"s={s} must be a unit when p divides r")
    return v.get(cls.rep, s)


def max_abs(v: ExponentVector) -> int:
    if not len(v):
        raise ValueError("max_abs of an empty exponent vector")
    return max(abs(m) for m in v.entries.values())


def search_valid(
    level: Level, support: Sequence[TorsionPoint], bound: int, step: int = 12
) -> list[ExponentVector]:
    """All valid vectors on ``support`` with exponents in ``step * Z`` and
    ``|m| <= bound``, excluding the zero vector.

    With the default step of 12 the sum congruence mod 12 holds
    automatically; only the three quadratic sums mod ell need checking.  This
    is a sublattice search, not an exhaustive scan over all integers.
    Results are in lexicographic order of the exponent tuple (in support
    order).  Meet-in-the-middle on the mod-ell residue triple keeps six-point
    supports tractable.
    """
    if len(support) > 6:
        raise ValueError("support of at most 6 points")
    if bound > 120:
        raise ValueError("bound must be <= 120")
    if step % 12:
        raise ValueError("step must be a multiple of 12")
    pts = []
    for a in support:
        pt, _ = canonicalize(level, a.r, a.s)
        if pt in pts:
            raise ValueError(f"repeated support point {pt}")
        pts.append(pt)
    if bound < step or not pts:
        return []
    ell = level.ell
    values = list(range(-(bound // step) * step, bound + 1, step))
    quad = [(a.r * a.r, a.s * a.s, a.r * a.s) for a in pts]

    def residues(block, assignment):
        x = y = z = 0
        for (qr, qs, qrs), m in zip(block, assignment):
            x += m * qr
            y += m * qs
            z += m * qrs
        return x % ell, y % ell, z % ell

    half = len(pts) // 2
    left_q, right_q = quad[:half], quad[half:]
    right_by_res: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
    for assignment in itertools.product(values, repeat=len(right_q)):
        right_by_res.setdefault(residues(right_q, assignment), []).append(assignment)

    out = []
    for left in itertools.product(values, repeat=half):
        x, y, z = residues(left_q, left)
        for right in right_by_res.get((-x % ell, -y % ell, -z % ell), ()):
            ms = left + right
            if any(ms):
                out.append(ExponentVector(level, {a: m for a, m in zip(pts, ms) if m}))
    return out
