"""Growth bounds for the product exponents of a modular unit.

For n >= 1, with M = max |m_a|,

    |c(n)| <= b1(n) = (1/n) sum_{d|n} sum_{k|n/d} |t_{n/dk}(k)|
           <= b2(n) = ell M sum_{d|n} sigma_1(n/d),

and asymptotically |c(n)| <= 4 ell M (log log n)^2.  The first two
inequalities are exact and checked numerically; the (log log n)^2
envelope is only reported, for n >= 16.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath.ctx_mp import MPContext

from . import closedform
from .cyclofield import CycNumber, embed_complex
from .ntharith import divisors, sigma1
from .unitvec import ExponentVector, max_abs

__all__ = ["BoundReport", "EnvelopeScan", "bound_chain", "b2_double_loop", "envelope_scan", "slack"]

ENVELOPE_START = 16


def slack(b2: int, precision_bits: int):
    """Comparison tolerance for the numeric inequalities: 2^(28 - bits) * b2
    (2^-100 * b2 at the default 128 bits)."""
    ctx = MPContext()
    ctx.prec = precision_bits
    return ctx.ldexp(ctx.mpf(b2), 28 - precision_bits)


@dataclass(frozen=True)
class BoundReport:
    n: int
    abs_c: object  # mpf
    b1: object  # mpf
    b2: int
    b3: object | None  # mpf, n >= 16 only
    chain_ok: bool

    @property
    def envelope_ok(self) -> bool | None:
        if self.b3 is None:
            return None
        return self.abs_c <= self.b3


def _abs(x: CycNumber, precision_bits: int):
    return abs(embed_complex(x, precision_bits))


def _sum_sigma(n: int) -> int:
    return sum(sigma1(n // d) for d in divisors(n))


def b2_double_loop(v: ExponentVector, n: int) -> int:
    """b2 via the explicit double sum ell M sum_{d|n} sum_{k|n/d} k."""
    M = max_abs(v) if len(v) else 0
    return v.level.ell * M * sum(k for d in divisors(n) for k in divisors(n // d))


def bound_chain(v: ExponentVector, n: int, precision_bits: int = 128) -> BoundReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    ctx = MPContext()
    ctx.prec = precision_bits
    ell = v.level.ell
    M = max_abs(v) if len(v) else 0
    abs_c = ctx.mpf(_abs(closedform.c(v, n), precision_bits))
    b1 = ctx.mpf(0)
    if len(v):
        for d in divisors(n):
            for k in divisors(n // d):
                b1 += _abs(closedform.t(v, n // (d * k), k), precision_bits)
        b1 /= n
    b2 = ell * M * _sum_sigma(n)
    b3 = None
    if n >= ENVELOPE_START:
        b3 = 4 * ell * M * ctx.log(ctx.log(n)) ** 2
    tol = slack(b2, precision_bits)
    chain_ok = bool(abs_c <= b1 + tol and b1 <= b2 + tol)
    return BoundReport(n, abs_c, b1, b2, b3, chain_ok)


@dataclass(frozen=True)
class EnvelopeScan:
    reports: list[BoundReport]
    violations: list[int]  # n >= 16 with |c(n)| above the envelope
    chain_failures: list[int]
    max_ratio: object  # max |c(n)| / (log log n)^2 over n >= 16
    argmax: int | None


def envelope_scan(v: ExponentVector, nmax: int, precision_bits: int = 128) -> EnvelopeScan:
    if nmax < ENVELOPE_START:
        raise ValueError(f"nmax must be >= {ENVELOPE_START}")
    ctx = MPContext()
    ctx.prec = precision_bits
    reports = [bound_chain(v, n, precision_bits) for n in range(1, nmax + 1)]
    violations, failures = [], []
    best, argmax = ctx.mpf(-1), None
    for rep in reports:
        if not rep.chain_ok:
            failures.append(rep.n)
        if rep.b3 is None:
            continue
        if rep.abs_c > rep.b3:
            violations.append(rep.n)
        ratio = rep.abs_c / ctx.log(ctx.log(rep.n)) ** 2
        if ratio > best:
            best, argmax = ratio, rep.n
    return EnvelopeScan(reports, violations, failures, best, argmax)
