"""Elementary integer number theory: factorization, Möbius, divisors."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from numbers import Rational

__all__ = [
    "factorize",
    "is_prime",
    "mobius",
    "divisors",
    "sigma1",
    "totient",
    "bernoulli2",
]


def _check_natural(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


@lru_cache(maxsize=65536)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    # 6k +/- 1 wheel
    d, step = 5, 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n`` as ``{prime: exponent}`` (trial division, memoized).

    >>> factorize(360)
    {2: 3, 3: 2, 5: 1}
    >>> factorize(1)
    {}
    """
    _check_natural(n)
    return dict(_factor_tuple(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    return all(n % d and n % (d + 2) for d in range(5, isqrt(n) + 1, 6))


def mobius(n: int) -> int:
    """Möbius function: 0 unless ``n`` is squarefree, else (-1)^(number of primes)."""
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=65536)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in _factor_tuple(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n`` in ascending order."""
    _check_natural(n)
    return list(_divisors(n))


def sigma1(n: int) -> int:
    """Sum of the positive divisors of ``n``."""
    s = 1
    for p, e in factorize(n).items():
        s *= (p ** (e + 1) - 1) // (p - 1)
    return s


def totient(n: int) -> int:
    t = n
    for p in factorize(n):
        t -= t // p
    return t


def bernoulli2(x: Rational | int) -> Fraction:
    """Second Bernoulli polynomial x^2 - x + 1/6, exactly."""
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)
