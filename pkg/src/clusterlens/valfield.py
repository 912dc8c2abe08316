"""Exact rationals with a p-adic valuation.

Field elements are :class:`fractions.Fraction`.  Valuations of field elements
are Python ints, with ``math.inf`` standing for the valuation of zero.  Depths
and averages are rational, so they live in ``Fraction`` (finite) or
``±math.inf``; the helpers below parse and print both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InputError

INF = math.inf

Rational = Fraction
Valuation = Union[int, float]       # int, or INF
ExtRational = Union[Fraction, float]  # Fraction, or ±INF

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Witnesses beyond the deterministic range; fixed so the check is reproducible.
_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact for n < 3.3e24 (so for all 64-bit n)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    r, s = 0, n - 1
    while s % 2 == 0:
        r += 1
        s //= 2
    bases = _SMALL_PRIMES if n < 3_317_044_064_679_887_385_961_981 else _SMALL_PRIMES + _EXTRA_BASES
    for a in bases:
        x = pow(a, s, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ValuedContext:
    """Q with the p-adic valuation for a fixed prime p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InputError(f"p={self.p!r} is not a prime")

    def ord(self, q) -> Valuation:
        return ord_p(q, self)


def _vint(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_p(q, ctx: ValuedContext | int) -> Valuation:
    """Exponent of p in the rational q; ``INF`` for q == 0."""
    p = ctx if isinstance(ctx, int) else ctx.p
    q = Fraction(q)
    if q == 0:
        return INF
    return _vint(q.numerator, p) - _vint(q.denominator, p)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def fmt(x) -> str:
    """Print a rational or extended rational as ``a/b``, ``a``, ``inf``, ``-inf``."""
    if isinstance(x, float):
        if x == INF:
            return "inf"
        if x == -INF:
            return "-inf"
        raise TypeError(f"finite floats are not exact values: {x!r}")
    return str(Fraction(x))


def parse_ext(text: str) -> ExtRational:
    text = text.strip()
    if text == "inf":
        return INF
    if text == "-inf":
        return -INF
    return parse_rational(text)
