"""Hilbert symbols (a, b)_v over the completions of Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .exactnum import (
    INF,
    Place,
    RationalLike,
    as_rational,
    legendre,
    place,
    prime_divisors,
)

PlaceLike = Union[Place, int, str]


def _split(x: Fraction, p: int) -> tuple[int, int]:
    """(v_p(x) mod 2, unit part of x reduced mod p, or mod 8 when p = 2)."""
    num, den, v = x.numerator, x.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    mod = 8 if p == 2 else p
    return v % 2, num * pow(den, -1, mod) % mod


def _local_symbol(a: Fraction, b: Fraction, p: int) -> int:
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps_u, eps_v = (u - 1) // 2 % 2, (v - 1) // 2 % 2
        om_u, om_v = (u * u - 1) // 8 % 2, (v * v - 1) // 8 % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if alpha and beta and p % 4 == 3 else 1
    if beta:
        sign *= legendre(u, p)
    if alpha:
        sign *= legendre(v, p)
    return sign


def hilbert(a: RationalLike, b: RationalLike, nu: PlaceLike) -> int:
    """Return (a, b)_nu in {-1, +1}.

    At a prime the value is read off the valuation parities and the unit
    residues of a and b, so it never needs to factor either argument and is
    unchanged when a or b is multiplied by a square.
    """
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    nu = place(nu)
    if nu.is_real:
        return -1 if a < 0 and b < 0 else 1
    return _local_symbol(a, b, nu.prime)


def hilbert_support(a: RationalLike, b: RationalLike) -> set[Place]:
    """Places outside of which (a, b)_v is known to be +1."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    primes = prime_divisors(a) | prime_divisors(b) | {2}
    return {INF} | {Place(p) for p in primes}


def product_formula_holds(a: RationalLike, b: RationalLike) -> bool:
    prod = 1
    for nu in hilbert_support(a, b):
        prod *= hilbert(a, b, nu)
    return prod == 1
