"""Exact rationals, factorization, square classes and local squareness.

Rationals are plain :class:`fractions.Fraction` values, which are always
kept reduced with a positive denominator.  Square classes are represented
by their signed squarefree integer representative.
"""

from __future__ import annotations

import functools
import math
import os
import random
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

TRIAL_LIMIT = 10_000
DEFAULT_FACTOR_BUDGET = 2_000_000

_RATIONAL_RE = re.compile(r"-?\d+(?:/\d+)?")


class FactorizationError(ArithmeticError):
    """Raised when the rho budget is exhausted before a factor is found."""


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (base 10, no inner whitespace)."""
    if not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"invalid rational literal {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


# -- primes -----------------------------------------------------------------

def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(TRIAL_LIMIT)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Strong-pseudoprime test; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in SMALL_PRIMES[:50]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_budget() -> int:
    raw = os.environ.get("QFORM_FACTOR_BUDGET")
    return int(raw) if raw else DEFAULT_FACTOR_BUDGET


def _brent_rho(n: int, budget: int) -> int:
    """Return a nontrivial factor of the odd composite n (Brent's variant)."""
    rng = random.Random(n)
    spent = 0
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            spent += r
            if spent > budget:
                raise FactorizationError(
                    f"factorization budget {budget} exhausted on {n}"
                )
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _perfect_power(n: int) -> Optional[tuple[int, int]]:
    """(r, k) with r**k == n for the largest such k >= 2, or None."""
    for k in range(n.bit_length(), 1, -1):
        r = _iroot(n, k)
        for cand in (r - 1, r, r + 1):
            if cand > 1 and cand**k == n:
                return cand, k
    return None


def _iroot(n: int, k: int) -> int:
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@functools.lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple[int, ...]:
    primes: list[int] = []
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            primes.append(p)
            n //= p
    if n == 1:
        return tuple(primes)
    stack = [n]
    budget = _factor_budget()
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(m):
            # below the trial-division square every cofactor left is prime
            primes.append(m)
            continue
        power = _perfect_power(m)
        if power is not None:
            # rho is hopeless on p**k with large p
            stack.extend([power[0]] * power[1])
            continue
        d = _brent_rho(m, budget)
        stack.extend((d, m // d))
    return tuple(sorted(primes))


def factorize(n: int) -> Counter:
    """Prime factorization of ``n >= 1`` as a multiset (Counter)."""
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    return Counter(_factor_cached(n))


def prime_divisors(x: RationalLike) -> set[int]:
    """Primes dividing the numerator or the denominator of x."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("zero has no finite set of prime divisors")
    return set(factorize(abs(x.numerator))) | set(factorize(x.denominator))


def valuation(x: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# -- square classes ---------------------------------------------------------

def _squarefree_part(n: int) -> int:
    out = 1
    for p, e in factorize(n).items():
        if e % 2:
            out *= p
    return out


def square_class(r: RationalLike) -> int:
    """Signed squarefree integer s with r/s a nonzero rational square."""
    r = as_rational(r)
    if r == 0:
        raise ValueError("zero has no square class")
    # r = n/d is congruent to n*d modulo squares
    s = _squarefree_part(abs(r.numerator)) * _squarefree_part(r.denominator)
    # n and d are coprime, so the product is already squarefree
    return s if r > 0 else -s


def rational_sqrt(r: RationalLike) -> Optional[Fraction]:
    """Nonnegative rational square root of r, or None if r is not a square."""
    r = as_rational(r)
    if r < 0:
        return None
    if r == 0:
        return Fraction(0)
    if square_class(r) != 1:
        return None
    root = Fraction(math.isqrt(r.numerator), math.isqrt(r.denominator))
    assert root * root == r
    return root


# -- Legendre symbol and places --------------------------------------------

def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@functools.total_ordering
@dataclass(frozen=True)
class Place:
    """A place of Q: the real place (``prime is None``) or a prime p."""

    prime: Optional[int] = None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def _key(self) -> tuple[int, int]:
        return (0, 0) if self.prime is None else (1, self.prime)

    def __lt__(self, other: "Place") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def __repr__(self) -> str:
        return f"Place({self})"


INF = Place()


def place(spec: Union[int, str, Place]) -> Place:
    """Coerce ``"inf"``, a prime literal or an int into a :class:`Place`."""
    if isinstance(spec, Place):
        return spec
    if isinstance(spec, str):
        if spec.strip().lower() in ("inf", "infinity", "oo", "∞"):
            return INF
        if not spec.strip().isdigit():
            raise ValueError(f"invalid place {spec!r}")
        spec = int(spec)
    return Place(spec)


def is_square_at(x: RationalLike, nu: Union[Place, int, str]) -> bool:
    """Whether the nonzero rational x is a square in the completion Q_nu."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("is_square_at expects a nonzero rational")
    nu = place(nu)
    if nu.is_real:
        return x > 0
    p = nu.prime
    s = square_class(x)
    if abs(s) % p == 0:
        # odd valuation
        return False
    if p == 2:
        return s % 8 == 1
    return legendre(s, p) == 1
