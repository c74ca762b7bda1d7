import random
from fractions import Fraction

from qformgraph.forms import QForm, compose, determinant


def random_invertible(rng: random.Random, n: int, span: int = 3) -> list[list[Fraction]]:
    while True:
        t = [[Fraction(rng.randint(-span, span)) for _ in range(n)] for _ in range(n)]
        if determinant(t) != 0:
            return t


def random_rational_invertible(rng: random.Random, n: int) -> list[list[Fraction]]:
    while True:
        t = [
            [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n)]
            for _ in range(n)
        ]
        if determinant(t) != 0:
            return t


def random_diagonal(rng: random.Random, n: int, top: int = 20) -> QForm:
    return QForm.diagonal(
        [Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(n)]
    )


def random_posdef(rng: random.Random, n: int) -> QForm:
    """A positive definite form that is in general not diagonal."""
    return compose(random_diagonal(rng, n), random_invertible(rng, n))


def trial_division(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out
