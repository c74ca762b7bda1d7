import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import trial_division
from qformgraph.exactnum import (
    INF,
    Place,
    factorize,
    format_rational,
    is_prime,
    is_square_at,
    legendre,
    parse_rational,
    place,
    rational_sqrt,
    square_class,
)
from qformgraph.hilbert import hilbert

nonzero_rationals = st.fractions().filter(lambda x: x != 0)


@pytest.mark.parametrize(
    "n, expected",
    [(12, {2: 2, 3: 1}), (1, {}), (10403, {101: 1, 103: 1})],
)
def test_factorize_examples(n, expected):
    assert factorize(n) == Counter(expected)
    assert sorted(factorize(n).elements()) == trial_division(n)


def test_factorize_random_up_to_1e12():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 10**12)
        f = factorize(n)
        assert math.prod(p**e for p, e in f.items()) == n
        assert all(is_prime(p) for p in f)


def test_factorize_semiprime_beyond_trial_range():
    p, q = 1_000_003, 998_244_353
    assert factorize(p * q) == Counter({p: 1, q: 1})


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)


def test_is_prime_small_range():
    brute = [n for n in range(2, 3000) if all(n % d for d in range(2, math.isqrt(n) + 1))]
    assert [n for n in range(3000) if is_prime(n)] == brute


@pytest.mark.parametrize(
    "r, expected",
    [(Fraction(4, 9), 1), (Fraction(3, 4), 3), (Fraction(-8, 3), -6)],
)
def test_square_class_examples(r, expected):
    assert square_class(r) == expected


def test_square_class_of_zero_rejected():
    with pytest.raises(ValueError):
        square_class(0)


@given(nonzero_rationals)
def test_square_class_quotient_is_square(r):
    s = square_class(r)
    assert s != 0 and (s > 0) == (r > 0)
    assert all(e == 1 for e in factorize(abs(s)).values())
    assert rational_sqrt(r / s) is not None


@given(nonzero_rationals, nonzero_rationals)
def test_square_class_ignores_squares(r, s):
    assert square_class(r * s * s) == square_class(r)


@pytest.mark.parametrize("a, p, expected", [(2, 3, -1), (4, 5, 1), (3, 3, 0)])
def test_legendre_examples(a, p, expected):
    assert legendre(a, p) == expected


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 97])
def test_legendre_matches_residue_table(p):
    residues = {x * x % p for x in range(1, p)}
    for a in range(-p, 2 * p):
        expected = 0 if a % p == 0 else (1 if a % p in residues else -1)
        assert legendre(a, p) == expected


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from([3, 5, 7, 11, 101]))
def test_legendre_is_multiplicative(a, b, p):
    if a * b % p:
        assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


@pytest.mark.parametrize("p", [2, 9, 1])
def test_legendre_rejects_bad_modulus(p):
    with pytest.raises(ValueError):
        legendre(3, p)


def test_is_square_at_examples():
    assert is_square_at(2, INF)
    assert is_square_at(2, 7)
    assert not is_square_at(2, 2)


def test_is_square_at_matches_definitions():
    # 2-adic unit squares are exactly the units = 1 mod 8
    assert [u for u in range(1, 40, 2) if is_square_at(u, 2)] == [1, 9, 17, 25, 33]
    assert is_square_at(Fraction(17, 4), 2)
    assert not is_square_at(-1, INF)
    assert not is_square_at(3, 3)
    assert is_square_at(Fraction(9, 25), 5)


@given(nonzero_rationals, nonzero_rationals, st.sampled_from(["inf", 2, 3, 5, 7]))
def test_local_square_is_hilbert_trivial(x, b, nu):
    if is_square_at(x, nu):
        assert hilbert(x, b, nu) == 1


def test_place_parsing_and_order():
    assert place("inf") == INF
    assert place("7") == Place(7)
    assert sorted([Place(5), INF, Place(2)]) == [INF, Place(2), Place(5)]
    with pytest.raises(ValueError):
        Place(9)
    with pytest.raises(ValueError):
        place("x")


@pytest.mark.parametrize("text", ["0", "-3", "1/15", "-7/4", "10/4"])
def test_rational_roundtrip(text):
    x = parse_rational(text)
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("text", ["1 /2", "1.5", "", "/3", "2/", "+1"])
def test_rational_syntax_errors(text):
    with pytest.raises(ValueError):
        parse_rational(text)
