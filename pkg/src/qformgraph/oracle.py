"""Brute-force reference searches used to cross-check the invariant engine.

Nothing here relies on the Hilbert-symbol machinery: the searches only use
exact evaluation of the form and modular arithmetic.  A positive result is
always checked exactly; a negative result only means "not within bounds".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .exactnum import Place, RationalLike, as_rational, place
from .forms import QForm, evaluate
from .geometry import PointSet


@dataclass(frozen=True)
class SearchBounds:
    denominator_bound: int = 5
    height_bound: int = 5
    max_candidates: int = 10_000

    def __post_init__(self) -> None:
        if min(self.denominator_bound, self.height_bound, self.max_candidates) < 1:
            raise ValueError("all search bounds must be >= 1")


def _ldl(gram: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    # q(x) = sum_k d[k] * (x_k + sum_{j>k} u[k][j] x_j)^2, built from the last
    # coordinate backwards so enumeration can fix x_{n-1} first
    n = len(gram)
    a = [list(map(Fraction, row)) for row in gram]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        if a[k][k] <= 0:
            raise ValueError("oracle search needs a positive definite form")
        d[k] = a[k][k]
        for j in range(k + 1, n):
            u[k][j] = a[k][j] / d[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] -= d[k] * u[k][i] * u[k][j]
    return d, u


def _integer_solutions(q: QForm, target: int, height: int) -> list[tuple[int, ...]]:
    """All integer a with |a_i| <= height and q(a) == target.

    Pruning uses floating-point bounds with slack; every reported vector is
    confirmed in exact integer arithmetic.
    """
    d_exact, u_exact = _ldl(q.gram)
    d = [float(x) for x in d_exact]
    u = [[float(x) for x in row] for row in u_exact]
    g = math.lcm(*(x.denominator for row in q.gram for x in row))
    gi = [[int(x * g) for x in row] for row in q.gram]
    goal = g * target
    n = q.dim
    slack = 1e-9 * max(1.0, float(target))
    out: list[tuple[int, ...]] = []
    a = [0] * n

    def rec(k: int, budget: float) -> None:
        if k < 0:
            if abs(budget) <= slack:
                val = sum(a[i] * gi[i][j] * a[j] for i in range(n) for j in range(n))
                if val == goal:
                    out.append(tuple(a))
            return
        c = sum(u[k][j] * a[j] for j in range(k + 1, n))
        radius = math.sqrt(max(budget, 0.0) / d[k]) + 1e-6
        lo = max(-height, math.ceil(-c - radius))
        hi = min(height, math.floor(-c + radius))
        for v in range(lo, hi + 1):
            t = v + c
            rest = budget - d[k] * t * t
            if rest >= -slack:
                a[k] = v
                rec(k - 1, rest)
        a[k] = 0

    rec(n - 1, float(target))
    return out


def _order_key(den: int, num: tuple[int, ...]) -> tuple:
    # small denominators and heights first; positive coordinates before negative
    return (den, sum(map(abs, num)), tuple(-x for x in num))


def search_unit_vectors(q: QForm, b: SearchBounds) -> list[tuple[Fraction, ...]]:
    """Unit vectors a/den of q with den <= L and |a_i| <= H, in a fixed order."""
    found: list[tuple[Fraction, ...]] = []
    for den in range(1, b.denominator_bound + 1):
        sols = [
            s
            for s in _integer_solutions(q, den * den, b.height_bound)
            if math.gcd(den, *s) == 1
        ]
        sols.sort(key=lambda s: _order_key(den, s))
        for s in sols:
            x = tuple(Fraction(v, den) for v in s)
            assert evaluate(q, x) == 1
            found.append(x)
            if len(found) >= b.max_candidates:
                return found
    return found


def _compatibility(q: QForm, units: list[tuple[Fraction, ...]]) -> list[set[int]]:
    """Index pairs of unit vectors at q-distance 1.

    For unit vectors q(u - v) = 2 - 2 B(u, v), so the test is B(u, v) = 1/2.
    With G = Gi / g integral and u = a / du, v = c / dv this reads
    2 a^T Gi c == g du dv, evaluated exactly in integers.
    """
    m = len(units)
    if m == 0:
        return []
    g = math.lcm(*(x.denominator for row in q.gram for x in row))
    gi = [[int(x * g) for x in row] for row in q.gram]
    dens = [math.lcm(*(x.denominator for x in u)) for u in units]
    nums = [[int(x * d) for x in u] for u, d in zip(units, dens)]
    bound = max(map(abs, (v for row in nums for v in row)), default=1)
    gmax = max(abs(v) for row in gi for v in row)
    n = q.dim
    if 2 * n * n * gmax * bound * bound < 2**62 and g * max(dens) ** 2 < 2**62:
        a = np.array(nums, dtype=np.int64)
        lhs = 2 * (a @ np.array(gi, dtype=np.int64) @ a.T)
        d = np.array(dens, dtype=np.int64)
        hit = lhs == g * np.outer(d, d)
        np.fill_diagonal(hit, False)
        return [set(np.flatnonzero(row).tolist()) for row in hit]
    adj: list[set[int]] = [set() for _ in range(m)]
    for i in range(m):
        wi = [sum(nums[i][k] * gi[k][j] for k in range(n)) for j in range(n)]
        for j in range(i + 1, m):
            if 2 * sum(x * y for x, y in zip(wi, nums[j])) == g * dens[i] * dens[j]:
                adj[i].add(j)
                adj[j].add(i)
    return adj


def search_clique(q: QForm, c: int, b: SearchBounds) -> Optional[PointSet]:
    """A c-clique containing the origin, by backtracking over unit vectors."""
    if c < 1:
        raise ValueError("clique size must be positive")
    origin = tuple(Fraction(0) for _ in range(q.dim))
    if c == 1:
        return PointSet(q.dim, (origin,))
    units = search_unit_vectors(q, b)
    adj = _compatibility(q, units)

    def grow(chosen: list[int], candidates: list[int]) -> Optional[list[int]]:
        if len(chosen) == c - 1:
            return chosen
        for pos, v in enumerate(candidates):
            if len(chosen) + 1 + (len(candidates) - pos - 1) < c - 1:
                break
            rest = [w for w in candidates[pos + 1 :] if w in adj[v]]
            hit = grow(chosen + [v], rest)
            if hit is not None:
                return hit
        return None

    hit = grow([], list(range(len(units))))
    if hit is None:
        return None
    pts = (origin,) + tuple(units[i] for i in hit)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert evaluate(q, tuple(x - y for x, y in zip(pts[i], pts[j]))) == 1
    return PointSet(q.dim, pts)


# -- Hilbert symbol by solubility search -------------------------------------

def _trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _strip_squares(n: int) -> int:
    sign = -1 if n < 0 else 1
    core = 1
    for p, e in _trial_factor(abs(n)).items():
        if e % 2:
            core *= p
    return sign * core


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def brute_hilbert(a: RationalLike, b: RationalLike, nu: Union[Place, int, str]) -> int:
    """Decide (a, b)_nu by searching for a primitive solution of z^2 = a x^2 + b y^2.

    At a prime p the search runs modulo p^e with e = v_p(4ab) + 3, after
    a and b are made squarefree integers; primitive solutions at that
    precision lift to Z_p by Hensel's lemma.
    """
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise ValueError("brute_hilbert needs nonzero arguments")
    nu = place(nu)
    if nu.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = nu.prime
    ai = _strip_squares(a.numerator * a.denominator)
    bi = _strip_squares(b.numerator * b.denominator)
    e = _vp(4 * ai * bi, p) + 3
    mod = p**e
    res = np.arange(mod, dtype=np.int64)
    sq = res * res % mod
    is_sq = np.zeros(mod, dtype=bool)
    is_sq[sq] = True
    is_unit_sq = np.zeros(mod, dtype=bool)
    is_unit_sq[sq[res % p != 0]] = True
    am, bm = ai % mod, bi % mod
    # x a unit: scale so x = 1, y and z arbitrary
    if is_sq[(am + bm * sq) % mod].any():
        return 1
    # x divisible by p, y a unit: y = 1
    xs = sq[res % p == 0]
    if is_sq[(am * xs + bm) % mod].any():
        return 1
    # x, y divisible by p, z a unit: z = 1
    vals = (am * xs[:, None] + bm * xs[None, :]) % mod
    if is_unit_sq[vals].any():
        return 1
    return -1


def exact_rank(vectors: Sequence[Sequence[RationalLike]]) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination on integer rows."""
    rows: list[list[int]] = []
    for v in vectors:
        fr = [as_rational(x) for x in v]
        scale = math.lcm(*(x.denominator for x in fr)) if fr else 1
        rows.append([int(x * scale) for x in fr])
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    rank, prev = 0, 1
    for col in range(n):
        if rank == m:
            break
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        piv = rows[rank][col]
        for r in range(rank + 1, m):
            rows[r] = [
                (piv * rows[r][j] - rows[r][col] * rows[rank][j]) // prev
                for j in range(n)
            ]
        prev = piv
        rank += 1
    return rank
