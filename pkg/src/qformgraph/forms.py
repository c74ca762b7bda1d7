"""Rational quadratic forms: Gram matrices, diagonalization and invariants.

A form is stored by its symmetric Gram matrix G with q(x) = x^T G x, so a
cross term c*x_i*x_j of the polynomial contributes c/2 to G[i][j] and
G[j][i].
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import hilbert as _hilbert
from .exactnum import (
    INF,
    Place,
    RationalLike,
    as_rational,
    format_rational,
    prime_divisors,
    square_class,
)

Matrix = tuple[tuple[Fraction, ...], ...]


class SingularFormError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    """The form fails the leading-principal-minor test."""

    def __init__(self, index: int, minor: Fraction):
        self.index = index
        self.minor = minor
        super().__init__(
            f"form is not positive definite: leading principal minor "
            f"{index} equals {format_rational(minor)}"
        )


def _matrix(rows: Iterable[Iterable[RationalLike]]) -> Matrix:
    return tuple(tuple(as_rational(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
        for row in a
    )


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*a))


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(row) for row in m]
    n = len(a)
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if a[r][i] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            a[i], a[pivot] = a[pivot], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return det


@dataclass(frozen=True)
class QForm:
    """A rational quadratic form given by its symmetric Gram matrix."""

    gram: Matrix

    def __post_init__(self) -> None:
        g = _matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError(f"Gram matrix is not symmetric at ({i}, {j})")

    @classmethod
    def diagonal(cls, entries: Iterable[RationalLike]) -> "QForm":
        entries = [as_rational(e) for e in entries]
        n = len(entries)
        return cls(
            tuple(
                tuple(entries[i] if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            )
        )

    @property
    def dim(self) -> int:
        return len(self.gram)

    def is_diagonal(self) -> bool:
        return all(
            self.gram[i][j] == 0
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def leading_minors(self) -> list[Fraction]:
        return [
            determinant([row[:k] for row in self.gram[:k]])
            for k in range(1, self.dim + 1)
        ]

    def check_positive_definite(self) -> None:
        """Raise :class:`NotPositiveDefiniteError` naming the first bad minor."""
        for k, minor in enumerate(self.leading_minors(), start=1):
            if minor <= 0:
                raise NotPositiveDefiniteError(k, minor)

    def is_positive_definite(self) -> bool:
        try:
            self.check_positive_definite()
        except NotPositiveDefiniteError:
            return False
        return True

    def __str__(self) -> str:
        if self.is_diagonal():
            return "diag:" + ",".join(
                format_rational(self.gram[i][i]) for i in range(self.dim)
            )
        rows = ",".join(
            "[" + ",".join(format_rational(x) for x in row) + "]"
            for row in self.gram
        )
        return f"gram:[{rows}]"


def evaluate(q: QForm, x: Sequence[RationalLike]) -> Fraction:
    """q(x) = x^T G x."""
    if len(x) != q.dim:
        raise ValueError(f"point has length {len(x)}, form has dimension {q.dim}")
    x = [as_rational(t) for t in x]
    total = Fraction(0)
    for i, row in enumerate(q.gram):
        if x[i]:
            total += x[i] * sum((g * t for g, t in zip(row, x)), Fraction(0))
    return total


def compose(q: QForm, t: Sequence[Sequence[RationalLike]]) -> QForm:
    """The form x -> q(T x), with Gram matrix T^T G T."""
    tm = _matrix(t)
    if len(tm) != q.dim:
        raise ValueError("transform does not match the form dimension")
    return QForm(mat_mul(transpose(tm), mat_mul(q.gram, tm)))


def simplex_form(k: int) -> QForm:
    """S_k = sum_{i <= j} x_i x_j: ones on the diagonal, 1/2 elsewhere."""
    if k < 1:
        raise ValueError("simplex_form needs k >= 1")
    half = Fraction(1, 2)
    return QForm(
        tuple(
            tuple(Fraction(1) if i == j else half for j in range(k))
            for i in range(k)
        )
    )


def scaled_identity(n: int, d: RationalLike = 1) -> QForm:
    """(1/d) I_n, whose unit-distance graph is the sqrt(d)-distance graph."""
    d = as_rational(d)
    if n < 1 or d <= 0:
        raise ValueError("scaled_identity needs n >= 1 and d > 0")
    return QForm.diagonal([1 / d] * n)


# -- diagonalization --------------------------------------------------------

@dataclass(frozen=True)
class DiagonalForm:
    """Diagonal entries together with a congruence witness.

    ``transform^T * gram * transform == diag(entries)``.
    """

    entries: tuple[Fraction, ...]
    transform: Matrix


def diagonalize(q: QForm) -> DiagonalForm:
    """Symmetric Gaussian elimination, tracking the column operations."""
    n = q.dim
    a = [list(row) for row in q.gram]
    p = [list(row) for row in identity_matrix(n)]

    def add_col(dst: int, src: int, f: Fraction) -> None:
        # congruence by the elementary column operation col_dst += f col_src
        for r in range(n):
            a[r][dst] += f * a[r][src]
        for c in range(n):
            a[dst][c] += f * a[src][c]
        for r in range(n):
            p[r][dst] += f * p[r][src]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
            if j is None:
                raise SingularFormError("Gram matrix is singular")
            if a[j][j] != 0:
                swap(i, j)
            else:
                add_col(i, j, Fraction(1))
        for j in range(i + 1, n):
            if a[j][i]:
                add_col(j, i, -a[j][i] / a[i][i])

    entries = tuple(a[i][i] for i in range(n))
    return DiagonalForm(entries, _matrix(p))


# -- invariants -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FormInvariants:
    """Dimension, determinant square class, signature and Hasse invariants.

    ``hasse`` lists the places in the support; every other place carries +1.
    Equality is semantic: Hasse values are compared on the union of supports.
    """

    dim: int
    det_class: int
    signature: tuple[int, int]
    hasse: dict[Place, int] = field(default_factory=dict)

    @property
    def support(self) -> set[Place]:
        return set(self.hasse)

    def hasse_at(self, nu: Place) -> int:
        return self.hasse.get(nu, 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormInvariants):
            return NotImplemented
        if (self.dim, self.det_class, self.signature) != (
            other.dim,
            other.det_class,
            other.signature,
        ):
            return False
        return all(
            self.hasse_at(nu) == other.hasse_at(nu)
            for nu in self.support | other.support
        )

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "det_class": self.det_class,
            "signature": list(self.signature),
            "hasse": {str(nu): self.hasse[nu] for nu in sorted(self.hasse)},
        }


def hasse_invariant(entries: Sequence[Fraction], nu: Place) -> int:
    """prod_{i<j} (a_i, a_j)_nu for a diagonal form."""
    e = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            e *= _hilbert.hilbert(entries[i], entries[j], nu)
    return e


def _hasse_support(q: QForm, det: Fraction) -> list[Place]:
    # at an odd prime not dividing det(G) or any denominator of G, the form is
    # p-adically unimodular and its Hasse invariant is +1
    den = math.lcm(*(x.denominator for row in q.gram for x in row))
    primes = {2} | prime_divisors(det) | prime_divisors(den)
    return [INF] + [Place(p) for p in sorted(primes)]


def invariants(q: QForm) -> FormInvariants:
    entries = diagonalize(q).entries
    det = math.prod(entries, start=Fraction(1))
    pos = sum(1 for e in entries if e > 0)
    return FormInvariants(
        dim=q.dim,
        det_class=square_class(det),
        signature=(pos, q.dim - pos),
        hasse={nu: hasse_invariant(entries, nu) for nu in _hasse_support(q, det)},
    )


def equivalent(q1: QForm, q2: QForm) -> bool:
    """Rational equivalence, decided by the complete set of local invariants."""
    if q1.dim != q2.dim:
        return False
    return invariants(q1) == invariants(q2)


# -- the simplex forms S_k ---------------------------------------------------

def lambda_k(k: int) -> int | Fraction:
    """Square-class representative of det S_k: k+1 (k even), (k+1)/2 (k odd)."""
    return k + 1 if k % 2 == 0 else Fraction(k + 1, 2)


def s_k_invariants(k: int) -> FormInvariants:
    """Closed-form invariants of S_k, without diagonalizing."""
    if k < 1:
        raise ValueError("s_k_invariants needs k >= 1")
    other = -2 if k % 2 == 0 else -1
    support = sorted(_hilbert.hilbert_support(k + 1, other))
    return FormInvariants(
        dim=k,
        det_class=square_class(lambda_k(k)),
        signature=(k, 0),
        hasse={nu: _hilbert.hilbert(k + 1, other, nu) for nu in support},
    )


@functools.lru_cache(maxsize=None)
def simplex_invariants(k: int) -> FormInvariants:
    """Invariants of S_k computed directly from its Gram matrix (cached)."""
    return invariants(simplex_form(k))
