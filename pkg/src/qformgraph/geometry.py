"""Explicit rational point configurations and an exact distance verifier."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import RationalLike, as_rational, format_rational, parse_rational, rational_sqrt
from .forms import Matrix, QForm, evaluate

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class PointSet:
    dim: int
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple(tuple(as_rational(x) for x in p) for p in self.points)
        if any(len(p) != self.dim for p in pts):
            raise ValueError(f"every point must have length {self.dim}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Sequence[Sequence[RationalLike]]) -> "PointSet":
        if not points:
            raise ValueError("PointSet.of needs at least one point to infer dim")
        return cls(len(points[0]), tuple(tuple(p) for p in points))

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "points": [[format_rational(x) for x in p] for p in self.points],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PointSet":
        return cls(
            int(data["dim"]),
            tuple(tuple(parse_rational(str(x)) for x in p) for p in data["points"]),
        )


def _sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> Point:
    return tuple(a - b for a, b in zip(x, y))


def gram_from_points(ps: PointSet, q: QForm) -> Matrix:
    """Matrix of q-inner products (q(v_i) + q(v_j) - q(v_i - v_j)) / 2."""
    if ps.dim != q.dim:
        raise ValueError("point dimension does not match the form")
    norms = [evaluate(q, v) for v in ps.points]
    return tuple(
        tuple(
            (norms[i] + norms[j] - evaluate(q, _sub(vi, vj))) / 2
            for j, vj in enumerate(ps.points)
        )
        for i, vi in enumerate(ps.points)
    )


def beckman_quarles_simplex(n: int) -> PointSet:
    """The n+1 points with pairwise rational I_n-distances.

    Coordinates are paired off as (1, 1), (1, -1) blocks, followed by
    (1, 1/15, 0, ...) and, for odd n, a final point (0, ..., 0, 7/4).
    """
    if n < 2:
        raise ValueError("beckman_quarles_simplex needs n >= 2")
    pts = []
    for b in range(n // 2):
        for sign in (1, -1):
            p = [Fraction(0)] * n
            p[2 * b], p[2 * b + 1] = Fraction(1), Fraction(sign)
            pts.append(tuple(p))
    last = [Fraction(0)] * n
    last[0], last[1] = Fraction(1), Fraction(1, 15)
    pts.append(tuple(last))
    if n % 2:
        tail = [Fraction(0)] * n
        tail[-1] = Fraction(7, 4)
        pts.append(tuple(tail))
    return PointSet(n, tuple(pts))


def rational_triangle(n: int) -> PointSet:
    """Triangle (0,0), (n-1, 2), (1-n, 2) with sides n+1, n+1, 2n-2 under x^2 + n y^2."""
    if n < 2:
        raise ValueError("rational_triangle needs n >= 2 (n = 1 is degenerate)")
    return PointSet.of([(0, 0), (n - 1, 2), (1 - n, 2)])


def triangle_form(n: int) -> QForm:
    return QForm.diagonal([1, n])


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class DistanceReport:
    all_rational: bool
    squared: tuple[tuple[Fraction, ...], ...]
    side_lengths: tuple[tuple[Optional[Fraction], ...], ...]
    affinely_independent: bool
    rank: int

    def to_json(self) -> dict:
        def fmt(x: Optional[Fraction]) -> Optional[str]:
            return None if x is None else format_rational(x)

        return {
            "all_rational": self.all_rational,
            "affinely_independent": self.affinely_independent,
            "rank": self.rank,
            "side_lengths": [[fmt(x) for x in row] for row in self.side_lengths],
        }


def verify_distances(ps: PointSet, q: QForm) -> DistanceReport:
    if ps.dim != q.dim:
        raise ValueError("point dimension does not match the form")
    m = len(ps.points)
    squared = [[Fraction(0)] * m for _ in range(m)]
    lengths: list[list[Optional[Fraction]]] = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            d2 = evaluate(q, _sub(ps.points[i], ps.points[j]))
            squared[i][j] = squared[j][i] = d2
            lengths[i][j] = lengths[j][i] = rational_sqrt(d2)
    diffs = [_sub(p, ps.points[0]) for p in ps.points[1:]]
    rank = _rank(diffs)
    return DistanceReport(
        all_rational=all(x is not None for row in lengths for x in row),
        squared=tuple(map(tuple, squared)),
        side_lengths=tuple(map(tuple, lengths)),
        affinely_independent=rank == m - 1,
        rank=rank,
    )
