"""Decision procedures for the distance graph G(Q^n, q).

Everything here reduces to one question: does a positive definite form
with prescribed local invariants exist?  Embedding q1 into q2 asks it of
the orthogonal complement, the clique number asks it for the simplex
forms S_k.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional

from . import hilbert as _hilbert
from .exactnum import INF, SMALL_PRIMES, Place, is_square_at, square_class
from .forms import (
    FormInvariants,
    QForm,
    equivalent,
    invariants,
    scaled_identity,
    simplex_invariants,
)


class Connectivity(enum.Enum):
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"
    UNKNOWN = "unknown"


def exists_posdef_with(m: int, det_class: int, hasse: Mapping[Place, int]) -> bool:
    """Whether a positive definite rational form of rank m has these invariants.

    ``hasse`` is +1 at every place it does not list.
    """
    if m < 0:
        raise ValueError("rank must be nonnegative")
    det_class = square_class(det_class)
    trivial = all(e == 1 for e in hasse.values())
    if m == 0:
        return det_class == 1 and trivial
    prod = 1
    for e in hasse.values():
        prod *= e
    if prod != 1:
        return False
    if det_class < 0 or hasse.get(INF, 1) != 1:
        return False
    if m == 1:
        return trivial
    if m == 2:
        for nu, e in hasse.items():
            if e == -1 and is_square_at(-det_class, nu):
                return False
    return True


def _complement(inv1: FormInvariants, inv2: FormInvariants) -> tuple[int, int, dict[Place, int]]:
    d1, d2 = inv1.det_class, inv2.det_class
    support = inv1.support | inv2.support | _hilbert.hilbert_support(d1, -d2)
    hasse = {
        nu: inv2.hasse_at(nu) * inv1.hasse_at(nu) * _hilbert.hilbert(d1, -d2, nu)
        for nu in sorted(support)
    }
    if __debug__:
        outside = [p for p in SMALL_PRIMES[:40] if Place(p) not in support][:3]
        for p in outside:
            assert _hilbert.hilbert(d1, -d2, p) == 1, f"support misses {p}"
    return inv2.dim - inv1.dim, square_class(d1 * d2), hasse


def _embeds_inv(inv1: FormInvariants, inv2: FormInvariants) -> bool:
    if inv1.dim > inv2.dim:
        return False
    if inv1.dim == inv2.dim:
        return inv1 == inv2
    return exists_posdef_with(*_complement(inv1, inv2))


def embeds(q1: QForm, q2: QForm) -> bool:
    """q1 ~> q2: q1 plus some positive definite form is equivalent to q2."""
    q1.check_positive_definite()
    q2.check_positive_definite()
    return _embeds_inv(invariants(q1), invariants(q2))


def is_nonempty(q: QForm) -> bool:
    """G(Q^n, q) has an edge iff q represents 1, i.e. I_1 ~> q."""
    return embeds(scaled_identity(1), q)


def max_simplex(q: QForm) -> int:
    """Largest k in [0, n] with S_k ~> q (k = 0 always qualifies)."""
    q.check_positive_definite()
    inv = invariants(q)
    for k in range(q.dim, 0, -1):
        if _embeds_inv(simplex_invariants(k), inv):
            return k
    return 0


def clique_number(q: QForm) -> int:
    return max_simplex(q) + 1


def connectivity(q: QForm) -> Connectivity:
    if not is_nonempty(q):
        return Connectivity.DISCONNECTED
    if q.dim >= 5:
        return Connectivity.CONNECTED
    if q.dim in (2, 3, 4) and equivalent(q, scaled_identity(q.dim)):
        return Connectivity.DISCONNECTED
    return Connectivity.UNKNOWN


@dataclass(frozen=True)
class GraphReport:
    form: QForm
    nonempty: bool
    clique_number: int
    connectivity: Connectivity
    max_simplex: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "form": str(self.form),
            "nonempty": self.nonempty,
            "clique": self.clique_number,
            "connectivity": self.connectivity.value,
            "max_simplex": self.max_simplex,
        }

    def same_graph_facts(self, other: "GraphReport") -> bool:
        """Compare every field except the form itself."""
        return (
            self.nonempty,
            self.clique_number,
            self.connectivity,
            self.max_simplex,
        ) == (other.nonempty, other.clique_number, other.connectivity, other.max_simplex)


def analyze(q: QForm) -> GraphReport:
    k = max_simplex(q)
    return GraphReport(
        form=q,
        nonempty=is_nonempty(q),
        clique_number=k + 1,
        connectivity=connectivity(q),
        max_simplex=k,
    )
