from fractions import Fraction

import pytest

from qformgraph.forms import QForm, evaluate, scaled_identity, simplex_form
from qformgraph.geometry import beckman_quarles_simplex, verify_distances
from qformgraph.oracle import (
    SearchBounds,
    brute_hilbert,
    exact_rank,
    search_clique,
    search_unit_vectors,
)

F = Fraction


def test_bounds_validated():
    with pytest.raises(ValueError):
        SearchBounds(0, 1)


def test_unit_vectors_examples():
    assert (F(3, 5), F(4, 5)) in search_unit_vectors(scaled_identity(2), SearchBounds(5, 5))
    assert search_unit_vectors(QForm.diagonal([2, 3]), SearchBounds(15, 40)) == []
    found = search_unit_vectors(simplex_form(2), SearchBounds(1, 1))
    assert {(1, 0), (0, 1), (1, -1)} <= set(found)
    assert len(found) == 6


def test_unit_vectors_sound_and_complete_in_box():
    q = QForm(((2, F(1, 2), 0), (F(1, 2), 1, 0), (0, 0, 3)))
    found = set(search_unit_vectors(q, SearchBounds(4, 6)))
    brute = set()
    for den in range(1, 5):
        r = range(-6, 7)
        for a in r:
            for b in r:
                for c in r:
                    x = (F(a, den), F(b, den), F(c, den))
                    if evaluate(q, x) == 1:
                        brute.add(x)
    assert found == brute


def test_unit_vectors_max_candidates():
    assert len(search_unit_vectors(scaled_identity(3), SearchBounds(5, 5, max_candidates=4))) == 4


def test_clique_examples():
    ps = search_clique(simplex_form(2), 3, SearchBounds(1, 1))
    assert ps.points == ((0, 0), (1, 0), (0, 1))
    assert search_clique(scaled_identity(2), 3, SearchBounds(25, 25)) is None


def test_clique_in_i4():
    ps = search_clique(scaled_identity(4), 4, SearchBounds(2, 2))
    rep = verify_distances(ps, scaled_identity(4))
    assert all(rep.squared[i][j] == 1 for i in range(4) for j in range(4) if i != j)
    assert ps.points[1:] == (
        (1, 0, 0, 0),
        (F(1, 2), F(1, 2), F(1, 2), F(1, 2)),
        (F(1, 2), F(1, 2), F(1, 2), F(-1, 2)),
    )


def test_clique_of_size_one_and_deterministic():
    assert len(search_clique(scaled_identity(2), 1, SearchBounds())) == 1
    b = SearchBounds(3, 3)
    assert search_clique(scaled_identity(3), 2, b) == search_clique(scaled_identity(3), 2, b)


@pytest.mark.parametrize(
    "q",
    [scaled_identity(4), QForm.diagonal([1, 2, 3, 4]), QForm.diagonal([2, 3, 3, 5]),
     QForm.diagonal([7, 7, 7, 7]), simplex_form(4), QForm.diagonal([3, 5, 6, 10])],
    ids=str,
)
def test_dimension_four_fixtures_have_unit_vectors(q):
    assert search_unit_vectors(q, SearchBounds(12, 12))


def test_brute_hilbert_examples():
    assert brute_hilbert(3, 2, 3) == -1
    assert brute_hilbert(-1, -1, "inf") == -1
    assert brute_hilbert(2, 2, 2) == 1
    assert brute_hilbert(-1, -1, 2) == -1
    assert brute_hilbert(F(1, 4), 7, 7) == 1


def test_exact_rank_examples():
    assert exact_rank([(1, 0), (0, 1), (1, 1)]) == 2
    assert exact_rank([]) == 0
    ps = beckman_quarles_simplex(6)
    base = ps.points[0]
    assert exact_rank([[x - y for x, y in zip(p, base)] for p in ps.points[1:]]) == 5
    assert exact_rank([(0, 0, 1), (0, 0, 2)]) == 1
    assert exact_rank([(F(1, 2), F(1, 3)), (F(3, 2), 1)]) == 1
