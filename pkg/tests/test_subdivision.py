from fractions import Fraction

import pytest

from kstab.exceptions import BadSubdivision
from kstab.polytope import Polytope
from kstab.subdivision import (convexity_constraints, delaunay_like, make_subdivision, regular_subdivision,
                               trivial_subdivision)

SQ = Polytope.cube(2, 1)
CORNERS = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_square_with_diagonal():
    sub = make_subdivision(SQ, CORNERS, [(0, 1, 2), (0, 2, 3)])
    hinges = convexity_constraints(SQ, sub)
    assert len(hinges) == 1
    # convex across the diagonal 0-2: f(0,0) + f(1,1) <= f(1,0) + f(0,1)
    coeffs = {i: c for i, c in hinges[0].coeffs if c != 0}
    assert coeffs == {0: 1, 2: 1, 1: -1, 3: -1}


@pytest.mark.parametrize("points, simplices, message", [
    (CORNERS + [(Fraction(1, 2), Fraction(1, 2))], [(0, 1, 4), (1, 2, 4), (2, 3, 4)], "volume"),
    (CORNERS[:3], [(0, 1, 2)], "vertex"),
    (CORNERS + [(2, 2)], [(0, 1, 2), (0, 2, 3)], "not in the polytope"),
    (CORNERS, [(0, 1, 2), (0, 2, 3), (1, 2, 3)], "volume"),
    (CORNERS + [(Fraction(1, 2), Fraction(1, 2))], [(0, 1, 2), (0, 2, 3)], "not used"),
    (CORNERS, [(0, 1, 1), (0, 2, 3)], "distinct"),
])
def test_invalid_subdivisions(points, simplices, message):
    with pytest.raises(BadSubdivision, match=message):
        make_subdivision(SQ, points, simplices)


def test_overlapping_simplices_rejected():
    pts = CORNERS + [(Fraction(1, 2), Fraction(1, 2))]
    with pytest.raises(BadSubdivision):
        make_subdivision(SQ, pts, [(0, 1, 2), (0, 2, 3), (0, 1, 4)])


def test_regular_subdivision_from_heights():
    sub = regular_subdivision(SQ, CORNERS, [0, 0, 1, 0])
    assert len(sub.simplices) == 2
    with pytest.raises(BadSubdivision, match="generic"):
        regular_subdivision(SQ, CORNERS, [0, 0, 0, 0])


def test_delaunay_uses_every_point():
    pts = CORNERS + [(Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), 0)]
    sub = delaunay_like(SQ, pts, seed=1)
    assert len(sub.points) == 6
    assert sum(1 for _ in sub.simplices) == 5


def test_trivial_subdivision_of_simplex_has_no_hinges():
    P = Polytope.simplex(2)
    assert convexity_constraints(P, trivial_subdivision(P)) == []
