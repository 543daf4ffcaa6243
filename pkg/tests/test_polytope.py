from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from kstab import oracles
from kstab.exceptions import DegeneratePolytope, UnboundedPolytope
from kstab.polytope import (Polytope, boundary_measure, dilate, ehrhart, integrate_boundary, integrate_pl,
                            lattice_count, lattice_moments)

point = st.tuples(st.integers(0, 4), st.integers(0, 4))


def _polygon(pts):
    arr = np.array(pts, float)
    if len(set(pts)) < 3 or np.linalg.matrix_rank(arr[1:] - arr[0]) < 2:
        return None
    return Polytope.from_vertices(pts)


@settings(max_examples=40, deadline=None)
@given(st.lists(point, min_size=3, max_size=6))
def test_counts_match_brute_force(pts):
    P = _polygon(pts)
    if P is None:
        return
    for k in range(4):
        assert lattice_count(P, k) == oracles.count(P, k)


@settings(max_examples=40, deadline=None)
@given(st.lists(point, min_size=3, max_size=6))
def test_ehrhart_coefficients_are_volume_and_half_boundary(pts):
    P = _polygon(pts)
    if P is None:
        return
    e = ehrhart(P)
    hull = ConvexHull(np.array(pts, float))
    assert float(e.coeff(2)) == pytest.approx(hull.volume)
    assert e.coeff(2) == P.volume()
    assert e.coeff(1) == boundary_measure(P).total / 2
    assert e.coeff(0) == 1


def test_moments_match_brute_force():
    P = Polytope.from_vertices([(0, 0), (3, 0), (1, 2)])
    for k in range(1, 4):
        N, s, S = lattice_moments(P, k, 2)
        pts = oracles.points(P, k)
        assert N == len(pts)
        assert s == [sum(p[i] for p in pts) for i in range(2)]
        assert S[0][1] == sum(p[0] * p[1] for p in pts)


def test_halfspace_and_vertex_forms_agree():
    a = Polytope.from_vertices([(0, 0), (2, 0), (2, 2), (0, 2)])
    b = Polytope.from_halfspaces([((-1, 0), 0), ((0, -1), 0), ((1, 0), 2), ((0, 1), 2)])
    assert set(a.vertices) == set(b.vertices)
    assert a.volume() == b.volume() == 4


def test_rational_polytope_dilates_to_lattice():
    P = Polytope.from_vertices([(0, 0), (Fraction(1, 2), 0), (0, 1)])
    assert not P.is_lattice
    assert P.lattice_multiplier() == 2
    assert dilate(P, 2).is_lattice


def test_integrals_of_linear_function():
    P = Polytope.from_vertices([(0, 0), (1, 0), (1, 1), (0, 2)])
    # centroid x-coordinate times area
    assert integrate_pl(P, [((1, 0), 0)]) == Fraction(2, 3)
    assert integrate_boundary(P, [((0, 0), 1)]) == boundary_measure(P).total


def test_errors():
    with pytest.raises(UnboundedPolytope):
        Polytope.from_halfspaces([((-1, 0), 0), ((0, -1), 0)])
    with pytest.raises(DegeneratePolytope):
        Polytope.from_vertices([(0, 0), (1, 1), (2, 2)])
