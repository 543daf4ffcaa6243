from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kstab.exact import Poly, Series, det, fit_guarded, interpolate, primitive, rat, series_solve, solve
from kstab.exceptions import InputError, InterpolationInconsistent

small = st.integers(-20, 20)
coeff_lists = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=6)


@given(coeff_lists)
def test_interpolation_recovers_coefficients(coeffs):
    p = Poly(coeffs)
    xs = list(range(len(coeffs)))
    assert interpolate(xs, [p(x) for x in xs]) == p


@given(coeff_lists)
def test_guarded_fit_accepts_exact_polynomials(coeffs):
    p = Poly(coeffs)
    deg = len(coeffs) - 1
    assert fit_guarded(p, range(deg + 3), deg, guards=2) == p


def test_guard_sample_catches_wrong_degree():
    with pytest.raises(InterpolationInconsistent):
        fit_guarded(lambda k: k ** 3, range(5), 2, guards=2)


def test_rat_rejects_floats():
    assert rat("3/4") == Fraction(3, 4)
    with pytest.raises(InputError):
        rat(0.5)


def test_solve_and_det():
    A = [[2, 1], [1, 3]]
    assert solve(A, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert det(A) == 5
    assert solve([[1, 2], [2, 4]], [1, 2]) is None


def test_primitive():
    assert primitive([Fraction(2, 3), Fraction(4, 3)]) == ((1, 2), Fraction(3, 2))


@given(st.lists(small, min_size=1, max_size=4).filter(lambda c: c[0] != 0))
def test_series_inverse(coeffs):
    s = Series(coeffs, 5)
    one = s * s.inverse()
    assert one.coeffs == (1, 0, 0, 0, 0)


def test_series_solve_matches_scalar_solve():
    a = [[Series([2, 1], 3), Series([0, 1], 3)], [Series([1], 3), Series([3], 3)]]
    b = [Series([1], 3), Series([0, 2], 3)]
    x = series_solve(a, b)
    for row, rhs in zip(a, b):
        lhs = row[0] * x[0] + row[1] * x[1]
        assert lhs.coeffs == rhs.coeffs
    assert x[0][0] == Fraction(1, 2)
