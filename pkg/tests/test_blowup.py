from fractions import Fraction

import pytest

import kstab.blowup as blowup
from kstab.blowup import (chop_normal, chop_threshold, corner_chop, corner_length_poly, corollary_check,
                          default_depths, epsilon_fit, is_delzant, lambda_fiber, repulsive_vertex)
from kstab.configs import make_config
from kstab.exceptions import ChopTooDeep, LemmaMismatch, NonDelzantVertex, RegimeBreak
from kstab.polytope import Polytope

TWO_DELTA = Polytope.simplex(2, 2)


def test_chop_of_twice_the_triangle():
    chop = corner_chop(TWO_DELTA, (2, 0), Fraction(1, 2))
    assert chop.scale == 2
    assert set(chop.scaled.vertices) == {(0, 0), (0, 4), (3, 0), (3, 1)}
    assert chop.polytope.volume() == 2 - Fraction(1, 8)


def test_chop_normal_and_threshold():
    assert chop_normal(TWO_DELTA, (2, 0)) == (-1, 0)  # <u, e> = 1 on both edge directions
    assert chop_threshold(TWO_DELTA, (2, 0)) == 2


def test_chop_limits():
    assert corner_chop(TWO_DELTA, (2, 0), 0).polytope == TWO_DELTA
    corner_chop(TWO_DELTA, (2, 0), 1)
    with pytest.raises(ChopTooDeep):
        corner_chop(TWO_DELTA, (2, 0), 2)


def test_non_delzant_vertex():
    P = Polytope.from_vertices([(0, 0), (2, 1), (0, 1)])
    assert not is_delzant(P, (0, 0))
    with pytest.raises(NonDelzantVertex):
        corner_chop(P, (0, 0), Fraction(1, 4))


def test_default_depths_stay_below_half_threshold():
    d = default_depths(TWO_DELTA, (2, 0), 6)
    assert max(d) <= 1 and len(set(d)) == 6


def test_lambda_and_repulsive_vertex():
    cfg = make_config(TWO_DELTA, [((1, 0), 0)])
    assert lambda_fiber(cfg, (2, 0)) == -2
    rep = repulsive_vertex(TWO_DELTA, cfg)
    assert rep.vertex == (2, 0) and rep.strict


def test_interval_calibration():
    P = Polytope.interval(0, 1)
    cfg = make_config(P, [((1,), 0)])
    assert lambda_fiber(cfg, (1,)) == -1
    scan = epsilon_fit(P, cfg, (1,))
    assert scan.coefficient == 1


def test_flipped_lambda_sign_is_caught(monkeypatch):
    P = Polytope.interval(0, 1)
    cfg = make_config(P, [((1,), 0)])
    real = blowup.lambda_fiber
    monkeypatch.setattr(blowup, "lambda_fiber", lambda c, v: -real(c, v))
    with pytest.raises(LemmaMismatch):
        epsilon_fit(P, cfg, (1,))


def test_twice_triangle_coefficient(simplex2):
    scan = epsilon_fit(simplex2.polytope, simplex2.configs["fx"], (2, 0), simplex2.scans["corner"].depths)
    assert scan.coefficient == Fraction(-2, 3) == scan.expected_coefficient
    assert all(v for v in scan.checks.values())


def test_depths_across_a_crease_break_the_regime():
    cfg = make_config(TWO_DELTA, [((0, 0), 0), ((0, 1), Fraction(-3, 2))])
    depths = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(5, 4), Fraction(3, 2)]
    with pytest.raises(RegimeBreak):
        epsilon_fit(TWO_DELTA, cfg, (0, 2), depths)


@pytest.mark.parametrize("vertex", [(0, 0), (2, 0), (0, 2)])
def test_corner_length_leading_coefficient(vertex):
    assert corner_length_poly(TWO_DELTA, vertex).coeff(2) == Fraction(1, 2)


def test_corollary_on_step(cp1):
    rep = corollary_check(cp1.polytope, cp1.configs["step"])
    assert rep.holds and rep.mean > rep.lam
    assert all(F < rep.F for _, F in rep.chopped)


def test_corollary_skips(cp1):
    assert corollary_check(cp1.polytope, cp1.configs["ramp"]).skipped == "ProductConfiguration"
    assert corollary_check(cp1.polytope, cp1.configs["vee"]).skipped == "NotStrictlyRepulsive"
