from fractions import Fraction

import pytest

from kstab.configs import (AffineAction, base_change, dilate_config, lattice_normalizer, lift, lift_Q, make_config,
                           twist)
from kstab.exceptions import CapTooSmall, NonIntegralTwist, NonLatticeLift, NotConvex
from kstab.polytope import Polytope

SQ = Polytope.from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])


def test_config_evaluates_max_of_pieces():
    cfg = make_config(SQ, [((0, 0), 0), ((1, 1), -1)])
    assert cfg((Fraction(1, 2), Fraction(1, 2))) == 0
    assert cfg((1, 1)) == 1
    assert cfg.cap == 1
    assert not cfg.is_product


def test_affine_config_is_product():
    assert make_config(SQ, [((1, 0), 0)]).is_product


def test_cap_below_max_rejected():
    with pytest.raises(CapTooSmall):
        make_config(SQ, [((2, 0), 0)], cap=1)


def test_empty_pieces_rejected():
    with pytest.raises(NotConvex):
        make_config(SQ, [])


def test_twist_needs_integral_action():
    cfg = make_config(SQ, [((0, 0), 0), ((1, 1), -1)])
    t = twist(cfg, AffineAction((1, 0), 2))
    assert t((1, 1)) == cfg((1, 1)) + 3
    with pytest.raises(NonIntegralTwist):
        twist(cfg, AffineAction((Fraction(1, 2), 0), 0))


def test_base_change_and_dilation():
    cfg = make_config(SQ, [((0, 0), 0), ((1, 1), -1)])
    assert base_change(cfg, 3)((1, 1)) == 3
    d = dilate_config(cfg, 2)
    assert d.polytope.volume() == 4
    assert d((2, 2)) == 2


def test_lift_of_lattice_crease_is_lattice():
    cfg = make_config(SQ, [((0, 0), 0), ((1, 1), -1)])
    assert lift_Q(cfg).Q.is_lattice
    assert lattice_normalizer(cfg) == (1, 1)


def test_half_crease_needs_dilation():
    cfg = make_config(Polytope.interval(0, 1), [((0,), 0), ((2,), -1)])
    assert not lift(cfg).is_lattice
    with pytest.raises(NonLatticeLift):
        lift_Q(cfg)
    assert lattice_normalizer(cfg) == (2, 1)


def test_rational_slope_needs_base_change():
    cfg = make_config(SQ, [((0, 0), 0), ((Fraction(1, 3), 0), 0)])
    m, r = lattice_normalizer(cfg)
    assert r % 3 == 0
