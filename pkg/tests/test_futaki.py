from fractions import Fraction

import pytest
from hypothesis import given, reject, settings
from hypothesis import strategies as st

from kstab import settings as kstab_settings
from kstab.configs import AffineAction, make_config, twist
from kstab.exceptions import InputError, LiftTooLarge
from kstab.futaki import (closed_form_futaki, closed_form_inner, destabilizer_algebra, extremal_action, futaki_of,
                          gram_matrix, inner_product, orthogonality_identities, orthogonalize, relative_futaki)
from kstab.polytope import Polytope
from kstab.selftest import unstable_pentagon

TRAP = Polytope.from_vertices([(0, 0), (1, 0), (1, 1), (0, 2)])
coef = st.integers(-2, 2)
pieces = st.lists(st.tuples(st.tuples(coef, coef), st.integers(-2, 2)), min_size=1, max_size=3)


def small_lift(fn, *args, **kw):
    """Run a lattice computation under a small slice budget; reject refused examples."""
    budget, kstab_settings.LIFT_BUDGET = kstab_settings.LIFT_BUDGET, 1_000_000
    try:
        return fn(*args, **kw)
    except LiftTooLarge:
        reject()
    finally:
        kstab_settings.LIFT_BUDGET = budget


def test_step_on_interval(cp1):
    assert futaki_of(cp1.polytope, cp1.configs["step"]) == Fraction(1, 4)


def test_coordinate_configs_on_trapezoid():
    assert futaki_of(TRAP, make_config(TRAP, [((1, 0), 0)])) == Fraction(-1, 9)
    assert futaki_of(TRAP, make_config(TRAP, [((0, 1), 0)])) == Fraction(1, 18)


def test_torus_action_is_minus_the_config():
    x = AffineAction((1, 0), 0)
    assert futaki_of(TRAP, x) == -futaki_of(TRAP, make_config(TRAP, [((1, 0), 0)]))


def test_variance_of_x_on_interval():
    x = AffineAction((1,), 0)
    assert inner_product(Polytope.interval(0, 1), x, x) == Fraction(1, 12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_vanishing_on_simplices(n):
    P = Polytope.simplex(n)
    for i in range(n):
        assert futaki_of(P, AffineAction.coordinate(n, i)) == 0


def test_piece_agreeing_on_a_facet_is_counted_once():
    # max(y, x + y) equals x + y on the trapezoid; both pieces agree on x = 0
    cfg = make_config(TRAP, [((0, 1), 0), ((1, 1), 0)])
    assert closed_form_futaki(TRAP, cfg) == futaki_of(TRAP, cfg) == Fraction(-1, 18)
    assert closed_form_inner(TRAP, cfg, cfg) == inner_product(TRAP, cfg, cfg)


@settings(max_examples=20, deadline=None, derandomize=True)
@given(pieces)
def test_lattice_and_closed_form_agree(pcs):
    cfg = make_config(TRAP, pcs)
    F = small_lift(futaki_of, TRAP, cfg)
    assert F == closed_form_futaki(TRAP, cfg)
    assert inner_product(TRAP, cfg, cfg) == closed_form_inner(TRAP, cfg, cfg)


@settings(max_examples=15, deadline=None, derandomize=True)
@given(pieces, coef, coef, st.integers(-3, 3))
def test_relative_invariant_ignores_twists(pcs, a, b, c):
    cfg = make_config(TRAP, pcs)
    ext = extremal_action(TRAP)
    before = small_lift(relative_futaki, TRAP, cfg, extremal=ext).F_rel
    after = small_lift(relative_futaki, TRAP, twist(cfg, AffineAction((a, b), c)), extremal=ext).F_rel
    assert before == after


def test_inner_product_is_symmetric_and_bilinear(blp2):
    P = blp2.polytope
    a, b = blp2.configs["crease"], blp2.configs["shelf"]
    x = AffineAction((1, 0), 0)
    assert inner_product(P, a, b) == inner_product(P, b, a)
    assert inner_product(P, a, x) == closed_form_inner(P, a, x)


def test_gram_is_covariance_matrix():
    G = gram_matrix(Polytope.cube(2, 1))
    assert G == [[Fraction(1, 12), 0], [0, Fraction(1, 12)]]


def test_extremal_on_blp2(blp2):
    ext = extremal_action(blp2.polytope)
    assert ext.chi.linear == (Fraction(12, 13), 0)
    assert ext.norm2 == Fraction(4, 39)


def test_relative_values(blp2):
    rep = relative_futaki(blp2.polytope, blp2.configs["crease"])
    assert (rep.F, rep.F_rel) == (Fraction(1, 6), Fraction(5, 26))
    assert rep.lower_bound_holds


def test_orthogonalize_and_identities(blp2):
    P = blp2.polytope
    alpha = orthogonalize(P, blp2.configs["crease"])
    assert futaki_of(P, alpha) == Fraction(5, 26)
    report = orthogonality_identities(P, alpha)
    assert report["mu"] is None  # F > 0 on a stable polytope
    with pytest.raises(InputError):
        orthogonality_identities(P, blp2.configs["crease"])


def test_algebra_routes_agree(blp2):
    P, cfg = blp2.polytope, blp2.configs["crease"]
    lat = destabilizer_algebra(P, cfg, "lattice")
    cf = destabilizer_algebra(P, cfg, "closed")
    assert (lat.mu, lat.F_combo, lat.norm_combo) == (cf.mu, cf.F_combo, cf.norm_combo)
    assert lat.mu == Fraction(-6, 5) and not lat.destabilizing


def test_pentagon_is_destabilized():
    P, cfg = unstable_pentagon()
    rep = destabilizer_algebra(P, cfg, "closed")
    assert rep.F_alpha < 0 and rep.destabilizing and rep.direct
    assert rep.F_combo == -rep.norm_combo
    assert rep.norm_combo > rep.chi_norm2


def test_unknown_route():
    with pytest.raises(InputError):
        destabilizer_algebra(TRAP, make_config(TRAP, [((1, 0), 0)]), "magic")
