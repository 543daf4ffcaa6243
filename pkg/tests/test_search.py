import random
from fractions import Fraction

import pytest

from kstab.exact import dot
from kstab.fixtures import load_fixture
from kstab.futaki import extremal_action, invariant_routes, relative_futaki
from kstab.polytope import Polytope, lattice_points
from kstab.search import (Classification, SearchProblem, build_problem, evaluate, is_affine, objective_coefficients,
                          solve, to_config)
from kstab.subdivision import convexity_constraints, make_subdivision, regular_subdivision, trivial_subdivision

H = Fraction(1, 2)


def test_interval_objective(cp1):
    sub = cp1.subdivisions["halves"]
    assert objective_coefficients(cp1.polytope, sub, None) == (Fraction(1, 4), Fraction(-1, 2), Fraction(1, 4))


def test_step_value_is_its_futaki_invariant(cp1):
    problem = build_problem(cp1.polytope, cp1.subdivisions["halves"], relative=False)
    assert evaluate(problem, [0, 0, 1]) == Fraction(1, 4)


def _random_regular(P, rng):
    pts = list(lattice_points(P)) + [(H, H), (H, Fraction(3, 2))]
    pts = [p for p in dict.fromkeys(tuple(Fraction(c) for c in p) for p in pts) if P.contains(p)]
    heights = [Fraction(rng.randint(0, 6), 3) + Fraction(rng.randint(0, 1000), 10 ** 6) for _ in pts]
    sub = regular_subdivision(P, pts, heights)
    values = [heights[pts.index(p)] for p in sub.points]
    return sub, values


def test_objective_agrees_with_closed_form_relative_invariant(blp2):
    P = blp2.polytope
    F, ip, chi = invariant_routes(P, "closed")
    rng = random.Random(3)
    for _ in range(4):
        sub, values = _random_regular(P, rng)
        problem = build_problem(P, sub, chi)
        cfg = to_config(P, sub, values, integral=False)
        assert evaluate(problem, values) == F(cfg) - ip(chi, cfg)


def test_objective_agrees_with_lattice_relative_invariant(blp2):
    P = blp2.polytope
    ext = extremal_action(P)
    sub = blp2.subdivisions["lattice"]
    problem = build_problem(P, sub, ext.chi)
    rng = random.Random(8)
    tested = 0
    while tested < 4:
        values = [rng.randint(0, 3) for _ in sub.points]
        if not all(sum(c * values[i] for i, c in h.coeffs) <= 0 for h in problem.hinges):
            continue
        cfg = to_config(P, sub, values)
        assert evaluate(problem, values) == relative_futaki(P, cfg, extremal=ext).F_rel
        tested += 1


def test_objective_is_affine_invariant_and_scales(blp2):
    P = blp2.polytope
    sub = blp2.subdivisions["halves"]
    problem = build_problem(P, sub)
    rng = random.Random(5)
    vals = [Fraction(rng.randint(0, 9), 9) for _ in sub.points]
    shifted = [v + dot((Fraction(1, 3), Fraction(-1, 5)), p) + 2 for v, p in zip(vals, sub.points)]
    assert evaluate(problem, shifted) == evaluate(problem, vals)
    assert evaluate(problem, [3 * v for v in vals]) == 3 * evaluate(problem, vals)


def test_refinement_never_raises_the_minimum():
    fx = load_fixture("pentagon")
    P = fx.polytope
    chi = extremal_action(P).chi
    coarse = solve(build_problem(P, trivial_subdivision(P), chi))
    fine = solve(build_problem(P, fx.subdivisions["crease"], chi))
    assert fine.minimum <= coarse.minimum == 0
    assert fine.classification is Classification.DESTABILIZED


def test_stable_polytope_has_only_affine_minimizers(blp2):
    for sub in blp2.subdivisions.values():
        v = solve(build_problem(blp2.polytope, sub))
        assert v.minimum == 0 and v.classification is Classification.NO_DESTABILIZER
        problem = build_problem(blp2.polytope, sub)
        assert is_affine(problem, v.minimizer)


def test_zero_objective_flags_a_nonaffine_null_minimizer():
    P = Polytope.cube(2, 1)
    sub = make_subdivision(P, [(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1, 2), (0, 2, 3)])
    problem = SearchProblem(P, sub, tuple(convexity_constraints(P, sub)), (Fraction(0),) * 4, True)
    v = solve(problem)
    assert v.minimum == 0
    assert v.classification is Classification.NON_PRODUCT_NULL
    assert not is_affine(problem, v.minimizer)


def test_to_config_clears_denominators(cp1):
    cfg = to_config(cp1.polytope, cp1.subdivisions["thirds"], [0, 0, Fraction(1, 2), 1])
    assert all(c.denominator == 1 for lin, const in cfg.pieces for c in (*lin, const))
