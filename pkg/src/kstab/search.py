"""Search for destabilizing toric test configurations by exact linear programming.

A convex PL function on a fixed simplicial subdivision is determined by
its values at the subdivision points.  Convexity is a set of linear
hinge inequalities and (relative) Futaki invariants are linear in the
values, so minimizing over the box ``0 <= f <= 1`` is a linear program.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .configs import AffineAction, TestConfig, base_change, make_config
from .exact import dot, lcm_denominators, rat_vector
from .futaki import extremal_action
from .polytope import Polytope, _simplex_measure, boundary_measure, pieces_from_simplices
from .simplex import linprog_exact
from .subdivision import Subdivision, convexity_constraints


class Classification(str, Enum):
    DESTABILIZED = "Destabilized"
    NO_DESTABILIZER = "NoDestabilizerInFamily"
    NON_PRODUCT_NULL = "NonProductNullMinimizer"


@dataclass(frozen=True)
class SearchProblem:
    polytope: Polytope
    subdivision: Subdivision
    hinges: tuple
    objective: tuple
    relative: bool


@dataclass(frozen=True)
class Verdict:
    minimum: Fraction
    minimizer: tuple  # values at the subdivision points
    classification: Classification
    config: TestConfig
    pivots: int
    points: tuple = ()

    @property
    def values(self) -> dict:
        return dict(zip(self.points, self.minimizer))


def _boundary_faces(P: Polytope, sub: Subdivision):
    """Yield ``(face point indices, facet normal)`` for faces on the boundary of P."""
    for face, owners in sub.faces().items():
        if len(owners) != 1:
            continue
        pts = [sub.points[i] for i in face]
        for a, b in P.halfspaces:
            if all(dot(a, p) == b for p in pts):
                yield face, a
                break


def objective_coefficients(P: Polytope, sub: Subdivision, chi: AffineAction | None) -> tuple:
    """Coefficients ``c_w`` with ``F_T(f) = sum_w c_w f(w)``.

    ``F(f) = -(a1/a0) int f + (1/2) int_bd f`` and, with chi given,
    ``F_T(f) = F(f) + cov(chi, f)``.  With ``chi = None`` the plain
    Futaki invariant is returned.
    """
    n = P.dim
    vol = P.volume()
    a1 = boundary_measure(P).total / 2
    npts = len(sub.points)
    hat = [Fraction(0)] * npts
    hat_chi = [Fraction(0)] * npts
    bd = [Fraction(0)] * npts
    chi_total = Fraction(0)
    for s in sub.simplices:
        pts = sub.simplex_points(s)
        v = _simplex_measure(pts)
        if chi is not None:
            cvals = [chi(p) for p in pts]
            chi_total += v * sum(cvals) / (n + 1)
        for k, i in enumerate(s):
            hat[i] += v / (n + 1)
            if chi is not None:
                hat_chi[i] += v * (sum(cvals) + cvals[k]) / ((n + 1) * (n + 2))
    for face, normal in _boundary_faces(P, sub):
        m = _simplex_measure([sub.points[i] for i in face], normal)
        for i in face:
            bd[i] += m / n
    coeffs = []
    for i in range(npts):
        c = -a1 / vol * hat[i] + bd[i] / 2
        if chi is not None:
            c += hat_chi[i] - chi_total * hat[i] / vol
        coeffs.append(c)
    return tuple(coeffs)


def build_problem(P: Polytope, sub: Subdivision, chi: AffineAction | None = None,
                  relative: bool = True) -> SearchProblem:
    """Assemble hinges and objective; ``relative=False`` minimizes F instead of F_T."""
    if relative and chi is None:
        chi = extremal_action(P).chi
    hinges = tuple(convexity_constraints(P, sub))
    return SearchProblem(P, sub, hinges, objective_coefficients(P, sub, chi if relative else None), relative)


def _rows(problem: SearchProblem):
    npts = len(problem.subdivision.points)
    rows = []
    for h in problem.hinges:
        row = [Fraction(0)] * npts
        for i, c in h.coeffs:
            row[i] = c
        rows.append(row)
    return rows


def evaluate(problem: SearchProblem, values: Sequence) -> Fraction:
    return dot(problem.objective, rat_vector(values))


def to_config(P: Polytope, sub: Subdivision, values: Sequence, integral: bool = True) -> TestConfig:
    """PL function with the given values as a configuration; denominators cleared by base change."""
    vals = rat_vector(values)
    pieces = pieces_from_simplices([sub.simplex_points(s) for s in sub.simplices], dict(zip(sub.points, vals)))
    cfg = make_config(P, pieces)
    if integral:
        r = lcm_denominators(c for lin, const in cfg.pieces for c in (*lin, const))
        if r != 1:
            cfg = base_change(cfg, r)
    return cfg


def solve(problem: SearchProblem) -> Verdict:
    """Minimize the objective over the box and classify the optimum.

    For a zero minimum a second LP maximizes the total hinge slack among
    minimizers: zero slack means every minimizer is affine.
    """
    npts = len(problem.subdivision.points)
    hinge_rows = _rows(problem)
    box = [[Fraction(int(i == j)) for j in range(npts)] for i in range(npts)]
    A = hinge_rows + box
    b = [Fraction(0)] * len(hinge_rows) + [Fraction(1)] * npts
    first = linprog_exact(problem.objective, A, b)
    pivots = first.pivots
    x = first.x
    if first.value < 0:
        cls = Classification.DESTABILIZED
    else:
        # maximize sum of slacks (-row . f) subject to objective <= 0
        slack_cost = [sum((row[j] for row in hinge_rows), Fraction(0)) for j in range(npts)]
        second = linprog_exact(slack_cost, A + [list(problem.objective)], b + [Fraction(0)])
        pivots += second.pivots
        if second.value == 0:
            cls = Classification.NO_DESTABILIZER
        else:
            cls = Classification.NON_PRODUCT_NULL
            x = second.x
    cfg = to_config(problem.polytope, problem.subdivision, x)
    return Verdict(first.value, x, cls, cfg, pivots, problem.subdivision.points)


def is_affine(problem: SearchProblem, values: Sequence) -> bool:
    vals = rat_vector(values)
    return all(sum((c * vals[i] for i, c in h.coeffs), Fraction(0)) == 0 for h in problem.hinges)
