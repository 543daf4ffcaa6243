"""Simplicial subdivisions of a polytope and the convexity hinges they induce."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import affine_rank, dot, nullspace, rat_vector, solve
from .exceptions import BadSubdivision
from .polytope import Polytope, _simplex_measure, triangulate


@dataclass(frozen=True)
class Hinge:
    """Convexity across an interior face: ``sum_i coeffs[i] f(points[i]) <= 0``.

    Encodes ``f(w) >= (affine extension of f on sigma_1)(w)``.
    """

    face: tuple
    coeffs: tuple  # (point index, coefficient) pairs


@dataclass(frozen=True)
class Subdivision:
    points: tuple
    simplices: tuple  # tuples of point indices, sorted

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def simplex_points(self, s) -> list:
        return [self.points[i] for i in s]

    def faces(self) -> dict:
        """Codimension-one faces mapped to the simplices containing them."""
        out = defaultdict(list)
        for s in self.simplices:
            for face in combinations(s, len(s) - 1):
                out[face].append(s)
        return out


def make_subdivision(P: Polytope, points: Sequence, simplices: Sequence[Sequence[int]]) -> Subdivision:
    """Validate a simplicial subdivision of P; raises ``BadSubdivision``.

    Checks: points lie in P and include its vertices, every point is used,
    simplices are full-dimensional, volumes add up to vol(P), and every
    codimension-one face lies either on the boundary of P (once) or
    between exactly two simplices on opposite sides.
    """
    pts = tuple(rat_vector(p) for p in points)
    n = P.dim
    if len(set(pts)) != len(pts):
        raise BadSubdivision("repeated point")
    for i, p in enumerate(pts):
        if len(p) != n or not P.contains(p):
            raise BadSubdivision(f"point {i} is not in the polytope")
    missing = [v for v in P.vertices if v not in pts]
    if missing:
        raise BadSubdivision(f"vertex {tuple(str(c) for c in missing[0])} of P is not a subdivision point")
    simps = []
    for s in simplices:
        s = tuple(sorted(int(i) for i in s))
        if len(s) != n + 1 or len(set(s)) != n + 1 or any(not 0 <= i < len(pts) for i in s):
            raise BadSubdivision(f"simplex {s} must list {n + 1} distinct point indices")
        if affine_rank([pts[i] for i in s]) != n:
            raise BadSubdivision(f"simplex {s} is degenerate")
        simps.append(s)
    if len(set(simps)) != len(simps):
        raise BadSubdivision("repeated simplex")
    used = {i for s in simps for i in s}
    if used != set(range(len(pts))):
        raise BadSubdivision(f"points {sorted(set(range(len(pts))) - used)} are not used by any simplex")
    total = sum((_simplex_measure([pts[i] for i in s]) for s in simps), Fraction(0))
    if total != P.volume():
        raise BadSubdivision(f"simplices cover volume {total}, polytope has {P.volume()}")
    sub = Subdivision(pts, tuple(sorted(simps)))
    for face, owners in sub.faces().items():
        fp = [pts[i] for i in face]
        on_boundary = any(all(dot(a, p) == b for p in fp) for a, b in P.halfspaces)
        if on_boundary:
            if len(owners) != 1:
                raise BadSubdivision(f"boundary face {face} belongs to {len(owners)} simplices")
        elif len(owners) != 2:
            raise BadSubdivision(f"interior face {face} belongs to {len(owners)} simplices")
        else:
            normal, off = _face_plane(fp, n)
            sides = [dot(normal, pts[next(i for i in s if i not in face)]) - off for s in owners]
            if sides[0] * sides[1] >= 0:
                raise BadSubdivision(f"simplices sharing face {face} overlap")
    return sub


def trivial_subdivision(P: Polytope) -> Subdivision:
    """Pulling triangulation of P using only its vertices."""
    pts = tuple(sorted(P.vertices))
    index = {p: i for i, p in enumerate(pts)}
    simps = [[index[v] for v in s] for s in triangulate(P.vertices, P.halfspaces, P.dim)]
    return make_subdivision(P, pts, simps)


def _face_plane(face_points, n):
    if n == 1:
        return (Fraction(1),), face_points[0][0]
    rows = [[x - y for x, y in zip(p, face_points[0])] for p in face_points[1:]]
    normal = nullspace(rows, n)[0]
    return normal, dot(normal, face_points[0])


def regular_subdivision(P: Polytope, points: Sequence, heights: Sequence) -> Subdivision:
    """Lower hull of the lifted point configuration.

    Heights must be generic enough that every lower facet is a simplex;
    otherwise ``BadSubdivision`` is raised.  Points that are not lower
    vertices are dropped.
    """
    pts = [rat_vector(p) for p in points]
    hs = rat_vector(heights)
    n = P.dim
    facets = []
    for s in combinations(range(len(pts)), n + 1):
        if affine_rank([pts[i] for i in s]) != n:
            continue
        # affine function through the lifted simplex: h = <c, x> + d
        sol = solve([list(pts[i]) + [1] for i in s], [hs[i] for i in s])
        vals = [dot(sol[:n], p) + sol[n] - h for p, h in zip(pts, hs)]
        if all(v <= 0 for v in vals):
            if any(v == 0 for j, v in enumerate(vals) if j not in s):
                raise BadSubdivision("heights are not generic: a lower face is not a simplex")
            facets.append(s)
    used = sorted({i for s in facets for i in s})
    remap = {old: new for new, old in enumerate(used)}
    return make_subdivision(P, [pts[i] for i in used], [[remap[i] for i in s] for s in facets])


def delaunay_like(P: Polytope, points: Sequence, seed: int = 0) -> Subdivision:
    """Regular subdivision for heights ``|x|^2`` plus a small seeded perturbation."""
    rng = random.Random(seed)
    pts = [rat_vector(p) for p in points]
    heights = [dot(p, p) + Fraction(rng.randint(1, 997), 10007) for p in pts]
    return regular_subdivision(P, pts, heights)


def convexity_constraints(P: Polytope, sub: Subdivision) -> list[Hinge]:
    """One hinge per interior codimension-one face."""
    out = []
    for face, owners in sorted(sub.faces().items()):
        if len(owners) != 2:
            continue
        s1, s2 = owners
        w = next(i for i in s2 if i not in face)
        # barycentric coordinates of w with respect to s1
        rows = [[sub.points[i][c] for i in s1] for c in range(sub.dim)] + [[1] * len(s1)]
        beta = solve(rows, list(sub.points[w]) + [1])
        coeffs = defaultdict(Fraction)
        for i, b in zip(s1, beta):
            coeffs[i] += b
        coeffs[w] -= 1
        out.append(Hinge(face, tuple(sorted((i, c) for i, c in coeffs.items() if c != 0))))
    return out
