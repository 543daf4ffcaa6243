"""Exact rational polytopes: vertices, lattice points, Ehrhart data, PL integrals.

Polytopes are immutable and hashable so expensive lattice sums can be
memoized on them.  Halfspaces are stored as ``(normal, offset)`` meaning
``<normal, x> <= offset`` with a primitive integer normal and a rational
offset (integral for lattice polytopes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .exact import (
    Poly,
    affine_rank,
    det,
    dot,
    fit_guarded,
    lcm_denominators,
    nullspace,
    primitive,
    rank,
    rat,
    rat_vector,
    solve,
)
from .exceptions import (
    DegeneratePolytope,
    InputError,
    NonConvexPieces,
    NonLatticePolytope,
    UnboundedPolytope,
)

MAX_DIM = 3

Point = tuple  # tuple[Fraction, ...]
Halfspace = tuple  # (tuple[int, ...], Fraction)


def normalize_halfspace(normal: Sequence, offset) -> Halfspace:
    a, s = primitive(rat_vector(normal))
    return a, rat(offset) * s


def enumerate_vertices(halfspaces: Sequence[Halfspace], dim: int, equalities: Sequence[Halfspace] = (),
                       check_bounded: bool = True) -> list[Point]:
    """Exact vertex set of ``{x : <a,x> <= b}`` (optionally inside equalities).

    Every vertex is tight on at least ``dim - len(equalities)`` inequalities.
    Raises ``UnboundedPolytope`` for unbounded input when ``check_bounded``.
    """
    halfspaces = [(rat_vector(a), rat(b)) for a, b in halfspaces]
    equalities = [(rat_vector(a), rat(b)) for a, b in equalities]
    if check_bounded and not equalities:
        _check_bounded([a for a, _ in halfspaces], dim)
    free = dim - len(equalities)
    found = set()
    for subset in combinations(range(len(halfspaces)), free):
        rows = [halfspaces[i] for i in subset] + equalities
        x = solve([a for a, _ in rows], [b for _, b in rows])
        if x is None:
            continue
        x = tuple(x)
        if x in found:
            continue
        if all(dot(a, x) <= b for a, b in halfspaces):
            found.add(x)
    return sorted(found)


def _check_bounded(normals: Sequence[Sequence[Fraction]], dim: int) -> None:
    # Recession cone {d : A d <= 0} is trivial iff A has full rank and the
    # cone has no extreme ray; extreme rays are cut out by dim-1 tight rows.
    if rank(normals) < dim:
        raise UnboundedPolytope("normals do not span: the region contains a line")
    for subset in combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in subset]
        if rank(rows) != dim - 1:
            continue
        ray = nullspace(rows, dim)[0]
        for sign in (1, -1):
            d = [sign * r for r in ray]
            if all(dot(a, d) <= 0 for a in normals):
                raise UnboundedPolytope(f"recession direction {tuple(str(v) for v in d)}")


@dataclass(frozen=True)
class Polytope:
    """Full-dimensional bounded polytope with exact vertex and facet data.

    ``lattice_scale`` records that this polytope is ``lattice_scale`` times
    some original (possibly rational) polytope.
    """

    halfspaces: tuple
    vertices: tuple
    lattice_scale: int = 1

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[tuple[Sequence, object]], lattice_scale: int = 1,
                        max_dim: int | None = MAX_DIM) -> "Polytope":
        hs = [normalize_halfspace(a, b) for a, b in halfspaces]
        if not hs:
            raise UnboundedPolytope("no halfspaces")
        n = len(hs[0][0])
        if any(len(a) != n for a, _ in hs):
            raise InputError("halfspace normals have inconsistent lengths")
        if max_dim is not None and not 1 <= n <= max_dim:
            raise InputError(f"dimension {n} outside supported range 1..{max_dim}")
        verts = enumerate_vertices(hs, n)
        if affine_rank(verts) != n:
            raise DegeneratePolytope(f"polytope is not full-dimensional ({len(verts)} vertices)")
        facets = []
        for a, b in dict.fromkeys(hs):
            tight = [v for v in verts if dot(a, v) == b]
            if affine_rank(tight) == n - 1:
                facets.append((a, b))
        return cls(tuple(sorted(facets)), tuple(verts), lattice_scale)

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence], lattice_scale: int = 1,
                      max_dim: int | None = MAX_DIM) -> "Polytope":
        pts = sorted(set(rat_vector(p) for p in points))
        if not pts:
            raise DegeneratePolytope("empty point set")
        n = len(pts[0])
        if affine_rank(pts) != n:
            raise DegeneratePolytope("points do not span a full-dimensional polytope")
        hs = set()
        for subset in combinations(pts, n):
            diffs = [[x - y for x, y in zip(p, subset[0])] for p in subset[1:]]
            if rank(diffs) != n - 1 and n > 1:
                continue
            normal = nullspace(diffs, n)[0] if n > 1 else [Fraction(1)]
            off = dot(normal, subset[0])
            side = [dot(normal, p) - off for p in pts]
            if all(s <= 0 for s in side):
                hs.add(normalize_halfspace(normal, off))
            if all(s >= 0 for s in side):
                hs.add(normalize_halfspace([-x for x in normal], -off))
        return cls.from_halfspaces(sorted(hs), lattice_scale=lattice_scale, max_dim=max_dim)

    # convenience constructors -------------------------------------------
    @classmethod
    def interval(cls, lo=0, hi=1) -> "Polytope":
        return cls.from_vertices([(lo,), (hi,)])

    @classmethod
    def simplex(cls, n: int, size=1) -> "Polytope":
        pts = [tuple([0] * n)] + [tuple(size if j == i else 0 for j in range(n)) for i in range(n)]
        return cls.from_vertices(pts)

    @classmethod
    def cube(cls, n: int, size=1) -> "Polytope":
        return cls.from_halfspaces(
            [(tuple(-int(j == i) for j in range(n)), 0) for i in range(n)]
            + [(tuple(int(j == i) for j in range(n)), size) for i in range(n)]
        )

    # queries ---------------------------------------------------------------
    @property
    def is_lattice(self) -> bool:
        return all(v.denominator == 1 for p in self.vertices for v in p)

    def contains(self, x: Sequence) -> bool:
        x = rat_vector(x)
        return all(dot(a, x) <= b for a, b in self.halfspaces)

    def facet_vertices(self, facet: int) -> list[Point]:
        a, b = self.halfspaces[facet]
        return [v for v in self.vertices if dot(a, v) == b]

    def volume(self) -> Fraction:
        """Euclidean volume (equals the lattice-normalized volume)."""
        return sum((_simplex_measure(s) for s in triangulate(self.vertices, self.halfspaces, self.dim)),
                   Fraction(0))

    def bounding_box(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        cols = list(zip(*self.vertices))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)

    def lattice_multiplier(self) -> int:
        """Smallest m with m*P a lattice polytope."""
        return lcm_denominators(v for p in self.vertices for v in p)

    def __repr__(self):
        vs = ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in self.vertices)
        scale = f", scale={self.lattice_scale}" if self.lattice_scale != 1 else ""
        return f"Polytope[{vs}{scale}]"


def dilate(P: Polytope, m: int) -> Polytope:
    """``m * P``; ``lattice_scale`` is multiplied by ``m``."""
    if int(m) != m or m < 1:
        raise InputError(f"dilation factor must be a positive integer, got {m}")
    m = int(m)
    return Polytope(
        tuple(sorted((a, b * m) for a, b in P.halfspaces)),
        tuple(sorted(tuple(c * m for c in v) for v in P.vertices)),
        P.lattice_scale * m,
    )


# ---------------------------------------------------------------------------
# lattice enumeration
# ---------------------------------------------------------------------------

def _integer_rows(halfspaces: Sequence[Halfspace]) -> tuple[np.ndarray, list[Fraction]]:
    A, b = [], []
    for a, off in halfspaces:
        s = lcm_denominators(list(a) + [off])
        A.append([int(x * s) for x in a])
        b.append(Fraction(off) * s)
    return np.array(A, dtype=np.int64), b


def _slices(A: np.ndarray, b: np.ndarray, lo: Sequence[int], hi: Sequence[int]):
    """Yield ``(prefix_points, tlo, thi)`` for the integer points of {Ax <= b}.

    The last coordinate is resolved analytically as an interval per prefix
    point; the prefix box is walked one first-coordinate value at a time.
    """
    d = A.shape[1]
    last = A[:, -1]
    pos, neg, zero = last > 0, last < 0, last == 0
    if d == 1:
        chunks = [np.zeros((1, 0), dtype=np.int64)]
    elif d == 2:
        chunks = [np.arange(lo[0], hi[0] + 1, dtype=np.int64).reshape(-1, 1)]
    else:
        rest = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, d - 1)]
        grid = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, d - 2)
        chunks = (np.hstack([np.full((len(grid), 1), x0, dtype=np.int64), grid])
                  for x0 in range(lo[0], hi[0] + 1))
    for prefix in chunks:
        if prefix.shape[0] == 0:
            continue
        rhs = b[None, :] - prefix @ A[:, :-1].T
        ok = np.all(rhs[:, zero] >= 0, axis=1) if zero.any() else np.ones(len(prefix), bool)
        tlo = np.full(len(prefix), lo[-1], dtype=np.int64)
        thi = np.full(len(prefix), hi[-1], dtype=np.int64)
        if pos.any():
            thi = np.minimum(thi, (rhs[:, pos] // last[pos]).min(axis=1))
        if neg.any():
            tlo = np.maximum(tlo, (-((-rhs[:, neg]) // last[neg])).max(axis=1))
        keep = ok & (tlo <= thi)
        if keep.any():
            yield prefix[keep], tlo[keep], thi[keep]


def _scaled_system(halfspaces, box, k: int):
    A, b = _integer_rows(halfspaces)
    bvec = np.array([int(off * k) for off in b], dtype=np.int64)
    lo = [math.ceil(c * k) for c in box[0]]
    hi = [math.floor(c * k) for c in box[1]]
    return A, bvec, lo, hi


def lattice_moments_raw(halfspaces: Sequence[Halfspace], box, k: int, order: int = 0):
    """Count (and first/second moments of) integer points of ``k * {Ax<=b}``.

    Returns ``(N, s, S)``: point count, coordinate sums and the matrix of
    second moments (``s``/``S`` are ``None`` below the requested order).
    """
    A, b, lo, hi = _scaled_system(halfspaces, box, k)
    d = A.shape[1]
    N = 0
    s = [0] * d if order >= 1 else None
    S = [[0] * d for _ in range(d)] if order >= 2 else None
    for prefix, tlo, thi in _slices(A, b, lo, hi):
        cnt = thi - tlo + 1
        N += int(cnt.sum())
        if order >= 1:
            s1 = (tlo + thi) * cnt // 2
            for i in range(d - 1):
                s[i] += int((cnt * prefix[:, i]).sum())
            s[d - 1] += int(s1.sum())
        if order >= 2:
            def cube(m):
                return m * (m + 1) * (2 * m + 1) // 6
            s2 = cube(thi) - cube(tlo - 1)
            for i in range(d - 1):
                for j in range(i, d - 1):
                    S[i][j] += int((cnt * prefix[:, i] * prefix[:, j]).sum())
                S[i][d - 1] += int((s1 * prefix[:, i]).sum())
            S[d - 1][d - 1] += int(s2.sum())
    if order >= 2:
        for i in range(d):
            for j in range(i):
                S[i][j] = S[j][i]
    return N, s, S


@lru_cache(maxsize=4096)
def lattice_moments(P: Polytope, k: int, order: int = 0):
    return lattice_moments_raw(P.halfspaces, P.bounding_box(), k, order)


def lattice_count(P: Polytope, k: int = 1) -> int:
    return lattice_moments(P, k, 0)[0]


def lattice_points(P: Polytope, k: int = 1) -> list[tuple[int, ...]]:
    """All integer points of ``k * P`` in lexicographic order."""
    if not P.is_lattice:
        raise NonLatticePolytope(f"{P} has non-integral vertices")
    A, b, lo, hi = _scaled_system(P.halfspaces, P.bounding_box(), k)
    pts = []
    for prefix, tlo, thi in _slices(A, b, lo, hi):
        for row, t0, t1 in zip(prefix.tolist(), tlo.tolist(), thi.tolist()):
            pts.extend(tuple(row) + (t,) for t in range(t0, t1 + 1))
    return sorted(pts)


def ehrhart(P: Polytope, guards: int = 2) -> Poly:
    """Ehrhart polynomial of a lattice polytope.

    Interpolated on k = 0..n and checked on ``guards`` further values.
    """
    if not P.is_lattice:
        raise NonLatticePolytope(f"{P} has non-integral vertices; dilate it first")
    n = P.dim
    ks = list(range(0, n + 1 + guards))
    return fit_guarded(lambda k: lattice_count(P, k), ks, n, guards, what="Ehrhart polynomial")


# ---------------------------------------------------------------------------
# faces, measures, integration
# ---------------------------------------------------------------------------

def triangulate(vertices: Sequence[Point], halfspaces: Sequence[Halfspace], d: int) -> list[list[Point]]:
    """Pulling triangulation of a convex polytope of dimension ``d``.

    ``halfspaces`` must cut out every face of the polytope (any superset of
    its facet inequalities works, including ones tight on lower faces).
    """
    verts = sorted(set(vertices))
    if d == 0 or len(verts) == d + 1:
        return [verts[: d + 1]]
    apex = verts[0]
    seen = set()
    out = []
    for a, b in halfspaces:
        face = [v for v in verts if dot(a, v) == b]
        key = frozenset(face)
        if apex in key or key in seen or len(face) < d or affine_rank(face) != d - 1:
            continue
        seen.add(key)
        for simplex in triangulate(face, halfspaces, d - 1):
            out.append([apex] + simplex)
    return out


def _simplex_measure(simplex: Sequence[Point], normal: Sequence | None = None) -> Fraction:
    """Lattice-normalized measure of a full or codimension-one simplex.

    For a simplex inside a hyperplane with primitive normal ``a`` the
    measure is ``|det[v1-v0, ..., a]| / (|a|^2 (n-1)!)``.
    """
    v0 = simplex[0]
    rows = [[x - y for x, y in zip(v, v0)] for v in simplex[1:]]
    if normal is None:
        return abs(det(rows)) / math.factorial(len(rows))
    a = [Fraction(x) for x in normal]
    return abs(det(rows + [a])) / (dot(a, a) * math.factorial(len(rows)))


def _affine_value(piece, x) -> Fraction:
    linear, const = piece
    return dot(linear, x) + const


def as_piece(p) -> tuple[tuple[Fraction, ...], Fraction]:
    """Accept ``(linear, const)`` pairs or objects with ``linear``/``constant``."""
    if hasattr(p, "linear"):
        return rat_vector(p.linear), rat(p.constant)
    linear, const = p
    return rat_vector(linear), rat(const)


def pl_value(pieces, x) -> Fraction:
    return max(_affine_value(as_piece(p), x) for p in pieces)


def _parallel_factor(u, a) -> Fraction | None:
    """``lam`` with ``u = lam * a``, or None."""
    k = next(i for i, x in enumerate(a) if x != 0)
    lam = Fraction(u[k]) / a[k]
    return lam if all(x == lam * y for x, y in zip(u, a)) else None


def _cells(P: Polytope, pieces, equality: Halfspace | None = None):
    """Yield ``(piece, vertices, halfspaces)`` for each domain of linearity."""
    pieces = list(dict.fromkeys(as_piece(p) for p in pieces))
    n = P.dim
    d = n if equality is None else n - 1
    for i, (li, ci) in enumerate(pieces):
        hs = list(P.halfspaces)
        empty = False
        for j, (lj, cj) in enumerate(pieces):
            if i == j:
                continue
            diff = tuple(x - y for x, y in zip(lj, li))
            gap = cj - ci
            if equality is not None:
                # on the hyperplane a.x = b only diff modulo a matters
                a, b = equality
                lam = _parallel_factor(diff, a)
                if lam is not None:
                    diff, gap = (0,) * n, gap + lam * b
            if all(x == 0 for x in diff):
                # pieces equal on the domain: the lower index owns it
                if gap > 0 or (gap == 0 and j < i):
                    empty = True
                    break
                continue
            hs.append((diff, ci - cj))
        if empty:
            continue
        eqs = [equality] if equality is not None else []
        verts = enumerate_vertices(hs, n, eqs, check_bounded=False)
        if affine_rank(verts) == d:
            yield (li, ci), verts, hs


def integrate_pl(P: Polytope, pieces, region: str | int = "full", weight=None) -> Fraction:
    """Exact integral of ``max(pieces)`` (optionally times an affine weight).

    ``weight="self"`` integrates the square of the PL function.  ``region`` is ``"full"`` for the Lebesgue integral over P or a facet
    index for the lattice-normalized integral over that facet.
    """
    pieces = list(pieces)
    if not pieces:
        raise NonConvexPieces("a PL function needs at least one affine piece")
    square = isinstance(weight, str) and weight == "self"
    w = as_piece(weight) if weight is not None and not square else None
    if region == "full":
        equality, normal, d = None, None, P.dim
    else:
        equality = P.halfspaces[region]
        normal, d = equality[0], P.dim - 1
    total = Fraction(0)
    for piece, verts, hs in _cells(P, pieces, equality):
        for simplex in triangulate(verts, hs, d):
            vol = _simplex_measure(simplex, normal)
            fv = [_affine_value(piece, v) for v in simplex]
            if w is None and not square:
                total += vol * sum(fv) / (d + 1)
            else:
                wv = fv if square else [_affine_value(w, v) for v in simplex]
                total += vol * (sum(fv) * sum(wv) + sum(a * b for a, b in zip(fv, wv))) / ((d + 1) * (d + 2))
    return total


def integrate_boundary(P: Polytope, pieces, weight=None) -> Fraction:
    return sum((integrate_pl(P, pieces, i, weight) for i in range(len(P.halfspaces))), Fraction(0))


@dataclass(frozen=True)
class FacetMeasure:
    """Lattice-normalized (n-1)-measure of every facet, aligned with halfspaces."""

    polytope: Polytope
    measures: tuple = field(default=())

    @property
    def total(self) -> Fraction:
        return sum(self.measures, Fraction(0))


def boundary_measure(P: Polytope) -> FacetMeasure:
    one = [((0,) * P.dim, 1)]
    return FacetMeasure(P, tuple(integrate_pl(P, one, i) for i in range(len(P.halfspaces))))


def pieces_from_simplices(simplices: Sequence[Sequence[Point]], values: dict) -> list:
    """Convert vertex values on a triangulation to max-of-pieces form.

    Raises ``NonConvexPieces`` unless every simplex's affine extension lies
    below the given values at every vertex, which is exactly convexity.
    """
    pieces = []
    for simplex in simplices:
        simplex = [rat_vector(v) for v in simplex]
        n = len(simplex) - 1
        rows = [list(v) + [Fraction(1)] for v in simplex]
        sol = solve(rows, [rat(values[v]) for v in simplex])
        if sol is None:
            raise NonConvexPieces("degenerate simplex in subdivision")
        pieces.append((tuple(sol[:n]), sol[n]))
    for piece in pieces:
        for v, fv in values.items():
            if _affine_value(piece, rat_vector(v)) > rat(fv):
                raise NonConvexPieces(f"hinge test fails at vertex {v}")
    return list(dict.fromkeys(pieces))
