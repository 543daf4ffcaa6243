"""Corner chops (toric blowups of fixed points) and the epsilon-expansion of F.

Chopping the corner of P at a Delzant vertex v to depth eps is the toric
model of blowing up the fixed point with polarization ``pi^* L - eps E``.
Every quantity entering F, the Gram matrix and the inner products with the
torus is a polynomial in eps as long as the chop stays inside one
combinatorial regime; those polynomials are recovered exactly by guarded
interpolation, and F, F_T are then expanded as exact power series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import settings
from .configs import TestConfig, restrict_config
from .exact import Poly, Series, det, dot, fit_guarded, nullspace, primitive, rat, rat_vector, series_solve, solve
from .exceptions import (ChopTooDeep, CorollaryViolated, InputError, InterpolationInconsistent,
                         LemmaMismatch, NonDelzantVertex, RegimeBreak)
from .futaki import coordinate_actions
from .polytope import Polytope, dilate, lattice_moments_raw
from .weights import expansion, pair_leading


# ---------------------------------------------------------------------------
# chops
# ---------------------------------------------------------------------------

def _vertex(P: Polytope, v) -> tuple:
    v = rat_vector(v)
    if v not in P.vertices:
        raise InputError(f"{tuple(str(c) for c in v)} is not a vertex of {P}")
    return v


def edge_directions(P: Polytope, v) -> list[tuple[int, ...]]:
    """Primitive edge directions at a simple vertex, one per tight facet dropped."""
    v = _vertex(P, v)
    n = P.dim
    tight = [a for a, b in P.halfspaces if dot(a, v) == b]
    if len(tight) != n:
        raise NonDelzantVertex(f"vertex {v} is not simple ({len(tight)} facets meet there)")
    dirs = []
    for i in range(n):
        rows = [tight[j] for j in range(n) if j != i]
        d = nullspace(rows, n)[0] if rows else [Fraction(1)]
        if dot(tight[i], d) > 0:
            d = [-c for c in d]
        dirs.append(primitive(d)[0])
    return dirs


def is_delzant(P: Polytope, v) -> bool:
    try:
        dirs = edge_directions(P, v)
    except NonDelzantVertex:
        return False
    return abs(det(dirs)) == 1


def chop_normal(P: Polytope, v) -> tuple[int, ...]:
    """``u_v``: the sum of the dual basis to the edge directions at v."""
    dirs = edge_directions(P, v)
    if abs(det(dirs)) != 1:
        raise NonDelzantVertex(f"edge directions at {tuple(str(c) for c in v)} are not a lattice basis")
    u = solve(dirs, [1] * P.dim)  # <u, e_j> = 1 for every edge
    return tuple(int(c) for c in u)


def chop_threshold(P: Polytope, v) -> Fraction:
    """Depth at which the chop first reaches another vertex."""
    v = _vertex(P, v)
    u = chop_normal(P, v)
    return min(dot(u, [a - b for a, b in zip(w, v)]) for w in P.vertices if w != v)


@dataclass(frozen=True)
class ChopSpec:
    """A corner chop ``P_eps`` and its lattice dilate ``scale * P_eps``."""

    original: Polytope
    vertex: tuple
    depth: Fraction
    normal: tuple
    polytope: Polytope
    scaled: Polytope
    scale: int


def corner_chop(P: Polytope, v, eps) -> ChopSpec:
    """``P ∩ {<u_v, x - v> >= eps}`` together with its lattice dilate.

    ``eps = 0`` returns P itself.  Raises ``NonDelzantVertex`` or
    ``ChopTooDeep``.
    """
    v = _vertex(P, v)
    eps = rat(eps)
    if eps < 0:
        raise InputError(f"chop depth must be non-negative, got {eps}")
    u = chop_normal(P, v)
    limit = chop_threshold(P, v)
    if eps >= limit:
        raise ChopTooDeep(f"depth {eps} reaches another vertex (threshold {limit})")
    if eps == 0:
        Pe = P
    else:
        Pe = Polytope.from_halfspaces(list(P.halfspaces) + [(tuple(-c for c in u), -dot(u, v) - eps)])
    m = Pe.lattice_multiplier()
    scaled = dilate(Pe, m) if m != 1 else Pe
    return ChopSpec(P, v, eps, u, Pe, scaled, m)


def lambda_fiber(cfg: TestConfig, v) -> Fraction:
    """Weight on the fibre of the polarization at the fixed point of v: ``-f(v)``."""
    return -cfg(_vertex(cfg.polytope, v))


@dataclass(frozen=True)
class RepulsiveVertex:
    vertex: tuple
    strict: bool  # False when f is constant: every vertex attains the max


def repulsive_vertex(P: Polytope, cfg: TestConfig) -> RepulsiveVertex:
    values = {w: cfg(w) for w in P.vertices}
    top = max(values.values())
    v = min(w for w, val in values.items() if val == top)
    return RepulsiveVertex(v, any(val != top for val in values.values()))


def attractive_vertex(P: Polytope, cfg: TestConfig) -> tuple:
    values = {w: cfg(w) for w in P.vertices}
    low = min(values.values())
    return min(w for w, val in values.items() if val == low)


# ---------------------------------------------------------------------------
# epsilon scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanEntry:
    eps: Fraction
    F: Fraction
    F_T: Fraction
    inner: tuple  # <alpha_hat, x_i> for each coordinate generator


@dataclass
class EpsilonScan:
    """Exact data of F, F_T and torus inner products along a family of chops."""

    dim: int
    vertex: tuple
    lam: Fraction
    mean: Fraction  # b0 / a0 on P
    entries: list
    polys: dict
    F: Series
    F_T: Series
    inner: list
    checks: dict = field(default_factory=dict)

    @property
    def depths(self) -> list[Fraction]:
        return [e.eps for e in self.entries]

    @property
    def expected_coefficient(self) -> Fraction | None:
        n = self.dim
        if n < 2:
            return None
        return (self.lam - self.mean) / (2 * math.factorial(n - 2))

    @property
    def coefficient(self) -> Fraction:
        """Coefficient of ``eps^(n-1)`` in F (for n = 1, the eps^1 term of b0 is used instead)."""
        if self.dim < 2:
            return self.polys["b0"].coeff(1)
        return self.F[self.dim - 1]


def default_depths(P: Polytope, v, count: int) -> list[Fraction]:
    """``count`` equally spaced depths ``j/D`` with D a power of two below half the threshold."""
    limit = chop_threshold(P, v)
    D = 1
    while Fraction(count, D) > limit / 2:
        D *= 2
    return [Fraction(j, D) for j in range(1, count + 1)]


def _sample(P: Polytope, cfg: TestConfig, v, eps, guards) -> dict:
    chop = corner_chop(P, v, eps)
    Pe = chop.polytope
    c = restrict_config(cfg, Pe) if eps else cfg
    e = expansion(Pe, c, guards)
    xs = coordinate_actions(P.dim)
    ex = [expansion(Pe, x, guards) for x in xs]
    out = {"a0": e.a0, "a1": e.a1, "b0": e.b0, "b1": e.b1}
    for i, x in enumerate(xs):
        out[f"M{i}"] = ex[i].b0
        out[f"B{i}"] = ex[i].b1
        out[f"C{i}"] = pair_leading(Pe, c, x, guards)
        for j in range(i, len(xs)):
            out[f"S{i}{j}"] = pair_leading(Pe, x, xs[j], guards)
    return out


def _derived(vals: dict, n: int, one):
    """F, F_T and <alpha, x_i> from the primitive quantities (numbers or series)."""
    a0, a1, b0, b1 = vals["a0"], vals["a1"], vals["b0"], vals["b1"]
    ratio = a1 / a0 if not isinstance(a0, Series) else a1 * a0.inverse()
    inv_a0 = (1 / a0) if not isinstance(a0, Series) else a0.inverse()
    F = ratio * b0 - b1
    M = [vals[f"M{i}"] for i in range(n)]
    c = [vals[f"C{i}"] - b0 * M[i] * inv_a0 for i in range(n)]
    Fx = [ratio * M[i] - vals[f"B{i}"] for i in range(n)]
    G = [[vals[f"S{min(i, j)}{max(i, j)}"] - M[i] * M[j] * inv_a0 for j in range(n)] for i in range(n)]
    p = series_solve(G, c) if isinstance(a0, Series) else solve(G, c)
    F_T = F - sum((pj * fj for pj, fj in zip(p, Fx)), one)
    return F, F_T, c


def epsilon_fit(P: Polytope, cfg: TestConfig, v, depths: Sequence | None = None, guards: int | None = None,
                check: bool = True) -> EpsilonScan:
    """Scan chops at v, fit every ingredient as a polynomial in eps and verify the expansion.

    With ``check`` the following are asserted exactly (``LemmaMismatch``):

    * for n >= 2, the ``eps^(n-1)`` coefficient of F equals
      ``(lambda - b0/a0) / (2 (n-2)!)`` and orders ``1 .. n-2`` vanish;
    * inner products with the torus change only at order ``eps^n``;
    * for n = 1, the eps-coefficient of b0 equals ``-lambda``.

    A fit that fails its guard samples is retried once on halved depths,
    then raises ``RegimeBreak``.
    """
    g = settings.GUARD_SAMPLES if guards is None else guards
    v = _vertex(P, v)
    n = P.dim
    need = n + 2 + g  # nodes besides eps = 0 for degree n + 2 with guards
    if depths is None:
        depths = default_depths(P, v, need)
    depths = sorted(set(rat_vector(depths)) - {Fraction(0)})
    if len(depths) < need:
        raise InputError(f"need at least {need} positive depths for n = {n} with {g} guard samples")
    try:
        scan = _scan(P, cfg, v, depths, g)
    except (InterpolationInconsistent, ChopTooDeep) as exc:
        try:
            scan = _scan(P, cfg, v, [d / 2 for d in depths], g)
        except (InterpolationInconsistent, ChopTooDeep):
            raise RegimeBreak(f"quantities are not polynomial in eps over {[str(d) for d in depths]} "
                              f"nor over the halved depths: {exc}") from exc
    if check:
        _check_lemma(scan)
    return scan


def _scan(P, cfg, v, depths, g) -> EpsilonScan:
    n = P.dim
    nodes = [Fraction(0)] + list(depths)
    samples = [_sample(P, cfg, v, e, g) for e in nodes]
    polys = {key: fit_guarded([s[key] for s in samples], nodes, n + 2, g, f"{key}(eps)")
             for key in samples[0]}
    order = n + 2
    series = {key: Series.from_poly(p, order) for key, p in polys.items()}
    F, F_T, inner = _derived(series, n, Series([0], order))
    entries = []
    for e, s in zip(depths, samples[1:]):
        f, ft, c = _derived(s, n, Fraction(0))
        entries.append(ScanEntry(e, f, ft, tuple(c)))
    base = samples[0]
    return EpsilonScan(n, v, lambda_fiber(cfg, v), base["b0"] / base["a0"], entries, polys, F, F_T, inner)


def _check_lemma(scan: EpsilonScan) -> None:
    n = scan.dim
    checks = scan.checks
    if n == 1:
        expected = -scan.lam
        got = scan.polys["b0"].coeff(1)
        checks["b0 eps-coefficient = -lambda"] = got == expected
        if got != expected:
            raise LemmaMismatch(f"n = 1 calibration: eps-coefficient of b0 is {got}, expected {expected}")
        return
    for i in range(1, n - 1):
        checks[f"F eps^{i} vanishes"] = scan.F[i] == 0
        if scan.F[i] != 0:
            raise LemmaMismatch(f"coefficient of eps^{i} in F is {scan.F[i]}, expected 0")
    expected = scan.expected_coefficient
    checks[f"F eps^{n - 1} coefficient"] = scan.F[n - 1] == expected
    if scan.F[n - 1] != expected:
        raise LemmaMismatch(f"coefficient of eps^{n - 1} in F is {scan.F[n - 1]}, expected {expected}")
    orthogonal = True
    for j, c in enumerate(scan.inner):
        orthogonal = orthogonal and c[0] == 0
        for i in range(1, n):
            ok = c[i] == 0
            checks[f"<alpha, x{j + 1}> eps^{i} vanishes"] = ok
            if not ok:
                raise LemmaMismatch(f"<alpha_hat, x{j + 1}> has eps^{i} coefficient {c[i]}")
    if orthogonal:
        # chi moves at order eps^(n-1) but alpha is orthogonal to the torus to order eps^n
        for i in range(1, n):
            want = expected if i == n - 1 else 0
            checks[f"F_T eps^{i} coefficient"] = scan.F_T[i] == want
            if scan.F_T[i] != want:
                raise LemmaMismatch(f"coefficient of eps^{i} in F_T is {scan.F_T[i]}, expected {want}")


# ---------------------------------------------------------------------------
# corollary
# ---------------------------------------------------------------------------

def corner_counts(P: Polytope, r, samples: int) -> list[int]:
    """``len(s)``: lattice points of ``sP`` with ``<u_r, x - s r> < s`` for s = 1..samples.

    Taking k = s keeps the corner away from every other vertex of kP
    because the chop threshold of a lattice Delzant vertex is at least 1.
    """
    r = _vertex(P, r)
    u = chop_normal(P, r)
    out = []
    for s in range(1, samples + 1):
        hs = [(a, b * s) for a, b in P.halfspaces] + [(u, dot(u, r) * s + s - 1)]
        lo, hi = P.bounding_box()
        box = (tuple(c * s for c in lo), tuple(c * s for c in hi))
        out.append(int(lattice_moments_raw(hs, box, 1, 0)[0]))
    return out


def corner_length_poly(P: Polytope, r, guards: int = 2) -> Poly:
    n = P.dim
    counts = corner_counts(P, r, n + 1 + guards)
    return fit_guarded(counts, range(1, n + 2 + guards), n, guards, "corner length")


@dataclass
class CorollaryReport:
    vertex: tuple
    strict: bool
    lam: Fraction
    mean: Fraction
    F: Fraction
    chopped: list  # (eps, F(eps))
    corner_vertex: tuple | None
    corner_leading: Fraction | None
    skipped: str | None = None

    @property
    def holds(self) -> bool:
        return self.skipped is None


def corollary_check(P: Polytope, cfg: TestConfig, depths: Sequence | None = None,
                    guards: int | None = None) -> CorollaryReport:
    """Verify mean(f) < max(f), monotone decrease of F under small chops and the corner count.

    A product configuration (affine f) is returned with
    ``skipped = "ProductConfiguration"``; one without a strictly repulsive
    vertex with ``skipped = "NotStrictlyRepulsive"``.
    """
    if cfg.is_product:
        base = expansion(P, cfg, guards)
        return CorollaryReport((), False, Fraction(0), base.b0 / base.a0, base.futaki, [], None, None,
                               "ProductConfiguration")
    rep = repulsive_vertex(P, cfg)
    base = expansion(P, cfg, guards)
    lam = lambda_fiber(cfg, rep.vertex)
    mean = base.b0 / base.a0
    F0 = base.futaki
    if not rep.strict:
        return CorollaryReport(rep.vertex, False, lam, mean, F0, [], None, None, "NotStrictlyRepulsive")
    if not mean > lam:
        raise CorollaryViolated(f"b0/a0 = {mean} is not above lambda = {lam}")
    v = rep.vertex
    if depths is None:
        depths = default_depths(P, v, 3)
    chopped = []
    for eps in sorted(rat_vector(depths)):
        chop = corner_chop(P, v, eps)
        Fe = expansion(chop.polytope, restrict_config(cfg, chop.polytope), guards).futaki
        chopped.append((eps, Fe))
        if not Fe < F0:
            raise CorollaryViolated(f"F after chopping to depth {eps} is {Fe}, not below F = {F0}")
    r = attractive_vertex(P, cfg)
    lead = None
    if is_delzant(P, r):
        lead = corner_length_poly(P, r, settings.GUARD_SAMPLES if guards is None else guards).coeff(P.dim)
        if not lead > 0 or lead != Fraction(1, math.factorial(P.dim)):
            raise CorollaryViolated(f"corner length leading coefficient {lead}, expected 1/{math.factorial(P.dim)}")
    return CorollaryReport(v, True, lam, mean, F0, chopped, r, lead)
