"""Torus actions and toric test configurations.

A torus action is an affine function ``u(x) = <xi, x> + c`` on the moment
polytope; on ``H^0(L^k)`` it acts on the section indexed by the lattice point
``x`` of ``kP`` with weight ``<xi, x> + c k``.

A test configuration is a convex piecewise-linear function
``f = max(pieces)`` together with an integral cap ``R >= max_P f``.  The
induced action on the central fibre acts on the section indexed by ``x``
with weight ``-ceil(k f(x / k))``.  This sign is a global convention of the
package: torus actions carry no minus sign, configurations do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import dot, lcm_denominators, rat, rat_vector
from .exceptions import CapTooSmall, InputError, NonIntegralTwist, NonLatticeLift, NotConvex
from .polytope import Polytope, as_piece, dilate, normalize_halfspace, pl_value


@dataclass(frozen=True)
class AffineAction:
    """Affine function ``<linear, x> + constant``; a (rational multiple of a) C*-action."""

    linear: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "linear", rat_vector(self.linear))
        object.__setattr__(self, "constant", rat(self.constant))

    @classmethod
    def coordinate(cls, n: int, i: int) -> "AffineAction":
        return cls(tuple(int(j == i) for j in range(n)), 0)

    @classmethod
    def const(cls, n: int, c) -> "AffineAction":
        return cls((0,) * n, c)

    @property
    def dim(self) -> int:
        return len(self.linear)

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.linear) and self.constant.denominator == 1

    def __call__(self, x) -> Fraction:
        return dot(self.linear, x) + self.constant

    def __add__(self, other: "AffineAction") -> "AffineAction":
        return AffineAction(tuple(a + b for a, b in zip(self.linear, other.linear)),
                            self.constant + other.constant)

    def __neg__(self) -> "AffineAction":
        return AffineAction(tuple(-a for a in self.linear), -self.constant)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "AffineAction":
        r = rat(r)
        return AffineAction(tuple(r * a for a in self.linear), r * self.constant)

    def on_dilation(self, m: int) -> "AffineAction":
        """The same action on ``L^m``: the linearization constant scales by ``m``."""
        return AffineAction(self.linear, self.constant * m)

    def __str__(self):
        terms = [f"{c}*x{i + 1}" for i, c in enumerate(self.linear) if c != 0]
        if self.constant != 0 or not terms:
            terms.append(str(self.constant))
        return " + ".join(terms)


def _canonical_pieces(pieces) -> tuple:
    return tuple(sorted(dict.fromkeys(as_piece(p) for p in pieces)))


@dataclass(frozen=True)
class TestConfig:
    """Toric test configuration ``(P, f = max(pieces), cap)``.

    Equality ignores the cap: it only bounds the lifted polytope and does
    not change any invariant.
    """

    polytope: Polytope
    pieces: tuple
    cap: int = field(compare=False)

    __test__ = False  # keep pytest from collecting this class

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def __call__(self, x) -> Fraction:
        return pl_value(self.pieces, rat_vector(x))

    @property
    def max_value(self) -> Fraction:
        return max(self(v) for v in self.polytope.vertices)

    @property
    def is_product(self) -> bool:
        """True when f is affine on P (one piece dominates at every vertex)."""
        verts = self.polytope.vertices
        for piece in self.pieces:
            if all(dot(piece[0], v) + piece[1] == self(v) for v in verts):
                return True
        return False

    def dominant_piece(self) -> tuple | None:
        verts = self.polytope.vertices
        for piece in self.pieces:
            if all(dot(piece[0], v) + piece[1] == self(v) for v in verts):
                return piece
        return None

    def as_action(self) -> AffineAction:
        """For a product configuration, the torus action with the same weights (``-f``)."""
        piece = self.dominant_piece()
        if piece is None:
            raise InputError("configuration is not a product configuration")
        return -AffineAction(*piece)

    def __repr__(self):
        ps = ", ".join(str(AffineAction(*p)) for p in self.pieces)
        return f"TestConfig(max({ps}), cap={self.cap}, P={self.polytope!r})"


def make_config(P: Polytope, pieces: Sequence, cap=None, require_lattice: bool = False) -> TestConfig:
    """Validate and build a test configuration.

    ``cap`` defaults to ``ceil(max_P f)``.  With ``require_lattice`` the
    lifted polytope must be a lattice polytope (``NonLatticeLift``).
    """
    pieces = _canonical_pieces(pieces)
    if not pieces:
        raise NotConvex("a configuration needs at least one affine piece")
    if any(len(p[0]) != P.dim for p in pieces):
        raise InputError("piece dimension does not match the polytope")
    fmax = max(pl_value(pieces, v) for v in P.vertices)
    if cap is None:
        cap = math.ceil(fmax)
    cap = rat(cap)
    if cap.denominator != 1:
        raise InputError(f"cap must be an integer, got {cap}")
    if cap < fmax:
        raise CapTooSmall(f"cap {cap} is below max f = {fmax}")
    cfg = TestConfig(P, pieces, int(cap))
    if require_lattice:
        lift_Q(cfg)
    return cfg


def config_from_action(P: Polytope, u: AffineAction, cap=None) -> TestConfig:
    """Product configuration whose central-fibre weights are those of ``u``."""
    v = -u
    return make_config(P, [(v.linear, v.constant)], cap)


def twist(cfg: TestConfig, u: AffineAction, allow_rational: bool = False) -> TestConfig:
    """Add the affine function ``u`` to f (weights shift by ``-u``)."""
    if not allow_rational and not u.is_integral:
        raise NonIntegralTwist(f"twist by {u} is not a genuine C*-action")
    pieces = [(tuple(a + b for a, b in zip(p[0], u.linear)), p[1] + u.constant) for p in cfg.pieces]
    new_max = max(pl_value(pieces, v) for v in cfg.polytope.vertices)
    cap = max(cfg.cap, math.ceil(new_max))
    return TestConfig(cfg.polytope, _canonical_pieces(pieces), cap)


def base_change(cfg: TestConfig, r) -> TestConfig:
    """Pull back along ``z -> z^r``: f and the cap scale by ``r``."""
    r = rat(r)
    if r <= 0:
        raise InputError(f"base change order must be positive, got {r}")
    pieces = [(tuple(r * a for a in p[0]), r * p[1]) for p in cfg.pieces]
    cap = r * cfg.cap
    return TestConfig(cfg.polytope, _canonical_pieces(pieces), math.ceil(cap))


def dilate_config(cfg: TestConfig, m: int) -> TestConfig:
    """The configuration for ``L^m``: polytope ``mP`` and ``f_m(y) = m f(y/m)``."""
    pieces = [(p[0], p[1] * m) for p in cfg.pieces]
    return TestConfig(dilate(cfg.polytope, m), _canonical_pieces(pieces), cfg.cap * m)


def restrict_config(cfg: TestConfig, P: Polytope) -> TestConfig:
    """Same pieces on another polytope (e.g. a corner chop of the original)."""
    fmax = max(pl_value(cfg.pieces, v) for v in P.vertices)
    return TestConfig(P, cfg.pieces, max(cfg.cap, math.ceil(fmax)))


@dataclass(frozen=True)
class LiftedQ:
    """The polytopes under the graph of ``R - f``.

    ``Q = {(x,t) : x in P, 0 <= t <= R - f(x)}`` and the double lift
    ``Qt = {(x,t,t') : x in P, 0 <= t, t' <= R - f(x)}``.  Lattice points of
    ``kQ`` over ``x`` number ``kR + 1 - ceil(k f(x/k))``.
    """

    config: TestConfig
    Q: Polytope
    Qt_halfspaces: tuple
    Qt_box: tuple
    cap: int

    @property
    def is_lattice(self) -> bool:
        return self.Q.is_lattice


def _lift_halfspaces(cfg: TestConfig, copies: int, cap: int):
    n = cfg.dim
    hs = []
    for a, b in cfg.polytope.halfspaces:
        hs.append(normalize_halfspace(tuple(a) + (0,) * copies, b))
    for c in range(copies):
        hs.append(normalize_halfspace((0,) * n + tuple(-int(j == c) for j in range(copies)), 0))
        for lin, const in cfg.pieces:
            hs.append(normalize_halfspace(tuple(lin) + tuple(int(j == c) for j in range(copies)),
                                          cap - const))
    return tuple(dict.fromkeys(hs))


def lift(cfg: TestConfig) -> LiftedQ:
    """Build Q and the double lift without insisting on integrality.

    A cap equal to a constant f would flatten Q, so the cap is raised by
    one in that case; the weights do not depend on the cap.
    """
    cap = cfg.cap
    if all(pl_value(cfg.pieces, v) == cap for v in cfg.polytope.vertices) and cfg.is_product:
        cap += 1
    Q = Polytope.from_halfspaces(_lift_halfspaces(cfg, 1, cap), max_dim=None)
    lo, hi = Q.bounding_box()
    box = (lo + (lo[-1],), hi + (hi[-1],))
    return LiftedQ(cfg, Q, _lift_halfspaces(cfg, 2, cap), box, cap)


def lift_Q(cfg: TestConfig) -> LiftedQ:
    """Lift and require a lattice polytope; raises ``NonLatticeLift`` otherwise."""
    lifted = lift(cfg)
    if not lifted.is_lattice:
        bad = [v for v in lifted.Q.vertices if any(c.denominator != 1 for c in v)]
        raise NonLatticeLift(
            "lifted polytope has non-integral vertices "
            + ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in bad)
            + "; dilate or base-change the configuration"
        )
    return lifted


def lattice_normalizer(cfg: TestConfig) -> tuple[int, int]:
    """Dilation ``m`` and base change ``r`` that make the lift a lattice polytope.

    ``m`` clears the denominators of the base coordinates of Q's vertices
    (the creases of f and the vertices of P); ``r`` then clears the heights
    of ``m Q`` and the slopes of f.  Integral slopes are needed so that the
    graph facets of Q carry the lattice measure of their projection; with
    them the invariants are linear under further base change.  Base change
    only stretches the fibre direction, which the lattice counter resolves
    analytically, so it is preferred over a larger dilation.
    """
    verts = lift(cfg).Q.vertices
    m = lcm_denominators(c for v in verts for c in v[:-1])
    slopes = (c for piece in cfg.pieces for c in piece[0])
    r = math.lcm(lcm_denominators(m * v[-1] for v in verts), lcm_denominators(slopes))
    return m, r


def normalized(cfg: TestConfig, m: int, r: int) -> TestConfig:
    out = dilate_config(cfg, m) if m != 1 else cfg
    return base_change(out, r) if r != 1 else out
