"""Exact dimension, weight and pair-trace polynomials by lattice counting.

Everything reduces to a handful of lattice moment polynomials:

* on ``kP``: the count ``N(k)``, coordinate sums ``s_i(k)`` and second
  moments ``S_ij(k)``;
* on ``kQ``: the count and the sums of the base coordinates;
* on ``kQt``: the count.

Each is interpolated from the minimal number of samples and checked on
guard samples, so every derived trace is an exact polynomial in ``k``.
Rational polytopes and non-lattice lifts are handled by dilating to a
lattice polytope and base-changing the fibre direction; the ``scale`` and
``base`` recorded on the result convert the coefficients back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import settings
from .configs import AffineAction, LiftedQ, TestConfig, dilate_config, lattice_normalizer, lift_Q, normalized
from .exact import Poly, fit_guarded
from .exceptions import InputError, LiftTooLarge, ZeroLeadingCoefficient
from .polytope import Polytope, dilate, lattice_moments, lattice_moments_raw

Action = Union[AffineAction, TestConfig]

K = Poly.monomial(1)


@dataclass(frozen=True)
class PolytopeMoments:
    count: Poly
    first: tuple
    second: tuple


@dataclass(frozen=True)
class LiftMoments:
    count: Poly
    first: tuple  # sums of base coordinates over kQ
    double_count: Poly
    cap: int


@lru_cache(maxsize=1024)
def polytope_moments(P: Polytope, guards: int = 2) -> PolytopeMoments:
    """Moment polynomials of a lattice polytope."""
    if not P.is_lattice:
        raise InputError(f"{P} is not a lattice polytope")
    n = P.dim
    kmax = n + 3 + guards
    table = {k: lattice_moments(P, k, 2) for k in range(0, kmax + 1)}
    count = fit_guarded([table[k][0] for k in range(kmax + 1)], range(kmax + 1), n, guards, "d_k")
    ks = list(range(1, kmax + 1))
    first = tuple(fit_guarded([table[k][1][i] for k in ks], ks, n + 1, guards, f"sum x{i + 1}")
                  for i in range(n))
    second = tuple(tuple(fit_guarded([table[k][2][i][j] for k in ks], ks, n + 2, guards,
                                     f"sum x{i + 1}x{j + 1}") for j in range(n)) for i in range(n))
    return PolytopeMoments(count, first, second)


def slice_cost(lifted: LiftedQ, kmax: int) -> int:
    """Number of prefix points walked by the double-lift counts up to ``kmax``."""
    lo, hi = lifted.Qt_box
    widths = [h - l for l, h in zip(lo, hi)][: len(lo) - 1]
    return sum(math.prod(int(k * w) + 1 for w in widths) for k in range(1, kmax + 1))


def _lift_moments(lifted: LiftedQ, guards: int) -> LiftMoments:
    n = lifted.config.dim
    Q = lifted.Q
    ks = list(range(1, n + 4 + guards))
    cost = slice_cost(lifted, ks[-1])
    if cost > settings.LIFT_BUDGET:
        raise LiftTooLarge(f"lattice route would walk {cost} slices (budget {settings.LIFT_BUDGET}); "
                           "use the closed-form route")
    table = {k: lattice_moments(Q, k, 1) for k in ks}
    count = fit_guarded([table[k][0] for k in ks], ks, n + 1, guards, "|kQ|")
    first = tuple(fit_guarded([table[k][1][i] for k in ks], ks, n + 2, guards, f"kQ sum x{i + 1}")
                  for i in range(n))
    dbl = [lattice_moments_raw(lifted.Qt_halfspaces, lifted.Qt_box, k, 0)[0] for k in ks]
    double_count = fit_guarded(dbl, ks, n + 2, guards, "|kQt|")
    return LiftMoments(count, first, double_count, lifted.cap)


@lru_cache(maxsize=1024)
def _lift_moments_cached(cfg: TestConfig, cap: int, guards: int) -> LiftMoments:
    return _lift_moments(lift_Q(cfg), guards)


def lift_moments(cfg: TestConfig, guards: int = 2) -> LiftMoments:
    return _lift_moments_cached(cfg, cfg.cap, guards)


@dataclass(frozen=True)
class ExpansionData:
    """Dimension and weight polynomials of an action.

    The polynomials live on the lattice polytope ``scale * P`` with the
    weights multiplied by ``base``; the coefficients ``a0, a1, b0, b1`` are
    converted back through the dilation relations (``d`` of ``mP`` at k is
    ``d`` of ``P`` at mk) and division by ``base``.
    """

    dim: int
    d_poly: Poly
    w_poly: Poly
    scale: int = 1
    base: int = 1

    @property
    def a0(self) -> Fraction:
        return self.d_poly.coeff(self.dim) / self.scale ** self.dim

    @property
    def a1(self) -> Fraction:
        return self.d_poly.coeff(self.dim - 1) / self.scale ** (self.dim - 1)

    @property
    def b0(self) -> Fraction:
        return self.w_poly.coeff(self.dim + 1) / (self.scale ** (self.dim + 1) * self.base)

    @property
    def b1(self) -> Fraction:
        return self.w_poly.coeff(self.dim) / (self.scale ** self.dim * self.base)

    @property
    def futaki(self) -> Fraction:
        if self.a0 == 0:
            raise ZeroLeadingCoefficient("a0 = 0")
        return self.a1 / self.a0 * self.b0 - self.b1


def _affine_trace(m: PolytopeMoments, u: AffineAction) -> Poly:
    # sum over kP of <xi,x> + c k
    out = Poly.constant(u.constant) * K * m.count
    for xi, s in zip(u.linear, m.first):
        out = out + s * xi
    return out


def _affine_pair(m: PolytopeMoments, u: AffineAction, v: AffineAction) -> Poly:
    n = len(u.linear)
    out = Poly.constant(u.constant * v.constant) * K * K * m.count
    for i in range(n):
        out = out + m.first[i] * K * (u.linear[i] * v.constant + v.linear[i] * u.constant)
        for j in range(n):
            if u.linear[i] and v.linear[j]:
                out = out + m.second[i][j] * (u.linear[i] * v.linear[j])
    return out


def _config_trace(pm: PolytopeMoments, lm: LiftMoments) -> Poly:
    # sum_x -ceil(k f(x/k)) = |kQ| - (Rk + 1) d_k
    return lm.count - (K * lm.cap + 1) * pm.count


def _config_pair(pm: PolytopeMoments, lm: LiftMoments, v: AffineAction) -> Poly:
    over_q = Poly.constant(v.constant) * K * lm.count
    for xi, s in zip(v.linear, lm.first):
        over_q = over_q + s * xi
    return over_q - (K * lm.cap + 1) * _affine_trace(pm, v)


def _config_norm(pm: PolytopeMoments, lm: LiftMoments) -> Poly:
    rk1 = K * lm.cap + 1
    return lm.double_count + rk1 * rk1 * pm.count - rk1 * 2 * lm.count


def _lattice_P(P: Polytope) -> tuple[Polytope, int]:
    m = P.lattice_multiplier()
    return (P, 1) if m == 1 else (dilate(P, m), m)


def common_scale(P: Polytope, *actions: Action) -> int:
    m = P.lattice_multiplier()
    for a in actions:
        if isinstance(a, TestConfig):
            m = math.lcm(m, lattice_normalizer(a)[0])
    return m


def _on_scale(a: Action, m: int) -> tuple[Action, int]:
    """The action on ``L^m`` and the base change making its lift lattice."""
    if isinstance(a, TestConfig):
        dil = dilate_config(a, m) if m != 1 else a
        r = lattice_normalizer(dil)[1]
        return normalized(dil, 1, r), r
    return (a.on_dilation(m) if m != 1 else a), 1


def _guards(guards):
    return settings.GUARD_SAMPLES if guards is None else guards


def dimension_poly(P: Polytope, guards=None) -> tuple[Poly, int]:
    Pl, m = _lattice_P(P)
    return polytope_moments(Pl, _guards(guards)).count, m


def weight_poly_affine(P: Polytope, u: AffineAction, guards=None) -> ExpansionData:
    """Expansion data for a torus action (weights carry no minus sign)."""
    g = _guards(guards)
    m = P.lattice_multiplier()
    Pl = dilate(P, m) if m != 1 else P
    pm = polytope_moments(Pl, g)
    return ExpansionData(P.dim, pm.count, _affine_trace(pm, u.on_dilation(m)), m)


def weight_poly_config(cfg: TestConfig, guards=None) -> ExpansionData:
    """Expansion data of a configuration whose lift is already a lattice polytope.

    Raises ``NonLatticeLift`` otherwise; see ``config_expansion``.
    """
    g = _guards(guards)
    lm = lift_moments(cfg, g)
    pm = polytope_moments(cfg.polytope, g)
    return ExpansionData(cfg.dim, pm.count, _config_trace(pm, lm), 1)


def config_expansion(cfg: TestConfig, guards=None) -> ExpansionData:
    """Expansion data of any rational configuration, dilating as needed."""
    m, r = lattice_normalizer(cfg)
    data = weight_poly_config(normalized(cfg, m, r), guards)
    return ExpansionData(data.dim, data.d_poly, data.w_poly, m, r)


def expansion(P: Polytope, a: Action, guards=None) -> ExpansionData:
    if isinstance(a, TestConfig):
        return config_expansion(a, guards)
    return weight_poly_affine(P, a, guards)


def pair_trace(P: Polytope, A: Action, B: Action, guards=None) -> tuple[Poly, int, int]:
    """``Tr(A_k B_k)`` on the common lattice dilation.

    Returns ``(poly, scale, base)`` where ``base`` is the product of the
    base-change orders applied to the two actions.

    At most one of ``A``, ``B`` may be a non-product configuration unless
    they are the same configuration.
    """
    g = _guards(guards)
    if isinstance(A, AffineAction) and isinstance(B, TestConfig):
        A, B = B, A
    m = common_scale(P, A, B)
    Pl = dilate(P, m) if m != 1 else P
    pm = polytope_moments(Pl, g)
    (A_m, ra), (B_m, rb) = _on_scale(A, m), _on_scale(B, m)
    if isinstance(A_m, AffineAction):
        return _affine_pair(pm, A_m, B_m), m, 1
    if isinstance(B_m, AffineAction):
        return _config_pair(pm, lift_moments(A_m, g), B_m), m, ra
    if A_m == B_m:
        return _config_norm(pm, lift_moments(A_m, g)), m, ra * rb
    raise InputError("pair trace of two distinct configurations is not a lattice sum; "
                     "use inner_product, which polarizes")


def norm_trace_config(cfg: TestConfig, guards=None) -> Poly:
    """``sum_x ceil(k f(x/k))^2`` for a configuration with lattice lift."""
    g = _guards(guards)
    return _config_norm(polytope_moments(cfg.polytope, g), lift_moments(cfg, g))


def pair_leading(P: Polytope, A: Action, B: Action, guards=None) -> Fraction:
    """Coefficient of ``k^(n+2)`` in ``Tr(A_k B_k)``, converted back to P."""
    poly, m, r = pair_trace(P, A, B, guards)
    n = P.dim
    return poly.coeff(n + 2) / (Fraction(m) ** (n + 2) * r)
