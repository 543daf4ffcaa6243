"""Futaki invariant, Futaki-Mabuchi inner product, extremal and relative invariants.

The torus is represented modulo constants by the coordinate functions
``x_1 .. x_n``; constants are a null direction of both the inner product
and the Futaki invariant.  Every quantity has a lattice-counting route
(the default) and a closed-form integral route used for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .configs import AffineAction, TestConfig, base_change, dilate_config, twist
from .exact import solve
from .exceptions import IdentityViolated, InputError, RouteMismatch, SingularGram, ZeroLeadingCoefficient
from .polytope import Polytope, boundary_measure, integrate_boundary, integrate_pl
from .weights import Action, ExpansionData, expansion, pair_leading


def futaki(e: ExpansionData) -> Fraction:
    """``F = (a1/a0) b0 - b1``."""
    if e.a0 == 0:
        raise ZeroLeadingCoefficient("leading dimension coefficient vanishes")
    return e.a1 / e.a0 * e.b0 - e.b1


def futaki_of(P: Polytope, a: Action, guards=None) -> Fraction:
    return futaki(expansion(P, a, guards))


def _sum_configs(A: TestConfig, B: TestConfig) -> TestConfig:
    pieces = [(tuple(x + y for x, y in zip(p[0], q[0])), p[1] + q[1]) for p in A.pieces for q in B.pieces]
    return TestConfig(A.polytope, tuple(sorted(set(pieces))), A.cap + B.cap)


def inner_product(P: Polytope, A: Action, B: Action, guards=None) -> Fraction:
    """Leading coefficient of ``Tr(A_k B_k) - Tr(A_k) Tr(B_k) / d_k``.

    Two distinct non-product configurations are handled by polarization
    through their sum, which is again a configuration.
    """
    if isinstance(A, TestConfig) and isinstance(B, TestConfig) and A != B:
        both = _sum_configs(A, B)
        return (inner_product(P, both, both, guards) - inner_product(P, A, A, guards)
                - inner_product(P, B, B, guards)) / 2
    ea, eb = expansion(P, A, guards), expansion(P, B, guards)
    return pair_leading(P, A, B, guards) - ea.b0 * eb.b0 / ea.a0


def coordinate_actions(n: int) -> list[AffineAction]:
    return [AffineAction.coordinate(n, i) for i in range(n)]


def gram_matrix(P: Polytope, guards=None) -> list[list[Fraction]]:
    """``G_ij = <x_i, x_j>``: the covariance matrix of the coordinates on P."""
    xs = coordinate_actions(P.dim)
    return [[inner_product(P, xi, xj, guards) for xj in xs] for xi in xs]


@dataclass(frozen=True)
class Extremal:
    """Extremal action ``chi = sum c_i x_i`` with ``<chi, x_i> = F(x_i)``."""

    chi: AffineAction
    norm2: Fraction
    gram: tuple
    futaki_vector: tuple

    def as_config_function(self) -> AffineAction:
        """``chi`` written as a PL function in the configuration convention (weights ``-f``)."""
        return -self.chi


def extremal_action(P: Polytope, guards=None) -> Extremal:
    """Solve ``G c = (F(x_1), ..., F(x_n))`` and verify ``F(chi) = <chi, chi>``."""
    xs = coordinate_actions(P.dim)
    G = gram_matrix(P, guards)
    fv = [futaki_of(P, x, guards) for x in xs]
    c = solve(G, fv)
    if c is None:
        raise SingularGram("Gram matrix of the torus is singular")
    chi = AffineAction(tuple(c), 0)
    f_chi = futaki_of(P, chi, guards)
    norm2 = inner_product(P, chi, chi, guards)
    if f_chi != norm2:
        raise IdentityViolated(f"F(chi) = {f_chi} but <chi,chi> = {norm2}")
    return Extremal(chi, norm2, tuple(tuple(r) for r in G), tuple(fv))


@dataclass(frozen=True)
class FutakiReport:
    F: Fraction
    F_rel: Fraction
    chi: AffineAction
    gram: tuple
    norm_alpha: Fraction
    norm_chi: Fraction
    projection: tuple = field(default=())

    @property
    def lower_bound_holds(self) -> bool:
        """``F(a)/|a| >= -|chi|`` checked without square roots."""
        if self.F >= 0:
            return True
        return self.F * self.F <= self.norm_alpha * self.norm_chi


def projection_coefficients(P: Polytope, a: Action, guards=None) -> list[Fraction]:
    """Coefficients p with ``a - sum p_j x_j`` orthogonal to the torus."""
    xs = coordinate_actions(P.dim)
    rhs = [inner_product(P, a, x, guards) for x in xs]
    p = solve(gram_matrix(P, guards), rhs)
    if p is None:
        raise SingularGram("Gram matrix of the torus is singular")
    return p


def relative_futaki(P: Polytope, a: Action, guards=None, extremal: Extremal | None = None) -> FutakiReport:
    """Relative Futaki invariant, computed by projection and through chi.

    The two routes must agree exactly; a mismatch raises ``RouteMismatch``.
    """
    ext = extremal or extremal_action(P, guards)
    F = futaki_of(P, a, guards)
    # projection route
    p = projection_coefficients(P, a, guards)
    via_projection = F - sum((pj * fj for pj, fj in zip(p, ext.futaki_vector)), Fraction(0))
    # chi route
    via_chi = F - inner_product(P, ext.chi, a, guards)
    if via_projection != via_chi:
        raise RouteMismatch(f"projection route {via_projection} != chi route {via_chi}")
    return FutakiReport(F, via_chi, ext.chi, ext.gram, inner_product(P, a, a, guards), ext.norm2, tuple(p))


def orthogonalize(P: Polytope, cfg: TestConfig, guards=None) -> TestConfig:
    """Twist by the (rational) projection onto the torus so that ``<a, x_i> = 0``.

    Weights of the twisted action are ``-f - sum p_j x_j``, i.e. the new
    PL function is ``f + sum p_j x_j``.
    """
    p = projection_coefficients(P, cfg, guards)
    out = twist(cfg, AffineAction(tuple(p), 0), allow_rational=True)
    for x in coordinate_actions(P.dim):
        if inner_product(P, out, x, guards) != 0:
            raise IdentityViolated("orthogonal projection did not orthogonalize")
    return out


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _weight_pieces(a: Action):
    """Return ``(sign, pieces)`` with weight function ``sign * max(pieces)``."""
    if isinstance(a, TestConfig):
        return -1, list(a.pieces)
    return 1, [(a.linear, a.constant)]


def closed_form_coefficients(P: Polytope, a: Action) -> dict:
    """``a0 = vol``, ``a1 = sigma/2``, ``b0 = int g``, ``b1 = (1/2) int_bd g`` for weight function g."""
    sign, pieces = _weight_pieces(a)
    return {
        "a0": P.volume(),
        "a1": boundary_measure(P).total / 2,
        "b0": sign * integrate_pl(P, pieces),
        "b1": sign * integrate_boundary(P, pieces) / 2,
    }


def closed_form_futaki(P: Polytope, a: Action) -> Fraction:
    c = closed_form_coefficients(P, a)
    return c["a1"] / c["a0"] * c["b0"] - c["b1"]


def closed_form_inner(P: Polytope, A: Action, B: Action) -> Fraction:
    """Covariance of the weight functions over P."""
    sa, pa = _weight_pieces(A)
    sb, pb = _weight_pieces(B)
    vol = P.volume()
    if isinstance(B, TestConfig):
        sa, pa, sb, pb = sb, pb, sa, pa
        A, B = B, A
    if isinstance(B, TestConfig):
        if A == B:
            cross = integrate_pl(P, pa, weight="self")
        else:
            both = _sum_configs(A, B)
            cross = (integrate_pl(P, both.pieces, weight="self") - integrate_pl(P, pa, weight="self")
                     - integrate_pl(P, pb, weight="self")) / 2
    else:
        cross = integrate_pl(P, pa, weight=pb[0])
    return sa * sb * (cross - integrate_pl(P, pa) * integrate_pl(P, pb) / vol)


# ---------------------------------------------------------------------------
# algebra used in the relative stability argument
# ---------------------------------------------------------------------------

def _require(cond: bool, what: str, report: dict):
    report[what] = bool(cond)
    if not cond:
        raise IdentityViolated(what)


def orthogonality_identities(P: Polytope, cfg: TestConfig, guards=None,
                             scales: Sequence[int] = (2, 3)) -> dict:
    """Exact checks of the bilinear algebra for an action orthogonal to the torus.

    Returns a dictionary of named results; any failure raises
    ``IdentityViolated``.  The ``mu`` identity is only meaningful when
    ``F(a) < 0`` and is reported as skipped otherwise.
    """
    xs = coordinate_actions(P.dim)
    if any(inner_product(P, cfg, x, guards) != 0 for x in xs):
        raise InputError("action is not orthogonal to the torus; orthogonalize it first")
    ext = extremal_action(P, guards)
    n = P.dim
    report: dict = {}
    F = futaki_of(P, cfg, guards)
    norm2 = inner_product(P, cfg, cfg, guards)
    report["F"] = F
    report["norm2"] = norm2
    report["chi_norm2"] = ext.norm2

    for i, x in enumerate(xs):
        shifted = twist(cfg, -x, allow_rational=True)  # weights -f + x_i
        _require(futaki_of(P, shifted, guards) == F + futaki_of(P, x, guards), f"F additive along x{i + 1}", report)
        for j, y in enumerate(xs):
            lhs = inner_product(P, shifted, y, guards)
            rhs = inner_product(P, cfg, y, guards) + inner_product(P, x, y, guards)
            _require(lhs == rhs, f"inner product bilinear (x{i + 1}, x{j + 1})", report)
    _require(inner_product(P, cfg, ext.chi, guards) == 0, "orthogonal to chi", report)
    for r in scales:
        _require(futaki_of(P, base_change(cfg, r), guards) == r * F, f"F(r a) = r F(a), r={r}", report)
        dil = expansion(dilate_config(cfg, r).polytope, dilate_config(cfg, r), guards)
        _require(futaki(dil) == Fraction(r) ** n * F, f"F(L^m) = m^n F, m={r}", report)

    if F < 0:
        mu = -F / norm2
        scaled = base_change(cfg, mu)
        _require(futaki_of(P, scaled, guards) == -inner_product(P, scaled, scaled, guards),
                 "F(mu a) = -|mu a|^2", report)
        # weights of mu*a - chi are -(mu f + chi)
        combo = twist(scaled, ext.chi, allow_rational=True)
        F_combo = futaki_of(P, combo, guards)
        norm_combo = inner_product(P, combo, combo, guards)
        _require(F_combo == -inner_product(P, scaled, scaled, guards) - ext.norm2,
                 "F(mu a - chi) = -|mu a|^2 - |chi|^2", report)
        _require(F_combo == -norm_combo, "F(mu a - chi) = -|mu a - chi|^2", report)
        report["mu"] = mu
        # -|mu a - chi| < -|chi| unless mu a = 0
        report["contradicts_lower_bound"] = norm_combo > ext.norm2
    else:
        report["mu"] = None
    return report


@dataclass(frozen=True)
class AlgebraReport:
    """Outcome of the ``mu a - chi`` construction for one configuration."""

    route: str
    F_alpha: Fraction
    norm_alpha: Fraction
    chi_norm2: Fraction
    mu: Fraction | None
    F_mu: Fraction | None
    norm_mu: Fraction | None
    F_combo: Fraction | None
    norm_combo: Fraction | None
    direct: bool

    @property
    def destabilizing(self) -> bool:
        return self.mu is not None and self.mu > 0


def invariant_routes(P: Polytope, route: str, guards=None):
    """``(F, inner, chi)`` for the lattice or the closed-form route."""
    if route == "lattice":
        ext = extremal_action(P, guards)
        return (lambda a: futaki_of(P, a, guards)), (lambda a, b: inner_product(P, a, b, guards)), ext.chi
    if route == "closed":
        xs = coordinate_actions(P.dim)
        G = [[closed_form_inner(P, a, b) for b in xs] for a in xs]
        c = solve(G, [closed_form_futaki(P, x) for x in xs])
        if c is None:
            raise SingularGram("Gram matrix of the torus is singular")
        chi = AffineAction(tuple(c), 0)
        if closed_form_futaki(P, chi) != closed_form_inner(P, chi, chi):
            raise IdentityViolated("F(chi) != <chi,chi> in closed form")
        return (lambda a: closed_form_futaki(P, a)), (lambda a, b: closed_form_inner(P, a, b)), chi
    raise InputError(f"unknown route {route!r}; expected 'lattice' or 'closed'")


def destabilizer_algebra(P: Polytope, cfg: TestConfig, route: str = "lattice", guards=None) -> AlgebraReport:
    """Project ``cfg`` off ``chi``, pick ``mu`` with ``F(mu a) = -|mu a|^2`` and check
    ``F(mu a - chi) = -|mu a|^2 - |chi|^2 = -|mu a - chi|^2``.

    For ``mu > 0`` every quantity is recomputed on the actual rescaled and
    twisted configuration.  A negative ``mu`` is not a configuration, so the
    identities are then assembled from bilinearity of the measured values.
    """
    F, ip, chi = invariant_routes(P, route, guards)
    chi2 = ip(chi, chi)
    if chi2 == 0:
        alpha = cfg
    else:
        alpha = twist(cfg, chi.scale(ip(cfg, chi) / chi2), allow_rational=True)
    if ip(alpha, chi) != 0:
        raise IdentityViolated("projection off chi left a nonzero component")
    Fa, Na = F(alpha), ip(alpha, alpha)
    if Fa == 0 or Na == 0:
        return AlgebraReport(route, Fa, Na, chi2, None, None, None, None, None, False)
    mu = -Fa / Na
    if mu > 0:
        scaled = base_change(alpha, mu)
        combo = twist(scaled, chi, allow_rational=True)  # weights mu*w_a - chi
        F_mu, N_mu = F(scaled), ip(scaled, scaled)
        F_c, N_c = F(combo), ip(combo, combo)
        cross = ip(scaled, chi)
        direct = True
    else:
        F_mu, N_mu = mu * Fa, mu * mu * Na
        cross = mu * ip(alpha, chi)
        F_c, N_c = F_mu - F(chi), N_mu - 2 * cross + chi2
        direct = False
    if cross != 0:
        raise IdentityViolated("<mu a, chi> != 0")
    if F_mu != -N_mu:
        raise IdentityViolated(f"F(mu a) = {F_mu} but -|mu a|^2 = {-N_mu}")
    if F_c != -N_mu - chi2:
        raise IdentityViolated(f"F(mu a - chi) = {F_c} but -|mu a|^2 - |chi|^2 = {-N_mu - chi2}")
    if F_c != -N_c:
        raise IdentityViolated(f"F(mu a - chi) = {F_c} but -|mu a - chi|^2 = {-N_c}")
    return AlgebraReport(route, Fa, Na, chi2, mu, F_mu, N_mu, F_c, N_c, direct)
