"""The acceptance suite, runnable from the command line (``kstab selftest``).

Each criterion is a function over the shipped fixtures that returns a short
detail string or raises.  ``run`` collects one ``CriterionResult`` per
criterion; nothing is skipped silently.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from . import oracles
from .blowup import corollary_check, epsilon_fit
from .configs import AffineAction, TestConfig, base_change, dilate_config, lattice_normalizer, make_config, normalized, twist
from .exceptions import KStabError
from .fixtures import Fixture, load_fixture, shipped_fixtures
from .futaki import (closed_form_coefficients, destabilizer_algebra, extremal_action, futaki, futaki_of,
                     inner_product, relative_futaki)
from .polytope import Polytope, ehrhart
from .search import Classification, build_problem, solve
from .subdivision import trivial_subdivision
from .weights import expansion, norm_trace_config, pair_trace, weight_poly_affine, weight_poly_config

ORACLE_K = 8


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s) {self.detail}"


def standard_simplex(n: int, size: int = 1) -> Polytope:
    verts = [(0,) * n] + [tuple(size * int(i == j) for j in range(n)) for i in range(n)]
    return Polytope.from_vertices(verts)


def unstable_pentagon() -> tuple[Polytope, TestConfig]:
    """A lattice pentagon with a relatively destabilizing single-crease function.

    The crease meets the boundary at points with denominator 69, so this
    pair is only evaluated through the closed-form route.
    """
    P = Polytope.from_vertices([(0, 1), (1, 3), (6, 9), (13, 1), (16, 2)])
    return P, make_config(P, [((0, 0), 0), ((-3, -1), 33)])


def _fixtures(names=None) -> list[Fixture]:
    return [load_fixture(n) for n in (names or shipped_fixtures())]


def _check(cond: bool, message: str):
    if not cond:
        raise AssertionError(message)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def exactness(fixtures) -> str:
    n_checks = 0
    for fx in fixtures:
        P = fx.polytope
        e = ehrhart(P)
        for k in range(ORACLE_K + 1):
            _check(e(k) == oracles.count(P, k), f"{fx.name}: Ehrhart polynomial wrong at k={k}")
            n_checks += 1
        for name, u in fx.actions.items():
            w = weight_poly_affine(P, u).w_poly
            for k in range(ORACLE_K + 1):
                _check(w(k) == oracles.affine_weight(P, u, k), f"{fx.name}.{name}: weight wrong at k={k}")
                n_checks += 1
        for name, cfg in fx.configs.items():
            m, r = lattice_normalizer(cfg)
            g = normalized(cfg, m, r)
            data = weight_poly_config(g)
            norm = norm_trace_config(g)
            pairs = [(u.on_dilation(m), pair_trace(g.polytope, g, u.on_dilation(m))[0]) for u in fx.actions.values()]
            for k in range(ORACLE_K + 1):
                _check(data.d_poly(k) == oracles.count(g.polytope, k), f"{fx.name}.{name}: dimension wrong at k={k}")
                _check(data.w_poly(k) == oracles.config_weight(g, k), f"{fx.name}.{name}: weight wrong at k={k}")
                _check(norm(k) == oracles.config_norm(g, k), f"{fx.name}.{name}: Tr(A^2) wrong at k={k}")
                for u, p in pairs:
                    _check(p(k) == oracles.config_affine_pair(g, u, k), f"{fx.name}.{name}: Tr(AB) wrong at k={k}")
                n_checks += 3 + len(pairs)
    return f"{n_checks} polynomial values equal their lattice sums"


def closed_forms(fixtures) -> str:
    n_checks = 0
    for fx in fixtures:
        P = fx.polytope
        for name, a in [*fx.actions.items(), *fx.configs.items()]:
            e = expansion(P, a)
            c = closed_form_coefficients(P, a)
            for key in ("a0", "a1", "b0", "b1"):
                _check(getattr(e, key) == c[key], f"{fx.name}.{name}: {key} {getattr(e, key)} != {c[key]}")
            _check(futaki(e) == c["a1"] / c["a0"] * c["b0"] - c["b1"], f"{fx.name}.{name}: F routes differ")
            n_checks += 1
    return f"{n_checks} actions agree on a0, a1, b0, b1 and F"


def anchors(fixtures) -> str:
    cp1 = load_fixture("cp1")
    _check(futaki_of(cp1.polytope, cp1.configs["step"]) == Fraction(1, 4), "F(step) != 1/4")
    x = AffineAction.coordinate(1, 0)
    _check(inner_product(cp1.polytope, x, x) == Fraction(1, 12), "<x,x> != 1/12 on [0,1]")
    P = load_fixture("blp2").polytope
    fx_ = futaki_of(P, make_config(P, [((1, 0), 0)]))
    fy_ = futaki_of(P, make_config(P, [((0, 1), 0)]))
    _check(fx_ == Fraction(-1, 9), f"F(x) = {fx_} != -1/9")
    _check(fy_ == Fraction(1, 18), f"F(y) = {fy_} != 1/18")
    return "F(step)=1/4, F(x)=-1/9, F(y)=1/18, <x,x>=1/12"


def vanishing(fixtures) -> str:
    rng = random.Random(4)
    n_checks = 0
    for n in (1, 2, 3):
        for size in (1, 2):
            P = standard_simplex(n, size)
            actions = [AffineAction.coordinate(n, i) for i in range(n)]
            actions += [AffineAction(tuple(rng.randint(-5, 5) for _ in range(n)), rng.randint(-5, 5)) for _ in range(3)]
            for u in actions:
                _check(futaki_of(P, u) == 0, f"F({u}) != 0 on {size}*Delta^{n}")
                n_checks += 1
    for fx in fixtures:
        for c in (1, -2, Fraction(7, 3)):
            _check(futaki_of(fx.polytope, AffineAction.const(fx.polytope.dim, c)) == 0, f"{fx.name}: constant {c}")
            n_checks += 1
    return f"{n_checks} torus and constant actions have F = 0"


def _config_fixtures(fixtures):
    return [(fx, name, cfg) for fx in fixtures for name, cfg in fx.configs.items() if not cfg.is_product]


def scaling(fixtures) -> str:
    picks = {}
    for fx, name, cfg in _config_fixtures(fixtures):
        picks.setdefault(fx.name, (fx, name, cfg))
    chosen = list(picks.values())[:3]
    _check(len(chosen) == 3, "need three fixtures with configurations")
    for fx, name, cfg in chosen:
        P, n = fx.polytope, fx.polytope.dim
        F = futaki_of(P, cfg)
        for r in (2, 3):
            _check(futaki_of(P, base_change(cfg, r)) == r * F, f"{fx.name}.{name}: F(r a) != r F(a), r={r}")
            d = dilate_config(cfg, r)
            _check(futaki_of(d.polytope, d) == r ** n * F, f"{fx.name}.{name}: F(L^m) != m^n F, m={r}")
    return "F(r a) = r F and F(L^m) = m^n F on " + ", ".join(f"{fx.name}.{nm}" for fx, nm, _ in chosen)


def twist_invariance(fixtures) -> str:
    rng = random.Random(6)
    n_checks = 0
    for fx, name, cfg in _config_fixtures(fixtures):
        P = fx.polytope
        ext = extremal_action(P)
        base = relative_futaki(P, cfg, extremal=ext).F_rel
        for _ in range(5):
            u = AffineAction(tuple(rng.randint(-3, 3) for _ in range(P.dim)), rng.randint(-3, 3))
            moved = relative_futaki(P, twist(cfg, u), extremal=ext).F_rel
            _check(moved == base, f"{fx.name}.{name}: F_T changed under twist by {u}")
            n_checks += 1
    return f"{n_checks} twists leave F_T unchanged"


def extremal_identity(fixtures) -> str:
    for fx in fixtures:
        extremal_action(fx.polytope)  # raises if F(chi) != <chi,chi>
    blp = extremal_action(load_fixture("blp2").polytope)
    _check(any(c != 0 for c in blp.chi.linear), "chi vanishes on blp2")
    return f"F(chi) = <chi,chi> on all fixtures; blp2 chi = {blp.chi}, |chi|^2 = {blp.norm2}"


def algebra(fixtures) -> str:
    P, cfg = unstable_pentagon()
    rep = destabilizer_algebra(P, cfg, route="closed")
    _check(rep.destabilizing and rep.direct, "pentagon configuration is not destabilizing")
    n_lattice = 0
    for fx, name, c in _config_fixtures(fixtures):
        if fx.name != "blp2":
            continue
        lat = destabilizer_algebra(fx.polytope, c, route="lattice")
        cf = destabilizer_algebra(fx.polytope, c, route="closed")
        _check(lat == replace(cf, route="lattice"), f"blp2.{name}: routes disagree")
        n_lattice += 1
    return (f"pentagon mu = {float(rep.mu):.4g} > 0 checked directly; "
            f"{n_lattice} blp2 configurations checked through bilinearity on both routes")


def lemma(fixtures) -> str:
    done = []
    for fx in fixtures:
        for sname, scan in fx.scans.items():
            if fx.polytope.dim != 2 or scan.config is None:
                continue
            s = epsilon_fit(fx.polytope, fx.configs[scan.config], scan.vertex, scan.depths)  # raises LemmaMismatch
            _check(s.coefficient == s.expected_coefficient, f"{fx.name}.{sname}: coefficient mismatch")
            done.append((fx.name, s.coefficient))
    _check(len(done) >= 3, f"only {len(done)} two-dimensional scans")
    _check(("simplex2", Fraction(-2, 3)) in done, "2*Delta with f = x did not give -2/3")
    return "; ".join(f"{n}: {c}" for n, c in done)


def corollary(fixtures) -> str:
    checked = []
    for fx, name, cfg in _config_fixtures(fixtures):
        rep = corollary_check(fx.polytope, cfg)  # raises CorollaryViolated
        if rep.skipped:
            continue
        _check(rep.corner_leading == Fraction(1, math.factorial(fx.polytope.dim)), f"{fx.name}.{name}: corner")
        checked.append(f"{fx.name}.{name}")
    _check(checked, "no configuration with a strictly repulsive vertex")
    return f"{len(checked)} configurations: " + ", ".join(checked)


def _lp_all(fx: Fixture, relative: bool) -> str:
    P = fx.polytope
    chi = extremal_action(P).chi if relative else None
    subs = [("trivial", trivial_subdivision(P)), *fx.subdivisions.items()]
    _check(len(subs) > 1, f"{fx.name} has no shipped subdivisions")
    for name, sub in subs:
        _check(len(sub.points) <= 10, f"{fx.name}.{name} has more than 10 points")
        v = solve(build_problem(P, sub, chi, relative))
        _check(v.minimum == 0, f"{fx.name}.{name}: minimum {v.minimum}")
        _check(v.classification is Classification.NO_DESTABILIZER, f"{fx.name}.{name}: {v.classification.value}")
    return f"{len(subs)} subdivisions, minimum 0, affine minimizers only"


def blp2_search(fixtures) -> str:
    return _lp_all(load_fixture("blp2"), relative=True)


def cp1_search(fixtures) -> str:
    return _lp_all(load_fixture("cp1"), relative=False)


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "interpolated polynomials match lattice sums", exactness),
    (2, "closed forms agree with interpolation", closed_forms),
    (3, "hand-computed anchors", anchors),
    (4, "Futaki vanishing on simplices and constants", vanishing),
    (5, "scaling relations", scaling),
    (6, "twist invariance of F_T", twist_invariance),
    (7, "extremal identity", extremal_identity),
    (8, "mu a - chi algebra", algebra),
    (9, "first-order chop lemma", lemma),
    (10, "corollary: repulsive vertex and chops", corollary),
    (11, "Bl_p CP^2 relative LP search", blp2_search),
    (12, "CP^1 LP search", cp1_search),
]


def run_one(number: int, fixtures=None) -> CriterionResult:
    num, title, fn = next(c for c in CRITERIA if c[0] == number)
    fxs = _fixtures(fixtures)
    t0 = time.perf_counter()
    try:
        detail, ok = fn(fxs), True
    except (AssertionError, KStabError) as exc:
        detail, ok = f"{type(exc).__name__}: {exc}", False
    return CriterionResult(num, title, ok, detail, time.perf_counter() - t0)


def run(numbers=None, fixtures=None) -> list[CriterionResult]:
    return [run_one(n, fixtures) for n, _, _ in CRITERIA if numbers is None or n in numbers]
