"""Estimator-style wrappers around the exact engines.

Each estimator follows the scikit-learn contract: hyperparameters are set
in ``__init__`` and returned by ``get_params``; ``fit`` learns per-polytope
state into trailing-underscore attributes; ``transform``/``predict`` map a
batch of inputs to arrays.  Arrays hold ``Fraction`` objects (dtype object)
so nothing is rounded.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .blowup import EpsilonScan, corner_chop, epsilon_fit, repulsive_vertex
from .configs import AffineAction, TestConfig, make_config, restrict_config
from .exact import rat_vector
from .exceptions import InputError
from .fixtures import Fixture
from .futaki import Extremal, extremal_action, futaki_of, inner_product
from .polytope import Polytope
from .search import Classification, Verdict, build_problem, solve
from .settings import GUARD_SAMPLES
from .subdivision import Subdivision, trivial_subdivision
from .weights import expansion


def check_polytope(X) -> Polytope:
    """Accept a Polytope, a Fixture, or a sequence of integer vertices."""
    if isinstance(X, Polytope):
        return X
    if isinstance(X, Fixture):
        return X.polytope
    try:
        verts = [rat_vector(v) for v in X]
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot read a polytope from {type(X).__name__}") from exc
    return Polytope.from_vertices(verts)


def check_action(P: Polytope, a):
    """Accept an AffineAction, a TestConfig on P, or a list of ``(linear, constant)`` pieces."""
    if isinstance(a, AffineAction):
        if a.dim != P.dim:
            raise InputError(f"action has dimension {a.dim}, polytope has {P.dim}")
        return a
    if isinstance(a, TestConfig):
        if a.polytope != P:
            raise InputError("configuration lives on a different polytope")
        return a
    return make_config(P, a)


def check_depths(depths) -> list[Fraction]:
    out = sorted(rat_vector(depths))
    if not out or out[0] < 0:
        raise InputError("depths must be a nonempty list of nonnegative rationals")
    if len(set(out)) != len(out):
        raise InputError("depths must be distinct")
    return out


def _as_batch(X) -> list:
    if isinstance(X, (AffineAction, TestConfig, Subdivision)):
        return [X]
    return list(X)


class ToricFutaki(TransformerMixin, BaseEstimator):
    """Futaki invariants of test configurations on a fixed polytope.

    ``fit(P)`` computes the extremal action; ``transform(actions)`` returns
    rows ``[F, F_T, <a, a>]``; ``predict(actions)`` returns the sign of F_T
    (-1 marks a destabilizer).
    """

    def __init__(self, guard_samples: int = GUARD_SAMPLES, relative: bool = True):
        self.guard_samples = guard_samples
        self.relative = relative

    def fit(self, X, y=None):
        P = check_polytope(X)
        self.polytope_ = P
        self.extremal_: Extremal = extremal_action(P, self.guard_samples)
        self.chi_ = self.extremal_.chi
        self.n_features_in_ = P.dim
        return self

    def _row(self, a):
        P, g = self.polytope_, self.guard_samples
        F = futaki_of(P, a, g)
        F_T = F - inner_product(P, self.chi_, a, g) if self.relative else F
        return [F, F_T, inner_product(P, a, a, g)]

    def transform(self, X):
        check_is_fitted(self, "extremal_")
        rows = [self._row(check_action(self.polytope_, a)) for a in _as_batch(X)]
        return np.array(rows, dtype=object).reshape(len(rows), 3)

    def predict(self, X):
        out = self.transform(X)
        return np.array([(v > 0) - (v < 0) for v in out[:, 1]], dtype=int)


class BlowupScan(BaseEstimator):
    """Exact epsilon-expansion of F under chopping a vertex.

    ``fit(cfg)`` fits the family at the given (or default) depths and checks
    the first-order lemma; ``predict(depths)`` evaluates F on the chopped
    polytopes exactly.
    """

    def __init__(self, vertex=None, depths=None, guard_samples: int = GUARD_SAMPLES, check: bool = True):
        self.vertex = vertex
        self.depths = depths
        self.guard_samples = guard_samples
        self.check = check

    def fit(self, X, y=None):
        if not isinstance(X, TestConfig):
            raise InputError("BlowupScan.fit expects a TestConfig")
        P = X.polytope
        v = rat_vector(self.vertex) if self.vertex is not None else repulsive_vertex(P, X).vertex
        depths = check_depths(self.depths) if self.depths is not None else None
        self.config_ = X
        self.scan_: EpsilonScan = epsilon_fit(P, X, v, depths, self.guard_samples, check=self.check)
        self.coefficient_ = self.scan_.coefficient
        self.expected_coefficient_ = self.scan_.expected_coefficient
        return self

    def predict(self, X):
        check_is_fitted(self, "scan_")
        cfg, v = self.config_, self.scan_.vertex
        out = []
        for eps in check_depths(_as_batch(X)):
            Pe = corner_chop(cfg.polytope, v, eps).polytope
            c = restrict_config(cfg, Pe) if eps else cfg
            out.append(expansion(Pe, c, self.guard_samples).futaki)
        return np.array(out, dtype=object)


def _solve_one(args) -> Verdict:
    P, sub, chi, relative = args
    return solve(build_problem(P, sub, chi, relative))


class DestabilizerSearch(BaseEstimator):
    """Exact LP search for destabilizing PL convex functions.

    ``fit(P)`` fixes the polytope and its extremal action; ``transform``
    returns the LP minima over a batch of subdivisions and ``predict``
    their classifications.  ``n_jobs > 1`` solves subdivisions in worker
    processes; results keep input order.
    """

    def __init__(self, relative: bool = True, n_jobs: int = 1):
        self.relative = relative
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        P = check_polytope(X)
        self.polytope_ = P
        self.chi_ = extremal_action(P).chi if self.relative else None
        self.verdicts_: list[Verdict] = []
        return self

    def solve(self, X=None) -> list[Verdict]:
        check_is_fitted(self, "polytope_")
        P = self.polytope_
        subs = [trivial_subdivision(P)] if X is None else _as_batch(X)
        for s in subs:
            if not isinstance(s, Subdivision):
                raise InputError("expected Subdivision objects")
        jobs = [(P, s, self.chi_, self.relative) for s in subs]
        if self.n_jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(self.n_jobs) as pool:
                self.verdicts_ = list(pool.map(_solve_one, jobs))
        else:
            self.verdicts_ = [_solve_one(j) for j in jobs]
        return self.verdicts_

    def transform(self, X=None):
        return np.array([v.minimum for v in self.solve(X)], dtype=object)

    def predict(self, X=None):
        return np.array([v.classification for v in self.solve(X)], dtype=object)

    @property
    def stable_(self) -> bool:
        check_is_fitted(self, "verdicts_")
        return all(v.classification is Classification.NO_DESTABILIZER for v in self.verdicts_)


__all__ = ["ToricFutaki", "BlowupScan", "DestabilizerSearch", "check_polytope", "check_action", "check_depths"]
