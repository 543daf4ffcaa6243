"""Brute-force lattice sums, independent of the slicing counter.

Every function walks the full integer box around ``kP`` and tests each
halfspace with exact arithmetic.  Only meant for small k.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .configs import AffineAction, TestConfig
from .exact import dot
from .polytope import Polytope


def points(P: Polytope, k: int) -> list[tuple[int, ...]]:
    lo, hi = P.bounding_box()
    ranges = [range(math.floor(k * a), math.ceil(k * b) + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges) if all(dot(a, x) <= k * b for a, b in P.halfspaces)]


def count(P: Polytope, k: int) -> int:
    return len(points(P, k))


def affine_weight(P: Polytope, u: AffineAction, k: int) -> Fraction:
    return sum((dot(u.linear, x) + k * u.constant for x in points(P, k)), Fraction(0))


def affine_pair(P: Polytope, u: AffineAction, v: AffineAction, k: int) -> Fraction:
    return sum(((dot(u.linear, x) + k * u.constant) * (dot(v.linear, x) + k * v.constant)
                for x in points(P, k)), Fraction(0))


def _config_weights(cfg: TestConfig, k: int):
    for x in points(cfg.polytope, k):
        yield -math.ceil(max(dot(a, x) + k * c for a, c in cfg.pieces))


def config_weight(cfg: TestConfig, k: int) -> int:
    """``sum -ceil(k f(x/k))`` over the lattice points of ``kP``."""
    return sum(_config_weights(cfg, k))


def config_norm(cfg: TestConfig, k: int) -> int:
    return sum(w * w for w in _config_weights(cfg, k))


def config_affine_pair(cfg: TestConfig, u: AffineAction, k: int) -> Fraction:
    pts = points(cfg.polytope, k)
    ws = _config_weights(cfg, k)
    return sum((w * (dot(u.linear, x) + k * u.constant) for w, x in zip(ws, pts)), Fraction(0))
