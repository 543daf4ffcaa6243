from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from kstab.configs import AffineAction
from kstab.estimators import BlowupScan, DestabilizerSearch, ToricFutaki, check_action, check_depths, check_polytope
from kstab.exceptions import InputError
from kstab.search import Classification


def test_params_round_trip():
    est = ToricFutaki(guard_samples=3, relative=False)
    assert est.get_params() == {"guard_samples": 3, "relative": False}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(relative=True)
    assert est.relative


def test_toric_futaki_transform_and_predict(blp2):
    est = ToricFutaki().fit(blp2)
    assert est.chi_.linear == (Fraction(12, 13), 0)
    out = est.transform([blp2.configs["crease"], AffineAction((1, 0), 0)])
    assert out.shape == (2, 3)
    assert out[0, 0] == Fraction(1, 6) and out[0, 1] == Fraction(5, 26)
    assert out[1, 1] == 0  # torus actions have F_T = 0
    assert list(est.predict([blp2.configs["crease"]])) == [1]


def test_pieces_are_accepted_as_actions(cp1):
    est = ToricFutaki().fit([(0,), (1,)])
    assert est.transform([[((0,), 0), ((2,), -1)]])[0, 0] == Fraction(1, 4)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ToricFutaki().transform([AffineAction((1,), 0)])
    with pytest.raises(NotFittedError):
        DestabilizerSearch().predict()


def test_blowup_scan(simplex2):
    scan = BlowupScan(vertex=(2, 0), depths=simplex2.scans["corner"].depths).fit(simplex2.configs["fx"])
    assert scan.coefficient_ == scan.expected_coefficient_ == Fraction(-2, 3)
    F = scan.predict([0, Fraction(1, 8)])
    assert F[0] == 0 and F[1] < 0


def test_destabilizer_search(blp2):
    search = DestabilizerSearch().fit(blp2.polytope)
    subs = list(blp2.subdivisions.values())[:3]
    assert all(v == 0 for v in search.transform(subs))
    assert all(c is Classification.NO_DESTABILIZER for c in search.predict(subs))
    assert search.stable_


def test_parallel_search_keeps_order(blp2):
    subs = list(blp2.subdivisions.values())
    serial = DestabilizerSearch().fit(blp2).transform(subs)
    parallel = DestabilizerSearch(n_jobs=2).fit(blp2).transform(subs)
    assert np.array_equal(serial, parallel)


def test_validation_helpers(cp1):
    with pytest.raises(InputError):
        check_polytope(42)
    with pytest.raises(InputError):
        check_action(cp1.polytope, AffineAction((1, 0), 0))
    with pytest.raises(InputError):
        check_depths([Fraction(1, 4), Fraction(1, 4)])
    with pytest.raises(InputError):
        check_depths([-1])
    assert check_depths(["1/2", 0]) == [0, Fraction(1, 2)]
