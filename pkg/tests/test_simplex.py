from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from kstab.exceptions import IterationCap, LPInfeasible, LPUnbounded
from kstab.simplex import linprog_exact

entry = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.lists(entry, min_size=n, max_size=n),
    st.lists(st.lists(entry, min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(st.integers(-3, 6), min_size=4, max_size=4))))
def test_matches_floating_solver(data):
    c, A, b = data
    n = len(c)
    b = b[:len(A)]
    # a box keeps every instance bounded
    A_all = A + [[int(i == j) for j in range(n)] for i in range(n)]
    b_all = b + [3] * n
    ref = linprog(c, A_ub=A_all, b_ub=b_all, bounds=(0, None), method="highs")
    if ref.status == 2:
        with pytest.raises(LPInfeasible):
            linprog_exact(c, A_all, b_all)
        return
    res = linprog_exact(c, A_all, b_all)
    assert float(res.value) == pytest.approx(ref.fun, abs=1e-9)
    x = np.array([float(v) for v in res.x])
    assert np.all(np.array(A_all) @ x <= np.array(b_all) + 1e-12)
    assert sum(Fraction(ci) * xi for ci, xi in zip(c, res.x)) == res.value


def test_equality_constraints():
    res = linprog_exact([1, 1], A_eq=[[1, 2]], b_eq=[4])
    assert res.value == 2 and res.x == (0, 2)


def test_unbounded():
    with pytest.raises(LPUnbounded):
        linprog_exact([-1, 0], [[0, 1]], [1])


def test_infeasible():
    with pytest.raises(LPInfeasible):
        linprog_exact([1], [[1]], [-1])


def test_bland_rule_terminates_on_a_cycling_example():
    # Beale's example cycles under Dantzig's largest-coefficient rule
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    assert linprog_exact(c, A, b).value == Fraction(-1, 20)


def test_pivot_cap():
    with pytest.raises(IterationCap):
        linprog_exact([-1, -1], [[1, 0], [0, 1]], [1, 1], max_pivots=1)
