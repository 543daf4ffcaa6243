"""Exact two-phase simplex on a dense Fraction tableau with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import settings
from .exceptions import IterationCap, LPInfeasible, LPUnbounded


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple
    pivots: int


class _Tableau:
    def __init__(self, rows, rhs, basis, max_pivots):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj: list[Fraction] = []
        self.pivots = 0
        self.max_pivots = max_pivots

    def pivot(self, r: int, c: int) -> None:
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise IterationCap(f"simplex exceeded {self.max_pivots} pivots")
        row = self.rows[r]
        inv = 1 / row[c]
        row[:] = [v * inv for v in row]
        self.rhs[r] *= inv
        nz = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        if self.obj and self.obj[c] != 0:
            f = self.obj[c]
            for j in nz:
                self.obj[j] -= f * row[j]
        self.basis[r] = c

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> None:
        """Minimize ``cost . x`` over the first ``allowed`` columns (Bland's rule)."""
        width = len(self.rows[0]) if self.rows else len(cost)
        self.obj = list(cost) + [Fraction(0)] * (width - len(cost))
        for i, b in enumerate(self.basis):
            f = self.obj[b]
            if f:
                self.obj = [o - f * v if v else o for o, v in zip(self.obj, self.rows[i])]
        while True:
            entering = next((j for j in range(allowed) if self.obj[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise LPUnbounded("linear program is unbounded")
            self.pivot(best[1], entering)


def linprog_exact(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                  A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                  max_pivots: int | None = None) -> LPResult:
    """Minimize ``c . x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Raises ``LPInfeasible``, ``LPUnbounded`` or ``IterationCap``.
    """
    n = len(c)
    cap = settings.MAX_PIVOTS if max_pivots is None else max_pivots
    cons = [([Fraction(v) for v in a], Fraction(b), True) for a, b in zip(A_ub, b_ub)]
    cons += [([Fraction(v) for v in a], Fraction(b), False) for a, b in zip(A_eq, b_eq)]
    m = len(cons)
    n_slack = sum(1 for _, _, ineq in cons if ineq)
    # columns: x (n) | slacks | artificials
    rows, rhs, basis, needs_art = [], [], [], []
    s = 0
    for a, b, ineq in cons:
        row = a + [Fraction(0)] * n_slack
        if ineq:
            row[n + s] = Fraction(1)
            s += 1
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        slack_col = n + s - 1 if ineq else None
        needs_art.append(not (ineq and row[slack_col] == 1))
        basis.append(slack_col if ineq and row[slack_col] == 1 else None)
    art = [i for i in range(m) if needs_art[i]]
    width = n + n_slack + len(art)
    for row in rows:
        row.extend([Fraction(0)] * len(art))
    for k, i in enumerate(art):
        rows[i][n + n_slack + k] = Fraction(1)
        basis[i] = n + n_slack + k
    tab = _Tableau(rows, rhs, basis, cap)
    if art:
        phase1 = [Fraction(0)] * (n + n_slack) + [Fraction(1)] * len(art)
        tab.optimize(phase1, width)
        if sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n + n_slack), Fraction(0)) != 0:
            raise LPInfeasible("linear program is infeasible")
        # drive remaining (zero-valued) artificials out of the basis
        for i, b in enumerate(tab.basis):
            if b >= n + n_slack:
                col = next((j for j in range(n + n_slack) if tab.rows[i][j] != 0), None)
                if col is not None:
                    tab.pivot(i, col)
        keep = [i for i, b in enumerate(tab.basis) if b < n + n_slack]
        tab.rows = [tab.rows[i] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
    cost = [Fraction(v) for v in c] + [Fraction(0)] * (width - n)
    tab.optimize(cost, n + n_slack)
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LPResult(value, tuple(x), tab.pivots)
