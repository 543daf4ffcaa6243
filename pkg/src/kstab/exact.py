"""Exact rational linear algebra, polynomials and truncated power series."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .exceptions import InterpolationInconsistent, InputError

Rat = Fraction


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every input to the library must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    if hasattr(value, "__index__"):  # numpy integers
        return Fraction(int(value))
    raise InputError(f"not an exact rational: {value!r} ({type(value).__name__})")


def rat_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(rat(v) for v in values)


def lcm_denominators(values: Iterable[Fraction]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def primitive(vector: Sequence[Fraction]) -> tuple[tuple[int, ...], Fraction]:
    """Scale a nonzero rational vector to a primitive integer vector.

    Returns ``(w, s)`` with ``w = s * vector`` and ``s > 0``.
    """
    scale = lcm_denominators(vector)
    ints = [int(v * scale) for v in vector]
    g = reduce(math.gcd, (abs(i) for i in ints), 0)
    if g == 0:
        raise InputError("zero vector has no primitive representative")
    return tuple(i // g for i in ints), Fraction(scale, g)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the matrix and pivot columns."""
    m = [list(r) for r in rows]
    pivots = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_row_reduce([[Fraction(x) for x in r] for r in rows])[1])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points`` (-1 when empty)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in points[1:]])


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve the square system ``a x = b``; ``None`` when singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    red, pivots = _row_reduce(aug)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of ``rows``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _row_reduce([[Fraction(x) for x in r] for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``k**i``; trailing zeros are stripped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [rat(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
            terms.append(f"{c}{'*' + mono if mono else ''}")
        return "Poly(" + " + ".join(terms) + ")"


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Exact interpolating polynomial of degree < len(xs) (Vandermonde solve)."""
    n = len(xs)
    vander = [[Fraction(x) ** j for j in range(n)] for x in xs]
    coeffs = solve(vander, ys)
    if coeffs is None:
        raise InputError("interpolation nodes must be distinct")
    return Poly(coeffs)


def fit_guarded(sample, xs: Sequence, degree: int, guards: int = 2, what: str = "polynomial") -> Poly:
    """Interpolate ``sample`` at the first ``degree + 1`` nodes of ``xs``.

    The following ``guards`` nodes must reproduce the sample exactly;
    otherwise ``InterpolationInconsistent`` is raised.  ``sample`` may be
    a callable or a precomputed sequence aligned with ``xs``.
    """
    need = degree + 1 + guards
    if len(xs) < need:
        raise InputError(f"{what}: need {need} sample points, got {len(xs)}")
    xs = list(xs)[:need]
    ys = [rat(sample(x)) for x in xs] if callable(sample) else [rat(y) for y in list(sample)[:need]]
    poly = interpolate(xs[: degree + 1], ys[: degree + 1])
    for x, y in zip(xs[degree + 1:], ys[degree + 1:]):
        if poly(x) != y:
            raise InterpolationInconsistent(
                f"{what}: guard sample at {x} gives {y}, interpolant predicts {poly(x)}"
            )
    return poly


class Series:
    """Truncated power series in one variable, exact coefficients.

    Arithmetic keeps terms of order ``< order``.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        c = [rat(x) for x in coeffs][:order]
        c += [Fraction(0)] * (order - len(c))
        self.coeffs = tuple(c)
        self.order = order

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "Series":
        return cls(p.coeffs, order)

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, Poly):
            return Series.from_poly(other, self.order)
        return Series([other], self.order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        return Series((a + b for a, b in zip(self.coeffs[:order], other.coeffs[:order])), order)

    __radd__ = __add__

    def __neg__(self):
        return Series((-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = [Fraction(0)] * order
        for i, a in enumerate(self.coeffs[:order]):
            if a == 0:
                continue
            for j in range(order - i):
                out[i + j] += a * other.coeffs[j]
        return Series(out, order)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        out = [1 / self.coeffs[0]]
        for m in range(1, self.order):
            acc = sum((self.coeffs[j] * out[m - j] for j in range(1, m + 1)), Fraction(0))
            out.append(-acc / self.coeffs[0])
        return Series(out, self.order)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient (``None`` for zero)."""
        return next((i for i, c in enumerate(self.coeffs) if c != 0), None)

    def __repr__(self):
        return f"Series({[str(c) for c in self.coeffs]})"


def series_solve(matrix: Sequence[Sequence[Series]], rhs: Sequence[Series]) -> list[Series]:
    """Gaussian elimination over truncated series.

    Pivots need invertible constant terms, which holds for the Gram
    matrices this is used on (positive definite at order zero).
    """
    n = len(matrix)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c][0] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular leading term in series system")
        m[c], m[pivot] = m[pivot], m[c]
        inv = m[c][c].inverse()
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def fmt(value: Fraction, digits: int = 12) -> str:
    """``p/q (decimal)`` rendering used in reports."""
    value = Fraction(value)
    return f"{value} ({float(value):.{digits}g})"
