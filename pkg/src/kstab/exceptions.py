"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``InputError`` (bad or unsupported input, exit 2) and ``CheckFailed``
(an exact consistency check did not hold, exit 1).
"""


class KStabError(Exception):
    """Base class for every error raised by kstab."""


class InputError(KStabError, ValueError):
    """The input is malformed or outside the supported regime."""


class CheckFailed(KStabError, ArithmeticError):
    """An exact identity or consistency check failed."""


# polytopes
class UnboundedPolytope(InputError):
    pass


class DegeneratePolytope(InputError):
    pass


class NonLatticePolytope(InputError):
    pass


class NonConvexPieces(InputError):
    pass


# configurations
class NotConvex(InputError):
    pass


class CapTooSmall(InputError):
    pass


class NonLatticeLift(InputError):
    pass


class NonIntegralTwist(InputError):
    pass


# futaki engine
class ZeroLeadingCoefficient(InputError):
    pass


class SingularGram(InputError):
    pass


class RouteMismatch(CheckFailed):
    pass


class IdentityViolated(CheckFailed):
    pass


class InterpolationInconsistent(CheckFailed):
    """Guard samples disagree with the interpolated polynomial.

    Usually means the counting function is a quasi-polynomial, i.e. the
    polytope being counted is not a lattice polytope.
    """


# blowups
class NonDelzantVertex(InputError):
    pass


class ChopTooDeep(InputError):
    pass


class RegimeBreak(CheckFailed):
    pass


class LemmaMismatch(CheckFailed):
    pass


class CorollaryViolated(CheckFailed):
    pass


# search
class BadSubdivision(InputError):
    pass


class LPInfeasible(CheckFailed):
    pass


class LPUnbounded(CheckFailed):
    pass


class IterationCap(CheckFailed):
    pass


class FixtureError(InputError):
    """Fixture file could not be parsed; carries the line number."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)


class LiftTooLarge(InputError):
    """The lattice route would need a prohibitively large dilation."""
