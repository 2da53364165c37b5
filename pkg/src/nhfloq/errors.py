"""Exception hierarchy.

Config errors (bad user input) and numeric errors (a computation that
cannot proceed) are kept separate so the CLI can map them to distinct
exit codes.
"""


class NhfloqError(Exception):
    """Base class for all package errors."""


class ConfigError(NhfloqError):
    """Malformed user input: bad model file, bad flag value, bad grid."""


class NumericError(NhfloqError):
    """A numeric computation failed or left its validity domain."""


class UnsupportedFamilyError(NhfloqError):
    """Requested analytic treatment for a model outside the solvable catalog."""


class UnsupportedHarmonicsError(UnsupportedFamilyError):
    """Harmonic content outside the closed-form exponent catalog."""


# --- core algebra ---

class AtExceptionalPoint(NumericError):
    """f.f vanished: the instantaneous eigensystem coalesces."""


class NoConvergence(NumericError):
    """An iterative solve (Newton) failed from every starting point."""


# --- special functions ---

class SeriesNoConvergence(NumericError):
    """Power series did not meet its error target within max_terms."""


class IntegerBParameter(NumericError):
    """Resonant confluent-hypergeometric b parameter (integer)."""


class IntegerOrder(NumericError):
    """Integer Bessel order where the Y connection formula degenerates."""


class DegenerateParameter(NumericError):
    """Resonant parameter (e.g. half-integer Whittaker mu)."""


# --- propagation ---

class StepSizeUnderflow(NumericError):
    """Adaptive integrator step collapsed; state norm exceeded the overflow guard."""


class LowerTriangularPoint(NumericError):
    """f1 - i f2 vanished where the a-first reconstruction of b is needed."""


# --- Floquet analysis ---

class JordanBlock(NumericError):
    """One-period operator is degenerate and non-diagonalizable."""


# --- asymptotics ---

class BranchPointOnCircle(NumericError):
    """A turning point sits on the unit circle; g(theta) is singular."""


class NoTangency(NumericError):
    """Grid scan found no tangency candidate for the requested parameters."""


class NoBifurcation(NumericError):
    """No branch merge inside the scanned interval."""


class AmbiguousFollowing(NumericError):
    """Trajectory stays far from both instantaneous eigenstates; not in the
    slow-driving regime."""
