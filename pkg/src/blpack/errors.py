"""Exception types shared across the package."""


class BlpackError(Exception):
    """Base class for all blpack errors."""


# combinatorial layer

class BadFace(BlpackError):
    """A face triple is malformed (wrong arity, repeated or negative vertex)."""


class NotADisc(BlpackError):
    """The face list does not triangulate a closed disc."""


class NonOrientable(BlpackError):
    """Face orientations conflict and cannot be repaired by flips."""


class BranchOnBoundary(BlpackError):
    """A branch entry names a boundary (or unknown) vertex."""


class DuplicateBranchVertex(BlpackError):
    """A vertex appears more than once in a branch structure."""


# geometry layer

class NonPositiveRadius(BlpackError):
    """A radius that must be positive is zero or negative."""


class CenterRadiusInfinite(BlpackError):
    """The radius at the angle vertex must be finite."""


class CoincidentPoints(BlpackError):
    """Three-point data for a Mobius transform is degenerate."""


class PointOutsideDisc(BlpackError):
    """A disc automorphism was requested for a point with |a| >= 1."""


class ImageIsLine(BlpackError):
    """The Mobius image of the circle is a line, not a circle."""


# solver layer

class InvalidBranchStructure(BlpackError):
    """The branch structure fails the cycle inequality for the complex."""


class NoConvergence(BlpackError):
    """The radius iteration did not reach the tolerance within the sweep cap."""

    def __init__(self, sweeps, max_residual):
        super().__init__(
            f"no convergence after {sweeps} sweeps (max residual {max_residual:.3e})"
        )
        self.sweeps = sweeps
        self.max_residual = max_residual


class LayoutInconsistent(BlpackError):
    """Tangency residuals stayed above tolerance after refinement."""


# map layer

class OutsideCarrier(BlpackError):
    """The evaluation point is not covered by any carrier face."""


class RegionLocationFailed(BlpackError):
    """The point could not be assigned to carrier, interstice, or boundary disc."""


class DegenerateFace(BlpackError):
    """A face map is not orientation-preserving sense-wise (|a| <= |b|)."""


class DifferentComplex(BlpackError):
    """Two packings that should share a triangulation do not."""


class RootFindingFailed(BlpackError):
    """Critical-point search did not account for the full branching."""


# harness layer

class BranchDriftedOutside(BlpackError):
    """A branch circle center left the compact set required by the experiment."""


class ParseError(BlpackError):
    """Malformed JSON input."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
