"""Exception hierarchy shared across the package.

Every error that corresponds to a violated mathematical precondition derives
from ``PreconditionError`` so the CLI can map it to exit code 2.
"""

from __future__ import annotations


class LaminaError(Exception):
    """Base class for all package errors."""


class PreconditionError(LaminaError):
    """An operation was called outside its domain of validity."""


class IllDefinedAtAlpha(PreconditionError):
    """An inverse branch was evaluated at the marked angle, where no branch exists."""


class IllDefinedAtOrbitPoint(PreconditionError):
    """A word map hit the marked angle at an intermediate step.

    ``step`` is the 1-based index (counting applied letters, last letter of the
    word first) at which the input to the next branch equalled the marked angle.
    """

    def __init__(self, step, point):
        self.step = step
        self.point = point
        super().__init__(f"word map undefined: step {step} reached the marked angle at {point}")


class NoPeriodicPoint(LaminaError):
    """A word map has no fixed point on the circle."""


class PeriodicAlpha(PreconditionError):
    """The marked angle is periodic under the power map; the operation needs aperiodicity."""


class EmptySet(LaminaError):
    """A constructed point set came out empty."""


class FullCircleInput(PreconditionError):
    """An operation that needs a proper subset of the circle received the full circle."""


class NotInSet(PreconditionError):
    """A point lookup was attempted outside the set being searched."""


class IllDefinedLeaf(PreconditionError):
    """A leaf endpoint could not be evaluated; carries the offending word."""

    def __init__(self, word, cause=None):
        self.word = word
        self.cause = cause
        super().__init__(f"leaf endpoints undefined for word {word}")


class AmbiguousAtBoundary(PreconditionError):
    """The queried point sits on a partition boundary where membership is not unique."""


class ZeroSeparation(LaminaError):
    """Two boundary images collide exactly; no positive separation constant exists."""


class CoverageGap(LaminaError):
    """No candidate set satisfies the separation bound at some point."""


class ClassTooLarge(LaminaError):
    """The equivalence class of the marked angle has more than two points."""


class DepthLimited(LaminaError):
    """An exact answer could not be certified within the depth budget.

    ``enclosures`` carries the rational enclosures computed so far.
    """

    def __init__(self, message, enclosures=()):
        self.enclosures = tuple(enclosures)
        super().__init__(message)


class DegenerateSupport(PreconditionError):
    """A discrete measure is unusable for energy evaluation (too few atoms or zero span)."""


class OnBoundary(PreconditionError):
    """The marked angle coincides with a circuit arc endpoint or atom; refused."""


class NonMonotonePairing(LaminaError):
    """An atom pairing is not monotone and therefore cannot be extended across a cut."""


class SearchExhausted(LaminaError):
    """A bounded search ended without the requested number of results."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class BudgetExceeded(LaminaError):
    """A work budget ran out mid-search; ``stats`` holds partial progress."""

    def __init__(self, message, stats=None):
        self.stats = stats or {}
        super().__init__(message)
