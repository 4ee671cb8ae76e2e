"""Exception hierarchy shared by all confmodel modules."""

from __future__ import annotations


class ConfModelError(Exception):
    """Base class for every error raised by this package."""


class DegreeSequenceError(ConfModelError, ValueError):
    """A degree sequence violates a structural requirement."""


class OddSumError(DegreeSequenceError):
    """The degree total is odd, so no half-edge pairing exists."""


class NegativeDegreeError(DegreeSequenceError):
    """A degree entry is negative."""


class EmptySequenceError(DegreeSequenceError):
    """The degree list is empty."""


class TooSmallError(DegreeSequenceError):
    """A generator cannot produce a valid sequence at this size."""


class SideMismatchError(DegreeSequenceError):
    """Bipartite degree totals disagree between the two sides."""


class ExhaustedError(ConfModelError):
    """Rejection sampling hit its retry budget without a simple graph."""

    def __init__(self, tries: int, message: str | None = None):
        self.tries = tries
        super().__init__(message or f"no simple pairing found in {tries} tries")


class TooLargeError(ConfModelError):
    """Exact enumeration was asked to exceed its half-edge cap."""


class SameVertexError(ConfModelError, ValueError):
    """A vertex-pair quantity was requested with both endpoints equal."""


class OrderTooHighError(ConfModelError, ValueError):
    """A moment order exceeds the configured maximum."""


class AssumptionViolatedError(ConfModelError):
    """A study's standing assumption fails for the supplied inputs."""
