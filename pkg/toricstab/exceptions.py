"""
Error hierarchy shared by every app.

Each error carries the process exit code the command line reports for it:
2 for bad input, 3 for exceeded caps, 4 for failed internal verification.
"""


class ToricStabError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputError(ToricStabError):
    """The caller supplied data the toolkit cannot work with."""

    exit_code = 2


class Unbounded(InputError):
    """The halfspaces do not bound a compact region."""


class Empty(InputError):
    """The halfspaces have no common point."""


class LowDimensional(InputError):
    """The region is not full-dimensional."""


class NonIntegralVertex(InputError):
    """A vertex of the region is not a lattice point."""


class BadIndex(InputError):
    """A facet index is out of range."""


class BadFacetIndex(BadIndex):
    """A divisor refers to a facet the polytope does not have."""


class DomainMismatch(InputError):
    """A function is defined on a different polytope or lattice."""


class ScaleMismatch(InputError):
    """A function lives on a different lattice scale than requested."""


class NotConvex(InputError):
    """A function that must be convex is not."""


class CreaseMismatch(InputError):
    """A PL function has creases off the requested lattice."""


class UnknownFixture(InputError):
    """No built-in fixture has the requested name."""


class TooLarge(ToricStabError):
    """
    A configured cap was exceeded.

    ``partial`` optionally holds whatever result was computed before giving up.
    """

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationFailed(ToricStabError):
    """An internal cross-check disagreed; this signals a bug, not bad input."""

    exit_code = 4
