"""Exceptions shared across the package.

The CLI maps every one of these to exit code 2 (usage / precondition error)
with a diagnostic naming the violated precondition.
"""


class DomainError(ValueError):
    """A model parameter lies outside its admissible domain (e.g. q not in (0,1))."""


class RangeError(ValueError):
    """A coordinate or cut position lies outside the valid range."""


class CapExceeded(RuntimeError):
    """Brute-force enumeration would exceed the configured path cap.

    Signals that the closed form should be used instead of enumeration.
    """


class InconsistentQuery(ValueError):
    """A correlation query is impossible by global spin counts."""
