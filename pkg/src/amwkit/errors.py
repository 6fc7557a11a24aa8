"""Exception hierarchy shared by every amwkit module."""


class AmwError(Exception):
    """Base class for amwkit errors."""


class DomainError(AmwError, ValueError):
    """A point or interval lies outside the domain an operation accepts."""


class ParameterError(AmwError, ValueError):
    """A constructor received a parameter outside its documented range."""


class PreconditionError(AmwError, ValueError):
    """An operation's structural precondition (a certificate, a tag) is missing."""
