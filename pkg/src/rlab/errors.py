"""Exception hierarchy shared by every rlab module."""


class RlabError(Exception):
    """Base class for all library errors."""


class ParameterError(RlabError, ValueError):
    """Input violates a documented precondition."""


class InsufficientPrecision(RlabError):
    """A y-adic computation needs more series terms than were supplied."""


class SingularMatrixError(RlabError, ValueError):
    pass


class CapExceeded(RlabError):
    """A hard resource cap (group order, clique count, enumeration size) was hit."""


class VerificationError(RlabError):
    """A self-check failed; this indicates an implementation bug, not bad input."""


class SearchExhausted(RlabError):
    """A bounded randomized search hit its retry cap without success."""
