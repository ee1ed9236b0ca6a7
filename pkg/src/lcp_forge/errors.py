"""Exception hierarchy shared by every lcp_forge module."""


class LcpError(Exception):
    """Base class for all lcp_forge errors."""


class InvalidInput(LcpError, ValueError):
    pass


class NotAdmissible(LcpError):
    """Linear or group data violates a hypothesis; ``witness`` says which."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSemisimple(NotAdmissible):
    pass


class NotSimilarity(LcpError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFound(LcpError):
    pass


class NoStrictSimilarity(LcpError):
    pass


class Unsupported(LcpError):
    pass


class UnsupportedComposition(Unsupported):
    pass


class TruncationUnsound(LcpError):
    pass
