"""Exception types shared by the package."""


class RauzyError(Exception):
    """Base class for every error raised by :mod:`rauzy`."""


class UnknownLetter(RauzyError):
    pass


class InvalidSource(RauzyError):
    pass


class HorizonExceeded(RauzyError):
    """A query could not be decided inside the configured prefix cap.

    This is an honest "don't know", never a negative answer.
    """


class NotPrimitive(RauzyError):
    pass


class NotAFactorPath(RauzyError):
    pass


class InvalidPath(RauzyError):
    pass


class GraphIsCycle(RauzyError):
    pass


class BispecialAtOrder(RauzyError):
    def __init__(self, k, words=()):
        self.k = k
        self.words = tuple(words)
        super().__init__(f"bispecial factor(s) of length {k}: {', '.join(self.words) or '(empty word)'}")


class NoSupportEdge(RauzyError):
    pass


class NotSupportEdge(RauzyError):
    pass


class DegenerateResult(RauzyError):
    pass


class PathCapExceeded(RauzyError):
    pass


class ConfigError(RauzyError):
    """Bad configuration or source file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
