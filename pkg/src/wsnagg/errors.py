"""Exception hierarchy shared by all modules."""


class WSNError(Exception):
    """Base class for every error raised by this package."""


class InvalidConfig(WSNError, ValueError):
    pass


class ConnectivityFailure(WSNError):
    """Random deployment stayed disconnected after the retry budget."""


class UnknownNode(WSNError, KeyError):
    pass


class SinkNotEligible(WSNError, ValueError):
    pass


class Disconnected(WSNError):
    """Some required node cannot reach the sink."""


class InvalidTree(WSNError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid tree")


class Overdraft(WSNError, ValueError):
    """Applying the requested rounds would drive a node's energy negative."""


class TooLarge(WSNError, ValueError):
    pass


class FormatError(WSNError, ValueError):
    """Malformed network / tree text file."""
