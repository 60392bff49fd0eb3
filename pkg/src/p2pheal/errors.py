class P2PHealError(Exception):
    pass


class InvalidParameterError(P2PHealError, ValueError):
    pass


class EmptyGraphError(P2PHealError):
    pass


class InsufficientDataError(P2PHealError, ValueError):
    pass


class InvalidDistributionError(P2PHealError, ValueError):
    pass


class DegenerateDistributionError(P2PHealError, ValueError):
    pass


class UnknownPeerError(P2PHealError, KeyError):
    pass


class ConfigError(P2PHealError, ValueError):
    pass
