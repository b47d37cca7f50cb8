from .numeration import MalformedInput


class CapExceeded(RuntimeError):
    """A construction hit a configured resource cap."""


class StateCapExceeded(CapExceeded):
    pass


class IterationCapExceeded(CapExceeded):
    pass


class DomainError(ValueError):
    """A synchronized function was evaluated outside its domain."""


class BrokenInvariant(RuntimeError):
    """An automaton that should encode a function graph does not."""


class AlphabetMismatch(ValueError):
    pass


class OracleInstability(RuntimeError):
    """A prefix-based count did not stabilise under prefix doubling."""


__all__ = [
    "MalformedInput",
    "CapExceeded",
    "StateCapExceeded",
    "IterationCapExceeded",
    "DomainError",
    "BrokenInvariant",
    "AlphabetMismatch",
    "OracleInstability",
]
