"""
Exception hierarchy shared by the library, the CLI and the HTTP routers.

Every message names the rule that was violated. The CLI maps
``UsageError`` to exit code 2 and every other ``MatlisError`` to exit code 1.
"""
from typing import Optional


class MatlisError(ValueError):
    """Base class for every domain error raised by the library."""


class UsageError(MatlisError):
    """A precondition of an operation does not hold (shape, field, index)."""


class WordSyntaxError(MatlisError):
    """The text does not follow the word grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ForbiddenPairError(MatlisError):
    """Two adjacent letters form a relation pair or a backtracking pair."""

    def __init__(self, pair: tuple[str, str], kind: str, position: Optional[int] = None):
        where = f" at letter {position}" if position is not None else ""
        super().__init__(f"forbidden {kind} pair ({pair[0]},{pair[1]}){where}")
        self.pair = pair
        self.kind = kind
        self.position = position


class BandError(MatlisError):
    """A periodic word or band parameter cannot name a band module."""


class ModuleInvariantError(MatlisError):
    """Actions violate xy = yx = 0 or are not nilpotent."""


class CharacteristicTooSmallError(MatlisError):
    """The trace-form radical needs characteristic 0 or p > dim End."""

    def __init__(self, p: int, dim: int):
        super().__init__(
            f"trace-form radical needs p > dim End, got p={p} and dim End={dim}; "
            f"switch to a larger prime or to --field Q"
        )
        self.p = p
        self.dim = dim


class CertificationError(MatlisError):
    """The Monte Carlo budget ran out before a certificate was found."""
