"""Exception hierarchy.

Numerical failures derive from :class:`NumericalError`; the CLI maps them to
exit status 2.
"""


class LmsvError(Exception):
    """Base class for all package errors."""


class NumericalError(LmsvError):
    """A numerical procedure failed to produce a trustworthy result."""


class QuadratureError(NumericalError):
    pass


class RootFindingError(NumericalError):
    pass


class EmbeddingError(NumericalError):
    """Neither circulant embedding nor dense factorization applies."""


class RankUndetectedError(NumericalError):
    pass


class RegimeError(LmsvError, ValueError):
    """A formula was requested outside the memory regime where it holds."""


class ConfigError(LmsvError, ValueError):
    """Invalid experiment configuration; the message names the offending key."""

    def __init__(self, message, *, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
