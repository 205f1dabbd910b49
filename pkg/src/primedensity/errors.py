"""Shared exception types."""


class RangeLimitError(ValueError):
    """A requested value lies outside the range an object can serve.

    Raised e.g. when asking a prime table about x beyond its sieve limit,
    or when a polynomial value would overflow the 64-bit primality range.
    The message names the largest safe argument where one exists.
    """


class ResourceLimitError(RuntimeError):
    """An operation would exceed a configured resource budget.

    The message names the budget that would be exceeded.
    """
