"""Exception hierarchy shared by every copex module."""

from __future__ import annotations


class CopexError(Exception):
    """Base class for all copex errors."""


class DomainError(CopexError, ValueError):
    """A family parameter lies outside its legal range."""

    def __init__(self, family: str, parameter: str, value: float, legal: str):
        self.family = family
        self.parameter = parameter
        self.value = value
        self.legal = legal
        if parameter == "arity":
            message = f"{family}: takes {legal}, got {int(value)}"
        else:
            message = f"{family}: parameter {parameter}={value!r} outside legal range {legal}"
        super().__init__(message)


class NoDensity(CopexError):
    """The surface has no density on the whole unit square."""


class NotConverged(CopexError):
    """Adaptive quadrature stopped before meeting its tolerance.

    ``result`` holds the best estimate and its error bound.
    """

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"quadrature did not converge: value={result.value!r}, "
            f"error_estimate={result.error_estimate:.3e}, panels={result.panels_used}"
        )


class SpecParseError(CopexError, ValueError):
    """A family spec string could not be parsed."""

    def __init__(self, text: str, token: str, reason: str):
        self.text = text
        self.token = token
        super().__init__(f"cannot parse {text!r}: {reason} (at {token!r})")


class ParseError(CopexError, ValueError):
    """Malformed row in a CSV sample."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class TooFewRows(CopexError, ValueError):
    """A sample needs at least two pairs."""


class DegenerateSample(CopexError, ValueError):
    """A margin has zero variance."""
