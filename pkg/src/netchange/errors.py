"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures without a lookup table.
"""

from __future__ import annotations


class NetChangeError(Exception):
    """Base class for all library errors."""

    exit_code = 4


class ConfigError(NetChangeError, ValueError):
    """Invalid parameter or configuration, detected before computation."""

    exit_code = 2


class BoundsError(ConfigError):
    """Index or size argument outside its admissible range."""


class ContractError(NetChangeError, ValueError):
    """An input violates a documented precondition (e.g. asymmetric matrix)."""

    exit_code = 2


class ParseError(NetChangeError, ValueError):
    """Malformed input file. ``row`` and ``column`` are 1-based file coordinates."""

    exit_code = 3

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.column = column


class DimensionError(NetChangeError, ValueError):
    """Data has the wrong shape (too few rows/columns, mismatched node counts)."""

    exit_code = 3


class DegenerateColumnError(NetChangeError):
    """A column has zero variance, so its correlation is undefined.

    ``column`` is 1-based; ``candidate`` is the global split position being
    evaluated when the error surfaced, if any.
    """

    def __init__(self, column: int, candidate: int | None = None):
        self.column = column
        self.candidate = candidate
        msg = f"column {column} has zero variance"
        if candidate is not None:
            msg += f" at candidate split {candidate}"
        super().__init__(msg)


class DegenerateInputError(NetChangeError):
    """Clustering input has fewer distinct points than requested clusters."""


class NumericalError(NetChangeError):
    """A linear-algebra routine failed to converge."""


class SegmentTooShortError(NetChangeError):
    """Segment cannot host a single candidate split."""


class InferenceError(NetChangeError):
    """Resampling kept producing degenerate pseudo-samples."""


class ExhaustedError(NetChangeError):
    """No unmasked candidate remains."""
