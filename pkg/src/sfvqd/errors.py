"""Exception types shared across the package."""


class InvalidGateError(ValueError):
    """Gate matrix is not unitary or has malformed wiring."""


class InvalidStateError(ValueError):
    """Statevector violates a precondition (e.g. zero norm at measurement)."""


class ResourceLimitError(RuntimeError):
    """Dense materialization requested past the qubit-count guard."""


class UnsupportedSectorError(ValueError):
    """Spin sector outside what the screening scheme supports."""


class InvalidPenaltyError(ValueError):
    """Penalty weight outside the open interval (-inf, 1)."""


class ParseError(ValueError):
    """Fixture file is structurally malformed; carries the offending field path."""


class ValidationError(ValueError):
    """Fixture file parsed but violates schema-level constraints."""


class LabelingError(RuntimeError):
    """Simultaneous sector labeling failed to converge on a common eigenbasis."""
