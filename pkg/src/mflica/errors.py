"""Exception hierarchy.

Everything raised on purpose derives from :class:`MflicaError`. Input and
parameter problems are :class:`ValidationError` (also a ``ValueError``);
filesystem problems are :class:`IoFailure` (also an ``OSError``). The CLI
maps the two families to exit codes 1 and 2.
"""


class MflicaError(Exception):
    pass


class ValidationError(MflicaError, ValueError):
    pass


class IoFailure(MflicaError, OSError):
    pass


class MissingFile(IoFailure, FileNotFoundError):
    pass


class RaggedSeries(ValidationError):
    pass


class NonContiguousTime(ValidationError):
    pass


class NonNumericCell(ValidationError):
    pass


class WindowOutOfRange(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InfeasibleBand(ValidationError):
    pass


class TooFewIndividuals(ValidationError):
    pass


class NotSquare(ValidationError):
    pass


class BadWindowParams(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class BadConfig(ValidationError):
    pass


class EmptyBundle(ValidationError):
    pass
