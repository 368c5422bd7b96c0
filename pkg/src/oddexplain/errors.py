"""Exception hierarchy shared by all oddexplain modules."""


class OddError(Exception):
    """Base class for every error raised by this package."""


class StructureError(OddError):
    """Malformed diagram or tree: ordering violation, dangling reference."""


class ArityError(StructureError):
    """A child array does not match the variable's domain size."""


class DomainError(OddError):
    """A value index lies outside its variable's domain."""


class ManagerError(OddError):
    """Operands belong to different managers."""


class CapacityError(OddError):
    """A brute-force enumeration would exceed the configured cap."""


class RangeError(OddError):
    """A probability parameter sits on a boundary where log-odds diverge."""


class PolarityError(OddError):
    """An instance-directed implicant query was called on the wrong polarity."""


class SequencingError(OddError):
    """A compilation step was applied out of order."""


class UndefinedPosteriorError(OddError):
    """The evidence has probability zero, so no posterior exists."""


class TrainingError(OddError):
    """The training data cannot produce a valid classifier."""


class ModelError(OddError):
    """A classifier violates its invariants (e.g. a CPT row does not sum to 1)."""


class ParseError(OddError):
    """A model or diagram file is syntactically invalid."""

    def __init__(self, message, path=None, line=None, column=None):
        detail = message
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            detail = f"{message} ({', '.join(where)})"
        super().__init__(detail)
        self.path = path
        self.line = line
        self.column = column
