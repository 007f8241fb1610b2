"""Exception hierarchy shared by all docdrift modules."""


class DocdriftError(Exception):
    """Base class for all docdrift errors."""


class ParameterError(DocdriftError, ValueError):
    """A caller-supplied argument violates an operation's contract."""


class DataError(DocdriftError):
    """Input data is malformed, inconsistent, or unreadable."""


class DegenerateDataError(DataError):
    """Data has no variation, so a statistic or bandwidth is undefined."""


class ConfigError(ParameterError):
    """An experiment config file fails schema validation.

    ``field`` is the dotted path of the offending entry, e.g. ``"repeats"``
    or ``"embeddings.reference"``.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
