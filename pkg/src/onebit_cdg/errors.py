"""Exception hierarchy.

Each class carries a ``category`` used by the command-line front end to pick
an exit status and the ``ERROR:<category>`` diagnostic prefix.
"""


class OneBitError(Exception):
    category = "error"


class InvalidArgumentError(OneBitError, ValueError):
    category = "usage"


class ConfigError(OneBitError, ValueError):
    category = "config"


class IngestionError(OneBitError):
    category = "ingestion"


class DegenerateInputError(OneBitError, ValueError):
    category = "degenerate"


class FormatError(OneBitError, ValueError):
    category = "format"


class EnsembleMismatchError(OneBitError, ValueError):
    category = "ensemble"
