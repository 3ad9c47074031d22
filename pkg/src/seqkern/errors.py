"""Exception types shared across the package.

The CLI maps these onto process exit codes (config errors: 2, data
errors: 3, numerical failures: 4).
"""


class SeqKernError(Exception):
    """Base class for all package errors."""


class ConfigError(SeqKernError):
    """Invalid or incomplete configuration (unknown keys, bad values)."""


class DataError(SeqKernError):
    """Malformed input data (FASTA records, label tables, embeddings)."""


class NumericalError(SeqKernError):
    """A computation produced non-finite values or an unusable matrix."""
