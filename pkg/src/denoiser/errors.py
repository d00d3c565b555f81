"""Exception types shared across the package."""


class DenoiserError(Exception):
    """Base class for all errors raised by this package."""


class InvalidClassText(DenoiserError):
    """Raised when raw input cannot be turned into a class text."""


class CorpusParseError(DenoiserError):
    """A corpus file line that cannot be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyCorpus(DenoiserError):
    """Raised when a corpus ends up with no entries."""


class ShapeError(DenoiserError):
    """Mismatched dimensions, lengths or non-normalized probability rows."""


class ConfigError(DenoiserError):
    """Invalid configuration value."""


class StoreError(DenoiserError):
    """Problems reading or writing an embedding store."""


class MissingEmbedding(StoreError):
    """Lookup of a text that the store does not contain."""
