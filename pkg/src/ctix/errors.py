"""Exception types shared across the pipeline stages."""


class CtixError(Exception):
    """Base class for all errors raised by this package."""


class SroTableError(CtixError):
    """Problem loading or interpreting the SRO compatibility table."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class UnknownSymbolError(SroTableError):
    """An entity or relation name in a data file is not in the vocabulary."""


class EmptyDocumentError(CtixError):
    """The document contains no tokens."""


class OverlappingAnnotationsError(CtixError):
    """Two annotations in one chunk share a character offset."""


class MalformedConllError(CtixError):
    """A CoNLL line does not parse as TOKEN<space>TAG."""

    def __init__(self, message: str, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class IllegalTagTransitionError(MalformedConllError):
    """An I- tag appears without a preceding B-/I- of the same class."""


class OverlappingMatchesError(CtixError):
    """IOC matches handed to mask() overlap."""


class RecordMismatchError(CtixError):
    """A mask record does not line up with the masked text."""


class BackendUnavailableError(CtixError):
    """The NER or scorer backend cannot be reached."""


class MalformedBackendOutputError(CtixError):
    """A backend returned offsets, labels, or scores outside its contract."""


class UnknownChildLabelError(CtixError):
    """The zero-shot backend returned a label absent from the taxonomy."""


class UnscoredCandidateError(CtixError):
    """validate() received a candidate that was never scored."""


class TokenMismatchError(CtixError):
    """Gold and predicted CoNLL token sequences diverge."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(f"token {index}: {message}")


class DanglingReferenceError(CtixError):
    """A relation endpoint has no corresponding object in the bundle."""


class ConfigError(CtixError):
    """Invalid pipeline configuration."""


class IngestError(CtixError):
    """A document could not be read or is in an unsupported format."""
