"""Exception hierarchy shared across the package.

Validation problems (bad values, violated preconditions) and I/O problems
(missing or corrupt artifacts) are kept apart because the CLI maps them to
different exit codes.
"""


class FairdeskError(Exception):
    """Base class; carries a machine-readable code for API error payloads."""

    code = "error"


class ValidationError(FairdeskError):
    """A precondition or invariant was violated by the caller."""

    code = "validation_error"


class DataFormatError(ValidationError):
    """Raw input file does not match the expected layout."""

    code = "data_format_error"


class UnknownFeatureError(ValidationError):
    code = "unknown_feature"


class EmptyDenominatorError(ValidationError):
    """A metric's conditional group is empty; the rate is undefined."""

    code = "empty_denominator"


class UnsupportedCounterfactualError(ValidationError):
    """Counterfactual flips are defined only for binary protected columns."""

    code = "unsupported_counterfactual"


class StoreError(FairdeskError):
    code = "store_error"


class StoreCorruptError(StoreError):
    """A persisted document file failed to parse; names the offending file."""

    code = "store_corrupt"


class ArtifactError(FairdeskError):
    """A dataset/model artifact is missing, unreadable, or inconsistent."""

    code = "artifact_error"
