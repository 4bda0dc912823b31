"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`RebuttalError` so callers
(CLI, HTTP layer) can map failures to structured reports without catching
bare ``Exception``.
"""

from __future__ import annotations


class RebuttalError(Exception):
    """Base class for all package-defined failures."""


class PreconditionError(RebuttalError):
    """An operation was invoked with arguments that violate its contract."""


class EmptyBlock(RebuttalError):
    """A tagged sequence block was empty where content is required."""


class MalformedSequence(RebuttalError):
    """Tagged output does not contain exactly one well-ordered block triple."""


class SchemaMismatch(RebuttalError):
    """A JSON payload does not match the expected shape."""


class UnknownCategory(SchemaMismatch):
    """A label field holds a value outside its closed vocabulary."""


class OutOfRange(SchemaMismatch):
    """A numeric field falls outside its permitted range."""


class ExtractionParseError(RebuttalError):
    """Provider output for review analysis stayed unparseable after retries."""

    def __init__(self, message: str, raw_output: str | None = None) -> None:
        super().__init__(message)
        self.raw_output = raw_output


class JudgeParseError(RebuttalError):
    """Provider output for a judge call stayed unparseable after retries."""

    def __init__(self, message: str, raw_output: str | None = None) -> None:
        super().__init__(message)
        self.raw_output = raw_output


class ProviderError(RebuttalError):
    """A provider call failed after exhausting its retry budget."""

    def __init__(self, message: str, *, transient: bool = False, status_code: int | None = None) -> None:
        super().__init__(message)
        self.transient = transient
        self.status_code = status_code


class ProviderTimeout(ProviderError):
    """A provider call timed out."""

    def __init__(self, message: str, status_code: int | None = None) -> None:
        super().__init__(message, transient=True, status_code=status_code)


class DimensionMismatch(RebuttalError):
    """Vectors of different dimensionality were combined."""


class EmptyCorpus(RebuttalError):
    """Retrieval was asked to rank over zero chunks."""


class GroupTooSmall(RebuttalError):
    """Group-relative statistics need at least two members."""


class EmptyGroup(RebuttalError):
    """A candidate group holds no candidates."""


class LengthMismatch(RebuttalError):
    """Paired score lists differ in length or are empty."""


class DegenerateInput(RebuttalError):
    """A correlation denominator is zero; the statistic is undefined."""


class StageError(RebuttalError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: Exception) -> None:
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


class DuplicateRun(RebuttalError):
    """A run id was created twice."""


class MissingRun(RebuttalError):
    """A run id does not exist in the store."""
