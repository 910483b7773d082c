"""Exception taxonomy shared by all pipeline stages.

Every error carries a ``stage`` label so CLI/service layers can map failures
to exit codes and HTTP statuses without string matching.
"""

from __future__ import annotations


class NimError(Exception):
    """Base class for all pipeline errors."""

    stage = "pipeline"


# --- input-side errors (CLI exit 2 / HTTP 400) ---------------------------


class InputError(NimError):
    stage = "input"


class EmptyMessageError(InputError):
    pass


class MessageTooLongError(InputError):
    def __init__(self, word_count: int, max_words: int):
        super().__init__(f"message has {word_count} words, limit is {max_words}")
        self.word_count = word_count
        self.max_words = max_words


class CsvFormatError(InputError):
    pass


# --- ontology errors (CLI exit 4 / HTTP 422) ------------------------------


class OntologyError(NimError):
    stage = "ontology"


class OntologyParseError(OntologyError):
    pass


class OntologyValidationError(OntologyError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{v.entity_id}: {v.rule}" for v in self.violations)
        super().__init__(f"ontology validation failed: {lines}")


class DuplicateConceptError(OntologyError):
    pass


class UnknownConstraintError(OntologyError):
    pass


class OovWithoutFallbackError(OntologyError):
    stage = "decompose"

    def __init__(self, lemma: str, pos: str):
        super().__init__(f"out-of-vocabulary word {lemma!r} ({pos}) and no fallback provider configured")
        self.lemma = lemma
        self.pos = pos


# --- provider errors (CLI exit 3 / HTTP 502) -------------------------------


class ProviderError(NimError):
    stage = "provider"


class ProviderUnreachableError(ProviderError):
    pass


class TranscriptMissError(ProviderUnreachableError):
    """Replay provider has no recorded response for the rendered prompt."""


class MalformedResponseError(ProviderError):
    pass


class InsufficientExamplesError(ProviderError):
    stage = "fallback"


class UnknownTemplateError(ProviderError):
    stage = "fallback"


class ExhaustedRetriesError(ProviderError):
    stage = "fallback"

    def __init__(self, lemma: str, violations):
        self.lemma = lemma
        self.violations = list(violations)
        super().__init__(
            f"fallback for {lemma!r} exhausted retries; last violations: {'; '.join(self.violations)}"
        )


# --- translation / alignment ------------------------------------------------


class MarkerLostError(ProviderError):
    stage = "translate"

    def __init__(self, markers):
        self.markers = list(markers)
        super().__init__(f"translation lost or duplicated markers: {', '.join(self.markers)}")


class MarkerMismatchError(NimError):
    stage = "realign"


# --- serialization ----------------------------------------------------------


class SchemaViolationError(NimError):
    stage = "serialize"

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{message} (at {path or '/'})")
        self.path = path


# --- metrics ----------------------------------------------------------------


class MetricsError(NimError):
    stage = "metrics"


class NoRecordsForDayError(MetricsError):
    pass


class UndefinedBaselineError(MetricsError):
    pass


class EmptyInputError(MetricsError):
    pass
